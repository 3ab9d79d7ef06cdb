//! Nested adaptive Gauss–Kronrod cubature over convex polytopes.
//!
//! Every region in the catalog is cut out by linear inequalities, so the
//! iterated limits of integration are obtained exactly by Fourier–Motzkin
//! elimination. Each level runs an adaptive G7/K15 rule whose initial
//! partition contains every kink of the inner integral (vertices of the
//! remaining slice, including user-supplied cut hyperplanes where the
//! integrand itself is only piecewise smooth). Inner errors are propagated
//! into the outer estimate, so `abs_error_estimate` bounds the total error
//! under the usual G7/K15 assumption that `|K15 − G7|` dominates the K15
//! error.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use rayon::prelude::*;
use serde::Serialize;

pub const MAX_DIM: usize = 4;

#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
/// Gauss weights for the odd-indexed Kronrod nodes `XGK[1], XGK[3], XGK[5], XGK[7]`.
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Absolute tolerance used when comparing geometry (vertex feasibility,
/// breakpoint deduplication).
const GEOM_EPS: f64 = 1e-12;

/// `coef · x ≤ rhs`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Halfspace {
    pub coef: [f64; MAX_DIM],
    pub rhs: f64,
}

impl Halfspace {
    fn eval(&self, x: &[f64]) -> f64 {
        self.coef.iter().zip(x).map(|(a, v)| a * v).sum::<f64>()
    }

    fn normalized(mut self) -> Self {
        let m = self.coef.iter().fold(0.0f64, |m, a| m.max(a.abs()));
        if m > 0.0 {
            for a in &mut self.coef {
                *a /= m;
            }
            self.rhs /= m;
        }
        self
    }

    fn same_as(&self, other: &Self) -> bool {
        self.coef.iter().zip(&other.coef).all(|(a, b)| (a - b).abs() < 1e-13) && (self.rhs - other.rhs).abs() < 1e-13
    }
}

/// A convex polytope `{x ∈ ℝ^dim : A x ≤ c}` plus optional cut hyperplanes
/// across which the integrand is not smooth.
#[derive(Debug, Clone)]
pub struct Polytope {
    dim: usize,
    constraints: Vec<Halfspace>,
    cuts: Vec<Halfspace>,
}

impl Polytope {
    pub fn new(dim: usize) -> Self {
        assert!((1..=MAX_DIM).contains(&dim), "dimension must be 1..={MAX_DIM}");
        Self { dim, constraints: Vec::new(), cuts: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn row(&self, coef: &[f64]) -> [f64; MAX_DIM] {
        assert_eq!(coef.len(), self.dim, "coefficient length must equal dimension");
        let mut c = [0.0; MAX_DIM];
        c[..self.dim].copy_from_slice(coef);
        c
    }

    /// Adds `coef · x ≤ rhs`.
    pub fn le(mut self, coef: &[f64], rhs: f64) -> Self {
        let h = Halfspace { coef: self.row(coef), rhs };
        self.constraints.push(h.normalized());
        self
    }

    /// Adds `coef · x ≥ rhs`.
    pub fn ge(self, coef: &[f64], rhs: f64) -> Self {
        let neg: Vec<f64> = coef.iter().map(|a| -a).collect();
        self.le(&neg, -rhs)
    }

    /// Adds `lo ≤ x_var ≤ hi`.
    pub fn bounds(self, var: usize, lo: f64, hi: f64) -> Self {
        let mut e = vec![0.0; self.dim];
        e[var] = 1.0;
        self.ge(&e, lo).le(&e, hi)
    }

    /// Records the hyperplane `coef · x = rhs` as a place where the integrand
    /// may have a kink, so that it becomes a subdivision point.
    pub fn cut(mut self, coef: &[f64], rhs: f64) -> Self {
        let h = Halfspace { coef: self.row(coef), rhs };
        self.cuts.push(h.normalized());
        self
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        self.constraints.iter().all(|h| h.eval(x) <= h.rhs + GEOM_EPS)
    }

    /// All vertices of the polytope (empty if it is empty or unbounded in a
    /// way that leaves no vertex).
    pub fn vertices(&self) -> Vec<[f64; MAX_DIM]> {
        let all: Vec<usize> = (0..self.dim).collect();
        slice_vertices(&self.constraints, &[], &[], &all, &[])
    }

    /// Minimum of the linear form `coef · x + c0` over the polytope, or
    /// `None` if the polytope is empty.
    pub fn min_linear(&self, coef: &[f64], c0: f64) -> Option<f64> {
        let row = self.row(coef);
        self.vertices().iter().map(|v| row.iter().zip(v).map(|(a, x)| a * x).sum::<f64>() + c0).reduce(f64::min)
    }
}

/// Solves the `n × n` system in place by Gaussian elimination with partial
/// pivoting. Returns `None` when the system is (numerically) singular.
fn solve_small(a: &mut [[f64; MAX_DIM]; MAX_DIM], b: &mut [f64; MAX_DIM], n: usize) -> Option<[f64; MAX_DIM]> {
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-12 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in col + 1..n {
            let m = a[r][col] / a[col][col];
            let (top, bottom) = a.split_at_mut(r);
            for (x, y) in bottom[0][col..n].iter_mut().zip(&top[col][col..n]) {
                *x -= m * y;
            }
            b[r] -= m * b[col];
        }
    }
    let mut x = [0.0; MAX_DIM];
    for r in (0..n).rev() {
        let s: f64 = (r + 1..n).map(|c| a[r][c] * x[c]).sum();
        x[r] = (b[r] - s) / a[r][r];
    }
    Some(x)
}

/// Vertices of the slice of `{A x ≤ c}` obtained by fixing the variables in
/// `fixed_vars` to `fixed_vals`; `free` lists the remaining variables. Cuts
/// may participate in defining a vertex but are not feasibility constraints.
fn slice_vertices(
    constraints: &[Halfspace],
    cuts: &[Halfspace],
    fixed_vals: &[f64],
    free: &[usize],
    fixed_vars: &[usize],
) -> Vec<[f64; MAX_DIM]> {
    let r = free.len();
    let mut base = [0.0; MAX_DIM];
    for (&v, &x) in fixed_vars.iter().zip(fixed_vals) {
        base[v] = x;
    }
    // Reduced rows: coefficients on the free variables and adjusted rhs.
    let reduce = |h: &Halfspace| -> ([f64; MAX_DIM], f64) {
        let mut row = [0.0; MAX_DIM];
        for (k, &v) in free.iter().enumerate() {
            row[k] = h.coef[v];
        }
        let shift: f64 = fixed_vars.iter().map(|&v| h.coef[v] * base[v]).sum();
        (row, h.rhs - shift)
    };
    let rows: Vec<([f64; MAX_DIM], f64)> =
        constraints.iter().chain(cuts).map(reduce).filter(|(row, _)| row[..r].iter().any(|a| a.abs() > 0.0)).collect();
    let n_feas = constraints.iter().map(reduce).filter(|(row, _)| row[..r].iter().any(|a| a.abs() > 0.0)).count();
    let feasible_rows = &rows[..n_feas];
    // Constraints that do not involve the free variables must hold outright.
    let fixed_ok = constraints
        .iter()
        .map(reduce)
        .filter(|(row, _)| row[..r].iter().all(|a| *a == 0.0))
        .all(|(_, rhs)| rhs >= -GEOM_EPS);
    if !fixed_ok {
        return Vec::new();
    }

    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..r).collect();
    if rows.len() < r {
        return out;
    }
    loop {
        let mut a = [[0.0; MAX_DIM]; MAX_DIM];
        let mut b = [0.0; MAX_DIM];
        for (k, &i) in idx.iter().enumerate() {
            a[k] = rows[i].0;
            b[k] = rows[i].1;
        }
        if let Some(sol) = solve_small(&mut a, &mut b, r) {
            let ok = feasible_rows.iter().all(|(row, rhs)| {
                let lhs: f64 = row[..r].iter().zip(&sol[..r]).map(|(a, x)| a * x).sum();
                lhs <= rhs + GEOM_EPS
            });
            if ok {
                let mut v = base;
                for (k, &var) in free.iter().enumerate() {
                    v[var] = sol[k];
                }
                out.push(v);
            }
        }
        // Next r-combination of rows.
        let mut i = r;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] < rows.len() - r + i {
                idx[i] += 1;
                for j in i + 1..r {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Fourier–Motzkin elimination of `var` from `hs`.
fn eliminate(hs: &[Halfspace], var: usize) -> Vec<Halfspace> {
    let mut out: Vec<Halfspace> = Vec::new();
    let mut push = |h: Halfspace| {
        let h = h.normalized();
        if h.coef.iter().all(|a| a.abs() < 1e-15) {
            // 0 ≤ rhs: keep only if infeasible, which makes the region empty.
            if h.rhs < -GEOM_EPS {
                out.push(h);
            }
            return;
        }
        if !out.iter().any(|o| o.same_as(&h)) {
            out.push(h);
        }
    };
    let (pos, rest): (Vec<&Halfspace>, Vec<&Halfspace>) = hs.iter().partition(|h| h.coef[var] > 0.0);
    let (neg, zero): (Vec<&Halfspace>, Vec<&Halfspace>) = rest.into_iter().partition(|h| h.coef[var] < 0.0);
    for h in zero {
        push(*h);
    }
    for p in &pos {
        for n in &neg {
            let (a, b) = (p.coef[var], -n.coef[var]);
            let mut coef = [0.0; MAX_DIM];
            for (c, (pk, nk)) in coef.iter_mut().zip(p.coef.iter().zip(&n.coef)) {
                *c = b * pk + a * nk;
            }
            coef[var] = 0.0;
            push(Halfspace { coef, rhs: b * p.rhs + a * n.rhs });
        }
    }
    out
}

/// Requested accuracy and work limits.
#[derive(Debug, Clone, Copy)]
pub struct QuadratureOptions {
    /// Absolute tolerance on the final value.
    pub tol: f64,
    /// Cap on integrand evaluations across all levels.
    pub max_evals: u64,
    /// Cap on subintervals in any single one-dimensional integration.
    pub max_intervals: usize,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        Self { tol: 1e-7, max_evals: 2_000_000_000, max_intervals: 200 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadratureResult {
    pub value: f64,
    pub abs_error_estimate: f64,
    pub n_evaluations: u64,
    pub converged: bool,
}

#[derive(Debug, Clone, Copy)]
struct Partial {
    value: f64,
    err: f64,
    converged: bool,
}

struct Engine<'a, F> {
    dim: usize,
    /// `levels[k]` holds the constraints on variables `0..=k`.
    levels: Vec<Vec<Halfspace>>,
    constraints: &'a [Halfspace],
    cuts: &'a [Halfspace],
    f: &'a F,
    opts: QuadratureOptions,
    evals: AtomicU64,
    aborted: AtomicBool,
}

impl<'a, F> Engine<'a, F>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    fn limits(&self, k: usize, x: &[f64]) -> (f64, f64) {
        let mut lo = f64::NEG_INFINITY;
        let mut hi = f64::INFINITY;
        for h in &self.levels[k] {
            let a = h.coef[k];
            if a == 0.0 {
                continue;
            }
            let rest: f64 = (0..k).map(|j| h.coef[j] * x[j]).sum();
            let bound = (h.rhs - rest) / a;
            if a > 0.0 {
                hi = hi.min(bound);
            } else {
                lo = lo.max(bound);
            }
        }
        (lo, hi)
    }

    /// Subdivision points for variable `k` inside `(lo, hi)`.
    fn breakpoints(&self, k: usize, x: &[f64], lo: f64, hi: f64) -> Vec<f64> {
        let mut pts = vec![lo, hi];
        if self.dim - k >= 2 || !self.cuts.is_empty() {
            let fixed: Vec<usize> = (0..k).collect();
            let free: Vec<usize> = (k..self.dim).collect();
            for v in slice_vertices(self.constraints, self.cuts, &x[..k], &free, &fixed) {
                pts.push(v[k]);
            }
        }
        let span = hi - lo;
        pts.retain(|&t| t >= lo && t <= hi);
        pts.sort_by(f64::total_cmp);
        pts.dedup_by(|a, b| (*a - *b).abs() <= 1e-11 * span.max(1.0));
        if pts.len() < 2 {
            return vec![lo, hi];
        }
        let last = pts.len() - 1;
        pts[0] = lo;
        pts[last] = hi;
        pts
    }

    fn level(&self, k: usize, x: &mut [f64; MAX_DIM], tol: f64) -> Partial {
        if self.aborted.load(Ordering::Relaxed) {
            return Partial { value: 0.0, err: f64::INFINITY, converged: false };
        }
        let (lo, hi) = self.limits(k, x);
        if !(hi > lo) {
            return Partial { value: 0.0, err: 0.0, converged: true };
        }
        let pts = self.breakpoints(k, x, lo, hi);
        let length = hi - lo;
        let inner_tol = if k + 1 < self.dim { tol / (2.0 * length) } else { 0.0 };
        let gk_tol = if k + 1 < self.dim { tol / 2.0 } else { tol };

        let mut segs: Vec<(f64, f64, Partial)> = Vec::with_capacity(pts.len() + 16);
        for w in pts.windows(2) {
            let r = self.rule(k, x, w[0], w[1], inner_tol);
            segs.push((w[0], w[1], r));
        }
        loop {
            let value: f64 = segs.iter().map(|s| s.2.value).sum();
            let err: f64 = segs.iter().map(|s| s.2.err).sum();
            let inner_ok = segs.iter().all(|s| s.2.converged);
            if !inner_ok {
                return Partial { value, err, converged: false };
            }
            if err <= gk_tol + inner_tol * length {
                return Partial { value, err, converged: true };
            }
            if segs.len() >= self.opts.max_intervals || self.over_budget() {
                self.aborted.store(true, Ordering::Relaxed);
                return Partial { value, err, converged: false };
            }
            // Bisect the worst segment; ties resolved by position.
            let (i, _) = segs.iter().enumerate().fold((0, f64::NEG_INFINITY), |(bi, be), (i, s)| {
                if s.2.err > be {
                    (i, s.2.err)
                } else {
                    (bi, be)
                }
            });
            let (a, b, _) = segs[i];
            let m = 0.5 * (a + b);
            if !(m > a && m < b) {
                self.aborted.store(true, Ordering::Relaxed);
                return Partial { value, err, converged: false };
            }
            let left = self.rule(k, x, a, m, inner_tol);
            let right = self.rule(k, x, m, b, inner_tol);
            segs[i] = (a, m, left);
            segs.insert(i + 1, (m, b, right));
        }
    }

    fn over_budget(&self) -> bool {
        self.evals.load(Ordering::Relaxed) > self.opts.max_evals
    }

    /// One G7/K15 application on `[a, b]` for variable `k`.
    fn rule(&self, k: usize, x: &[f64; MAX_DIM], a: f64, b: f64, inner_tol: f64) -> Partial {
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        let nodes: [f64; 15] = std::array::from_fn(|i| {
            if i < 7 {
                c - h * XGK[i]
            } else if i == 7 {
                c
            } else {
                c + h * XGK[14 - i]
            }
        });
        let eval_at = |t: f64| -> Partial {
            let mut y = *x;
            y[k] = t;
            if k + 1 == self.dim {
                self.evals.fetch_add(1, Ordering::Relaxed);
                Partial { value: (self.f)(&y[..self.dim]), err: 0.0, converged: true }
            } else {
                self.level(k + 1, &mut y, inner_tol)
            }
        };
        let vals: Vec<Partial> = if k == 0 && self.dim > 1 {
            nodes.par_iter().map(|&t| eval_at(t)).collect()
        } else {
            nodes.iter().map(|&t| eval_at(t)).collect()
        };
        let weight_k = |i: usize| if i <= 7 { WGK[i] } else { WGK[14 - i] };
        let weight_g = |i: usize| {
            let j = if i <= 7 { i } else { 14 - i };
            if j % 2 == 1 {
                WG[j / 2]
            } else {
                0.0
            }
        };
        let mut rk = 0.0;
        let mut rg = 0.0;
        let mut inner_err = 0.0;
        let mut converged = true;
        for (i, v) in vals.iter().enumerate() {
            rk += weight_k(i) * v.value;
            rg += weight_g(i) * v.value;
            inner_err += weight_k(i) * v.err;
            converged &= v.converged;
        }
        Partial { value: rk * h, err: (rk - rg).abs() * h + inner_err * h, converged }
    }
}

/// Integrates `f` over `region` to absolute tolerance `opts.tol`.
///
/// Deterministic: the outermost nodes are evaluated in parallel but combined
/// in a fixed order, so the result does not depend on the thread count.
pub fn integrate<F>(region: &Polytope, f: F, opts: QuadratureOptions) -> QuadratureResult
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    let dim = region.dim;
    let mut levels = vec![Vec::new(); dim];
    levels[dim - 1] = region.constraints.clone();
    for k in (0..dim - 1).rev() {
        levels[k] = eliminate(&levels[k + 1], k + 1);
    }
    // An infeasible constant constraint anywhere means the region is empty.
    let empty = levels.iter().flatten().any(|h| h.coef.iter().all(|a| a.abs() < 1e-15) && h.rhs < -GEOM_EPS);
    if empty {
        return QuadratureResult { value: 0.0, abs_error_estimate: 0.0, n_evaluations: 0, converged: true };
    }
    let engine = Engine {
        dim,
        levels,
        constraints: &region.constraints,
        cuts: &region.cuts,
        f: &f,
        opts,
        evals: AtomicU64::new(0),
        aborted: AtomicBool::new(false),
    };
    let mut x = [0.0; MAX_DIM];
    let r = engine.level(0, &mut x, opts.tol);
    let converged = r.converged && r.err <= opts.tol && !engine.aborted.load(Ordering::Relaxed);
    QuadratureResult {
        value: r.value,
        abs_error_estimate: r.err,
        n_evaluations: engine.evals.load(Ordering::Relaxed),
        converged,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_square_constant() {
        let sq = Polytope::new(2).bounds(0, 0.0, 1.0).bounds(1, 0.0, 1.0);
        let r = integrate(&sq, |_| 1.0, QuadratureOptions::default());
        assert!(r.converged);
        assert!((r.value - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn triangle_area_and_moment() {
        // 0 ≤ y ≤ x ≤ 1
        let t = Polytope::new(2).bounds(0, 0.0, 1.0).ge(&[0.0, 1.0], 0.0).le(&[-1.0, 1.0], 0.0);
        let r = integrate(&t, |_| 1.0, QuadratureOptions::default());
        assert!((r.value - 0.5).abs() < 1e-12);
        let r = integrate(&t, |x| x[1], QuadratureOptions::default());
        assert!((r.value - 1.0 / 6.0).abs() < 1e-12);
    }

    #[test]
    fn empty_region_is_zero() {
        let e = Polytope::new(2).bounds(0, 0.0, 1.0).bounds(1, 0.0, 1.0).ge(&[1.0, 1.0], 3.0);
        let r = integrate(&e, |_| 1.0, QuadratureOptions::default());
        assert_eq!(r.value, 0.0);
        assert!(r.converged);
    }

    #[test]
    fn simplex_volume_4d() {
        let mut s = Polytope::new(4);
        for v in 0..4 {
            let mut e = [0.0; 4];
            e[v] = 1.0;
            s = s.ge(&e, 0.0);
        }
        let s = s.le(&[1.0, 1.0, 1.0, 1.0], 1.0);
        let r = integrate(&s, |_| 1.0, QuadratureOptions::default());
        assert!((r.value - 1.0 / 24.0).abs() < 1e-12, "{}", r.value);
    }

    #[test]
    fn kink_from_cut_is_resolved() {
        // ∫_0^1 |x − 1/3| dx = 5/18
        let iv = Polytope::new(1).bounds(0, 0.0, 1.0).cut(&[1.0], 1.0 / 3.0);
        let r = integrate(&iv, |x| (x[0] - 1.0 / 3.0).abs(), QuadratureOptions::default());
        assert!((r.value - 5.0 / 18.0).abs() < 1e-14);
        assert!(r.n_evaluations <= 30);
    }

    #[test]
    fn vertices_of_square() {
        let sq = Polytope::new(2).bounds(0, 0.0, 1.0).bounds(1, 0.0, 2.0);
        let v = sq.vertices();
        assert_eq!(v.len(), 4);
        assert_eq!(sq.min_linear(&[1.0, -1.0], 0.0), Some(-2.0));
    }

    #[test]
    fn impossible_tolerance_fails_fast() {
        let sq = Polytope::new(2).bounds(0, 0.1, 1.0).bounds(1, 0.1, 1.0);
        let opts = QuadratureOptions { tol: 1e-30, ..Default::default() };
        let r = integrate(&sq, |x| 1.0 / (x[0] * x[1]), opts);
        assert!(!r.converged);
    }
}
