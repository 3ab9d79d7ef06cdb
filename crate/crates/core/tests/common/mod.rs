//! Reference implementations shared by the integration tests. They are
//! deliberately simple and share no code with the library.

#![allow(dead_code, clippy::neg_cmp_op_on_partial_ord)]

/// Adaptive Simpson quadrature with absolute tolerance `tol`.
pub fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    if !(b > a) {
        return 0.0;
    }
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    recurse(f, a, b, fa, fm, fb, whole, tol, 48)
}

#[allow(clippy::too_many_arguments)]
fn recurse(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    recurse(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
        + recurse(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
}

/// [`simpson`] over `[a, b]` split at the interior `breaks`.
pub fn simpson_split(f: &dyn Fn(f64) -> f64, a: f64, b: f64, breaks: &[f64], tol: f64) -> f64 {
    let mut pts: Vec<f64> = breaks.iter().copied().filter(|&x| x > a && x < b).collect();
    pts.push(a);
    pts.push(b);
    pts.sort_by(f64::total_cmp);
    pts.windows(2).map(|w| simpson(f, w[0], w[1], tol)).sum()
}

/// ω on a uniform grid by the trapezoid rule applied to
/// `(tω(t))' = ω(t − 1)`, with one Richardson step.
pub struct OmegaOracle {
    h: f64,
    values: Vec<f64>,
}

impl OmegaOracle {
    pub fn new(t_max: f64, per_unit: usize) -> Self {
        let coarse = trapezoid(t_max, per_unit);
        let fine = trapezoid(t_max, 2 * per_unit);
        let values = coarse.iter().enumerate().map(|(i, c)| fine[2 * i] + (fine[2 * i] - c) / 3.0).collect();
        Self { h: 1.0 / per_unit as f64, values }
    }

    /// Linear interpolation between extrapolated nodes.
    pub fn eval(&self, t: f64) -> f64 {
        if t <= 2.0 {
            return 1.0 / t;
        }
        let x = (t - 1.0) / self.h;
        let i = (x.floor() as usize).min(self.values.len() - 2);
        let u = x - i as f64;
        self.values[i] * (1.0 - u) + self.values[i + 1] * u
    }
}

fn trapezoid(t_max: f64, m: usize) -> Vec<f64> {
    let h = 1.0 / m as f64;
    let n = ((t_max - 1.0) * m as f64).ceil() as usize + 1;
    let mut w = vec![0.0; n];
    let mut tw = 0.0;
    for i in 0..n {
        let t = 1.0 + i as f64 * h;
        if i <= m {
            w[i] = 1.0 / t;
            tw = 1.0;
        } else {
            tw += 0.5 * h * (w[i - 1 - m] + w[i - m]);
            w[i] = tw / t;
        }
    }
    w
}

/// `∫_lo^hi dy / (y (c − y))` for `0 < lo ≤ hi < c`.
pub fn log_kernel(c: f64, lo: f64, hi: f64) -> f64 {
    if hi <= lo {
        return 0.0;
    }
    ((hi / (c - hi)).ln() - (lo / (c - lo)).ln()) / c
}

/// Parameters at σ = 1/105 in floating point.
pub struct P {
    pub s: f64,
    pub rho: f64,
    pub b: f64,
    pub f: f64,
}

pub fn p105() -> P {
    let s = 1.0 / 105.0;
    P { s, rho: 1.0 / 6.0 + s, b: 1.0 / 6.0 - 5.0 * s, f: 1.0 / 3.0 - 4.0 * s }
}

/// Relative difference.
pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

/// `e(θ)` with θ reduced by `floor`, no compensation.
pub fn e(theta: f64) -> (f64, f64) {
    let t = (theta - theta.floor()) * std::f64::consts::TAU;
    (t.cos(), t.sin())
}

/// `ℓ g(x)` for `g(x) = (a/q)x² + βx + γ`, with the quadratic part reduced mod 1 exactly.
pub fn phase(a: i64, q: u64, beta: f64, gamma: f64, ell: u64, x: u64) -> f64 {
    let q128 = q as i128;
    let r = ((a as i128) * (ell as i128) % q128 * ((x as i128 * x as i128) % q128)).rem_euclid(q128);
    r as f64 / q as f64 + ell as f64 * (beta * x as f64 + gamma)
}

/// Type I sum by the definition, plain loops.
#[allow(clippy::too_many_arguments)]
pub fn type1_naive(a: i64, q: u64, beta: f64, gamma: f64, n: u64, v: f64, w: f64, l: u64) -> f64 {
    let mut t = 0.0;
    for ell in 1..=l {
        for vv in (v.floor() as u64 + 1)..=((2.0 * v).floor() as u64) {
            for ww in (w.floor() as u64 + 1)..=((2.0 * w).floor() as u64) {
                let m = vv * ww;
                let (mut re, mut im) = (0.0, 0.0);
                for k in (n / (2 * m) + 1)..=(n / m) {
                    let (c, s) = e(phase(a, q, beta, gamma, ell, m * k));
                    re += c;
                    im += s;
                }
                t += (re * re + im * im).sqrt();
            }
        }
    }
    t
}

/// Type II sum by the definition with explicit sign vectors.
#[allow(clippy::too_many_arguments)]
pub fn type2_naive(
    a: i64,
    q: u64,
    beta: f64,
    gamma: f64,
    n: u64,
    y: f64,
    l: u64,
    c: &[i8],
    b: &[i8],
    av: &[i8],
) -> (f64, f64) {
    let y_min = y.floor() as u64 + 1;
    let (mut re, mut im) = (0.0, 0.0);
    for ell in 1..=l {
        for yy in y_min..=((2.0 * y).floor() as u64) {
            for x in (n / (2 * yy) + 1)..=(n / yy) {
                let s = f64::from(c[ell as usize - 1] * b[(yy - y_min) as usize] * av[x as usize - 1]);
                let (cs, sn) = e(phase(a, q, beta, gamma, ell, x * yy));
                re += s * cs;
                im += s * sn;
            }
        }
    }
    (re, im)
}
