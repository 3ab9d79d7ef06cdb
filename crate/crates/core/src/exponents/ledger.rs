//! The hand-enumerated ledger of exponent inequalities asserted along the
//! argument, each evaluated exactly at its worst admissible point.

use crate::exact::{q, qi, Q};

use super::report::{ConstraintReport, Relation};
use super::ExponentParams;

type Side = fn(&ExponentParams, &Q) -> Q;

/// Range of the free exponent γ (the size of the large prime, `P = N^γ`).
#[derive(Debug, Clone, Copy)]
enum Free {
    None,
    /// `[1/3 + 8σ, 1/2 − 9σ]`, the short interval handled directly.
    I5,
    /// `[1/2 − 9σ, 3/8 + 33σ/4]`, the linear-sieve range.
    I6,
    /// `[3/8 + 33σ/4, 1/2]`, the long-prime range.
    I7,
    /// `[3/8 + 33σ/4, 11/24 − σ/4]`.
    I7Low,
    /// `[11/24 − σ/4, 1/2]`.
    I7High,
}

impl Free {
    /// Candidate worst-case points. Every side is piecewise linear in γ with
    /// kinks only at the listed points, so the minimum slack occurs here.
    fn points(self, p: &ExponentParams) -> Vec<Q> {
        let switch = q(11, 24) - &p.sigma / qi(4);
        let iv = |k: usize| vec![p.interval(k).lo.clone(), p.interval(k).hi.clone()];
        match self {
            Free::None => vec![qi(0)],
            Free::I5 => iv(5),
            Free::I6 => iv(6),
            Free::I7 => vec![p.interval(7).lo.clone(), switch, q(1, 2)],
            Free::I7Low => vec![p.interval(7).lo.clone(), switch],
            Free::I7High => vec![switch, q(1, 2)],
        }
    }
}

struct Entry {
    id: &'static str,
    display: &'static str,
    relation: Relation,
    free: Free,
    lhs: Side,
    rhs: Side,
    note: Option<&'static str>,
}

const fn e(id: &'static str, display: &'static str, relation: Relation, free: Free, lhs: Side, rhs: Side) -> Entry {
    Entry { id, display, relation, free, lhs, rhs, note: None }
}

// Frequently used exponents.
fn rho(p: &ExponentParams) -> Q {
    p.rho.clone()
}
fn s(p: &ExponentParams) -> Q {
    p.sigma.clone()
}
fn f(p: &ExponentParams) -> Q {
    p.f.clone()
}
fn b(p: &ExponentParams) -> Q {
    p.b.clone()
}
fn i4_hi(p: &ExponentParams) -> Q {
    q(1, 3) + qi(8) * s(p)
}
fn i5_hi(p: &ExponentParams) -> Q {
    q(1, 2) - qi(9) * s(p)
}
fn i7_lo(p: &ExponentParams) -> Q {
    q(3, 8) + q(33, 4) * s(p)
}
fn c_cubic(p: &ExponentParams) -> Q {
    q(3, 2) - qi(3) * s(p)
}
fn c_lincubic(p: &ExponentParams) -> Q {
    q(7, 4) - q(15, 2) * s(p)
}
fn c_product(p: &ExponentParams) -> Q {
    q(2, 3) - qi(8) * s(p)
}

/// `g(γ) = min(3γ − 5/4 − 15σ/2, γ − 1/3 − 8σ)`.
fn g_of(p: &ExponentParams, x: &Q) -> Q {
    let a = qi(3) * x - q(5, 4) - q(15, 2) * s(p);
    let c = x - q(1, 3) - qi(8) * s(p);
    if a < c {
        a
    } else {
        c
    }
}

/// `5/4 + 15σ/2 − 2γ`, the Type I length left over in the lower part of the
/// long-prime range.
fn w_low(p: &ExponentParams, x: &Q) -> Q {
    q(5, 4) + q(15, 2) * s(p) - qi(2) * x
}

fn entries() -> Vec<Entry> {
    use Free::*;
    use Relation::*;
    let mut v = vec![
        // Admissible window and the ρ-form/σ-form identities.
        e("window.lower", "1/120 < σ", Lt, None, |_, _| q(1, 120), |p, _| s(p)),
        e("window.upper", "σ <= 1/102", Le, None, |p, _| s(p), |_, _| q(1, 102)),
        e("rho-form.cubic", "2 - 3ρ = 3/2 - 3σ", Eq, None, |p, _| qi(2) - qi(3) * rho(p), |p, _| c_cubic(p)),
        e(
            "rho-form.linear-cubic",
            "3 - 15ρ/2 = 7/4 - 15σ/2",
            Eq,
            None,
            |p, _| qi(3) - q(15, 2) * rho(p),
            |p, _| c_lincubic(p),
        ),
        e("rho-form.product", "2 - 8ρ = 2/3 - 8σ", Eq, None, |p, _| qi(2) - qi(8) * rho(p), |p, _| c_product(p)),
        e("range.type1.lower", "1/6 < ρ", Lt, None, |_, _| q(1, 6), |p, _| rho(p)),
        e("range.type1.upper", "ρ < 2/11", Lt, None, |p, _| rho(p), |_, _| q(2, 11)),
        e("range.type2.upper", "ρ < 1/5", Lt, None, |p, _| rho(p), |_, _| q(1, 5)),
        e("levels.b-below-rho", "b < ρ", Lt, None, |p, _| b(p), |p, _| rho(p)),
        e("levels.rho-below-f", "ρ < f", Lt, None, |p, _| rho(p), |p, _| f(p)),
        // Short interval of large primes, γ ∈ I5.
        e("short-interval.reflection", "(1-γ)/2 <= 1/3 - 4σ", Ll, I5, |_, x| (qi(1) - x) / qi(2), |p, _| f(p)),
        e("short-interval.gap", "2(1/6+σ) < 5/6 - γ - σ", Lt, I5, |p, _| qi(2) * rho(p), |p, x| q(5, 6) - x - s(p)),
        e(
            "short-interval.two-large",
            "1 - γ < 5/3 - 2γ - 2σ",
            Lt,
            I5,
            |_, x| qi(1) - x,
            |p, x| q(5, 3) - qi(2) * x - qi(2) * s(p),
        ),
        e(
            "short-interval.cubic",
            "3(1/6+σ) + 2γ < 3/2 - 3σ",
            Lt,
            I5,
            |p, x| qi(3) * rho(p) + qi(2) * x,
            |p, _| c_cubic(p),
        ),
        e(
            "short-interval.linear-cubic",
            "(1/6+σ) + 3γ < 7/4 - 15σ/2",
            Lt,
            I5,
            |p, x| rho(p) + qi(3) * x,
            |p, _| c_lincubic(p),
        ),
        e("short-interval.product", "(1/6+σ) + γ <= 2/3 - 8σ", Le, I5, |p, x| rho(p) + x, |p, _| c_product(p)),
        // Long-prime range, γ ∈ I7.
        e("long-prime.g-positive", "0 < g", Lt, I7, |_, _| qi(0), g_of),
        e("long-prime.g-definition", "g <= γ - 1/3 - 8σ", Le, I7, g_of, |p, x| x - q(1, 3) - qi(8) * s(p)),
        e(
            "long-prime.g-cubic-bound",
            "γ - 1/3 - 8σ <= (2γ - 3σ - 1/2)/3",
            Le,
            I7,
            |p, x| x - q(1, 3) - qi(8) * s(p),
            |p, x| (qi(2) * x - qi(3) * s(p) - q(1, 2)) / qi(3),
        ),
        e("long-prime.subset-g", "g <= 1/6 - 2σ", Le, I7, g_of, |p, _| f(p) / qi(2)),
        e("long-prime.subset-gamma-lower", "1/3 - 4σ < γ", Lt, I7, |p, _| f(p), |_, x| x.clone()),
        e("long-prime.subset-gamma-upper", "γ < 2/3 - 8σ", Lt, I7, |_, x| x.clone(), |p, _| c_product(p)),
        e("long-prime.large-factor", "1/4 < γ - g", Lt, I7, |_, _| q(1, 4), |p, x| x - g_of(p, x)),
        e(
            "long-prime.direct.cubic",
            "3g + 2(1 - γ) <= 3/2 - 3σ",
            Le,
            I7,
            |p, x| qi(3) * g_of(p, x) + qi(2) * (qi(1) - x),
            |p, _| c_cubic(p),
        ),
        e(
            "long-prime.direct.linear-cubic",
            "g + 3(1 - γ) <= 7/4 - 15σ/2",
            Le,
            I7,
            |p, x| g_of(p, x) + qi(3) * (qi(1) - x),
            |p, _| c_lincubic(p),
        ),
        e(
            "long-prime.direct.product",
            "g + (1 - γ) <= 2/3 - 8σ",
            Le,
            I7,
            |p, x| g_of(p, x) + (qi(1) - x),
            |p, _| c_product(p),
        ),
        e("long-prime.bilinear-high.length", "γ - g <= 1/3 + 8σ", Le, I7High, |p, x| x - g_of(p, x), |p, _| i4_hi(p)),
        e(
            "long-prime.bilinear-high.cubic",
            "3(1/6+σ) + 2(1/3+8σ) < 3/2 - 3σ",
            Lt,
            None,
            |p, _| qi(3) * rho(p) + qi(2) * i4_hi(p),
            |p, _| c_cubic(p),
        ),
        e(
            "long-prime.bilinear-high.cubic.closed",
            "3(1/6+σ) + 2(1/3+8σ) = 7/6 + 19σ",
            Eq,
            None,
            |p, _| qi(3) * rho(p) + qi(2) * i4_hi(p),
            |p, _| q(7, 6) + qi(19) * s(p),
        ),
        e(
            "long-prime.bilinear-high.linear-cubic",
            "(1/6+σ) + 3(1/3+8σ) < 7/4 - 15σ/2",
            Lt,
            None,
            |p, _| rho(p) + qi(3) * i4_hi(p),
            |p, _| c_lincubic(p),
        ),
        e(
            "long-prime.bilinear-high.linear-cubic.closed",
            "(1/6+σ) + 3(1/3+8σ) = 7/6 + 25σ",
            Eq,
            None,
            |p, _| rho(p) + qi(3) * i4_hi(p),
            |p, _| q(7, 6) + qi(25) * s(p),
        ),
        e(
            "long-prime.bilinear-high.product",
            "(1/6+σ) + (1/3+8σ) <= 2/3 - 8σ",
            Le,
            None,
            |p, _| rho(p) + i4_hi(p),
            |p, _| c_product(p),
        ),
        e(
            "long-prime.bilinear-high.product.closed",
            "(1/6+σ) + (1/3+8σ) = 1/2 + 9σ",
            Eq,
            None,
            |p, _| rho(p) + i4_hi(p),
            |p, _| q(1, 2) + qi(9) * s(p),
        ),
        e("long-prime.bilinear-low.length", "γ - g <= 5/4 + 15σ/2 - 2γ", Le, I7Low, |p, x| x - g_of(p, x), w_low),
        e(
            "long-prime.bilinear-low.cubic",
            "3(1/6+σ) + 2(5/4 + 15σ/2 - 2γ) < 3/2 - 3σ",
            Lt,
            I7Low,
            |p, x| qi(3) * rho(p) + qi(2) * w_low(p, x),
            |p, _| c_cubic(p),
        ),
        e(
            "long-prime.bilinear-low.cubic.closed",
            "3(1/6+σ) + 2(5/4 + 15σ/2 - 2γ) = 3 + 18σ - 4γ",
            Eq,
            I7Low,
            |p, x| qi(3) * rho(p) + qi(2) * w_low(p, x),
            |p, x| qi(3) + qi(18) * s(p) - qi(4) * x,
        ),
        e(
            "long-prime.bilinear-low.linear-cubic",
            "(1/6+σ) + 3(5/4 + 15σ/2 - 2γ) < 7/4 - 15σ/2",
            Lt,
            I7Low,
            |p, x| rho(p) + qi(3) * w_low(p, x),
            |p, _| c_lincubic(p),
        ),
        e(
            "long-prime.bilinear-low.linear-cubic.closed",
            "(1/6+σ) + 3(5/4 + 15σ/2 - 2γ) = 47/12 + 47σ/2 - 6γ",
            Eq,
            I7Low,
            |p, x| rho(p) + qi(3) * w_low(p, x),
            |p, x| q(47, 12) + q(47, 2) * s(p) - qi(6) * x,
        ),
        e(
            "long-prime.bilinear-low.product",
            "(1/6+σ) + (5/4 + 15σ/2 - 2γ) <= 2/3 - 8σ",
            Le,
            I7Low,
            |p, x| rho(p) + w_low(p, x),
            |p, _| c_product(p),
        ),
        e(
            "long-prime.bilinear-low.product.closed",
            "(1/6+σ) + (5/4 + 15σ/2 - 2γ) = 17/12 + 17σ/2 - 2γ",
            Eq,
            I7Low,
            |p, x| rho(p) + w_low(p, x),
            |p, x| q(17, 12) + q(17, 2) * s(p) - qi(2) * x,
        ),
        // Linear-sieve remainder terms, γ ∈ I6.
        e(
            "linear-sieve.cubic",
            "3(2/3 - 8σ - γ) + 2γ < 3/2 - 3σ",
            Lt,
            I6,
            |p, x| qi(3) * (c_product(p) - x) + qi(2) * x,
            |p, _| c_cubic(p),
        ),
        e(
            "linear-sieve.cubic.closed",
            "3(2/3 - 8σ - γ) + 2γ = 2 - 24σ - γ",
            Eq,
            I6,
            |p, x| qi(3) * (c_product(p) - x) + qi(2) * x,
            |p, x| qi(2) - qi(24) * s(p) - x,
        ),
        e(
            "linear-sieve.linear-cubic",
            "(2/3 - 8σ - γ) + 3γ < 7/4 - 15σ/2",
            Lt,
            I6,
            |p, x| (c_product(p) - x) + qi(3) * x,
            |p, _| c_lincubic(p),
        ),
        e(
            "linear-sieve.linear-cubic.endpoint",
            "2/3 - 8σ + 3/4 + 33σ/2 < 7/4 - 15σ/2",
            Lt,
            None,
            |p, _| c_product(p) + q(3, 4) + q(33, 2) * s(p),
            |p, _| c_lincubic(p),
        ),
        e(
            "linear-sieve.product",
            "(2/3 - 8σ - γ) + γ <= 2/3 - 8σ",
            Le,
            I6,
            |p, x| (c_product(p) - x) + x,
            |p, _| c_product(p),
        ),
        // Three-prime Buchstab term with all primes below N^ρ.
        e(
            "three-prime.cubic",
            "3ρ + 2(2ρ) <= 3/2 - 2σ",
            Le,
            None,
            |p, _| qi(7) * rho(p),
            |p, _| q(3, 2) - qi(2) * s(p),
        ),
        Entry {
            note: Some("variant using the 3/2 - 3σ bound of the other chains"),
            ..e("three-prime.cubic.alt", "3ρ + 2(2ρ) <= 3/2 - 3σ", Le, None, |p, _| qi(7) * rho(p), |p, _| c_cubic(p))
        },
        e(
            "three-prime.linear-cubic",
            "ρ + 3(2ρ) <= 7/4 - 15σ/2",
            Le,
            None,
            |p, _| qi(7) * rho(p),
            |p, _| c_lincubic(p),
        ),
        e("three-prime.product", "ρ + 2ρ <= 2/3 - 8σ", Le, None, |p, _| qi(3) * rho(p), |p, _| c_product(p)),
        // Second Buchstab step for p1 ∈ I4.
        e(
            "mid-prime.cubic",
            "3ρ + 2(1/3+8σ) < 3/2 - 3σ",
            Lt,
            None,
            |p, _| qi(3) * rho(p) + qi(2) * i4_hi(p),
            |p, _| c_cubic(p),
        ),
        e(
            "mid-prime.linear-cubic",
            "ρ + 3(1/3+8σ) < 7/4 - 15σ/2",
            Lt,
            None,
            |p, _| rho(p) + qi(3) * i4_hi(p),
            |p, _| c_lincubic(p),
        ),
        e("mid-prime.product", "ρ + (1/3+8σ) < 2/3 - 8σ", Lt, None, |p, _| rho(p) + i4_hi(p), |p, _| c_product(p)),
        e("mid-prime.pair-level", "ρ <= 2b", Le, None, |p, _| rho(p), |p, _| qi(2) * b(p)),
        // Counting arguments that rule out prime-factor patterns.
        e("pattern.mid.two-large", "1 < 4(1/3 - 4σ)", Lt, None, |_, _| qi(1), |p, _| qi(4) * f(p)),
        e(
            "pattern.mid.three-large",
            "1 < 3(1/3 - 4σ) + 1/6 - 2σ",
            Lt,
            None,
            |_, _| qi(1),
            |p, _| qi(3) * f(p) + f(p) / qi(2),
        ),
        e(
            "pattern.mid.three-large.closed",
            "3(1/3 - 4σ) + 1/6 - 2σ = 7/6 - 14σ",
            Eq,
            None,
            |p, _| qi(3) * f(p) + f(p) / qi(2),
            |p, _| q(7, 6) - qi(14) * s(p),
        ),
        e("pattern.mid.k-lower", "1/3 + 8σ + 3(1/6+σ) < 1", Lt, None, |p, _| i4_hi(p) + qi(3) * rho(p), |_, _| qi(1)),
        e(
            "pattern.long.second-prime",
            "(1/2)(5/8 - 33σ/4) < 1/3 - 4σ",
            Lt,
            None,
            |p, _| (q(5, 8) - q(33, 4) * s(p)) / qi(2),
            |p, _| f(p),
        ),
        e(
            "pattern.long.second-prime.reflection",
            "(1/2)(1 - (3/8+33σ/4)) <= (1/2)(5/8 - 33σ/4)",
            Le,
            None,
            |p, _| (qi(1) - i7_lo(p)) / qi(2),
            |p, _| (q(5, 8) - q(33, 4) * s(p)) / qi(2),
        ),
        e(
            "pattern.long.two-large",
            "1 < 3/8 + 33σ/4 + 2(1/3 - 4σ)",
            Lt,
            None,
            |_, _| qi(1),
            |p, _| i7_lo(p) + qi(2) * f(p),
        ),
        e("pattern.long.k-lower", "1/2 + 2(1/6+σ) < 1", Lt, None, |p, _| q(1, 2) + qi(2) * rho(p), |_, _| qi(1)),
        e(
            "pattern.sieve.two-large",
            "1 < 1/2 - 9σ + 2(1/3 - 4σ)",
            Lt,
            None,
            |_, _| qi(1),
            |p, _| i5_hi(p) + qi(2) * f(p),
        ),
        e(
            "pattern.sieve.k-upper",
            "3/8 + 33σ/4 + 3(1/6+σ) < 1",
            Lt,
            None,
            |p, _| i7_lo(p) + qi(3) * rho(p),
            |_, _| qi(1),
        ),
    ];
    v.shrink_to_fit();
    v
}

fn evaluate(entry: &Entry, p: &ExponentParams) -> ConstraintReport {
    let points = entry.free.points(p);
    let mut worst: Option<(ConstraintReport, Q)> = None;
    for x in points {
        let r = ConstraintReport::new(entry.id, entry.display, entry.relation, (entry.lhs)(p, &x), (entry.rhs)(p, &x));
        let worse = match &worst {
            None => true,
            Some((w, _)) => match entry.relation {
                // For identities the worst point is the largest deviation.
                Relation::Eq => num_traits::abs(r.slack.clone()) > num_traits::abs(w.slack.clone()),
                _ => r.slack < w.slack,
            },
        };
        if worse {
            worst = Some((r, x));
        }
    }
    let (mut report, x) = worst.expect("at least one evaluation point");
    if !matches!(entry.free, Free::None) {
        report = report.at(x);
    }
    if let Some(n) = entry.note {
        report = report.with_note(n);
    }
    report
}

/// Evaluates every ledger entry at its worst admissible point.
///
/// Identities are checked at every candidate point; a linear identity that
/// holds at two distinct points holds identically.
pub fn verify_ledger(p: &ExponentParams) -> Vec<ConstraintReport> {
    entries().iter().map(|e| evaluate(e, p)).collect()
}

/// Side claims about the sieve level that are stated but not load-bearing:
/// `D^(1/3) ≤ Z ≤ D^(1/2)` with `D = N^(2/3 − 8σ − γ)`, `Z = N^(1/12 + σ/2)`,
/// over γ ∈ I6. Reported separately from the ledger.
pub fn sieve_level_claims(p: &ExponentParams) -> Vec<ConstraintReport> {
    let z = p.big_z();
    let mut out = Vec::new();
    for (id, display, third) in
        [("sieve-level.lower", "D^(1/3) <= Z", true), ("sieve-level.upper", "Z <= D^(1/2)", false)]
    {
        let mut worst: Option<(ConstraintReport, Q)> = None;
        for x in Free::I6.points(p) {
            let d = c_product(p) - &x;
            let r = if third {
                ConstraintReport::new(id, display, Relation::Le, d / qi(3), z.clone())
            } else {
                ConstraintReport::new(id, display, Relation::Le, z.clone(), d / qi(2))
            };
            if worst.as_ref().is_none_or(|(w, _)| r.slack < w.slack) {
                worst = Some((r, x));
            }
        }
        let (r, x) = worst.expect("two endpoints");
        out.push(r.at(x));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::to_f64;

    fn by_id<'a>(r: &'a [ConstraintReport], id: &str) -> &'a ConstraintReport {
        r.iter().find(|x| x.id == id).unwrap_or_else(|| panic!("no entry {id}"))
    }

    #[test]
    fn ids_are_unique() {
        let r = verify_ledger(&ExponentParams::default());
        let mut ids: Vec<_> = r.iter().map(|x| x.id.clone()).collect();
        ids.sort();
        ids.dedup();
        assert_eq!(ids.len(), r.len());
    }

    #[test]
    fn worst_case_bilinear_low_cubic() {
        let p = ExponentParams::default();
        let r = verify_ledger(&p);
        let c = by_id(&r, "long-prime.bilinear-low.cubic");
        // 3 + 18σ − 4(3/8 + 33σ/4) = 3/2 − 15σ
        assert_eq!(c.lhs, q(3, 2) - qi(15) * &p.sigma);
        assert_eq!(c.worst_at.as_ref().unwrap(), &p.interval(7).lo);
    }

    #[test]
    fn g_switches_branch() {
        let p = ExponentParams::default();
        let switch = q(11, 24) - &p.sigma / qi(4);
        let a = qi(3) * &switch - q(5, 4) - q(15, 2) * &p.sigma;
        let c = &switch - q(1, 3) - qi(8) * &p.sigma;
        assert_eq!(a, c);
        assert!(to_f64(&g_of(&p, &q(1, 2))) > 0.0);
    }

    #[test]
    fn sieve_level_upper_side_fails_over_sieve_range() {
        let p = ExponentParams::default();
        let r = sieve_level_claims(&p);
        assert!(r[0].satisfied);
        assert!(!r[1].satisfied);
    }
}
