use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;
use sievecalc_core::arithmetic::{
    buchstab_identity_check, decomposition_check, default_budget, parse_count, representation_spectrum,
    required_digits, search_solutions, type1_sum, type2_sum, ApproximatingPolynomial, Real, SearchConfig, SearchMode,
    SumOptions, TypeSumReport,
};
use sievecalc_core::exponents::{default_rho, format_reports};
use sievecalc_core::integrals::{j1_min_omega_argument, OMEGA_MAJORANT};
use sievecalc_core::sievefn::DEFAULT_OMEGA_TOL;
use sievecalc_core::{
    evaluate_final_sum, evaluate_j, find_subproduct, parse_rational, sieve_level_claims, verify_ledger, BuchstabTable,
    ConstraintReport, Error, ExponentParams, IntegralId, IntegralOptions, J8Endpoints, J9Variant, JResult, Reading,
    Result, SumReport, Q,
};

use crate::args::{Cli, Command, Global, J8Arg, J9Arg, ReadingArg, SearchModeArg};
use crate::output::{sig18, verdict, Report};
use crate::Status;

/// Default quadrature tolerance.
const INTEGRAL_TOL: f64 = 1e-7;
/// Default absolute accuracy of ω for the buchstab subcommand.
const OMEGA_TOL: f64 = 1e-9;
/// Start of the range on which ω stays below [`OMEGA_UPPER`].
const OMEGA_UPPER_FROM: f64 = 1.7631;
const OMEGA_UPPER: f64 = 0.5672;
/// Range and lower bound for the minimum of ω past its first dip.
const OMEGA_MIN_RANGE: (f64, f64) = (6.0, 12.0);
const OMEGA_LOWER: f64 = 0.5614;

pub fn run(cli: &Cli) -> Result<Status> {
    let g = &cli.global;
    let report = match &cli.command {
        Command::Params => params(g)?,
        Command::Ledger { filter } => ledger(g, filter.as_deref())?,
        Command::Buchstab { t, from, to, step, dump } => buchstab(g, t, *from, *to, *step, dump.as_deref())?,
        Command::Integrals { id } => integrals(g, id.as_deref())?,
        Command::VerifyAll => verify_all(g)?,
        Command::Search { alpha, alpha_digits, beta, gamma, nmax, epsilon, mode, csv } => search(
            g,
            &SearchArgs { alpha, alpha_digits: *alpha_digits, beta, gamma, nmax, epsilon, mode: *mode },
            csv.as_deref(),
        )?,
        Command::Identity { n, trials, seed } => identity(g, *n, *trials, *seed)?,
        Command::Spectrum { l, y, full } => spectrum(g, *l, *y, *full)?,
        Command::Typesum { kind, n, v, w, y, l, alpha, q_max, beta, gamma, epsilon, seed } => typesum(
            g,
            &TypesumArgs {
                kind: *kind,
                n,
                v: *v,
                w: *w,
                y: *y,
                l: *l,
                alpha,
                q_max: *q_max,
                beta: *beta,
                gamma: *gamma,
                epsilon,
                seed: *seed,
            },
        )?,
        Command::Subproduct { rhos, g: gg } => subproduct(g, rhos, gg)?,
    };
    let (report, status) = report;
    report.emit(g).map_err(|e| io_error(g, e))?;
    Ok(status)
}

fn io_error(g: &Global, e: std::io::Error) -> Error {
    let target = g.output.as_ref().map(|p| p.display().to_string()).unwrap_or_else(|| "output".into());
    Error::Domain(format!("cannot write {target}: {e}"))
}

/// ρ from `--rho` or `--sigma` (default 37/210), without the window check.
fn rho_of(g: &Global) -> Result<Q> {
    match (&g.rho, &g.sigma) {
        (Some(r), _) => parse_rational(r),
        (None, Some(s)) => Ok(parse_rational(s)? + Q::new(1.into(), 6.into())),
        (None, None) => Ok(default_rho()),
    }
}

/// Exponent parameters, rejecting σ outside the admissible window.
fn params_of(g: &Global) -> Result<ExponentParams> {
    ExponentParams::derive(rho_of(g)?)
}

fn budget_of(g: &Global) -> Result<u64> {
    match &g.budget {
        Some(b) => parse_count(b).ok_or_else(|| Error::Parse { what: "budget", input: b.clone() }),
        None => Ok(default_budget()),
    }
}

fn count_of(what: &'static str, s: &str) -> Result<u64> {
    parse_count(s).ok_or_else(|| Error::Parse { what, input: s.to_owned() })
}

fn integral_options(g: &Global) -> IntegralOptions {
    IntegralOptions {
        tol: g.tol.unwrap_or(INTEGRAL_TOL),
        reading: match g.reading {
            ReadingArg::Printed => Reading::Printed,
            ReadingArg::Reconstructed => Reading::Reconstructed,
        },
        j9: match g.j9 {
            J9Arg::I6 => J9Variant::I6,
            J9Arg::I7 => J9Variant::I7,
        },
        j8: match g.j8 {
            J8Arg::Repaired => J8Endpoints::Repaired,
            J8Arg::Printed => J8Endpoints::Printed,
        },
        ..IntegralOptions::default()
    }
}

fn write_file(path: &Path, body: &str) -> Result<()> {
    fs::write(path, body).map_err(|e| Error::Domain(format!("cannot write {}: {e}", path.display())))
}

type Outcome = Result<(Report, Status)>;

fn params(g: &Global) -> Outcome {
    let p = params_of(g)?;
    let z = p.big_z();
    let mut text = p.to_string();
    writeln!(text, "Z      N^({z}) ~ N^{:.10}", sievecalc_core::exact::to_f64(&z)).unwrap();
    let data = json!({ "params": p, "big_z": z.to_string() });
    Ok((Report::new("params", text, data), Status::Passed))
}

fn ledger(g: &Global, filter: Option<&str>) -> Outcome {
    let p = params_of(g)?;
    let keep = |r: &ConstraintReport| filter.is_none_or(|f| r.id.starts_with(f));
    let constraints: Vec<ConstraintReport> = verify_ledger(&p).into_iter().filter(keep).collect();
    let claims: Vec<ConstraintReport> = sieve_level_claims(&p).into_iter().filter(keep).collect();
    let all = constraints.iter().all(|c| c.satisfied);
    let mut text = format!("sigma = {}, rho = {}\n", p.sigma, p.rho);
    text.push_str(&format_reports(&constraints));
    if !claims.is_empty() {
        text.push_str("\nsieve-level side claims (informational):\n");
        text.push_str(&format_reports(&claims));
    }
    let failed = constraints.iter().filter(|c| !c.satisfied).count();
    writeln!(text, "\n{} constraints, {failed} failed: {}", constraints.len(), verdict(all)).unwrap();
    let data = json!({
        "sigma": p.sigma.to_string(),
        "rho": p.rho.to_string(),
        "constraints": constraints,
        "sieve_level_claims": claims,
        "all_satisfied": all,
    });
    Ok((Report::new("ledger", text, data), Status::from_bool(all)))
}

#[derive(Serialize)]
struct OmegaPoint {
    t: f64,
    omega: f64,
}

fn buchstab(g: &Global, ts: &[f64], from: Option<f64>, to: Option<f64>, step: f64, dump: Option<&Path>) -> Outcome {
    let tol = g.tol.unwrap_or(OMEGA_TOL);
    let mut points: Vec<f64> = ts.to_vec();
    match (from, to) {
        (Some(a), Some(b)) => {
            if !(step > 0.0 && a <= b) {
                return Err(Error::Domain(format!("need from <= to and step > 0, got {a}, {b}, {step}")));
            }
            let n = ((b - a) / step + 1e-9).floor() as usize;
            points.extend((0..=n).map(|i| a + i as f64 * step));
        }
        (None, None) => {}
        _ => return Err(Error::Domain("--from and --to go together".into())),
    }
    let max_t = points.iter().copied().fold(2.0f64, f64::max).max(40.0);
    let table = BuchstabTable::with_range(max_t.ceil() + 1.0, tol)?;
    let values: Vec<OmegaPoint> =
        points.iter().map(|&t| table.omega(t).map(|omega| OmegaPoint { t, omega })).collect::<Result<_>>()?;
    if let Some(path) = dump {
        let mut csv = String::from("t,omega\n");
        for (t, w) in table.samples() {
            writeln!(csv, "{},{}", sig18(t), sig18(w)).unwrap();
        }
        write_file(path, &csv)?;
    }
    let mut text = String::new();
    for v in &values {
        writeln!(text, "omega({}) = {:.12}", v.t, v.omega).unwrap();
    }
    if values.is_empty() {
        text.push_str("no points requested (use --t or --from/--to)\n");
    }
    let data = json!({
        "tol": tol,
        "table_error_estimate": table.error_estimate(),
        "values": values,
    });
    Ok((Report::new("buchstab", text, data), Status::Passed))
}

fn integral_line(r: &JResult) -> String {
    let bound = r.bound.map_or("-".to_owned(), |b| format!("{b:.6}"));
    let ok = match r.satisfied {
        Some(true) => "ok",
        Some(false) => "FAIL",
        None => "-",
    };
    format!("{:<6} {:>12.9} {:>9.1e} {:>9} {:>4} {:>8}\n", r.id.name(), r.value, r.error, bound, ok, r.n_eval)
}

const INTEGRAL_HEADER: &str = "id            value     error     bound   ok   n_eval\n";

fn sum_text(s: &SumReport) -> String {
    format!(
        "sum J1..J7 + {} = {:.6} (error {:.1e}); printed total {:.6}, target < {:.3}, printed bounds add to {:.6}\n\
         below printed total: {}; below target: {}; every term within its bound: {}\n",
        s.j9.id().name(),
        s.sum,
        s.error,
        s.printed_total,
        s.target,
        s.printed_bounds_sum,
        verdict(s.below_printed_total),
        verdict(s.below_target),
        verdict(s.all_terms_within_bounds),
    )
}

fn integrals(g: &Global, id: Option<&str>) -> Outcome {
    let p = params_of(g)?;
    let opts = integral_options(g);
    if let Some(id) = id {
        let id: IntegralId = id.parse()?;
        let r = evaluate_j(id, &p, &opts)?;
        let text = format!("{INTEGRAL_HEADER}{}", integral_line(&r));
        let status = Status::from_bool(r.satisfied != Some(false));
        return Ok((Report::new("integrals", text, json!({ "integrals": [r] })), status));
    }
    let all: Vec<JResult> = IntegralId::ALL.iter().map(|&id| evaluate_j(id, &p, &opts)).collect::<Result<_>>()?;
    let sum = evaluate_final_sum(&p, &opts)?;
    let mut text = format!("sigma = {}, reading = {:?}\n{INTEGRAL_HEADER}", p.sigma, opts.reading);
    all.iter().for_each(|r| text.push_str(&integral_line(r)));
    text.push('\n');
    text.push_str(&sum_text(&sum));
    let passed = sum.passed();
    writeln!(text, "overall: {}", verdict(passed)).unwrap();
    let data = json!({
        "sigma": p.sigma.to_string(),
        "reading": opts.reading,
        "integrals": all,
        "final_sum": sum,
        "passed": passed,
    });
    Ok((Report::new("integrals", text, data), Status::from_bool(passed)))
}

#[derive(Serialize)]
struct Check {
    name: &'static str,
    value: f64,
    bound: f64,
    passed: bool,
}

/// ω shape checks on the table nodes: the maximum past its first dip and the
/// minimum on the range where it approaches `e^(−γ)` from below.
fn omega_checks() -> Result<Vec<Check>> {
    let table = BuchstabTable::new(DEFAULT_OMEGA_TOL)?;
    let max_after = table.samples().filter(|&(t, _)| t >= OMEGA_UPPER_FROM).map(|(_, w)| w).fold(f64::MIN, f64::max);
    let (lo, hi) = OMEGA_MIN_RANGE;
    let min_tail = table.samples().filter(|&(t, _)| (lo..=hi).contains(&t)).map(|(_, w)| w).fold(f64::MAX, f64::min);
    Ok(vec![
        Check {
            name: "omega.max-after-1.7631",
            value: max_after,
            bound: OMEGA_UPPER,
            passed: max_after <= OMEGA_UPPER,
        },
        Check {
            name: "omega.below-majorant",
            value: max_after,
            bound: OMEGA_MAJORANT,
            passed: max_after <= OMEGA_MAJORANT,
        },
        Check { name: "omega.min-on-6-12", value: min_tail, bound: OMEGA_LOWER, passed: min_tail >= OMEGA_LOWER },
    ])
}

fn verify_all(g: &Global) -> Outcome {
    let p = params_of(g)?;
    let opts = integral_options(g);
    let constraints = verify_ledger(&p);
    let claims = sieve_level_claims(&p);
    let ledger_ok = constraints.iter().all(|c| c.satisfied);
    let omega = omega_checks()?;
    let omega_ok = omega.iter().all(|c| c.passed);
    let all: Vec<JResult> = IntegralId::ALL.iter().map(|&id| evaluate_j(id, &p, &opts)).collect::<Result<_>>()?;
    let value = |id: IntegralId| all.iter().find(|r| r.id == id).map_or(f64::NAN, |r| r.value);
    let (j1_4d, j1) = (value(IntegralId::J1FourDim), value(IntegralId::J1));
    let min_arg = j1_min_omega_argument(&p);
    let majorant = vec![
        Check {
            name: "omega-argument >= 1/0.59775 on the four-prime region",
            value: min_arg,
            bound: 1.0 / OMEGA_MAJORANT,
            passed: min_arg >= 1.0 / OMEGA_MAJORANT,
        },
        Check { name: "J1_4D <= J1", value: j1_4d, bound: j1, passed: j1_4d <= j1 },
    ];
    let majorant_ok = majorant.iter().all(|c| c.passed);
    let sum = evaluate_final_sum(&p, &opts)?;
    let passed = ledger_ok && omega_ok && majorant_ok && sum.passed();

    let failed: Vec<&str> = constraints.iter().filter(|c| !c.satisfied).map(|c| c.id.as_str()).collect();
    let mut text =
        format!("sigma = {}, rho = {}, reading = {:?}, tol = {:e}\n\n", p.sigma, p.rho, opts.reading, opts.tol);
    writeln!(text, "ledger: {} constraints, failed {failed:?}: {}", constraints.len(), verdict(ledger_ok)).unwrap();
    for c in &claims {
        writeln!(text, "  side claim {} (informational): {}", c.id, verdict(c.satisfied)).unwrap();
    }
    for c in &omega {
        writeln!(text, "{}: {:.10} vs {}: {}", c.name, c.value, c.bound, verdict(c.passed)).unwrap();
    }
    for c in &majorant {
        writeln!(text, "{}: {:.9} vs {:.9}: {}", c.name, c.value, c.bound, verdict(c.passed)).unwrap();
    }
    text.push('\n');
    text.push_str(INTEGRAL_HEADER);
    all.iter().for_each(|r| text.push_str(&integral_line(r)));
    text.push('\n');
    text.push_str(&sum_text(&sum));
    writeln!(text, "overall: {}", verdict(passed)).unwrap();

    let data = json!({
        "sigma": p.sigma.to_string(),
        "rho": p.rho.to_string(),
        "reading": opts.reading,
        "tol": opts.tol,
        "ledger": { "constraints": constraints, "all_satisfied": ledger_ok },
        "sieve_level_claims": claims,
        "omega_checks": omega,
        "majorant_checks": majorant,
        "integrals": all,
        "final_sum": sum,
        "passed": passed,
    });
    Ok((Report::new("verify-all", text, data), Status::from_bool(passed)))
}

struct SearchArgs<'a> {
    alpha: &'a str,
    alpha_digits: Option<u32>,
    beta: &'a str,
    gamma: &'a str,
    nmax: &'a str,
    epsilon: &'a str,
    mode: SearchModeArg,
}

/// `sqrt<k>`/`golden` to `digits` places, a readable file of digits
/// (inexact), or a decimal literal (exact).
fn parse_alpha(s: &str, digits: u32) -> Result<Real> {
    if let Ok(r) = Real::named(s, digits) {
        return Ok(r);
    }
    let path = Path::new(s);
    if path.is_file() {
        let body = fs::read_to_string(path).map_err(|e| Error::Domain(format!("cannot read {s}: {e}")))?;
        return Real::parse(body.trim(), false);
    }
    Real::parse(s, true)
}

fn search(g: &Global, a: &SearchArgs, csv: Option<&Path>) -> Outcome {
    let n_max = count_of("nmax", a.nmax)?;
    let budget = budget_of(g)?;
    if n_max > budget {
        return Err(Error::Budget { needed: n_max, cap: budget });
    }
    let digits = a.alpha_digits.unwrap_or_else(|| SearchConfig::recommended_digits(n_max));
    let mut cfg = SearchConfig::new(parse_alpha(a.alpha, digits)?, rho_of(g)?, n_max);
    cfg.beta = Real::parse(a.beta, true)?;
    cfg.gamma = Real::parse(a.gamma, true)?;
    cfg.epsilon = parse_rational(a.epsilon)?;
    cfg.mode = match a.mode {
        SearchModeArg::Power => SearchMode::PowerThreshold,
        SearchModeArg::SetA => SearchMode::SetA,
    };
    let out = search_solutions(&cfg)?;
    if let Some(path) = csv {
        let mut body = String::from("p,value,threshold\n");
        for h in &out.hits {
            writeln!(body, "{},{},{}", h.p, sig18(h.value), sig18(h.threshold)).unwrap();
        }
        write_file(path, &body)?;
    }
    let mut text = format!(
        "alpha = {} ({} digits), beta = {}, gamma = {}, rho = {}, nmax = {n_max}\n{} primes tested, {} hits\n",
        a.alpha,
        digits,
        a.beta,
        a.gamma,
        cfg.rho,
        out.primes_tested,
        out.hits.len()
    );
    for h in out.hits.iter().take(10) {
        writeln!(text, "  p = {:>10}  ||f(p)|| = {:.6e}  threshold {:.6e}", h.p, h.value, h.threshold).unwrap();
    }
    if out.hits.len() > 10 {
        writeln!(text, "  ... {} more", out.hits.len() - 10).unwrap();
    }
    if let Some(s) = &out.set_a {
        writeln!(
            text,
            "sieved set on ({}, {}]: convergent {}/{}, L1 = {:.3}, delta = {:.3e}, L = {:.3}\n\
             members {} (ratio to 2 delta count {:.4}), prime members {} (ratio {:.4}), power-threshold hits {}",
            s.n / 2,
            s.n,
            s.convergent.a,
            s.convergent.q,
            s.l1,
            s.delta,
            s.big_l,
            s.members,
            s.members_ratio,
            s.prime_members,
            s.prime_ratio,
            s.power_threshold_hits
        )
        .unwrap();
    }
    let data = json!({
        "alpha": a.alpha,
        "alpha_digits": digits,
        "beta": a.beta,
        "gamma": a.gamma,
        "rho": cfg.rho.to_string(),
        "n_max": n_max,
        "epsilon": cfg.epsilon.to_string(),
        "outcome": out,
    });
    Ok((Report::new("search", text, data), Status::Passed))
}

#[derive(Serialize)]
struct RandomTrial {
    n: u64,
    set_size: usize,
    z1: u64,
    z2: u64,
    buchstab_holds: bool,
    decomposition_holds: bool,
}

fn identity(g: &Global, n: u64, trials: usize, seed: u64) -> Outcome {
    let p = params_of(g)?;
    let base = decomposition_check(n, &p, None)?;
    let set: Vec<u64> = (n / 2 + 1..=n).collect();
    // From the sifting level z up to the square-root level.
    let z2 = base.z_int.clamp(2, n);
    let z1 = ((2 * n) as f64).sqrt().ceil() as u64;
    let base_buchstab = buchstab_identity_check(&set, z1.max(z2), z2)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut random = Vec::with_capacity(trials);
    for _ in 0..trials {
        let size = rng.gen_range(0..=n as usize);
        let e: Vec<u64> = (0..size).map(|_| rng.gen_range(1..=n)).collect();
        let cap = n.clamp(2, 100);
        let z2 = rng.gen_range(2..=cap);
        let z1 = rng.gen_range(z2..=cap);
        let b = buchstab_identity_check(&e, z1, z2)?;
        let d = decomposition_check(n, &p, Some(&e))?;
        random.push(RandomTrial {
            n,
            set_size: size,
            z1,
            z2,
            buchstab_holds: b.holds,
            decomposition_holds: d.all_hold(),
        });
    }
    let random_failures = random.iter().filter(|t| !(t.buchstab_holds && t.decomposition_holds)).count();
    let passed = base.all_hold() && base_buchstab.holds && random_failures == 0;

    let mut text = format!(
        "E = ({}, {}], z = {}, Z = {}\nBuchstab S(E, {}) = S(E, {}) - sum: {} = {}: {}\n",
        n / 2,
        n,
        base.z_int,
        base.big_z_int,
        base_buchstab.z1,
        base_buchstab.z2,
        base_buchstab.lhs,
        base_buchstab.rhs,
        verdict(base_buchstab.holds)
    );
    for (k, s) in base.s.iter().enumerate() {
        write!(text, "S{k}={s} ").unwrap();
    }
    text.push('\n');
    for c in &base.identities {
        writeln!(text, "  {:<12} {}: {} = {}: {}", c.name, c.display, c.lhs, c.rhs, verdict(c.holds)).unwrap();
    }
    writeln!(text, "{trials} random subsets of [1, {n}] (seed {seed}): {random_failures} failures").unwrap();
    writeln!(text, "overall: {}", verdict(passed)).unwrap();
    let data = json!({
        "n": n,
        "seed": seed,
        "decomposition": base,
        "buchstab": base_buchstab,
        "random_trials": random,
        "random_failures": random_failures,
        "passed": passed,
    });
    Ok((Report::new("identity", text, data), Status::from_bool(passed)))
}

fn spectrum(g: &Global, l: u64, y: u64, full: bool) -> Outcome {
    let s = representation_spectrum(l, y, budget_of(g)?)?;
    let text = format!(
        "L = {l}, Y = {y}: {} distinct n, R(0) = {}, max R = {}, sum R = {}, sum R^2 = {}\n",
        s.counts.len(),
        s.r(0),
        s.max_r(),
        s.moment1,
        s.moment2
    );
    let mut data = json!({
        "l": l,
        "y": y,
        "distinct": s.counts.len(),
        "r0": s.r(0),
        "max_r": s.max_r(),
        "moment1": s.moment1.to_string(),
        "moment2": s.moment2.to_string(),
    });
    if full {
        let counts: Vec<(i64, u64)> = s.counts.iter().map(|(&k, &v)| (k, v)).collect();
        data["counts"] = json!(counts);
    }
    Ok((Report::new("spectrum", text, data), Status::Passed))
}

struct TypesumArgs<'a> {
    kind: u8,
    n: &'a str,
    v: Option<f64>,
    w: Option<f64>,
    y: Option<f64>,
    l: Option<u64>,
    alpha: &'a str,
    q_max: Option<u64>,
    beta: f64,
    gamma: f64,
    epsilon: &'a str,
    seed: u64,
}

fn typesum(g: &Global, a: &TypesumArgs) -> Outcome {
    let p = params_of(g)?;
    let n = count_of("N", a.n)?;
    if n < 2 {
        return Err(Error::Domain("N must be at least 2".into()));
    }
    let nf = n as f64;
    let mut sizing = SearchConfig::new(Real::zero(), p.rho.clone(), n);
    sizing.epsilon = parse_rational(a.epsilon)?;
    let q_max = a.q_max.unwrap_or_else(|| (sizing.l1().sqrt() * nf).floor() as u64).max(1);
    let alpha = parse_alpha(a.alpha, required_digits(q_max))?;
    let poly = ApproximatingPolynomial::from_convergent(&alpha, q_max, a.beta, a.gamma)?;
    let l = a.l.unwrap_or_else(|| sizing.big_l().floor() as u64).max(1);
    let opts = SumOptions { budget: budget_of(g)?, ..SumOptions::default() };
    let r: TypeSumReport = if a.kind == 1 {
        let v = a.v.unwrap_or_else(|| nf.powf(0.2));
        let w = a.w.unwrap_or_else(|| nf.powf(0.2));
        type1_sum(&p, n, v, w, &poly, l, &opts)?
    } else {
        let y = a.y.unwrap_or_else(|| nf.powf(0.4));
        type2_sum(&p, n, y, &poly, l, a.seed, &opts)?
    };
    let mut text = format!(
        "Type {} sum, N = {n}, L = {l}, a/q = {}/{}, beta = {}, gamma = {}\n",
        r.kind, r.poly.a, r.poly.q, r.poly.beta, r.poly.gamma
    );
    match r.kind {
        1 => writeln!(text, "V = {:.3}, W = {:.3}: T = {:.6}", r.v.unwrap_or(0.0), r.w.unwrap_or(0.0), r.magnitude),
        _ => writeln!(text, "Y = {:.3}, seed {}: |S| = {:.6}", r.y.unwrap_or(0.0), a.seed, r.magnitude),
    }
    .unwrap();
    writeln!(text, "ratio to N {:.6}, {} terms", r.ratio, r.terms).unwrap();
    text.push_str("hypotheses at the realized exponents (informational):\n");
    text.push_str(&format_reports(&r.hypotheses));
    let data = json!({ "seed": a.seed, "report": r });
    Ok((Report::new("typesum", text, data), Status::Passed))
}

fn subproduct(g: &Global, rhos: &str, gg: &str) -> Outcome {
    let p = params_of(g)?;
    let parts: Vec<Q> = rhos.split(',').map(parse_rational).collect::<Result<_>>()?;
    let g_val = parse_rational(gg)?;
    let idx = find_subproduct(&parts, &g_val, &p)?;
    let total: Q = idx.iter().map(|&i| parts[i].clone()).sum();
    let text = format!(
        "g = {g_val}, f = {}\nselected indices {idx:?} (1-based {:?}), sum {total} ~ {:.9}\n",
        p.f,
        idx.iter().map(|i| i + 1).collect::<Vec<_>>(),
        sievecalc_core::exact::to_f64(&total)
    );
    let data = json!({
        "g": g_val.to_string(),
        "f": p.f.to_string(),
        "indices": idx,
        "sum": total.to_string(),
        "sum_value": sievecalc_core::exact::to_f64(&total),
    });
    Ok((Report::new("subproduct", text, data), Status::Passed))
}
