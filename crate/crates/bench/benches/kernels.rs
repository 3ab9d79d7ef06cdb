use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use sievecalc_core::arithmetic::{
    decomposition_check, primes_up_to, representation_spectrum, search_solutions, type1_sum, ApproximatingPolynomial,
    Real, SearchConfig, SumOptions,
};
use sievecalc_core::{evaluate_final_sum, evaluate_j, BuchstabTable, ExponentParams, IntegralId, IntegralOptions};

fn omega(c: &mut Criterion) {
    c.bench_function("omega_table_1e-12", |b| b.iter(|| BuchstabTable::new(black_box(1e-12)).unwrap()));
    let table = BuchstabTable::new(1e-12).unwrap();
    c.bench_function("omega_eval_1000", |b| {
        b.iter(|| (0..1000).map(|i| table.eval(black_box(1.0 + i as f64 * 0.03))).sum::<f64>())
    });
}

fn integrals(c: &mut Criterion) {
    let p = ExponentParams::default();
    let opts = IntegralOptions::default();
    evaluate_j(IntegralId::J5, &p, &opts).unwrap();
    let mut g = c.benchmark_group("integrals");
    g.sample_size(20);
    g.bench_function("J5", |b| b.iter(|| evaluate_j(IntegralId::J5, &p, &opts).unwrap()));
    g.bench_function("J1_4D", |b| b.iter(|| evaluate_j(IntegralId::J1FourDim, &p, &opts).unwrap()));
    g.bench_function("final_sum", |b| b.iter(|| evaluate_final_sum(&p, &opts).unwrap()));
    g.finish();
}

fn arithmetic(c: &mut Criterion) {
    let mut g = c.benchmark_group("arithmetic");
    g.sample_size(20);
    g.bench_function("primes_1e7", |b| b.iter(|| primes_up_to(black_box(10_000_000)).len()));
    let rho = sievecalc_core::exponents::default_rho();
    let cfg = SearchConfig::new(Real::sqrt(2, SearchConfig::recommended_digits(1_000_000)), rho, 1_000_000);
    g.bench_function("search_sqrt2_1e6", |b| b.iter(|| search_solutions(&cfg).unwrap().hits.len()));
    g.bench_function("spectrum_32", |b| b.iter(|| representation_spectrum(32, 32, u64::MAX).unwrap().moment2));
    let p = ExponentParams::default();
    g.bench_function("decomposition_1e5", |b| b.iter(|| decomposition_check(100_000, &p, None).unwrap().all_hold()));
    let poly = ApproximatingPolynomial::new(275_807, 195_025, 0.0, 0.0).unwrap();
    let opts = SumOptions::default();
    g.bench_function("type1_1e5", |b| {
        b.iter(|| type1_sum(&p, 100_000, 10.0, 10.0, &poly, 7, &opts).unwrap().magnitude)
    });
    g.finish();
}

criterion_group!(benches, omega, integrals, arithmetic);
criterion_main!(benches);
