//! Criterion benchmarks for the hot kernels of `sievecalc-core`; run them
//! with `cargo bench -p sievecalc-bench`. The benchmarks live in `benches/`.
