//! Criterion benchmarks for field evaluation, surface maps and field-line
//! tracing; run them with `cargo bench -p fluxforge-bench`.
