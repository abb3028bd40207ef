//! Criterion benchmarks for the certificate pipeline live in `benches/`.
//! Run them with `cargo bench -p sparsos-bench`.
