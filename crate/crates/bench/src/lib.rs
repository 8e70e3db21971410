//! Criterion benchmarks for depthlab. Run with `cargo bench -p depthlab-bench`.
