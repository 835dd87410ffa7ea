//! Criterion benchmarks for `tmsv-metrology`; run with `cargo bench -p tmsv-bench`.
