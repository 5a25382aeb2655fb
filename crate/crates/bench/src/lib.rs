//! Criterion benchmarks for `revkit`; see `benches/kernels.rs`.
