//! Criterion benchmarks for `laguerre-core`; see `benches/kernel.rs`.
//! Run with `cargo bench -p laguerre-bench`.
