//! Criterion benchmarks for `hardy-core`; see `benches/means.rs`.
//!
//! `cargo bench -p hardy-bench`
