//! Benchmark-only crate; see `benches/toolkit.rs` for the measurements.
