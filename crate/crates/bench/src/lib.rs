//! Benchmarks live in `benches/`; run them with `cargo bench -p multcong-bench`.

/// Progressions used across the benchmarks: `(A, B)`.
pub const PROGRESSIONS: [(u64, u64); 3] = [(4, 3), (8, 7), (60, 59)];
