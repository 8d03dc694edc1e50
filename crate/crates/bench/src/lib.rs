//! Shared fixtures for the criterion benches.

use irs_core::{sample_path, BrownianPath, Partition, SeedSpec};

pub const SIZES: [usize; 3] = [1_000, 10_000, 100_000];

/// A seeded path on the unit interval with `n` cells.
pub fn fixture_path(n: usize) -> BrownianPath {
    let grid = Partition::equal(1.0, n).expect("n > 0");
    sample_path(&grid, SeedSpec::new(0xbe7c, 0))
}
