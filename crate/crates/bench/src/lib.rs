//! Inputs shared by the criterion benches.

use limrb_core::ode::{named_path, Grid, Path};
use limrb_core::sample::{random_triples, Triple};
use limrb_core::Rational;

pub const SEED: u64 = 0x5eed;

pub fn triples(dim: usize, count: usize) -> Vec<Triple<Rational>> {
    random_triples(SEED, dim, count)
}

pub fn ode_pair() -> (Path, Path) {
    (
        named_path("mixed-a").expect("built-in"),
        named_path("mixed-b").expect("built-in"),
    )
}

/// Coarser than the acceptance grid so one iteration stays short.
pub fn bench_grid() -> Grid {
    Grid::default().with_step(1.0 / 128.0)
}
