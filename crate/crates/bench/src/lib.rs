//! Shared fixtures for the pipeline benchmarks: one grid size, fixed seeds,
//! fields built once per benchmark so only the measured operation is timed.

use anse_core::random::{analytic_envelope, random_divergence_free_velocity, real_gaussian_field};
use anse_core::solver::VelocityState;
use anse_core::{Grid, SpectralField};

pub const BENCH_N: usize = 32;
pub const BENCH_SEED: u64 = 4242;

pub fn bench_grid() -> Grid {
    Grid::new(BENCH_N, BENCH_N, 1.0, 1.0).expect("valid bench grid")
}

pub fn bench_field(grid: &Grid, seed: u64) -> SpectralField {
    let env = analytic_envelope(0.05, 2.0);
    real_gaussian_field(grid, seed, &env)
}

pub fn bench_state(grid: &Grid, eps: f64) -> VelocityState {
    let mut v = random_divergence_free_velocity(grid, BENCH_SEED, 0.2, 3.0);
    // small data so a handful of steps stays deep in the stable regime
    let norm: f64 = v.iter().map(|f| f.l2_norm().powi(2)).sum::<f64>().sqrt();
    for f in v.iter_mut() {
        f.scale(1e-2 / norm);
    }
    VelocityState::new(v, 0.0, eps).expect("leray projection keeps this divergence free")
}
