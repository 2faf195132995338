//! Shared fixtures for the solver benchmarks.

use fairdiv_core::instances::{gen_random, Family};
use fairdiv_core::{Instance, Mode};

/// A seeded instance of each flavor the pipelines consume, sized so a full
/// `cargo bench` stays in the seconds range.
pub fn identical_chores(n: usize, m: usize) -> Instance {
    gen_random(n, m, 1, Family::IdenticalUniform, Mode::Chores)
}

pub fn uniform(n: usize, m: usize, mode: Mode) -> Instance {
    gen_random(n, m, 2, Family::Uniform, mode)
}

pub fn weighted(n: usize, m: usize, mode: Mode) -> Instance {
    gen_random(n, m, 3, Family::WeightedDirichletLike, mode)
}
