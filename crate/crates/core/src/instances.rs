//! Seeded instance generators for benchmarks and randomized tests.
//!
//! All generators draw from a [`rand_chacha::ChaCha8Rng`] seeded with a
//! caller-supplied `u64`, so every instance is reproducible from
//! `(family, n, m, seed)` alone.  Entries are rationals with denominator
//! 1000, keeping arithmetic exact while covering the `[0, 1]` range densely.

use crate::instance::{Instance, Mode};
use crate::rational::{rat, Rational};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

/// Random-instance families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    /// Every entry uniform over {0, 1/1000, …, 1}.
    Uniform,
    /// Entries drawn from a low band [0, 1/10] or a high band [9/10, 1].
    Bimodal,
    /// One uniform row copied to every agent.
    IdenticalUniform,
    /// Uniform entries plus non-uniform weights summing to one.
    WeightedDirichletLike,
}

impl Family {
    pub const ALL: [Family; 4] = [
        Family::Uniform,
        Family::Bimodal,
        Family::IdenticalUniform,
        Family::WeightedDirichletLike,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Family::Uniform => "uniform",
            Family::Bimodal => "bimodal",
            Family::IdenticalUniform => "identical-uniform",
            Family::WeightedDirichletLike => "weighted-dirichlet-like",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("unknown family `{0}`; expected uniform, bimodal, identical-uniform, or weighted-dirichlet-like")]
pub struct ParseFamilyError(String);

impl FromStr for Family {
    type Err = ParseFamilyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "uniform" => Ok(Family::Uniform),
            "bimodal" => Ok(Family::Bimodal),
            "identical-uniform" => Ok(Family::IdenticalUniform),
            "weighted-dirichlet-like" => Ok(Family::WeightedDirichletLike),
            other => Err(ParseFamilyError(other.to_string())),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GenError {
    #[error("lower-bound constructions need at least two agents, got {0}")]
    TooFewAgents(usize),
}

fn thousandth(rng: &mut ChaCha8Rng, lo: u64, hi: u64) -> Rational {
    rat(rng.gen_range(lo..=hi) as i64, 1000)
}

fn uniform_row(rng: &mut ChaCha8Rng, m: usize) -> Vec<Rational> {
    (0..m).map(|_| thousandth(rng, 0, 1000)).collect()
}

fn bimodal_row(rng: &mut ChaCha8Rng, m: usize) -> Vec<Rational> {
    (0..m)
        .map(|_| {
            if rng.gen_bool(0.5) {
                thousandth(rng, 0, 100)
            } else {
                thousandth(rng, 900, 1000)
            }
        })
        .collect()
}

/// Non-uniform weights `k_i / Σk` with every `k_i` in `1..=1000`.
fn dirichlet_like_weights(rng: &mut ChaCha8Rng, n: usize) -> Vec<Rational> {
    let ks: Vec<i64> = (0..n).map(|_| rng.gen_range(1..=1000)).collect();
    let total: i64 = ks.iter().sum();
    ks.into_iter().map(|k| rat(k, total)).collect()
}

/// Generates a seeded random instance of the given family.
pub fn gen_random(n: usize, m: usize, seed: u64, family: Family, mode: Mode) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match family {
        Family::Uniform => {
            let matrix = (0..n).map(|_| uniform_row(&mut rng, m)).collect();
            Instance::new(mode, matrix).expect("generated entries lie in [0, 1]")
        }
        Family::Bimodal => {
            let matrix = (0..n).map(|_| bimodal_row(&mut rng, m)).collect();
            Instance::new(mode, matrix).expect("generated entries lie in [0, 1]")
        }
        Family::IdenticalUniform => {
            let row = uniform_row(&mut rng, m);
            Instance::new(mode, vec![row; n]).expect("generated entries lie in [0, 1]")
        }
        Family::WeightedDirichletLike => {
            let matrix = (0..n).map(|_| uniform_row(&mut rng, m)).collect();
            let weights = dirichlet_like_weights(&mut rng, n);
            Instance::with_weights(mode, matrix, weights)
                .expect("generated entries and weights are valid")
        }
    }
}

/// Worst-case proportionality instance: `⌊n/2⌋` unit items with identical
/// rows and uniform weights.  The minimum total subsidy of any integral
/// allocation meets the rounding bound (`n/4` for even `n`,
/// `(n²−1)/(4n)` for odd `n`) exactly.
pub fn gen_lower_bound_prop(n: usize, mode: Mode) -> Result<Instance, GenError> {
    if n < 2 {
        return Err(GenError::TooFewAgents(n));
    }
    let m = n / 2;
    let row = vec![rat(1, 1); m];
    Ok(Instance::new(mode, vec![row; n]).expect("unit entries are valid"))
}

/// Worst-case envy instance: `n−1` unit chores with identical rows.  Any
/// envy-freeable allocation needs total payments of `n−1`.
pub fn gen_lower_bound_efs(n: usize) -> Result<Instance, GenError> {
    if n < 2 {
        return Err(GenError::TooFewAgents(n));
    }
    let row = vec![rat(1, 1); n - 1];
    Ok(Instance::new(Mode::Chores, vec![row; n]).expect("unit entries are valid"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generation_is_deterministic_per_seed() {
        for family in Family::ALL {
            let a = gen_random(3, 5, 42, family, Mode::Chores);
            let b = gen_random(3, 5, 42, family, Mode::Chores);
            let c = gen_random(3, 5, 43, family, Mode::Chores);
            assert_eq!(a.matrix(), b.matrix());
            assert_eq!(a.weights(), b.weights());
            // Distinct seeds almost surely differ on a 3×5 grid.
            assert_ne!(a.matrix(), c.matrix(), "family {family}");
        }
    }

    #[test]
    fn entries_stay_in_range_and_denominators_divide_1000() {
        for family in Family::ALL {
            let inst = gen_random(4, 8, 7, family, Mode::Goods);
            for i in 0..4 {
                for e in 0..8 {
                    let v = inst.entry(i, e);
                    assert!(*v >= rat(0, 1) && *v <= rat(1, 1));
                }
            }
        }
    }

    #[test]
    fn bimodal_avoids_the_middle_band() {
        let inst = gen_random(3, 40, 11, Family::Bimodal, Mode::Chores);
        for i in 0..3 {
            for e in 0..40 {
                let v = inst.entry(i, e);
                assert!(
                    *v <= rat(1, 10) || *v >= rat(9, 10),
                    "entry {v} fell between the bands"
                );
            }
        }
    }

    #[test]
    fn identical_family_has_identical_rows() {
        let inst = gen_random(5, 6, 3, Family::IdenticalUniform, Mode::Chores);
        assert!(inst.rows_identical());
        assert!(inst.has_uniform_weights());
    }

    #[test]
    fn weighted_family_weights_sum_to_one() {
        let inst = gen_random(4, 5, 9, Family::WeightedDirichletLike, Mode::Chores);
        let sum: Rational = inst.weights().iter().cloned().sum();
        assert_eq!(sum, rat(1, 1));
        assert!(inst.weights().iter().all(|w| *w > rat(0, 1)));
    }

    #[test]
    fn family_names_round_trip() {
        for family in Family::ALL {
            assert_eq!(family.as_str().parse::<Family>().unwrap(), family);
        }
        assert!("nope".parse::<Family>().is_err());
    }

    #[test]
    fn prop_lower_bound_shapes() {
        let even = gen_lower_bound_prop(4, Mode::Chores).unwrap();
        assert_eq!((even.agents(), even.items()), (4, 2));
        let odd = gen_lower_bound_prop(5, Mode::Goods).unwrap();
        assert_eq!((odd.agents(), odd.items()), (5, 2));
        assert!(odd.rows_identical());
        assert_eq!(gen_lower_bound_prop(1, Mode::Chores), Err(GenError::TooFewAgents(1)));
    }

    #[test]
    fn efs_lower_bound_shapes() {
        let inst = gen_lower_bound_efs(4).unwrap();
        assert_eq!((inst.agents(), inst.items()), (4, 3));
        assert_eq!(inst.mode(), Mode::Chores);
        assert_eq!(gen_lower_bound_efs(0), Err(GenError::TooFewAgents(0)));
    }
}
