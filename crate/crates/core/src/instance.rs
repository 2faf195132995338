//! Problem instances: agents, items, an exact cost/valuation matrix, and
//! entitlement weights.
//!
//! An [`Instance`] holds an `n × m` matrix of rationals in `[0, 1]`.  In
//! [`Mode::Chores`] the entry `c_i(e)` is the disutility agent `i` suffers
//! from item `e`; in [`Mode::Goods`] it is the utility she gains.  Each agent
//! also carries a strictly positive weight; the weights sum to one and default
//! to the uniform `1/n`.  Agent `i`'s *proportional share* is
//! `w_i · (row total)` — the amount of cost she can be asked to carry (or the
//! value she is entitled to) under a weighted-proportional division.

use crate::rational::Rational;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

/// Whether matrix entries are disutilities (chores) or utilities (goods).
///
/// The two regimes are handled by explicit dispatch in every algorithm — an
/// inequality is never "flipped by negating the input".
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    Chores,
    Goods,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Chores => "chores",
            Mode::Goods => "goods",
        }
    }
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Error for unrecognized mode strings.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("unknown mode `{0}`, expected \"chores\" or \"goods\"")]
pub struct ParseModeError(pub String);

impl std::str::FromStr for Mode {
    type Err = ParseModeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "chores" => Ok(Mode::Chores),
            "goods" => Ok(Mode::Goods),
            other => Err(ParseModeError(other.to_owned())),
        }
    }
}

/// Validation failures when constructing an [`Instance`].
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InstanceError {
    #[error("instance must have at least one agent")]
    NoAgents,
    #[error("agent {agent} has {found} entries, expected {expected}")]
    DimensionMismatch {
        agent: usize,
        found: usize,
        expected: usize,
    },
    #[error("entry for agent {agent}, item {item} is outside [0, 1]")]
    EntryOutOfRange { agent: usize, item: usize },
    #[error("expected {expected} weights, found {found}")]
    WeightCountMismatch { expected: usize, found: usize },
    #[error("weight of agent {agent} is not strictly positive")]
    NonpositiveWeight { agent: usize },
    #[error("weights sum to {sum}, expected exactly 1")]
    WeightSumNotOne { sum: String },
}

/// A fair-division instance with exact rational data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    mode: Mode,
    matrix: Vec<Vec<Rational>>,
    weights: Vec<Rational>,
    row_totals: Vec<Rational>,
}

impl Instance {
    /// Builds an instance with uniform weights `1/n`.
    ///
    /// Validates that there is at least one agent, all rows have equal
    /// length, and every entry lies in `[0, 1]`.
    pub fn new(mode: Mode, matrix: Vec<Vec<Rational>>) -> Result<Self, InstanceError> {
        let n = matrix.len();
        if n == 0 {
            return Err(InstanceError::NoAgents);
        }
        let w = Rational::new(BigInt::one(), BigInt::from(n));
        Self::with_weights(mode, matrix, vec![w; n])
    }

    /// Builds an instance with explicit entitlement weights.
    ///
    /// In addition to the matrix checks, each weight must be strictly
    /// positive and the weights must sum to exactly one.
    pub fn with_weights(
        mode: Mode,
        matrix: Vec<Vec<Rational>>,
        weights: Vec<Rational>,
    ) -> Result<Self, InstanceError> {
        let n = matrix.len();
        if n == 0 {
            return Err(InstanceError::NoAgents);
        }
        let m = matrix[0].len();
        let one = Rational::one();
        for (agent, row) in matrix.iter().enumerate() {
            if row.len() != m {
                return Err(InstanceError::DimensionMismatch {
                    agent,
                    found: row.len(),
                    expected: m,
                });
            }
            for (item, entry) in row.iter().enumerate() {
                if entry < &Rational::zero() || entry > &one {
                    return Err(InstanceError::EntryOutOfRange { agent, item });
                }
            }
        }
        if weights.len() != n {
            return Err(InstanceError::WeightCountMismatch {
                expected: n,
                found: weights.len(),
            });
        }
        for (agent, w) in weights.iter().enumerate() {
            if w <= &Rational::zero() {
                return Err(InstanceError::NonpositiveWeight { agent });
            }
        }
        let sum: Rational = weights.iter().sum();
        if sum != one {
            return Err(InstanceError::WeightSumNotOne {
                sum: sum.to_string(),
            });
        }
        let row_totals = matrix.iter().map(|row| row.iter().sum()).collect();
        Ok(Instance {
            mode,
            matrix,
            weights,
            row_totals,
        })
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// Number of agents `n`.
    pub fn agents(&self) -> usize {
        self.matrix.len()
    }

    /// Number of items `m`.
    pub fn items(&self) -> usize {
        self.matrix[0].len()
    }

    /// The matrix entry for one agent and one item (cost or value,
    /// depending on the mode).
    pub fn entry(&self, agent: usize, item: usize) -> &Rational {
        &self.matrix[agent][item]
    }

    pub fn weight(&self, agent: usize) -> &Rational {
        &self.weights[agent]
    }

    /// Agent `i`'s total over all items (her cost or value for the whole
    /// item set).
    pub fn total(&self, agent: usize) -> &Rational {
        &self.row_totals[agent]
    }

    /// Weighted proportional share `w_i · total_i`.  With uniform weights
    /// this is exactly `total_i / n`.
    pub fn proportional_share(&self, agent: usize) -> Rational {
        &self.weights[agent] * &self.row_totals[agent]
    }

    /// Exact value of a set of items to one agent.
    pub fn bundle_value<I>(&self, agent: usize, items: I) -> Rational
    where
        I: IntoIterator<Item = usize>,
    {
        let row = &self.matrix[agent];
        items.into_iter().map(|e| &row[e]).sum()
    }

    /// Exact value of a fractional bundle: `Σ_e fractions[e] · entry(i, e)`.
    pub fn fractional_bundle_value(&self, agent: usize, fractions: &[Rational]) -> Rational {
        assert_eq!(fractions.len(), self.items(), "fraction row length");
        let row = &self.matrix[agent];
        fractions
            .iter()
            .zip(row)
            .map(|(f, c)| f * c)
            .sum()
    }

    /// True when every row is non-increasing left to right, i.e. all agents
    /// rank the items in the same (identical) order by index.
    pub fn is_ido(&self) -> bool {
        self.matrix
            .iter()
            .all(|row| row.windows(2).all(|w| w[0] >= w[1]))
    }

    /// True when all rows are identical.
    pub fn rows_identical(&self) -> bool {
        self.matrix.iter().all(|row| row == &self.matrix[0])
    }

    /// True when every agent has weight exactly `1/n`.
    pub fn has_uniform_weights(&self) -> bool {
        let w = Rational::new(BigInt::one(), BigInt::from(self.agents()));
        self.weights.iter().all(|x| x == &w)
    }

    pub fn matrix(&self) -> &[Vec<Rational>] {
        &self.matrix
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }
}
