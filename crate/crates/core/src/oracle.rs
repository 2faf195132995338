//! Exhaustive-search oracles for small instances.
//!
//! These enumerate every integral allocation (all `n^m` ways to hand each
//! item to an agent) and return the true optimum, so tests can check the
//! fast algorithms against ground truth.  Both oracles refuse instances
//! whose search space exceeds a caller-supplied cap.

use crate::allocation::{Allocation, SubsidyVector};
use crate::envy::{max_path_subsidies, EnvyGraph};
use crate::instance::{Instance, Mode};
use crate::rational::Rational;
use crate::verify::min_subsidy_vector;
use num_traits::{Signed, Zero};
use thiserror::Error;

/// Default cap on the number of allocations an oracle will enumerate.
pub const DEFAULT_ENUMERATION_CAP: u64 = 10_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("search space of {size} allocations exceeds the cap of {cap}")]
    TooLarge { size: u64, cap: u64 },
    #[error("no allocation of this instance is envy-freeable")]
    NoEnvyFreeable,
}

fn search_space(n: usize, m: usize) -> Option<u64> {
    let mut size: u64 = 1;
    for _ in 0..m {
        size = size.checked_mul(n as u64)?;
    }
    Some(size)
}

fn check_cap(inst: &Instance, cap: u64) -> Result<(), OracleError> {
    match search_space(inst.agents(), inst.items()) {
        Some(size) if size <= cap => Ok(()),
        Some(size) => Err(OracleError::TooLarge { size, cap }),
        None => Err(OracleError::TooLarge {
            size: u64::MAX,
            cap,
        }),
    }
}

/// Subsidy needed by one agent given her bundle cost/value.
fn agent_deficit(inst: &Instance, agent: usize, bundle: &Rational) -> Rational {
    let share = inst.proportional_share(agent);
    let deficit = match inst.mode() {
        Mode::Chores => bundle - share,
        Mode::Goods => share - bundle,
    };
    if deficit.is_negative() {
        Rational::zero()
    } else {
        deficit
    }
}

/// Depth-first minimum of the total proportionality subsidy over all
/// integral allocations.
///
/// Items are explored from largest to smallest column maximum so deficits
/// (and therefore pruning) kick in near the root of the search tree.
struct PropSearch<'a> {
    inst: &'a Instance,
    /// Item visit order: descending column maximum.
    perm: Vec<usize>,
    /// Per visit position, the largest entry total still assignable from
    /// there on (goods pruning).
    best_gain_suffix: Vec<Rational>,
    owners: Vec<usize>,
    bundle: Vec<Rational>,
    incumbent: Rational,
    best_owners: Vec<usize>,
}

fn column_max(inst: &Instance, e: usize) -> Rational {
    (0..inst.agents())
        .map(|i| inst.entry(i, e))
        .max()
        .cloned()
        .unwrap_or_else(Rational::zero)
}

impl<'a> PropSearch<'a> {
    fn new(inst: &'a Instance, seed: &Allocation) -> Self {
        let m = inst.items();
        let mut perm: Vec<usize> = (0..m).collect();
        perm.sort_by_key(|&e| std::cmp::Reverse(column_max(inst, e)));
        // For goods, assigning the remaining items optimistically can lower
        // each agent's deficit by at most the sum over remaining items of
        // the largest entry in that column.
        let mut best_gain_suffix = vec![Rational::zero(); m + 1];
        for at in (0..m).rev() {
            best_gain_suffix[at] = &best_gain_suffix[at + 1] + column_max(inst, perm[at]);
        }
        let seed_owners: Vec<usize> = (0..m).map(|e| seed.owner_of(e)).collect();
        let incumbent = min_subsidy_vector(inst, seed).total();
        PropSearch {
            inst,
            perm,
            best_gain_suffix,
            owners: vec![0; m],
            bundle: vec![Rational::zero(); inst.agents()],
            incumbent,
            best_owners: seed_owners,
        }
    }

    /// Lower bound on the final total subsidy from a partial assignment of
    /// items `0..at`.
    fn lower_bound(&self, at: usize) -> Rational {
        let mut bound = Rational::zero();
        for i in 0..self.inst.agents() {
            let d = agent_deficit(self.inst, i, &self.bundle[i]);
            match self.inst.mode() {
                // Chores: bundles only grow, so deficits only grow.
                Mode::Chores => bound += d,
                // Goods: remaining items can shrink the deficit by at most
                // the best possible gain.
                Mode::Goods => {
                    let relieved = &d - &self.best_gain_suffix[at];
                    if relieved.is_positive() {
                        bound += relieved;
                    }
                }
            }
        }
        bound
    }

    fn descend(&mut self, at: usize) {
        if at == self.inst.items() {
            let total: Rational = (0..self.inst.agents())
                .map(|i| agent_deficit(self.inst, i, &self.bundle[i]))
                .sum();
            if total < self.incumbent {
                self.incumbent = total;
                self.best_owners.copy_from_slice(&self.owners);
            }
            return;
        }
        if self.lower_bound(at) >= self.incumbent {
            return;
        }
        let item = self.perm[at];
        for i in 0..self.inst.agents() {
            self.owners[item] = i;
            self.bundle[i] += self.inst.entry(i, item);
            self.descend(at + 1);
            self.bundle[i] -= self.inst.entry(i, item);
        }
    }
}

/// Greedy seed: walk items from largest to smallest column maximum, giving
/// each to the agent whose deficit it worsens least.  The resulting total is
/// the branch-and-bound's starting incumbent.
fn greedy_seed(inst: &Instance) -> Allocation {
    let n = inst.agents();
    let m = inst.items();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by_key(|&e| std::cmp::Reverse(column_max(inst, e)));
    let mut owners = vec![0usize; m];
    let mut bundle = vec![Rational::zero(); n];
    for &e in &order {
        let mut pick = 0usize;
        let mut pick_key: Option<(Rational, Rational)> = None;
        for (i, held) in bundle.iter().enumerate() {
            let with = held + inst.entry(i, e);
            // Primary: smallest growth (chores) / biggest drop (goods) in
            // this agent's deficit; secondary: lightest resulting bundle.
            let delta =
                agent_deficit(inst, i, &with) - agent_deficit(inst, i, held);
            let key = (delta, with);
            if pick_key.as_ref().is_none_or(|k| key < *k) {
                pick_key = Some(key);
                pick = i;
            }
        }
        bundle[pick] += inst.entry(pick, e);
        owners[e] = pick;
    }
    Allocation::from_owners(&owners, n)
}

/// True minimum total proportionality subsidy over every integral
/// allocation, found by exhaustive search with branch-and-bound pruning.
pub fn oracle_min_total_subsidy(
    inst: &Instance,
    cap: u64,
) -> Result<(Rational, Allocation), OracleError> {
    check_cap(inst, cap)?;
    let seed = greedy_seed(inst);
    let mut search = PropSearch::new(inst, &seed);
    search.descend(0);
    let alloc = Allocation::from_owners(&search.best_owners, inst.agents());
    Ok((search.incumbent, alloc))
}

/// True minimum total envy-freeness subsidy over every envy-freeable
/// integral allocation, evaluated under the instance's own costs.
///
/// Errors with [`OracleError::NoEnvyFreeable`] if every allocation has a
/// positive-weight envy cycle (impossible for chores/goods instances, but
/// kept as an explicit result rather than a panic).
pub fn oracle_min_total_efs_subsidy(
    inst: &Instance,
    cap: u64,
) -> Result<(Rational, Allocation, SubsidyVector), OracleError> {
    check_cap(inst, cap)?;
    let n = inst.agents();
    let m = inst.items();
    let mut owners = vec![0usize; m];
    let mut best: Option<(Rational, Vec<usize>, SubsidyVector)> = None;
    loop {
        let alloc = Allocation::from_owners(&owners, n);
        let graph = EnvyGraph::from_instance(inst, &alloc);
        if let Ok(s) = max_path_subsidies(&graph) {
            let total = s.total();
            if best.as_ref().is_none_or(|(t, _, _)| &total < t) {
                best = Some((total, owners.clone(), s));
            }
        }
        // Advance the odometer.
        let mut pos = 0;
        loop {
            if pos == m {
                let (total, owners, s) = best.ok_or(OracleError::NoEnvyFreeable)?;
                return Ok((total, Allocation::from_owners(&owners, n), s));
            }
            owners[pos] += 1;
            if owners[pos] < n {
                break;
            }
            owners[pos] = 0;
            pos += 1;
        }
    }
}
