//! Envy-freeness with subsidies for chores.
//!
//! The allocation stage pads the instance with zero-cost dummy items until
//! the count is a multiple of `n`, then runs `T = ⌈m/n⌉` rounds of minimum-
//! weight perfect matching, giving every agent exactly one (possibly dummy)
//! item per round.  Matching round by round makes the result EF1 and, more
//! importantly, *envy-freeable*: its envy graph has no positive-weight cycle,
//! so path-maximal payments exist.
//!
//! Subsidies are computed against *constructed costs* `c̄` that clip what
//! agent `i` thinks of another agent's round-`t` item at the cost of `i`'s
//! own round-`t+1` item.  Under `c̄` each envy edge is at most 1, each
//! subsidy is at most 1, and the total is at most `n−1` — while any payment
//! vector that kills envy under `c̄` also kills it under the original costs.

use crate::allocation::{Allocation, SubsidyVector};
use crate::instance::{Instance, Mode};
use crate::rational::Rational;
use num_traits::Zero;
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EnvyError {
    #[error("the bounded-subsidy pipeline is defined for chores instances")]
    ChoresOnly,
    #[error("envy graph has a positive-weight cycle; no payments can fix it")]
    PositiveCycle,
}

/// Whether an envy graph was built from the instance's own costs or from
/// the constructed (clipped) costs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CostBasis {
    Original,
    Constructed,
}

/// The per-round matchings of the allocation stage.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatchingRounds {
    /// `rounds[t][i]` is the padded item matched to agent `i` in round `t`.
    /// Indices `≥ real_items` are zero-cost dummies.
    pub rounds: Vec<Vec<usize>>,
    pub real_items: usize,
}

impl MatchingRounds {
    pub fn is_dummy(&self, item: usize) -> bool {
        item >= self.real_items
    }

    /// Total padded item count (`⌈m/n⌉ · n`).
    pub fn padded_items(&self) -> usize {
        self.rounds.len() * self.rounds.first().map_or(0, Vec::len)
    }
}

/// Minimum-cost assignment of all rows to distinct columns (requires
/// `rows ≤ cols`), via the potentials form of the Hungarian algorithm.
/// Returns the total cost and the column assigned to each row.
fn assignment_min_cost(w: &[Vec<Rational>]) -> (Rational, Vec<usize>) {
    let rows = w.len();
    if rows == 0 {
        return (Rational::zero(), Vec::new());
    }
    let cols = w[0].len();
    assert!(rows <= cols, "need at least as many columns as rows");

    // 1-based arrays; column 0 is the virtual start of each augmenting scan.
    let mut u = vec![Rational::zero(); rows + 1];
    let mut v = vec![Rational::zero(); cols + 1];
    let mut matched = vec![0usize; cols + 1];
    let mut way = vec![0usize; cols + 1];
    for i in 1..=rows {
        matched[0] = i;
        let mut j0 = 0usize;
        let mut min_to: Vec<Option<Rational>> = vec![None; cols + 1];
        let mut used = vec![false; cols + 1];
        loop {
            used[j0] = true;
            let i0 = matched[j0];
            let mut delta: Option<Rational> = None;
            let mut j1 = 0usize;
            for j in 1..=cols {
                if used[j] {
                    continue;
                }
                let cur = &w[i0 - 1][j - 1] - &u[i0] - &v[j];
                if min_to[j].as_ref().is_none_or(|best| &cur < best) {
                    min_to[j] = Some(cur);
                    way[j] = j0;
                }
                if let Some(mj) = &min_to[j] {
                    if delta.as_ref().is_none_or(|d| mj < d) {
                        delta = Some(mj.clone());
                        j1 = j;
                    }
                }
            }
            let delta = delta.expect("an unmatched column is always reachable");
            for j in 0..=cols {
                if used[j] {
                    u[matched[j]] += &delta;
                    v[j] -= &delta;
                } else if let Some(mj) = min_to[j].as_mut() {
                    *mj -= &delta;
                }
            }
            j0 = j1;
            if matched[j0] == 0 {
                break;
            }
        }
        while j0 != 0 {
            let j1 = way[j0];
            matched[j0] = matched[j1];
            j0 = j1;
        }
    }

    let mut assign = vec![usize::MAX; rows];
    let mut total = Rational::zero();
    for j in 1..=cols {
        if matched[j] != 0 {
            assign[matched[j] - 1] = j - 1;
            total += &w[matched[j] - 1][j - 1];
        }
    }
    (total, assign)
}

/// Minimum-weight perfect matching of rows into columns (`rows ≤ cols`),
/// deterministic under ties: among all minimum-weight assignments it returns
/// the lexicographically smallest column vector (row 0's column first).
pub fn min_weight_perfect_matching(w: &[Vec<Rational>]) -> Vec<usize> {
    let rows = w.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = w[0].len();
    assert!(rows <= cols, "need at least as many columns as rows");
    let (best, _) = assignment_min_cost(w);

    let mut chosen: Vec<usize> = Vec::with_capacity(rows);
    let mut used = vec![false; cols];
    let mut fixed_weight = Rational::zero();
    for row in 0..rows {
        let mut found = false;
        for col in 0..cols {
            if used[col] {
                continue;
            }
            // Cost of the best completion if `row` is pinned to `col`.
            let sub: Vec<Vec<Rational>> = (row + 1..rows)
                .map(|r| {
                    (0..cols)
                        .filter(|&c| !used[c] && c != col)
                        .map(|c| w[r][c].clone())
                        .collect()
                })
                .collect();
            let (sub_cost, _) = assignment_min_cost(&sub);
            if &fixed_weight + &w[row][col] + sub_cost == best {
                fixed_weight += &w[row][col];
                used[col] = true;
                chosen.push(col);
                found = true;
                break;
            }
        }
        assert!(found, "some column always completes a minimum matching");
    }
    chosen
}

/// Cost of a padded item: real items carry their matrix entry, dummies
/// cost zero.
fn padded_cost(inst: &Instance, agent: usize, item: usize) -> Rational {
    if item < inst.items() {
        inst.entry(agent, item).clone()
    } else {
        Rational::zero()
    }
}

/// Allocates a chores instance by `⌈m/n⌉` rounds of minimum-weight perfect
/// matching over the dummy-padded item set.
///
/// Returns the allocation over the real items (dummies are stripped from the
/// bundles) together with the full matching rounds.  Every bundle has at
/// most `⌈m/n⌉` items and the result is EF1 and envy-freeable.
pub fn bounded_subsidy_allocate(
    inst: &Instance,
) -> Result<(Allocation, MatchingRounds), EnvyError> {
    if inst.mode() != Mode::Chores {
        return Err(EnvyError::ChoresOnly);
    }
    let n = inst.agents();
    let m = inst.items();
    let t_rounds = m.div_ceil(n);
    let padded = t_rounds * n;

    let mut unmatched: Vec<usize> = (0..padded).collect();
    let mut rounds = Vec::with_capacity(t_rounds);
    for _ in 0..t_rounds {
        let weights: Vec<Vec<Rational>> = (0..n)
            .map(|i| {
                unmatched
                    .iter()
                    .map(|&e| padded_cost(inst, i, e))
                    .collect()
            })
            .collect();
        let assign = min_weight_perfect_matching(&weights);
        let round: Vec<usize> = assign.iter().map(|&k| unmatched[k]).collect();
        let taken: BTreeSet<usize> = round.iter().copied().collect();
        unmatched.retain(|e| !taken.contains(e));
        rounds.push(round);
    }

    let mut bundles = vec![BTreeSet::new(); n];
    for round in &rounds {
        for (agent, &item) in round.iter().enumerate() {
            if item < m {
                bundles[agent].insert(item);
            }
        }
    }
    let allocation = Allocation::new(bundles, m).expect("matching rounds cover every real item");
    Ok((
        allocation,
        MatchingRounds {
            rounds,
            real_items: m,
        },
    ))
}

/// Constructed costs `c̄` over the real items.
///
/// For the round-`t` item `e` of agent `j`: agent `j` keeps her own cost;
/// any other agent `i` evaluates `e` at `min{c_i(e), c_i(own round-(t+1)
/// item)}` — in the last round, at `c_i(e)` unchanged.  Dummy items cost
/// zero, so a dummy next-round item clips to zero.
pub fn constructed_costs(inst: &Instance, rounds: &MatchingRounds) -> Vec<Vec<Rational>> {
    let n = inst.agents();
    let m = inst.items();
    let t_rounds = rounds.rounds.len();
    let mut item_slot = vec![(0usize, 0usize); rounds.padded_items()];
    for (t, round) in rounds.rounds.iter().enumerate() {
        for (agent, &item) in round.iter().enumerate() {
            item_slot[item] = (t, agent);
        }
    }
    (0..n)
        .map(|i| {
            (0..m)
                .map(|e| {
                    let (t, owner) = item_slot[e];
                    let own_cost = inst.entry(i, e).clone();
                    if owner == i || t + 1 == t_rounds {
                        own_cost
                    } else {
                        let next = padded_cost(inst, i, rounds.rounds[t + 1][i]);
                        own_cost.min(next)
                    }
                })
                .collect()
        })
        .collect()
}

/// The pairwise envy graph of an allocation: edge weight
/// `w(i → j) = c_i(X_i) − c_i(X_j)` for chores and
/// `w(i → j) = v_i(X_j) − v_i(X_i)` for goods, evaluated under the supplied
/// cost matrix.  A payment vector `s` kills all envy iff
/// `s_i − s_j ≥ w(i → j)` on every edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnvyGraph {
    weights: Vec<Vec<Rational>>,
    basis: CostBasis,
}

impl EnvyGraph {
    pub fn new(
        mode: Mode,
        costs: &[Vec<Rational>],
        alloc: &Allocation,
        basis: CostBasis,
    ) -> Self {
        let n = alloc.agents();
        let bundle_cost = |i: usize, j: usize| -> Rational {
            alloc.bundle(j).iter().map(|&e| &costs[i][e]).sum()
        };
        let weights = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| match mode {
                        Mode::Chores => bundle_cost(i, i) - bundle_cost(i, j),
                        Mode::Goods => bundle_cost(i, j) - bundle_cost(i, i),
                    })
                    .collect()
            })
            .collect();
        EnvyGraph { weights, basis }
    }

    /// Builds the graph from the instance's own cost matrix.
    pub fn from_instance(inst: &Instance, alloc: &Allocation) -> Self {
        Self::new(inst.mode(), inst.matrix(), alloc, CostBasis::Original)
    }

    pub fn agents(&self) -> usize {
        self.weights.len()
    }

    pub fn weight(&self, i: usize, j: usize) -> &Rational {
        &self.weights[i][j]
    }

    pub fn basis(&self) -> CostBasis {
        self.basis
    }
}

/// Maximum-path-weight payments: `s_i` is the largest total weight of any
/// path starting at `i` in the envy graph (zero if every path is negative).
///
/// These are the smallest payments that make the allocation envy-free with
/// subsidies, and some agent always pays zero.  Fails with
/// [`EnvyError::PositiveCycle`] when the graph has a positive-weight cycle,
/// i.e. the allocation is not envy-freeable.
pub fn max_path_subsidies(graph: &EnvyGraph) -> Result<SubsidyVector, EnvyError> {
    let n = graph.agents();
    let mut level = vec![Rational::zero(); n];
    for _pass in 0..n {
        let mut improved = false;
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let candidate = graph.weight(i, j) + &level[j];
                if candidate > level[i] {
                    level[i] = candidate;
                    improved = true;
                }
            }
        }
        if !improved {
            return Ok(SubsidyVector::new(level).expect("path maxima are nonnegative"));
        }
    }
    // n passes kept improving: only a positive-weight cycle can do that.
    Err(EnvyError::PositiveCycle)
}

/// Full envy-freeness-with-subsidies pipeline for a chores instance:
/// matching-round allocation, constructed costs, then path-maximal payments.
///
/// Each payment lies in `[0, 1]`, some agent pays zero, the total is at most
/// `n−1`, and the pair satisfies EFS under the *original* costs.
pub fn efs_solve(inst: &Instance) -> Result<(Allocation, SubsidyVector), EnvyError> {
    let (alloc, rounds) = bounded_subsidy_allocate(inst)?;
    let cbar = constructed_costs(inst, &rounds);
    let graph = EnvyGraph::new(Mode::Chores, &cbar, &alloc, CostBasis::Constructed);
    let subsidies = max_path_subsidies(&graph)?;
    Ok((alloc, subsidies))
}

/// The theorem bound for the EFS pipeline: `n − 1`.
pub fn efs_bound(n: usize) -> Rational {
    Rational::from_integer((n as i64 - 1).max(0).into())
}
