//! Fractional bid-and-take for weighted proportionality, plus the
//! largest-fraction rounding that turns its output integral.
//!
//! Items are processed in input order.  Each (piece of an) item goes to the
//! active agent with the best cost ratio `c_i(e)/c_i(M)` — smallest in chores
//! mode, largest in goods mode, ties to the lowest agent index.  An agent is
//! deactivated the moment her bundle reaches her weighted proportional share
//! `w_i · c_i(M)`, taking exactly the fraction of the current item that lands
//! her there.  The resulting fractional allocation gives every agent her
//! share exactly (deactivated agents) or at most/at least her share (agents
//! active at the end), i.e. it is weighted-proportional, and at most `n−1`
//! items end up fractionally shared.
//!
//! Rounding each shared item to the agent holding its largest piece keeps
//! every agent's deficit below the fraction she loses, which caps the total
//! minimum subsidy at `(n−1)/2`.

use crate::allocation::{Allocation, FracAllocation, Provenance, SubsidyVector};
use crate::instance::{Instance, Mode};
use crate::rational::Rational;
use crate::rounding::{RoundingOutcome, RoundingScheme};
use crate::verify::min_subsidy_vector;
use num_traits::{One, Zero};
use thiserror::Error;

/// One agent reaching her share mid-item: she takes `fraction` of `item`
/// and goes inactive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeactivationEvent {
    pub agent: usize,
    pub item: usize,
    /// The piece of `item` the agent received as she was deactivated
    /// (can be zero when her bundle already sat exactly at her share).
    pub fraction: Rational,
}

/// Trace of a bid-and-take run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoundTrace {
    /// Items in processing order (always the input order).
    pub order: Vec<usize>,
    /// Agents that hit their share, in the order it happened (at most `n−1`).
    pub deactivations: Vec<DeactivationEvent>,
    /// Agents still active after the last item, by index (never empty).
    pub active_at_end: Vec<usize>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BidAndTakeError {
    /// In chores mode every agent must have a strictly positive total cost,
    /// otherwise her cost ratios are undefined.
    #[error("agent {0} has zero total cost; chores bid-and-take needs c_i(M) > 0")]
    DegenerateAgent(usize),
}

/// Ratio used for bidding.  `None` ranks below every real ratio, so a goods
/// agent with zero total value is never preferred over one with a positive
/// ratio (her share is zero and trivially met).
fn bid_ratio(inst: &Instance, agent: usize, item: usize) -> Option<Rational> {
    let total = inst.total(agent);
    if total.is_zero() {
        None
    } else {
        Some(inst.entry(agent, item) / total)
    }
}

/// Runs the fractional bid-and-take auction.
///
/// Returns a weighted-proportional fractional allocation (at most `n−1`
/// fractionally shared items) plus the trace of deactivations.
pub fn fractional_bid_and_take(
    inst: &Instance,
) -> Result<(FracAllocation, RoundTrace), BidAndTakeError> {
    let n = inst.agents();
    let m = inst.items();
    if inst.mode() == Mode::Chores {
        if let Some(agent) = (0..n).find(|&i| inst.total(i).is_zero()) {
            return Err(BidAndTakeError::DegenerateAgent(agent));
        }
    }
    let shares: Vec<Rational> = (0..n).map(|i| inst.proportional_share(i)).collect();
    let mut x = vec![vec![Rational::zero(); m]; n];
    let mut bundle = vec![Rational::zero(); n];
    let mut active = vec![true; n];
    let mut active_count = n;
    let mut deactivations = Vec::new();

    'items: for item in 0..m {
        let mut left = Rational::one();
        while !left.is_zero() {
            let bidder = select_bidder(inst, &active, item);
            let Some(i) = bidder else {
                // Unreachable for valid input: the weights sum to one, so the
                // shares can never all be exhausted while an item remains.
                unreachable!("no active agent left with item {item} unallocated");
            };
            let cost = inst.entry(i, item).clone();
            let would_be = &bundle[i] + &left * &cost;
            if inst.mode() == Mode::Chores && would_be > shares[i] {
                // Partial take up to the share, then deactivate.  The strict
                // inequality forces cost > 0 here, so the division is safe.
                let fraction = (&shares[i] - &bundle[i]) / &cost;
                x[i][item] += &fraction;
                bundle[i] = shares[i].clone();
                left -= &fraction;
                active[i] = false;
                active_count -= 1;
                deactivations.push(DeactivationEvent {
                    agent: i,
                    item,
                    fraction,
                });
            } else if inst.mode() == Mode::Goods && would_be > shares[i] {
                let fraction = (&shares[i] - &bundle[i]) / &cost;
                x[i][item] += &fraction;
                bundle[i] = shares[i].clone();
                left -= &fraction;
                active[i] = false;
                active_count -= 1;
                deactivations.push(DeactivationEvent {
                    agent: i,
                    item,
                    fraction,
                });
                if active_count == 1 {
                    // Goods: the last active agent absorbs everything left.
                    let last = active.iter().position(|&a| a).unwrap();
                    x[last][item] += &left;
                    bundle[last] += &left * inst.entry(last, item);
                    for (rest, piece) in x[last].iter_mut().enumerate().skip(item + 1) {
                        *piece = Rational::one();
                        bundle[last] += inst.entry(last, rest);
                    }
                    break 'items;
                }
            } else {
                x[i][item] += &left;
                bundle[i] = would_be;
                left = Rational::zero();
            }
        }
    }

    let trace = RoundTrace {
        order: (0..m).collect(),
        deactivations,
        active_at_end: (0..n).filter(|&i| active[i]).collect(),
    };
    let frac = FracAllocation::new(x, Provenance::BidAndTake(trace.clone()))
        .expect("bid-and-take allocates every item fully");
    Ok((frac, trace))
}

/// Picks the active agent with the best ratio for `item`; ties go to the
/// lowest agent index.
fn select_bidder(inst: &Instance, active: &[bool], item: usize) -> Option<usize> {
    let mut best: Option<(Option<Rational>, usize)> = None;
    for (i, &is_active) in active.iter().enumerate() {
        if !is_active {
            continue;
        }
        let ratio = bid_ratio(inst, i, item);
        let better = match (&best, &ratio) {
            (None, _) => true,
            (Some((cur, _)), r) => match inst.mode() {
                // Chores: smallest ratio wins; None (undefined) cannot occur.
                Mode::Chores => r < cur,
                // Goods: largest ratio wins; None ranks below Some(0).
                Mode::Goods => r > cur,
            },
        };
        if better {
            best = Some((ratio, i));
        }
    }
    best.map(|(_, i)| i)
}

/// Rounds each fractionally shared item to the agent holding its largest
/// piece (ties to the lowest agent index).  Subsidies are recomputed from the
/// final integral allocation, never carried over from the fractional stage.
pub fn round_largest_fraction(frac: &FracAllocation, inst: &Instance) -> RoundingOutcome {
    let n = frac.agents();
    let m = frac.items();
    let mut owners = vec![0usize; m];
    let mut rounded_to = Vec::new();
    for (item, owner) in owners.iter_mut().enumerate() {
        let sharers = frac.sharers(item);
        debug_assert!(!sharers.is_empty(), "column sums to one");
        if sharers.len() == 1 {
            *owner = sharers[0];
        } else {
            let mut winner = sharers[0];
            for &i in &sharers[1..] {
                if frac.fraction(i, item) > frac.fraction(winner, item) {
                    winner = i;
                }
            }
            *owner = winner;
            rounded_to.push((item, winner));
        }
    }
    let allocation = Allocation::from_owners(&owners, n);
    let subsidies: SubsidyVector = min_subsidy_vector(inst, &allocation);
    RoundingOutcome {
        allocation,
        subsidies,
        scheme: RoundingScheme::Threshold,
        rounded_to,
    }
}
