//! Rounding a moving-knife division to an integral allocation.
//!
//! Items held by a single interval go to that interval's owner.  Each
//! fractionally shared item is rounded by one of three rules:
//!
//! * **up** — to the earliest sharer (the agent whose interval enters the
//!   item first).  Tailored to chores: the earliest sharer already carried
//!   the item's left piece against her share.
//! * **down** — to the latest sharer.  The goods counterpart: the latest
//!   sharer's interval continues past the item, so she can absorb it.
//! * **threshold** — to the holder of the largest piece, ties to the
//!   earliest sharer.  For an item split two ways this is exactly "the
//!   earlier agent keeps it iff her fraction is at least one half".
//!
//! Subsidies are always recomputed from the final integral allocation via
//! [`min_subsidy_vector`]; nothing is carried over from the fractional stage.
//! For a division with shares met exactly, the up/down total and the
//! threshold total add up to at most `n/2`, so the better of the two — which
//! is what [`round_best`] returns — costs at most `n/4`.

use crate::allocation::{Allocation, CutSequence, FracGroup, SubsidyVector};
use crate::instance::{Instance, Mode};
use crate::rational::Rational;
use crate::verify::min_subsidy_vector;
use num_bigint::BigInt;
use std::collections::BTreeSet;

/// Which rounding rule produced an outcome.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RoundingScheme {
    Up,
    Down,
    Threshold,
}

/// An integral allocation produced by rounding, with its recomputed minimum
/// subsidies and the per-item rounding decisions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoundingOutcome {
    pub allocation: Allocation,
    pub subsidies: SubsidyVector,
    pub scheme: RoundingScheme,
    /// `(item, agent)` for every fractionally shared item.
    pub rounded_to: Vec<(usize, usize)>,
}

impl RoundingOutcome {
    /// Total subsidy of the outcome.
    pub fn total_subsidy(&self) -> Rational {
        self.subsidies.total()
    }
}

fn pick_up(group: &FracGroup) -> usize {
    group.sharers.first().expect("groups have ≥ 2 sharers").0
}

fn pick_down(group: &FracGroup) -> usize {
    group.sharers.last().expect("groups have ≥ 2 sharers").0
}

fn pick_threshold(group: &FracGroup) -> usize {
    let mut winner = &group.sharers[0];
    for cand in &group.sharers[1..] {
        if cand.1 > winner.1 {
            winner = cand;
        }
    }
    winner.0
}

fn round_with(
    cuts: &CutSequence,
    inst: &Instance,
    scheme: RoundingScheme,
    pick: impl Fn(&FracGroup) -> usize,
) -> RoundingOutcome {
    debug_assert_eq!(cuts.agents(), inst.agents());
    debug_assert_eq!(cuts.items(), inst.items());
    let mut bundles: Vec<BTreeSet<usize>> = cuts.integral_part();
    let mut rounded_to = Vec::new();
    for group in cuts.fractional_groups() {
        let agent = pick(&group);
        bundles[agent].insert(group.item);
        rounded_to.push((group.item, agent));
    }
    let allocation =
        Allocation::new(bundles, inst.items()).expect("rounding covers every item exactly once");
    let subsidies = min_subsidy_vector(inst, &allocation);
    RoundingOutcome {
        allocation,
        subsidies,
        scheme,
        rounded_to,
    }
}

/// Rounds every shared item to its earliest sharer.
pub fn round_up(cuts: &CutSequence, inst: &Instance) -> RoundingOutcome {
    round_with(cuts, inst, RoundingScheme::Up, pick_up)
}

/// Rounds every shared item to its latest sharer.
pub fn round_down(cuts: &CutSequence, inst: &Instance) -> RoundingOutcome {
    round_with(cuts, inst, RoundingScheme::Down, pick_down)
}

/// Rounds every shared item to the holder of its largest piece (ties to the
/// earliest sharer).
pub fn round_threshold(cuts: &CutSequence, inst: &Instance) -> RoundingOutcome {
    round_with(cuts, inst, RoundingScheme::Threshold, pick_threshold)
}

/// Runs the mode's directional scheme (up for chores, down for goods) and
/// threshold rounding, and keeps the cheaper outcome; ties favor threshold.
///
/// On a proportional knife division the returned total subsidy is at most
/// `n/4` for even `n` and `(n²−1)/(4n)` for odd `n`.
pub fn round_best(cuts: &CutSequence, inst: &Instance) -> RoundingOutcome {
    let directional = match inst.mode() {
        Mode::Chores => round_up(cuts, inst),
        Mode::Goods => round_down(cuts, inst),
    };
    let threshold = round_threshold(cuts, inst);
    if directional.total_subsidy() < threshold.total_subsidy() {
        directional
    } else {
        threshold
    }
}

/// The worst-case subsidy a shared item can force on threshold rounding:
/// `min{first piece, last piece} + (k−2)/2` for `k` sharers.  Summing the
/// charges over all shared items bounds the threshold total from above.
pub fn threshold_charge(group: &FracGroup) -> Rational {
    let first = &group.sharers.first().expect("groups have ≥ 2 sharers").1;
    let last = &group.sharers.last().expect("groups have ≥ 2 sharers").1;
    let smaller = if first <= last { first } else { last };
    let extra_cuts = group.sharers.len() - 2;
    smaller.clone() + Rational::new(BigInt::from(extra_cuts), BigInt::from(2))
}

/// The theorem bound for the best rounding of a proportional division of a
/// general instance: `n/4`.  Identical-cost instances admit the sharper
/// [`crate::identical::load_balance_bound`].
pub fn round_best_bound(n: usize) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(4))
}
