//! Fairness predicates and minimum subsidy computation.
//!
//! All checks are exact.  The *minimum subsidy* for an allocation pays each
//! agent exactly her deficit against her weighted proportional share:
//! `max{c_i(X_i) − w_i·c_i(M), 0}` for chores and
//! `max{w_i·v_i(M) − v_i(X_i), 0}` for goods.  By construction the pair
//! `(X, min_subsidy_vector(X))` is proportional-with-subsidies, and no
//! smaller payment vector can be.

use crate::allocation::{Allocation, SubsidyVector};
use crate::instance::{Instance, Mode};
use crate::rational::Rational;
use num_traits::Zero;

/// Per-agent deficit against the weighted proportional share (the amount a
/// minimum subsidy must cover; zero when the share is already met).
pub fn deficits(inst: &Instance, alloc: &Allocation) -> Vec<Rational> {
    (0..inst.agents())
        .map(|i| {
            let own = alloc.bundle_value(inst, i);
            let share = inst.proportional_share(i);
            let gap = match inst.mode() {
                Mode::Chores => own - share,
                Mode::Goods => share - own,
            };
            if gap > Rational::zero() {
                gap
            } else {
                Rational::zero()
            }
        })
        .collect()
}

/// The smallest subsidy vector making `alloc` proportional-with-subsidies.
pub fn min_subsidy_vector(inst: &Instance, alloc: &Allocation) -> SubsidyVector {
    SubsidyVector::new(deficits(inst, alloc)).expect("deficits are nonnegative")
}

/// Proportionality: every agent meets her weighted share outright.
pub fn is_prop(inst: &Instance, alloc: &Allocation) -> bool {
    deficits(inst, alloc).iter().all(|d| d.is_zero())
}

/// Proportionality up to one item: some single item, removed from the bundle
/// (chores) or added from outside it (goods), meets the share.  Holds
/// vacuously for empty bundles in chores mode and when no outside item
/// exists in goods mode only if the share is already met.
pub fn is_prop1(inst: &Instance, alloc: &Allocation) -> bool {
    (0..inst.agents()).all(|i| {
        let own = alloc.bundle_value(inst, i);
        let share = inst.proportional_share(i);
        match inst.mode() {
            Mode::Chores => {
                if own <= share {
                    return true;
                }
                alloc
                    .bundle(i)
                    .iter()
                    .any(|&e| &own - inst.entry(i, e) <= share)
            }
            Mode::Goods => {
                if own >= share {
                    return true;
                }
                (0..inst.items())
                    .filter(|e| !alloc.bundle(i).contains(e))
                    .any(|e| &own + inst.entry(i, e) >= share)
            }
        }
    })
}

/// Proportionality up to any item: the PROP1 condition must hold for *every*
/// removable (chores) / outside (goods) item, not just a well-chosen one.
pub fn is_propx(inst: &Instance, alloc: &Allocation) -> bool {
    (0..inst.agents()).all(|i| {
        let own = alloc.bundle_value(inst, i);
        let share = inst.proportional_share(i);
        match inst.mode() {
            Mode::Chores => alloc
                .bundle(i)
                .iter()
                .all(|&e| &own - inst.entry(i, e) <= share),
            Mode::Goods => {
                if own >= share {
                    return true;
                }
                (0..inst.items())
                    .filter(|e| !alloc.bundle(i).contains(e))
                    .all(|e| &own + inst.entry(i, e) >= share)
            }
        }
    })
}

/// Envy-freeness: nobody prefers another agent's bundle (cheaper in chores,
/// more valuable in goods).
pub fn is_ef(inst: &Instance, alloc: &Allocation) -> bool {
    let n = inst.agents();
    (0..n).all(|i| {
        let own = alloc.bundle_value(inst, i);
        (0..n).all(|j| {
            let other = inst.bundle_value(i, alloc.bundle(j).iter().copied());
            match inst.mode() {
                Mode::Chores => own <= other,
                Mode::Goods => own >= other,
            }
        })
    })
}

/// Envy-freeness up to one item: for every envied agent `j` some single item
/// (dropped from `i`'s bundle in chores mode, dropped from `j`'s in goods
/// mode) kills the envy.
pub fn is_ef1(inst: &Instance, alloc: &Allocation) -> bool {
    let n = inst.agents();
    (0..n).all(|i| {
        let own = alloc.bundle_value(inst, i);
        (0..n).all(|j| {
            let other = inst.bundle_value(i, alloc.bundle(j).iter().copied());
            match inst.mode() {
                Mode::Chores => {
                    own <= other
                        || alloc
                            .bundle(i)
                            .iter()
                            .any(|&e| &own - inst.entry(i, e) <= other)
                }
                Mode::Goods => {
                    own >= other
                        || alloc
                            .bundle(j)
                            .iter()
                            .any(|&e| own >= &other - inst.entry(i, e))
                }
            }
        })
    })
}

/// Envy-freeness with subsidies: after the payments, nobody prefers another
/// agent's bundle-plus-payment.
pub fn is_efs(inst: &Instance, alloc: &Allocation, subsidies: &SubsidyVector) -> bool {
    let n = inst.agents();
    (0..n).all(|i| {
        let own = alloc.bundle_value(inst, i);
        (0..n).all(|j| {
            let other = inst.bundle_value(i, alloc.bundle(j).iter().copied());
            match inst.mode() {
                Mode::Chores => &own - subsidies.get(i) <= &other - subsidies.get(j),
                Mode::Goods => &own + subsidies.get(i) >= &other + subsidies.get(j),
            }
        })
    })
}

/// Proportionality with subsidies: each payment covers its agent's deficit.
pub fn is_props(inst: &Instance, alloc: &Allocation, subsidies: &SubsidyVector) -> bool {
    deficits(inst, alloc)
        .iter()
        .zip(subsidies.iter())
        .all(|(d, s)| d <= s)
}

/// Exact fairness summary for one allocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FairnessReport {
    pub prop: bool,
    pub prop1: bool,
    pub propx: bool,
    pub ef: bool,
    pub ef1: bool,
    /// Only evaluated when a subsidy vector is supplied.
    pub efs: Option<bool>,
    /// Weighted proportional share per agent.
    pub shares: Vec<Rational>,
    /// Deficit against the share per agent (the minimum subsidy components).
    pub deficits: Vec<Rational>,
}

/// Evaluates every predicate on one allocation.
pub fn fairness_report(
    inst: &Instance,
    alloc: &Allocation,
    subsidies: Option<&SubsidyVector>,
) -> FairnessReport {
    FairnessReport {
        prop: is_prop(inst, alloc),
        prop1: is_prop1(inst, alloc),
        propx: is_propx(inst, alloc),
        ef: is_ef(inst, alloc),
        ef1: is_ef1(inst, alloc),
        efs: subsidies.map(|s| is_efs(inst, alloc, s)),
        shares: (0..inst.agents())
            .map(|i| inst.proportional_share(i))
            .collect(),
        deficits: deficits(inst, alloc),
    }
}
