//! Load balancing for agents with identical cost rows (chores only).
//!
//! Items are processed from most to least costly; each goes to the agent
//! whose bundle currently has the most room.  In the unweighted variant
//! "room" is simply the smallest current bundle cost; in the weighted
//! variant it is the largest slack `w_i·c(M) − c(X_i)` against the agent's
//! weighted share.  Ties go to the lowest agent index.
//!
//! The output is PROPX (dropping any single chore from a bundle lands at or
//! under the share), and the minimum subsidy total is at most `n/4` for even
//! `n` and `(n²−1)/(4n)` for odd `n` — in both variants.

use crate::allocation::{Allocation, SubsidyVector};
use crate::instance::{Instance, Mode};
use crate::rational::Rational;
use crate::verify::min_subsidy_vector;
use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IdenticalError {
    #[error("load balancing requires identical cost rows")]
    NotIdentical,
    #[error("load balancing is defined for chores instances")]
    ChoresOnly,
    #[error("the unweighted variant requires uniform weights")]
    NotUnweighted,
}

/// Trace of a load-balancing run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LoadBalanceTrace {
    /// Items in processing order: non-increasing cost, ties by item index.
    pub order: Vec<usize>,
    /// Receiving agent per processed item, parallel to `order`.
    pub assigned_to: Vec<usize>,
    /// Per agent, the last (least costly) item she received, if any.
    pub last_item: Vec<Option<usize>>,
}

fn check(inst: &Instance, need_uniform: bool) -> Result<(), IdenticalError> {
    if inst.mode() != Mode::Chores {
        return Err(IdenticalError::ChoresOnly);
    }
    if !inst.rows_identical() {
        return Err(IdenticalError::NotIdentical);
    }
    if need_uniform && !inst.has_uniform_weights() {
        return Err(IdenticalError::NotUnweighted);
    }
    Ok(())
}

fn run(
    inst: &Instance,
    prefer: impl Fn(&[Rational], usize, usize) -> bool,
) -> (Allocation, SubsidyVector, LoadBalanceTrace) {
    let n = inst.agents();
    let m = inst.items();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| inst.entry(0, b).cmp(inst.entry(0, a)));

    let mut bundle_cost = vec![Rational::zero(); n];
    let mut owners = vec![0usize; m];
    let mut assigned_to = Vec::with_capacity(m);
    let mut last_item = vec![None; n];
    for &item in &order {
        let mut target = 0usize;
        for agent in 1..n {
            if prefer(&bundle_cost, agent, target) {
                target = agent;
            }
        }
        owners[item] = target;
        bundle_cost[target] += inst.entry(0, item);
        assigned_to.push(target);
        last_item[target] = Some(item);
    }
    let allocation = Allocation::from_owners(&owners, n);
    let subsidies = min_subsidy_vector(inst, &allocation);
    let trace = LoadBalanceTrace {
        order,
        assigned_to,
        last_item,
    };
    (allocation, subsidies, trace)
}

/// Unweighted load balancing: each item goes to a currently cheapest bundle.
pub fn load_balance(
    inst: &Instance,
) -> Result<(Allocation, SubsidyVector, LoadBalanceTrace), IdenticalError> {
    check(inst, true)?;
    Ok(run(inst, |cost, cand, cur| cost[cand] < cost[cur]))
}

/// Weighted load balancing: each item goes to an agent with maximum slack
/// `w_i·c(M) − c(X_i)` against her weighted share.
pub fn weighted_load_balance(
    inst: &Instance,
) -> Result<(Allocation, SubsidyVector, LoadBalanceTrace), IdenticalError> {
    check(inst, false)?;
    let shares: Vec<Rational> = (0..inst.agents())
        .map(|i| inst.proportional_share(i))
        .collect();
    Ok(run(inst, move |cost, cand, cur| {
        let cand_slack = &shares[cand] - &cost[cand];
        let cur_slack = &shares[cur] - &cost[cur];
        cand_slack > cur_slack
    }))
}

/// The theorem bound for either variant on identical-cost instances:
/// `n/4` for even `n`, the sharper `(n²−1)/(4n)` for odd `n`.
pub fn load_balance_bound(n: usize) -> Rational {
    if n.is_multiple_of(2) {
        Rational::new(BigInt::from(n), BigInt::from(4))
    } else {
        Rational::new(BigInt::from(n * n - 1), BigInt::from(4 * n))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use crate::verify::{is_prop1, is_propx};

    fn identical(n: usize, costs: &[Rational]) -> Instance {
        Instance::new(Mode::Chores, vec![costs.to_vec(); n]).unwrap()
    }

    #[test]
    fn two_unit_chores_among_four_agents_hit_the_even_bound() {
        let inst = identical(4, &[rat(1, 1), rat(1, 1)]);
        let (alloc, subsidies, trace) = load_balance(&inst).unwrap();
        assert_eq!(alloc.owner_of(0), 0);
        assert_eq!(alloc.owner_of(1), 1);
        assert_eq!(
            subsidies.as_slice(),
            &[rat(1, 2), rat(1, 2), rat(0, 1), rat(0, 1)]
        );
        assert_eq!(subsidies.total(), load_balance_bound(4));
        assert_eq!(trace.order, vec![0, 1]);
        assert_eq!(trace.last_item, vec![Some(0), Some(1), None, None]);
        assert!(is_propx(&inst, &alloc));
    }

    #[test]
    fn one_unit_chore_among_three_agents_hits_the_odd_bound() {
        let inst = identical(3, &[rat(1, 1)]);
        let (alloc, subsidies, _) = load_balance(&inst).unwrap();
        assert_eq!(alloc.owner_of(0), 0);
        assert_eq!(subsidies.total(), rat(2, 3));
        assert_eq!(load_balance_bound(3), rat(2, 3));
    }

    #[test]
    fn balanced_halves_need_no_subsidy() {
        let inst = identical(2, &[rat(1, 2), rat(1, 2)]);
        let (alloc, subsidies, _) = load_balance(&inst).unwrap();
        assert_eq!(alloc.owner_of(0), 0);
        assert_eq!(alloc.owner_of(1), 1);
        assert!(subsidies.total().is_zero());
    }

    #[test]
    fn items_are_processed_most_costly_first() {
        let inst = identical(2, &[rat(1, 4), rat(1, 1), rat(1, 2)]);
        let (alloc, _, trace) = load_balance(&inst).unwrap();
        assert_eq!(trace.order, vec![1, 2, 0]);
        // e1 → agent 0, e2 → agent 1, e0 → agent 1 (cost 1/2 < 1).
        assert_eq!(trace.assigned_to, vec![0, 1, 1]);
        assert!(is_propx(&inst, &alloc));
        assert!(is_prop1(&inst, &alloc));
    }

    #[test]
    fn assignment_goes_to_a_minimum_cost_bundle_at_every_step() {
        let inst = identical(3, &[rat(1, 1), rat(3, 4), rat(3, 4), rat(1, 2), rat(1, 4)]);
        let (_, _, trace) = load_balance(&inst).unwrap();
        let mut cost = vec![rat(0, 1); 3];
        for (k, &item) in trace.order.iter().enumerate() {
            let chosen = trace.assigned_to[k];
            let min = cost.iter().min().unwrap();
            assert_eq!(&cost[chosen], min, "step {k} violated the argmin rule");
            let next = &cost[chosen] + inst.entry(0, item);
            cost[chosen] = next;
        }
    }

    #[test]
    fn weighted_variant_respects_slack_order() {
        // Weights (3/4, 1/4) over four unit chores: slacks start at (3, 1),
        // so agent 0 takes e0, e1, wins the tie at (1, 1) for e2, and agent 1
        // finally gets e3.  Nobody exceeds her weighted share.
        let inst = Instance::with_weights(
            Mode::Chores,
            vec![vec![rat(1, 1); 4]; 2],
            vec![rat(3, 4), rat(1, 4)],
        )
        .unwrap();
        let (alloc, subsidies, trace) = weighted_load_balance(&inst).unwrap();
        assert_eq!(trace.assigned_to, vec![0, 0, 0, 1]);
        assert_eq!(alloc.bundle(0).len(), 3);
        assert_eq!(subsidies.as_slice(), &[rat(0, 1), rat(0, 1)]);
        assert!(is_propx(&inst, &alloc));
    }

    #[test]
    fn weighted_variant_with_uniform_weights_matches_unweighted() {
        let costs = [rat(1, 1), rat(2, 3), rat(1, 2), rat(1, 3)];
        let inst = identical(3, &costs);
        let (a1, s1, _) = load_balance(&inst).unwrap();
        let (a2, s2, _) = weighted_load_balance(&inst).unwrap();
        assert_eq!(a1, a2);
        assert_eq!(s1, s2);
    }

    #[test]
    fn zero_items_yield_empty_bundles() {
        let inst = identical(3, &[]);
        let (alloc, subsidies, trace) = load_balance(&inst).unwrap();
        assert_eq!(alloc.items(), 0);
        assert!(subsidies.total().is_zero());
        assert!(trace.order.is_empty());
    }

    #[test]
    fn rejects_wrong_inputs() {
        let different = Instance::new(
            Mode::Chores,
            vec![vec![rat(1, 1)], vec![rat(1, 2)]],
        )
        .unwrap();
        assert_eq!(load_balance(&different), Err(IdenticalError::NotIdentical));

        let goods = Instance::new(Mode::Goods, vec![vec![rat(1, 1)]; 2]).unwrap();
        assert_eq!(load_balance(&goods), Err(IdenticalError::ChoresOnly));

        let weighted = Instance::with_weights(
            Mode::Chores,
            vec![vec![rat(1, 1)]; 2],
            vec![rat(3, 4), rat(1, 4)],
        )
        .unwrap();
        assert_eq!(load_balance(&weighted), Err(IdenticalError::NotUnweighted));
        assert!(weighted_load_balance(&weighted).is_ok());
    }
}
