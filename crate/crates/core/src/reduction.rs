//! Reduction to identical-order instances and the lift back.
//!
//! `to_ido` re-ranks every agent's row into non-increasing order: the
//! transformed entry `c'_i(e_k)` is agent `i`'s `k`-th largest original
//! entry.  Solvers that need identical order run on the transform; the
//! resulting allocation is then *lifted* back to original items so that each
//! agent does at least as well as she did on the transform (at most as much
//! cost in chores mode, at least as much value in goods mode).
//!
//! The lift walks the transformed items and lets the holder of each pick a
//! best remaining original item.  In chores mode it starts from the *least*
//! costly rank `e_m` (its holder picks her cheapest remaining item); in goods
//! mode it starts from the *most* valuable rank `e_1` (its holder picks her
//! favorite remaining item).  Either way, when the holder of rank `k` picks,
//! enough items remain that her pick is at least as good to her as her own
//! rank-`k` entry, which gives the per-round domination that test suites
//! assert.

use crate::allocation::Allocation;
use crate::instance::{Instance, Mode};
use std::collections::BTreeSet;

/// Per-agent rank permutations tying a transformed instance back to the
/// original items.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdoCertificate {
    /// `ranks[i][k]` is the original item index of agent `i`'s rank-`k`
    /// entry (rank 0 = largest).  Ties keep the original item order.
    ranks: Vec<Vec<usize>>,
}

impl IdoCertificate {
    pub fn rank_to_item(&self, agent: usize, rank: usize) -> usize {
        self.ranks[agent][rank]
    }

    pub fn ranks(&self, agent: usize) -> &[usize] {
        &self.ranks[agent]
    }
}

/// Sorts every row into non-increasing order.
///
/// Returns the transformed instance (same mode and weights) and the
/// certificate of per-agent permutations.  Row totals — and hence all
/// proportional shares — are unchanged.  An instance that is already in
/// identical order maps to itself with identity permutations.
pub fn to_ido(inst: &Instance) -> (Instance, IdoCertificate) {
    let n = inst.agents();
    let m = inst.items();
    let mut ranks = Vec::with_capacity(n);
    let mut matrix = Vec::with_capacity(n);
    for i in 0..n {
        let mut order: Vec<usize> = (0..m).collect();
        // Stable sort: equal entries keep ascending item order.
        order.sort_by(|&a, &b| inst.entry(i, b).cmp(inst.entry(i, a)));
        let row = order.iter().map(|&e| inst.entry(i, e).clone()).collect();
        ranks.push(order);
        matrix.push(row);
    }
    let ido = Instance::with_weights(inst.mode(), matrix, inst.weights().to_vec())
        .expect("permuting rows preserves validity");
    debug_assert!(ido.is_ido());
    (ido, IdoCertificate { ranks })
}

/// Lifts an allocation of the transformed instance back to original items.
///
/// `ido_alloc` allocates transformed items (ranks); the result allocates
/// original items.  Bundle sizes are preserved per agent, and each agent's
/// lifted bundle is at least as good to her as her transformed bundle.
pub fn lift_allocation(ido_alloc: &Allocation, inst: &Instance) -> Allocation {
    let n = inst.agents();
    let m = inst.items();
    assert_eq!(ido_alloc.agents(), n, "agent counts must match");
    assert_eq!(ido_alloc.items(), m, "item counts must match");

    let rank_order: Vec<usize> = match inst.mode() {
        // Chores: least costly rank first — with k items left, some remaining
        // item costs the picker at most her rank-k entry.
        Mode::Chores => (0..m).rev().collect(),
        // Goods: most valuable rank first — with k−1 items gone, some
        // remaining item is worth at least her rank-k entry.
        Mode::Goods => (0..m).collect(),
    };

    let mut remaining: BTreeSet<usize> = (0..m).collect();
    let mut bundles: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    for rank in rank_order {
        let agent = ido_alloc.owner_of(rank);
        let pick = match inst.mode() {
            Mode::Chores => remaining
                .iter()
                .copied()
                .min_by(|&a, &b| {
                    inst.entry(agent, a)
                        .cmp(inst.entry(agent, b))
                        .then(a.cmp(&b))
                })
                .expect("one remaining item per rank"),
            Mode::Goods => remaining
                .iter()
                .copied()
                .min_by(|&a, &b| {
                    inst.entry(agent, b)
                        .cmp(inst.entry(agent, a))
                        .then(a.cmp(&b))
                })
                .expect("one remaining item per rank"),
        };
        remaining.remove(&pick);
        bundles[agent].insert(pick);
    }
    Allocation::new(bundles, m).expect("lift allocates every original item once")
}
