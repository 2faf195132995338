//! Randomized invariant checks over seeded generator instances.
//!
//! Each property draws `(n, m, seed, family)` and rebuilds the instance
//! deterministically, so every failure report shrinks to a reproducible
//! quadruple.

use fairdiv_core::bid_and_take::{fractional_bid_and_take, round_largest_fraction};
use fairdiv_core::envy::{efs_bound, efs_solve, max_path_subsidies, EnvyGraph};
use fairdiv_core::identical::{load_balance, load_balance_bound, weighted_load_balance};
use fairdiv_core::instance::Mode;
use fairdiv_core::instances::{gen_random, Family};
use fairdiv_core::io::{instance_from_json, instance_to_json};
use fairdiv_core::moving_knife::moving_knife;
use fairdiv_core::oracle::oracle_min_total_subsidy;
use fairdiv_core::rational::{format_rational, parse_rational, rat};
use fairdiv_core::reduction::{lift_allocation, to_ido};
use fairdiv_core::rounding::{round_best, round_down, round_threshold, round_up, round_best_bound};
use fairdiv_core::verify::{
    deficits, fairness_report, is_ef1, is_efs, is_prop, is_prop1, is_propx, min_subsidy_vector,
};
use fairdiv_core::{Instance, Rational};
use num_traits::{Signed, Zero};
use proptest::prelude::*;

fn mode_strategy() -> impl Strategy<Value = Mode> {
    prop_oneof![Just(Mode::Chores), Just(Mode::Goods)]
}

fn family_strategy() -> impl Strategy<Value = Family> {
    prop_oneof![
        Just(Family::Uniform),
        Just(Family::Bimodal),
        Just(Family::IdenticalUniform),
        Just(Family::WeightedDirichletLike),
    ]
}

fn fractional_share_met(inst: &Instance, x: &fairdiv_core::FracAllocation) -> bool {
    (0..inst.agents()).all(|i| {
        let own = x.bundle_value(inst, i);
        let share = inst.proportional_share(i);
        match inst.mode() {
            Mode::Chores => own <= share,
            Mode::Goods => own >= share,
        }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn generated_instances_validate_and_round_trip(
        n in 1usize..6,
        m in 0usize..8,
        seed in any::<u64>(),
        family in family_strategy(),
        mode in mode_strategy(),
    ) {
        let inst = gen_random(n, m, seed, family, mode);
        prop_assert_eq!(inst.agents(), n);
        prop_assert_eq!(inst.items(), m);
        let weight_sum: Rational = inst.weights().iter().cloned().sum();
        prop_assert_eq!(weight_sum, rat(1, 1));
        // JSON round trip preserves everything.
        let back = instance_from_json(&instance_to_json(&inst)).unwrap();
        prop_assert_eq!(back.matrix(), inst.matrix());
        prop_assert_eq!(back.weights(), inst.weights());
        prop_assert_eq!(back.mode(), inst.mode());
    }

    #[test]
    fn rational_strings_round_trip(p in -10_000i64..10_000, q in 1i64..10_000) {
        let value = rat(p, q);
        let text = format_rational(&value);
        prop_assert_eq!(parse_rational(&text).unwrap(), value);
    }

    #[test]
    fn min_subsidy_is_exact_and_minimal(
        n in 1usize..6,
        m in 0usize..8,
        seed in any::<u64>(),
        mode in mode_strategy(),
    ) {
        let inst = gen_random(n, m, seed, Family::Uniform, mode);
        // Round-robin allocation: item e to agent e mod n.
        let owners: Vec<usize> = (0..m).map(|e| e % n).collect();
        let alloc = fairdiv_core::Allocation::from_owners(&owners, n);
        let s = min_subsidy_vector(&inst, &alloc);
        let d = deficits(&inst, &alloc);
        for (i, need) in d.iter().enumerate() {
            // Payments cover the deficit exactly: subsidized share met...
            prop_assert!(s.get(i) >= need);
            // ...and no payment exceeds what's needed.
            prop_assert_eq!(s.get(i), need);
        }
        if s.total().is_zero() {
            prop_assert!(is_prop(&inst, &alloc));
        }
    }

    #[test]
    fn load_balance_is_propx_within_bound(
        n in 1usize..8,
        m in 0usize..10,
        seed in any::<u64>(),
    ) {
        let inst = gen_random(n, m, seed, Family::IdenticalUniform, Mode::Chores);
        let (alloc, subsidies, trace) = load_balance(&inst).unwrap();
        prop_assert!(is_propx(&inst, &alloc));
        prop_assert!(subsidies.total() <= load_balance_bound(n));
        // Replay: each item goes to a bundle of minimum cost at its turn.
        let mut cost = vec![Rational::zero(); n];
        for (k, &item) in trace.order.iter().enumerate() {
            let agent = trace.assigned_to[k];
            let min = cost.iter().min().unwrap();
            prop_assert_eq!(&cost[agent], min);
            cost[agent] += inst.entry(agent, item);
        }
    }

    #[test]
    fn weighted_load_balance_is_wpropx_within_bound(
        n in 1usize..8,
        m in 0usize..10,
        seed in any::<u64>(),
    ) {
        // Identical rows with random non-uniform weights.
        let base = gen_random(n, m, seed, Family::IdenticalUniform, Mode::Chores);
        let weighted = gen_random(n, m, seed.wrapping_add(1), Family::WeightedDirichletLike, Mode::Chores);
        let inst = Instance::with_weights(
            Mode::Chores,
            base.matrix().to_vec(),
            weighted.weights().to_vec(),
        ).unwrap();
        let (alloc, subsidies, _) = weighted_load_balance(&inst).unwrap();
        prop_assert!(is_propx(&inst, &alloc));
        prop_assert!(subsidies.total() <= load_balance_bound(n));
    }

    #[test]
    fn moving_knife_is_fractionally_proportional(
        n in 1usize..7,
        m in 0usize..9,
        seed in any::<u64>(),
        mode in mode_strategy(),
        identical in any::<bool>(),
    ) {
        let family = if identical { Family::IdenticalUniform } else { Family::Uniform };
        let raw = gen_random(n, m, seed, family, mode);
        let (ido, _) = to_ido(&raw);
        let (cuts, frac) = moving_knife(&ido).unwrap();
        prop_assert!(fractional_share_met(&ido, &frac));
        prop_assert!(frac.fractional_item_count() <= n.saturating_sub(1));
        // Cuts are sorted and inside [0, m].
        let mut prev = rat(0, 1);
        for k in 0..n.saturating_sub(1) {
            let (_, r) = cuts.interval(k);
            prop_assert!(r >= prev);
            prop_assert!(r <= rat(m as i64, 1));
            prev = r;
        }
    }

    #[test]
    fn rounding_keeps_partition_and_best_is_min(
        n in 2usize..7,
        m in 1usize..9,
        seed in any::<u64>(),
        mode in mode_strategy(),
    ) {
        let raw = gen_random(n, m, seed, Family::Uniform, mode);
        let (ido, _) = to_ido(&raw);
        let (cuts, _) = moving_knife(&ido).unwrap();
        let up = round_up(&cuts, &ido);
        let down = round_down(&cuts, &ido);
        let threshold = round_threshold(&cuts, &ido);
        let best = round_best(&cuts, &ido);
        // Every rounding is an exact partition scored by its exact minimum
        // subsidy vector.
        for outcome in [&up, &down, &threshold, &best] {
            let recomputed = min_subsidy_vector(&ido, &outcome.allocation);
            prop_assert_eq!(outcome.subsidies.as_slice(), recomputed.as_slice());
        }
        let directional = match mode {
            Mode::Chores => &up,
            Mode::Goods => &down,
        };
        let expected = directional.total_subsidy().min(threshold.total_subsidy());
        prop_assert_eq!(best.total_subsidy(), expected);
        // Combined charging bound, and the best-of-two theorem bound.
        let combined = directional.total_subsidy() + threshold.total_subsidy();
        prop_assert!(combined <= rat(n as i64, 2));
        prop_assert!(best.total_subsidy() <= round_best_bound(n));
        // The integral allocation stays fair up to one item.
        prop_assert!(is_prop1(&ido, &best.allocation));
    }

    #[test]
    fn lifting_dominates_per_agent(
        n in 1usize..7,
        m in 0usize..9,
        seed in any::<u64>(),
        mode in mode_strategy(),
    ) {
        let raw = gen_random(n, m, seed, Family::Uniform, mode);
        let (ido, _) = to_ido(&raw);
        let (cuts, _) = moving_knife(&ido).unwrap();
        let outcome = round_best(&cuts, &ido);
        let lifted = lift_allocation(&outcome.allocation, &raw);
        for i in 0..n {
            let ido_cost = outcome.allocation.bundle_value(&ido, i);
            let lifted_cost = lifted.bundle_value(&raw, i);
            match mode {
                Mode::Chores => prop_assert!(lifted_cost <= ido_cost),
                Mode::Goods => prop_assert!(lifted_cost >= ido_cost),
            }
            prop_assert_eq!(lifted.bundle(i).len(), outcome.allocation.bundle(i).len());
        }
        let ido_total = min_subsidy_vector(&ido, &outcome.allocation).total();
        let lifted_total = min_subsidy_vector(&raw, &lifted).total();
        prop_assert!(lifted_total <= ido_total);
    }

    #[test]
    fn bid_and_take_is_weighted_proportional(
        n in 1usize..7,
        m in 0usize..9,
        seed in any::<u64>(),
        mode in mode_strategy(),
    ) {
        let inst = gen_random(n, m, seed, Family::WeightedDirichletLike, mode);
        let run = fractional_bid_and_take(&inst);
        let (frac, trace) = match run {
            Ok(pair) => pair,
            // A zero-total chores row makes ratios undefined; skip.
            Err(_) => return Ok(()),
        };
        prop_assert!(fractional_share_met(&inst, &frac));
        // At most n−1 agents deactivate with a partial piece.
        prop_assert!(trace.deactivations.len() <= n.saturating_sub(1));
        prop_assert!(frac.fractional_item_count() <= n.saturating_sub(1));
        prop_assert!(!trace.active_at_end.is_empty());

        let outcome = round_largest_fraction(&frac, &inst);
        let recomputed = min_subsidy_vector(&inst, &outcome.allocation);
        prop_assert_eq!(outcome.subsidies.as_slice(), recomputed.as_slice());
        prop_assert!(outcome.total_subsidy() <= rat(n as i64 - 1, 2));
    }

    #[test]
    fn efs_pipeline_invariants(
        n in 2usize..5,
        m in 0usize..7,
        seed in any::<u64>(),
        family in family_strategy(),
    ) {
        let inst = gen_random(n, m, seed, family, Mode::Chores);
        let (alloc, s) = efs_solve(&inst).unwrap();
        prop_assert!(is_efs(&inst, &alloc, &s));
        prop_assert!(is_ef1(&inst, &alloc));
        prop_assert!(s.total() <= efs_bound(n));
        prop_assert!(s.iter().any(|p| p.is_zero()));
        for p in s.iter() {
            prop_assert!(!p.is_negative());
            prop_assert!(p <= &rat(1, 1));
        }
        // The original-cost envy graph of the matched allocation has no
        // positive cycle either.
        let graph = EnvyGraph::from_instance(&inst, &alloc);
        prop_assert!(max_path_subsidies(&graph).is_ok());
        // Bundles stay within the round count.
        let cap = m.div_ceil(n.max(1));
        for i in 0..n {
            prop_assert!(alloc.bundle(i).len() <= cap);
        }
    }

    #[test]
    fn algorithms_never_beat_the_oracle(
        n in 2usize..4,
        m in 0usize..6,
        seed in any::<u64>(),
        mode in mode_strategy(),
    ) {
        let raw = gen_random(n, m, seed, Family::Uniform, mode);
        let (oracle_total, _) = oracle_min_total_subsidy(&raw, 1_000_000).unwrap();
        let (ido, _) = to_ido(&raw);
        let (cuts, _) = moving_knife(&ido).unwrap();
        let outcome = round_best(&cuts, &ido);
        let lifted = lift_allocation(&outcome.allocation, &raw);
        let lifted_total = min_subsidy_vector(&raw, &lifted).total();
        prop_assert!(lifted_total >= oracle_total);
        if let Ok((frac, _)) = fractional_bid_and_take(&raw) {
            let rounded = round_largest_fraction(&frac, &raw);
            prop_assert!(rounded.total_subsidy() >= oracle_total);
        }
    }

    #[test]
    fn fairness_report_is_internally_consistent(
        n in 1usize..6,
        m in 0usize..8,
        seed in any::<u64>(),
        mode in mode_strategy(),
    ) {
        let inst = gen_random(n, m, seed, Family::Bimodal, mode);
        let owners: Vec<usize> = (0..m).map(|e| (e * 7 + 3) % n).collect();
        let alloc = fairdiv_core::Allocation::from_owners(&owners, n);
        let report = fairness_report(&inst, &alloc, None);
        // Logical ladder: PROP ⇒ PROPX ⇒ PROP1, EF ⇒ EF1.
        if report.prop { prop_assert!(report.propx); }
        if report.propx { prop_assert!(report.prop1); }
        if report.ef { prop_assert!(report.ef1); }
        // Uniform weights: EF ⇒ PROP.
        if inst.has_uniform_weights() && report.ef {
            prop_assert!(report.prop);
        }
        prop_assert_eq!(report.prop, is_prop(&inst, &alloc));
    }
}
