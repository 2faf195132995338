//! Allocation containers: integral bundles, fractional matrices, knife cut
//! sequences, and subsidy vectors.

use crate::bid_and_take::RoundTrace;
use crate::instance::Instance;
use crate::rational::Rational;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::collections::BTreeSet;
use thiserror::Error;

/// Validation failures for allocation containers.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AllocationError {
    #[error("item {item} is out of range (instance has {items} items)")]
    ItemOutOfRange { item: usize, items: usize },
    #[error("item {item} appears in more than one bundle")]
    DuplicateItem { item: usize },
    #[error("item {item} is not allocated to any agent")]
    MissingItem { item: usize },
    #[error("subsidy for agent {agent} is negative")]
    NegativeSubsidy { agent: usize },
    #[error("fraction for agent {agent}, item {item} is outside [0, 1]")]
    FractionOutOfRange { agent: usize, item: usize },
    #[error("fractions for item {item} sum to {sum}, expected exactly 1")]
    ColumnSumNotOne { item: usize, sum: String },
    #[error("cut sequence has {found} cuts, expected {expected}")]
    CutCountMismatch { found: usize, expected: usize },
    #[error("cut positions must be non-decreasing and lie in [0, m]")]
    CutsOutOfOrder,
    #[error("interval owners must be a permutation of the agents")]
    BadOwners,
}

/// A complete integral allocation: a partition of all items into one bundle
/// per agent (bundles may be empty).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Allocation {
    bundles: Vec<BTreeSet<usize>>,
    items: usize,
}

impl Allocation {
    /// Validates that `bundles` partitions `{0, …, items−1}` exactly.
    pub fn new(bundles: Vec<BTreeSet<usize>>, items: usize) -> Result<Self, AllocationError> {
        let mut owner = vec![usize::MAX; items];
        for (agent, bundle) in bundles.iter().enumerate() {
            for &item in bundle {
                if item >= items {
                    return Err(AllocationError::ItemOutOfRange { item, items });
                }
                if owner[item] != usize::MAX {
                    return Err(AllocationError::DuplicateItem { item });
                }
                owner[item] = agent;
            }
        }
        if let Some(item) = owner.iter().position(|&a| a == usize::MAX) {
            return Err(AllocationError::MissingItem { item });
        }
        Ok(Allocation { bundles, items })
    }

    /// Builds an allocation from an owner-per-item vector.
    ///
    /// Panics if an owner index is out of range; this is an internal
    /// constructor for algorithm outputs.
    pub fn from_owners(owners: &[usize], agents: usize) -> Self {
        let mut bundles = vec![BTreeSet::new(); agents];
        for (item, &agent) in owners.iter().enumerate() {
            assert!(agent < agents, "owner index out of range");
            bundles[agent].insert(item);
        }
        Allocation {
            bundles,
            items: owners.len(),
        }
    }

    pub fn agents(&self) -> usize {
        self.bundles.len()
    }

    pub fn items(&self) -> usize {
        self.items
    }

    pub fn bundle(&self, agent: usize) -> &BTreeSet<usize> {
        &self.bundles[agent]
    }

    pub fn bundles(&self) -> &[BTreeSet<usize>] {
        &self.bundles
    }

    /// The agent holding `item`.
    pub fn owner_of(&self, item: usize) -> usize {
        self.bundles
            .iter()
            .position(|b| b.contains(&item))
            .expect("complete allocation covers every item")
    }

    /// Agent `i`'s exact cost/value for her own bundle.
    pub fn bundle_value(&self, inst: &Instance, agent: usize) -> Rational {
        inst.bundle_value(agent, self.bundles[agent].iter().copied())
    }
}

/// One nonnegative payment per agent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubsidyVector {
    payments: Vec<Rational>,
}

impl SubsidyVector {
    pub fn new(payments: Vec<Rational>) -> Result<Self, AllocationError> {
        if let Some(agent) = payments.iter().position(|p| p < &Rational::zero()) {
            return Err(AllocationError::NegativeSubsidy { agent });
        }
        Ok(SubsidyVector { payments })
    }

    pub fn zero(agents: usize) -> Self {
        SubsidyVector {
            payments: vec![Rational::zero(); agents],
        }
    }

    pub fn len(&self) -> usize {
        self.payments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.payments.is_empty()
    }

    pub fn get(&self, agent: usize) -> &Rational {
        &self.payments[agent]
    }

    pub fn iter(&self) -> impl Iterator<Item = &Rational> {
        self.payments.iter()
    }

    pub fn total(&self) -> Rational {
        self.payments.iter().sum()
    }

    pub fn as_slice(&self) -> &[Rational] {
        &self.payments
    }
}

/// Output of a moving-knife run over the item interval `(0, m]`.
///
/// Item `e_j` (0-based `j`) occupies `(j, j+1]` on the line.  The sequence
/// stores the `n−1` interior cut positions together with the order in which
/// agents picked their intervals: `owners[k]` holds the `k`-th interval
/// `(cuts[k−1], cuts[k]]`, with `cuts[-1] = 0` and `cuts[n−1] = m` implied.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CutSequence {
    cuts: Vec<Rational>,
    owners: Vec<usize>,
    items: usize,
}

/// A fractionally shared item together with every agent holding a positive
/// piece of it, in interval (pick) order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FracGroup {
    pub item: usize,
    /// `(agent, fraction)` pairs with strictly positive fractions, ordered by
    /// interval position left to right.
    pub sharers: Vec<(usize, Rational)>,
}

impl CutSequence {
    /// Validates cut monotonicity, range, and that `owners` is a permutation
    /// of the agents.
    pub fn new(
        cuts: Vec<Rational>,
        owners: Vec<usize>,
        items: usize,
    ) -> Result<Self, AllocationError> {
        let n = owners.len();
        if cuts.len() + 1 != n {
            return Err(AllocationError::CutCountMismatch {
                found: cuts.len(),
                expected: n.saturating_sub(1),
            });
        }
        let m = Rational::from_integer(BigInt::from(items));
        let mut prev = Rational::zero();
        for c in &cuts {
            if c < &prev || c > &m {
                return Err(AllocationError::CutsOutOfOrder);
            }
            prev = c.clone();
        }
        let mut seen = vec![false; n];
        for &o in &owners {
            if o >= n || seen[o] {
                return Err(AllocationError::BadOwners);
            }
            seen[o] = true;
        }
        Ok(CutSequence {
            cuts,
            owners,
            items,
        })
    }

    pub fn agents(&self) -> usize {
        self.owners.len()
    }

    pub fn items(&self) -> usize {
        self.items
    }

    pub fn cuts(&self) -> &[Rational] {
        &self.cuts
    }

    /// Agents in the order they picked intervals.
    pub fn owners(&self) -> &[usize] {
        &self.owners
    }

    /// Endpoints `(l, r]` of the `k`-th interval in pick order.
    pub fn interval(&self, k: usize) -> (Rational, Rational) {
        let l = if k == 0 {
            Rational::zero()
        } else {
            self.cuts[k - 1].clone()
        };
        let r = if k + 1 == self.owners.len() {
            Rational::from_integer(BigInt::from(self.items))
        } else {
            self.cuts[k].clone()
        };
        (l, r)
    }

    /// Expands the intervals into an explicit fractional matrix.
    pub fn to_frac_allocation(&self) -> FracAllocation {
        let n = self.owners.len();
        let mut x = vec![vec![Rational::zero(); self.items]; n];
        for k in 0..n {
            let (l, r) = self.interval(k);
            let agent = self.owners[k];
            for item in item_range(&l, &r, self.items) {
                let piece = overlap_len(&l, &r, item);
                if !piece.is_zero() {
                    x[agent][item] += piece;
                }
            }
        }
        FracAllocation::new(x, Provenance::MovingKnife(self.clone()))
            .expect("interval expansion yields a valid fractional matrix")
    }

    /// Items cut into two or more positive pieces, with their sharers in
    /// interval order.  Zero-length intervals never appear as sharers.
    pub fn fractional_groups(&self) -> Vec<FracGroup> {
        let n = self.owners.len();
        let mut per_item: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); self.items];
        for k in 0..n {
            let (l, r) = self.interval(k);
            for item in item_range(&l, &r, self.items) {
                let piece = overlap_len(&l, &r, item);
                if !piece.is_zero() {
                    per_item[item].push((self.owners[k], piece));
                }
            }
        }
        per_item
            .into_iter()
            .enumerate()
            .filter(|(_, sharers)| sharers.len() >= 2)
            .map(|(item, sharers)| FracGroup { item, sharers })
            .collect()
    }

    /// The integral part of the division: every item held by exactly one
    /// interval, assigned to that interval's owner.
    pub fn integral_part(&self) -> Vec<BTreeSet<usize>> {
        let n = self.owners.len();
        let mut bundles = vec![BTreeSet::new(); n];
        for item in 0..self.items {
            let mut sole: Option<usize> = None;
            let mut sharers = 0usize;
            for k in 0..n {
                let (l, r) = self.interval(k);
                if !overlap_len(&l, &r, item).is_zero() {
                    sharers += 1;
                    sole = Some(self.owners[k]);
                }
            }
            if sharers == 1 {
                bundles[sole.unwrap()].insert(item);
            }
        }
        bundles
    }
}

/// Items whose interval `(j, j+1]` can overlap `(l, r]`.
fn item_range(l: &Rational, r: &Rational, items: usize) -> std::ops::Range<usize> {
    if r <= l {
        return 0..0;
    }
    let first = l.floor().to_integer();
    let first = usize::try_from(first.max(BigInt::zero())).unwrap_or(0);
    let last = r.ceil().to_integer();
    let last = usize::try_from(last.max(BigInt::zero())).unwrap_or(0);
    first..last.min(items)
}

/// Length of `(l, r] ∩ (item, item+1]`.
fn overlap_len(l: &Rational, r: &Rational, item: usize) -> Rational {
    let lo = Rational::from_integer(BigInt::from(item));
    let hi = &lo + Rational::one();
    let start = if l > &lo { l.clone() } else { lo };
    let end = if r < &hi { r.clone() } else { hi };
    if end > start {
        end - start
    } else {
        Rational::zero()
    }
}

/// Where a fractional allocation came from; carries the structure later
/// rounding steps rely on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Provenance {
    MovingKnife(CutSequence),
    BidAndTake(RoundTrace),
    Other,
}

/// A fractional allocation: an `n × m` matrix of shares in `[0, 1]` whose
/// columns each sum to exactly one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FracAllocation {
    x: Vec<Vec<Rational>>,
    provenance: Provenance,
}

impl FracAllocation {
    pub fn new(x: Vec<Vec<Rational>>, provenance: Provenance) -> Result<Self, AllocationError> {
        let m = x.first().map_or(0, Vec::len);
        let one = Rational::one();
        for (agent, row) in x.iter().enumerate() {
            assert_eq!(row.len(), m, "ragged fraction matrix");
            for (item, f) in row.iter().enumerate() {
                if f < &Rational::zero() || f > &one {
                    return Err(AllocationError::FractionOutOfRange { agent, item });
                }
            }
        }
        for item in 0..m {
            let sum: Rational = x.iter().map(|row| &row[item]).sum();
            if sum != one {
                return Err(AllocationError::ColumnSumNotOne {
                    item,
                    sum: sum.to_string(),
                });
            }
        }
        Ok(FracAllocation { x, provenance })
    }

    pub fn agents(&self) -> usize {
        self.x.len()
    }

    pub fn items(&self) -> usize {
        self.x.first().map_or(0, Vec::len)
    }

    pub fn fraction(&self, agent: usize, item: usize) -> &Rational {
        &self.x[agent][item]
    }

    pub fn row(&self, agent: usize) -> &[Rational] {
        &self.x[agent]
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    /// Agents holding a strictly positive piece of `item`, by agent index.
    pub fn sharers(&self, item: usize) -> Vec<usize> {
        (0..self.agents())
            .filter(|&i| !self.x[i][item].is_zero())
            .collect()
    }

    /// True when some agent holds a proper fraction of `item`.
    pub fn is_fractional(&self, item: usize) -> bool {
        self.sharers(item).len() >= 2
    }

    /// Count of fractionally shared items.
    pub fn fractional_item_count(&self) -> usize {
        (0..self.items()).filter(|&e| self.is_fractional(e)).count()
    }

    /// Agent `i`'s exact cost/value for her fractional bundle.
    pub fn bundle_value(&self, inst: &Instance, agent: usize) -> Rational {
        inst.fractional_bundle_value(agent, &self.x[agent])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::Mode;
    use crate::rational::rat;

    #[test]
    fn allocation_must_partition_items() {
        let ok = Allocation::new(
            vec![BTreeSet::from([0, 2]), BTreeSet::from([1])],
            3,
        )
        .unwrap();
        assert_eq!(ok.owner_of(2), 0);

        assert!(matches!(
            Allocation::new(vec![BTreeSet::from([0]), BTreeSet::from([0])], 1),
            Err(AllocationError::DuplicateItem { item: 0 })
        ));
        assert!(matches!(
            Allocation::new(vec![BTreeSet::new(), BTreeSet::new()], 1),
            Err(AllocationError::MissingItem { item: 0 })
        ));
        assert!(matches!(
            Allocation::new(vec![BTreeSet::from([5])], 1),
            Err(AllocationError::ItemOutOfRange { item: 5, .. })
        ));
    }

    #[test]
    fn subsidies_must_be_nonnegative() {
        assert!(SubsidyVector::new(vec![rat(0, 1), rat(1, 2)]).is_ok());
        assert!(matches!(
            SubsidyVector::new(vec![rat(-1, 2)]),
            Err(AllocationError::NegativeSubsidy { agent: 0 })
        ));
        assert_eq!(
            SubsidyVector::new(vec![rat(1, 2), rat(1, 3)]).unwrap().total(),
            rat(5, 6)
        );
    }

    #[test]
    fn cut_sequence_expansion_matches_intervals() {
        // Two items, cut at 1/2: intervals (0, 1/2] and (1/2, 2].
        let cuts = CutSequence::new(vec![rat(1, 2)], vec![1, 0], 2).unwrap();
        assert_eq!(cuts.interval(0), (rat(0, 1), rat(1, 2)));
        assert_eq!(cuts.interval(1), (rat(1, 2), rat(2, 1)));

        let frac = cuts.to_frac_allocation();
        assert_eq!(frac.fraction(1, 0), &rat(1, 2));
        assert_eq!(frac.fraction(0, 0), &rat(1, 2));
        assert_eq!(frac.fraction(0, 1), &rat(1, 1));
        assert!(frac.is_fractional(0));
        assert!(!frac.is_fractional(1));

        let groups = cuts.fractional_groups();
        assert_eq!(groups.len(), 1);
        assert_eq!(groups[0].item, 0);
        // Interval order: agent 1 holds the left piece, agent 0 the right.
        assert_eq!(groups[0].sharers, vec![(1, rat(1, 2)), (0, rat(1, 2))]);

        let integral = cuts.integral_part();
        assert!(integral[0].contains(&1));
        assert!(integral[1].is_empty());
    }

    #[test]
    fn zero_length_intervals_do_not_share() {
        // Agent 1 takes everything; agent 0's interval is empty at the end.
        let cuts = CutSequence::new(vec![rat(1, 1)], vec![1, 0], 1).unwrap();
        let groups = cuts.fractional_groups();
        assert!(groups.is_empty());
        let frac = cuts.to_frac_allocation();
        assert_eq!(frac.fraction(1, 0), &rat(1, 1));
    }

    #[test]
    fn cut_sequence_validation() {
        assert!(matches!(
            CutSequence::new(vec![rat(3, 2), rat(1, 2)], vec![0, 1, 2], 2),
            Err(AllocationError::CutsOutOfOrder)
        ));
        assert!(matches!(
            CutSequence::new(vec![rat(5, 1)], vec![0, 1], 2),
            Err(AllocationError::CutsOutOfOrder)
        ));
        assert!(matches!(
            CutSequence::new(vec![rat(1, 2)], vec![0, 0], 2),
            Err(AllocationError::BadOwners)
        ));
        assert!(matches!(
            CutSequence::new(vec![], vec![0, 1], 2),
            Err(AllocationError::CutCountMismatch { .. })
        ));
    }

    #[test]
    fn frac_allocation_columns_must_sum_to_one() {
        let bad = FracAllocation::new(
            vec![vec![rat(1, 2)], vec![rat(1, 3)]],
            Provenance::Other,
        );
        assert!(matches!(
            bad,
            Err(AllocationError::ColumnSumNotOne { item: 0, .. })
        ));
    }

    #[test]
    fn frac_bundle_values_are_exact() {
        let inst = crate::instance::Instance::new(
            Mode::Chores,
            vec![vec![rat(1, 1), rat(1, 2)], vec![rat(1, 1), rat(1, 2)]],
        )
        .unwrap();
        let frac = FracAllocation::new(
            vec![
                vec![rat(1, 4), rat(1, 1)],
                vec![rat(3, 4), rat(0, 1)],
            ],
            Provenance::Other,
        )
        .unwrap();
        assert_eq!(frac.bundle_value(&inst, 0), rat(3, 4));
        assert_eq!(frac.bundle_value(&inst, 1), rat(3, 4));
    }
}
