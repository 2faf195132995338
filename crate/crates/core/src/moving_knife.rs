//! Moving-knife division of the item interval.
//!
//! The items of an identical-order instance are laid out on the line as unit
//! segments: item `e_j` (0-based) occupies `(j, j+1]`.  A knife sweeps right
//! from the last cut `l`; each remaining agent `i` reports the stop position
//! `r_i` dictated by her proportional share `c_i(M)/n`:
//!
//! * chores: the **furthest** `r ≤ m` with `c_i(l, r) ≤ share_i` — she wants
//!   the sweep to go on as long as the interval stays affordable;
//! * goods: the **earliest** `r` with `v_i(l, r) ≥ share_i` — she calls out as
//!   soon as the interval is worth her share.
//!
//! In chores mode the *last* shout wins (largest `r_i`); in goods mode the
//! *first* shout wins (smallest `r_i`).  Ties go to the lowest agent index.
//! The winner takes `(l, r_i]` and leaves; the final agent takes whatever
//! remains.  Every non-final agent ends exactly at her share (or takes the
//! interval to `m`), so the fractional division is proportional, and only the
//! `n−1` cut positions can split items: at most `n−1` items end up shared.
//!
//! An agent with an all-zero row has share zero and is happy with anything;
//! in chores mode her stop position is `m` (every extension costs her
//! nothing), so she absorbs the whole remainder when she wins.  This keeps
//! the division complete without ever breaking another agent's share.

use crate::allocation::{CutSequence, FracAllocation};
use crate::instance::{Instance, Mode};
use crate::rational::Rational;
use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MovingKnifeError {
    #[error("moving knife needs an identical-order instance (rows non-increasing)")]
    NotIdo,
    #[error("moving knife divides by the unweighted share; weights must be uniform")]
    NotUnweighted,
    #[error("interval endpoints must satisfy 0 ≤ l ≤ r ≤ m")]
    BadInterval,
}

/// Exact cost/value of the interval `(l, r]` to one agent: each item
/// contributes its overlap length times its entry.
pub fn interval_value(
    inst: &Instance,
    agent: usize,
    l: &Rational,
    r: &Rational,
) -> Result<Rational, MovingKnifeError> {
    let m = Rational::from_integer(BigInt::from(inst.items()));
    if l < &Rational::zero() || r < l || r > &m {
        return Err(MovingKnifeError::BadInterval);
    }
    let mut total = Rational::zero();
    if r == l {
        return Ok(total);
    }
    let first = usize::try_from(l.floor().to_integer()).expect("l ≥ 0");
    let last = usize::try_from(r.ceil().to_integer()).expect("r ≥ 0");
    for item in first..last.min(inst.items()) {
        let lo = Rational::from_integer(BigInt::from(item));
        let hi = &lo + Rational::from_integer(BigInt::from(1));
        let start = if l > &lo { l.clone() } else { lo };
        let end = if r < &hi { r.clone() } else { hi };
        if end > start {
            total += (end - start) * inst.entry(agent, item);
        }
    }
    Ok(total)
}

/// Chores stop position: the furthest `r ∈ [l, m]` with `c_i(l, r) ≤ share`.
///
/// Walks the items once, taking whole pieces while they fit in the remaining
/// budget and solving the one linear equation at the crossing item.  Items of
/// zero cost are absorbed even on an exhausted budget, which realizes the
/// "furthest" semantics.
fn stop_chores(inst: &Instance, agent: usize, l: &Rational, share: &Rational) -> Rational {
    let m = inst.items();
    let mut pos = l.clone();
    let mut budget = share.clone();
    let first = usize::try_from(l.floor().to_integer()).expect("l ≥ 0");
    for item in first..m {
        let lo = Rational::from_integer(BigInt::from(item));
        let hi = &lo + Rational::from_integer(BigInt::from(1));
        let start = if l > &lo { l.clone() } else { lo };
        if start >= hi {
            continue; // l sits exactly on this item's right boundary
        }
        let len = &hi - &start;
        let piece = &len * inst.entry(agent, item);
        if piece <= budget {
            budget -= piece;
            pos = hi;
        } else {
            // piece > budget ≥ 0 forces a positive unit cost.
            let advance = &budget / inst.entry(agent, item);
            return start + advance;
        }
    }
    pos
}

/// Goods stop position: the earliest `r ∈ [l, m]` with `v_i(l, r) ≥ share`,
/// or `None` when even `(l, m]` falls short.
fn stop_goods(
    inst: &Instance,
    agent: usize,
    l: &Rational,
    share: &Rational,
) -> Option<Rational> {
    if share <= &Rational::zero() {
        return Some(l.clone());
    }
    let m = inst.items();
    let mut budget = share.clone();
    let first = usize::try_from(l.floor().to_integer()).expect("l ≥ 0");
    for item in first..m {
        let lo = Rational::from_integer(BigInt::from(item));
        let hi = &lo + Rational::from_integer(BigInt::from(1));
        let start = if l > &lo { l.clone() } else { lo };
        if start >= hi {
            continue;
        }
        let len = &hi - &start;
        let piece = &len * inst.entry(agent, item);
        if piece < budget {
            budget -= piece;
        } else {
            // piece ≥ budget > 0 forces a positive unit value; stop at the
            // first crossing, not beyond it.
            let advance = &budget / inst.entry(agent, item);
            return Some(start + advance);
        }
    }
    None
}

/// Runs the moving knife on an identical-order, uniformly weighted instance.
///
/// Returns the cut sequence (with interval pick order) and its expansion to
/// a fractional allocation in which every agent meets her proportional share
/// exactly.
pub fn moving_knife(inst: &Instance) -> Result<(CutSequence, FracAllocation), MovingKnifeError> {
    if !inst.is_ido() {
        return Err(MovingKnifeError::NotIdo);
    }
    if !inst.has_uniform_weights() {
        return Err(MovingKnifeError::NotUnweighted);
    }
    let n = inst.agents();
    let m = Rational::from_integer(BigInt::from(inst.items()));
    let shares: Vec<Rational> = (0..n).map(|i| inst.proportional_share(i)).collect();

    let mut remaining: Vec<usize> = (0..n).collect();
    let mut owners: Vec<usize> = Vec::with_capacity(n);
    let mut cuts: Vec<Rational> = Vec::with_capacity(n);
    let mut l = Rational::zero();

    match inst.mode() {
        Mode::Chores => {
            while l < m && !remaining.is_empty() {
                // Last shout wins: the largest stop position takes the interval.
                let mut best: Option<(Rational, usize)> = None;
                for &i in &remaining {
                    let r = stop_chores(inst, i, &l, &shares[i]);
                    if best.as_ref().is_none_or(|(br, _)| &r > br) {
                        best = Some((r, i));
                    }
                }
                let (r, winner) = best.expect("remaining is non-empty");
                remaining.retain(|&a| a != winner);
                owners.push(winner);
                cuts.push(r.clone());
                l = r;
            }
            // The sweep consumed everything; leftover agents take empty
            // intervals at m (their shares are nonnegative, so this is fine).
            for &i in &remaining {
                owners.push(i);
                cuts.push(m.clone());
            }
        }
        Mode::Goods => {
            while remaining.len() >= 2 {
                // First shout wins: the smallest stop position takes the interval.
                let mut best: Option<(Rational, usize)> = None;
                for &i in &remaining {
                    let Some(r) = stop_goods(inst, i, &l, &shares[i]) else {
                        continue;
                    };
                    if best.as_ref().is_none_or(|(br, _)| &r < br) {
                        best = Some((r, i));
                    }
                }
                // With k ≥ 2 agents left, each values the remainder at
                // ≥ k·share (she lost at most share per earlier interval), so
                // every remaining agent shouts somewhere ≤ m.
                let (r, winner) = best.expect("every remaining goods agent shouts");
                remaining.retain(|&a| a != winner);
                owners.push(winner);
                cuts.push(r.clone());
                l = r;
            }
            // The final agent takes (l, m].
            owners.push(remaining[0]);
        }
    }

    cuts.truncate(n - 1);
    let cut_seq = CutSequence::new(cuts, owners, inst.items())
        .expect("sweep produces ordered cuts and a pick permutation");
    let frac = cut_seq.to_frac_allocation();
    Ok((cut_seq, frac))
}
