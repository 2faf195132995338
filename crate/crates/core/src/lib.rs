//! Fair allocation of indivisible chores and goods with minimum subsidies.
//!
//! Agents report exact rational costs (chores) or values (goods) over
//! indivisible items, optionally with entitlement weights.  The algorithms
//! here produce integral allocations together with the smallest monetary
//! payments that restore fairness, and come with worst-case guarantees on
//! the total payment:
//!
//! | pipeline | fairness target | total payment bound |
//! |---|---|---|
//! | [`identical::load_balance`] | proportionality, identical agents | `n/4` (even `n`), `(n²−1)/(4n)` (odd) |
//! | [`identical::weighted_load_balance`] | weighted proportionality | `(n−1)/2` |
//! | [`moving_knife::moving_knife`] + [`rounding::round_best`] | proportionality, ordered instances | `n/4` (even), `(n²−1)/(4n)` (odd) |
//! | [`bid_and_take::fractional_bid_and_take`] + [`bid_and_take::round_largest_fraction`] | weighted proportionality | `(n−1)/2` |
//! | [`envy::efs_solve`] | envy-freeness (chores) | `n−1` |
//!
//! All arithmetic uses arbitrary-precision rationals ([`Rational`]); there
//! is no floating point anywhere in a solver path, so every reported
//! subsidy and every verified property is exact.
//!
//! # Quick start
//!
//! ```
//! use fairdiv_core::{Instance, Mode, rat};
//! use fairdiv_core::identical::load_balance;
//!
//! // Four agents share two unit chores.
//! let inst = Instance::new(Mode::Chores, vec![vec![rat(1, 1), rat(1, 1)]; 4]).unwrap();
//! let (alloc, subsidies, _trace) = load_balance(&inst).unwrap();
//! assert_eq!(subsidies.total(), rat(1, 1)); // meets the n/4 bound exactly
//! assert!(fairdiv_core::verify::is_propx(&inst, &alloc));
//! ```

pub mod allocation;
pub mod bid_and_take;
pub mod envy;
pub mod identical;
pub mod instance;
pub mod instances;
pub mod io;
pub mod moving_knife;
pub mod oracle;
pub mod rational;
pub mod reduction;
pub mod rounding;
pub mod verify;

pub use allocation::{
    Allocation, AllocationError, CutSequence, FracAllocation, FracGroup, Provenance,
    SubsidyVector,
};
pub use instance::{Instance, InstanceError, Mode};
pub use rational::{format_decimal, format_rational, parse_rational, rat, Rational};
