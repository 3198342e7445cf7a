//! Exact least solutions of integer and interval constraint systems.
//!
//! Data-flow problems over the integers and the intervals are solved by
//! *accelerating* cycles instead of widening: the least solution is computed
//! exactly in a number of operations cubic in the size of the system.
//!
//! - [`extint`]: extended integers and the catalog of transfer functions;
//! - [`csys`]: constraint systems, semantics, program graphs, the Kleene
//!   oracle and unfoldings;
//! - [`intsolve`]: the accelerated integer solver;
//! - [`interval`]: interval systems and their reduction to integer ones;
//! - [`frontend`]: a small while-language compiled to interval systems.
//!
//! Everything is generic over the finite [`Scalar`] type; the aliases below
//! fix it to unbounded [`BigInt`]s.

pub mod csys;
pub mod extint;
pub mod frontend;
pub mod interval;
pub mod intsolve;
pub mod scalar;

pub use csys::text::ParseError;
pub use num_bigint::BigInt;
pub use scalar::{Overflow, Scalar};

/// Extended integers over unbounded integers.
pub type Ext = extint::ExtInt<BigInt>;
/// Integer constraint systems over unbounded integers.
pub type IntSystem = csys::ConstraintSystem<BigInt>;
/// Valuations of [`IntSystem`]s.
pub type IntValuation = csys::Valuation<Ext>;
/// Intervals over unbounded integers.
pub type BigInterval = interval::Interval<BigInt>;
/// Interval constraint systems over unbounded integers.
pub type IvSystem = interval::IntervalSystem<BigInt>;
/// Valuations of [`IvSystem`]s.
pub type IvValuation = csys::Valuation<BigInterval>;
