//! Extended integers `Z ∪ {−∞, +∞}` and the catalog of transfer functions.

mod fun;

pub use fun::{fun_bounds, BiFun, TestFun};

use std::cmp::Ordering;
use std::fmt;
use std::ops::Neg;
use std::str::FromStr;


use crate::scalar::{Overflow, Scalar};

/// An element of the complete lattice of integers.
///
/// The derived order is the lattice order: `NegInf < Fin(_) < PosInf`, with
/// finite values compared numerically.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtInt<S> {
    NegInf,
    Fin(S),
    PosInf,
}

impl<S: Scalar> ExtInt<S> {
    pub fn zero() -> Self {
        ExtInt::Fin(S::zero())
    }

    /// Finite value from a machine integer; panics outside the scalar range.
    pub fn int(value: i64) -> Self {
        ExtInt::Fin(crate::scalar::lit(value))
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtInt::Fin(_))
    }

    pub fn finite(&self) -> Option<&S> {
        match self {
            ExtInt::Fin(v) => Some(v),
            _ => None,
        }
    }

    fn sign(&self) -> Ordering {
        match self {
            ExtInt::NegInf => Ordering::Less,
            ExtInt::PosInf => Ordering::Greater,
            ExtInt::Fin(v) if v.is_negative() => Ordering::Less,
            ExtInt::Fin(v) if v.is_zero() => Ordering::Equal,
            ExtInt::Fin(_) => Ordering::Greater,
        }
    }

    pub fn is_negative(&self) -> bool {
        self.sign() == Ordering::Less
    }

    pub fn is_nonnegative(&self) -> bool {
        self.sign() != Ordering::Less
    }

    /// Bits of the finite magnitude; infinities count as zero.
    pub fn magnitude_bits(&self) -> u64 {
        self.finite().map_or(0, Scalar::magnitude_bits)
    }

    /// Re-expresses the value over another scalar type, if it fits.
    pub fn convert<T: Scalar>(&self) -> Option<ExtInt<T>> {
        Some(match self {
            ExtInt::NegInf => ExtInt::NegInf,
            ExtInt::PosInf => ExtInt::PosInf,
            ExtInt::Fin(v) => ExtInt::Fin(T::from_big(&v.to_big())?),
        })
    }
}

impl<S: Scalar> Neg for ExtInt<S> {
    type Output = ExtInt<S>;

    fn neg(self) -> Self::Output {
        match self {
            ExtInt::NegInf => ExtInt::PosInf,
            ExtInt::PosInf => ExtInt::NegInf,
            ExtInt::Fin(v) => ExtInt::Fin(-v),
        }
    }
}

impl<S: Scalar> Neg for &ExtInt<S> {
    type Output = ExtInt<S>;

    fn neg(self) -> Self::Output {
        -self.clone()
    }
}

/// Extended addition: `−∞` absorbs everything, then `+∞` does.
pub fn ext_add<S: Scalar>(x: &ExtInt<S>, y: &ExtInt<S>) -> Result<ExtInt<S>, Overflow> {
    use ExtInt::*;
    Ok(match (x, y) {
        (NegInf, _) | (_, NegInf) => NegInf,
        (PosInf, _) | (_, PosInf) => PosInf,
        (Fin(a), Fin(b)) => Fin(a.add_checked(b)?),
    })
}

/// Extended multiplication: zero absorbs infinities, otherwise signs multiply.
pub fn ext_mul<S: Scalar>(x: &ExtInt<S>, y: &ExtInt<S>) -> Result<ExtInt<S>, Overflow> {
    if let (ExtInt::Fin(a), ExtInt::Fin(b)) = (x, y) {
        return Ok(ExtInt::Fin(a.mul_checked(b)?));
    }
    Ok(match (x.sign(), y.sign()) {
        (Ordering::Equal, _) | (_, Ordering::Equal) => ExtInt::zero(),
        (a, b) if a == b => ExtInt::PosInf,
        _ => ExtInt::NegInf,
    })
}

impl<S: Scalar> fmt::Display for ExtInt<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtInt::NegInf => f.write_str("-inf"),
            ExtInt::PosInf => f.write_str("+inf"),
            ExtInt::Fin(v) => write!(f, "{v}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("invalid extended integer `{0}` (expected a decimal, `-inf` or `+inf`)")]
pub struct ParseExtIntError(pub String);

impl<S: Scalar> FromStr for ExtInt<S> {
    type Err = ParseExtIntError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        match text {
            "-inf" => Ok(ExtInt::NegInf),
            "+inf" => Ok(ExtInt::PosInf),
            _ => S::parse_decimal(text)
                .map(ExtInt::Fin)
                .ok_or_else(|| ParseExtIntError(text.to_string())),
        }
    }
}
