//! Finite integer scalars underlying the extended integers.
//!
//! Every scalar type has a *symmetric* representable range `[-M, M]`:
//! arithmetic that would leave it reports an [`Overflow`] carrying the
//! direction, never a wrapped value. Symmetry makes negation total.

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_bigint::BigInt;
use num_traits::{CheckedAdd, CheckedMul, One, Signed, ToPrimitive};

/// Bit budget for a single [`BigInt`] magnitude.
///
/// `pow2` and `factorial` chains outgrow any machine word long before a
/// cycle is accelerated; the budget only guards against runaway
/// allocation. Results beyond it are reported as [`Overflow`].
pub const BIG_LIMIT_BITS: u64 = 1 << 16;

/// A finite result fell outside the representable range.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, thiserror::Error)]
pub enum Overflow {
    #[error("arithmetic result above the representable range")]
    Above,
    #[error("arithmetic result below the representable range")]
    Below,
}

impl Overflow {
    fn with_sign(positive: bool) -> Self {
        if positive {
            Overflow::Above
        } else {
            Overflow::Below
        }
    }
}

/// Exact integer arithmetic with explicit range checks.
pub trait Scalar: Clone + Ord + Hash + Debug + Display + Signed + Send + Sync + 'static {
    /// Whether `self` lies in the symmetric representable range.
    fn in_range(&self) -> bool;

    fn add_checked(&self, rhs: &Self) -> Result<Self, Overflow>;

    fn mul_checked(&self, rhs: &Self) -> Result<Self, Overflow>;

    /// `2^self` for `self >= 0`.
    fn pow2_checked(&self) -> Result<Self, Overflow>;

    /// `self!` for `self >= 1`.
    fn factorial_checked(&self) -> Result<Self, Overflow>;

    /// Number of bits of `|self|`.
    fn magnitude_bits(&self) -> u64;

    fn from_big(value: &BigInt) -> Option<Self>;

    fn to_big(&self) -> BigInt;

    /// Parses an optionally signed decimal literal.
    fn parse_decimal(text: &str) -> Option<Self> {
        let body = text.strip_prefix(['-', '+']).unwrap_or(text);
        if body.is_empty() || !body.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        Self::from_big(&text.parse::<BigInt>().ok()?)
    }

    fn from_i64(value: i64) -> Option<Self> {
        Self::from_big(&BigInt::from(value))
    }
}

fn checked_range<S: Scalar>(value: S) -> Result<S, Overflow> {
    if value.in_range() {
        Ok(value)
    } else {
        Err(Overflow::with_sign(value.is_positive()))
    }
}

macro_rules! primitive_scalar {
    ($t:ty) => {
        impl Scalar for $t {
            fn in_range(&self) -> bool {
                *self != <$t>::MIN
            }

            fn add_checked(&self, rhs: &Self) -> Result<Self, Overflow> {
                match CheckedAdd::checked_add(self, rhs) {
                    Some(v) => checked_range(v),
                    None => Err(Overflow::with_sign(*rhs > 0)),
                }
            }

            fn mul_checked(&self, rhs: &Self) -> Result<Self, Overflow> {
                match CheckedMul::checked_mul(self, rhs) {
                    Some(v) => checked_range(v),
                    None => Err(Overflow::with_sign((*self > 0) == (*rhs > 0))),
                }
            }

            fn pow2_checked(&self) -> Result<Self, Overflow> {
                debug_assert!(*self >= 0);
                if *self >= (<$t>::BITS - 1) as $t {
                    Err(Overflow::Above)
                } else {
                    Ok((1 as $t) << *self)
                }
            }

            fn factorial_checked(&self) -> Result<Self, Overflow> {
                let mut acc: $t = 1;
                let mut k: $t = 2;
                while k <= *self {
                    acc = acc.checked_mul(k).ok_or(Overflow::Above)?;
                    k += 1;
                }
                Ok(acc)
            }

            fn magnitude_bits(&self) -> u64 {
                u64::from(<$t>::BITS - self.unsigned_abs().leading_zeros())
            }

            fn from_big(value: &BigInt) -> Option<Self> {
                let v = <$t>::try_from(value).ok()?;
                v.in_range().then_some(v)
            }

            fn to_big(&self) -> BigInt {
                BigInt::from(*self)
            }
        }
    };
}

primitive_scalar!(i64);
primitive_scalar!(i128);

impl Scalar for BigInt {
    fn in_range(&self) -> bool {
        self.bits() <= BIG_LIMIT_BITS
    }

    fn add_checked(&self, rhs: &Self) -> Result<Self, Overflow> {
        checked_range(self + rhs)
    }

    fn mul_checked(&self, rhs: &Self) -> Result<Self, Overflow> {
        if self.bits() + rhs.bits() > BIG_LIMIT_BITS + 1 {
            return Err(Overflow::with_sign(self.is_positive() == rhs.is_positive()));
        }
        checked_range(self * rhs)
    }

    fn pow2_checked(&self) -> Result<Self, Overflow> {
        debug_assert!(!self.is_negative());
        match self.to_u64() {
            Some(e) if e < BIG_LIMIT_BITS => Ok(BigInt::one() << e),
            _ => Err(Overflow::Above),
        }
    }

    fn factorial_checked(&self) -> Result<Self, Overflow> {
        let n = self.to_u64().ok_or(Overflow::Above)?;
        let mut acc = BigInt::one();
        for k in 2..=n {
            acc *= k;
            if acc.bits() > BIG_LIMIT_BITS {
                return Err(Overflow::Above);
            }
        }
        Ok(acc)
    }

    fn magnitude_bits(&self) -> u64 {
        self.bits()
    }

    fn from_big(value: &BigInt) -> Option<Self> {
        value.in_range().then(|| value.clone())
    }

    fn to_big(&self) -> BigInt {
        self.clone()
    }
}

/// Convenience for literals in code: panics when out of range.
pub fn lit<S: Scalar>(value: i64) -> S {
    S::from_i64(value).expect("literal outside the scalar range")
}
