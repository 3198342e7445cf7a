//! Bounded-increasing functions and test functions over extended integers.

use std::fmt;


use super::{ext_add, ext_mul, ExtInt};
use crate::scalar::{Overflow, Scalar};

/// The catalog of bounded-increasing transfer functions.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum BiFun<S> {
    Const(ExtInt<S>),
    Id,
    /// `x ↦ min(x, b)`.
    GuardedMin(ExtInt<S>),
    Add,
    /// `x·y` when both are nonnegative, `0` otherwise.
    MulPlus,
    /// `−(x·y)` when both are negative, `0` otherwise.
    MulMinus,
    /// `x ↦ 2^max(x, 0)`.
    Pow2,
    /// `x ↦ max(x, 1)!`.
    Factorial,
}

impl<S: Scalar> BiFun<S> {
    pub fn arity(&self) -> usize {
        match self {
            BiFun::Const(_) => 0,
            BiFun::Id | BiFun::GuardedMin(_) | BiFun::Pow2 | BiFun::Factorial => 1,
            BiFun::Add | BiFun::MulPlus | BiFun::MulMinus => 2,
        }
    }

    /// Evaluates the function; `args.len()` must equal the arity.
    pub fn apply(&self, args: &[&ExtInt<S>]) -> Result<ExtInt<S>, Overflow> {
        debug_assert_eq!(args.len(), self.arity(), "arity mismatch for {self}");
        match self {
            BiFun::Const(b) => Ok(b.clone()),
            BiFun::Id => Ok(args[0].clone()),
            BiFun::GuardedMin(b) => Ok(args[0].min(b).clone()),
            BiFun::Add => ext_add(args[0], args[1]),
            BiFun::MulPlus => {
                if args[0].is_nonnegative() && args[1].is_nonnegative() {
                    ext_mul(args[0], args[1])
                } else {
                    Ok(ExtInt::zero())
                }
            }
            BiFun::MulMinus => {
                if args[0].is_negative() && args[1].is_negative() {
                    Ok(-ext_mul(args[0], args[1])?)
                } else {
                    Ok(ExtInt::zero())
                }
            }
            BiFun::Pow2 => match args[0] {
                ExtInt::PosInf => Ok(ExtInt::PosInf),
                ExtInt::Fin(x) if x.is_positive() => Ok(ExtInt::Fin(x.pow2_checked()?)),
                _ => Ok(ExtInt::Fin(S::one())),
            },
            BiFun::Factorial => match args[0] {
                ExtInt::PosInf => Ok(ExtInt::PosInf),
                ExtInt::Fin(x) if *x > S::one() => Ok(ExtInt::Fin(x.factorial_checked()?)),
                _ => Ok(ExtInt::Fin(S::one())),
            },
        }
    }

    pub fn convert<T: Scalar>(&self) -> Option<BiFun<T>> {
        Some(match self {
            BiFun::Const(b) => BiFun::Const(b.convert()?),
            BiFun::GuardedMin(b) => BiFun::GuardedMin(b.convert()?),
            BiFun::Id => BiFun::Id,
            BiFun::Add => BiFun::Add,
            BiFun::MulPlus => BiFun::MulPlus,
            BiFun::MulMinus => BiFun::MulMinus,
            BiFun::Pow2 => BiFun::Pow2,
            BiFun::Factorial => BiFun::Factorial,
        })
    }
}

/// `(f(⊥,…,⊥), f(⊤,…,⊤))`, the images used by the saturation tests.
pub fn fun_bounds<S: Scalar>(f: &BiFun<S>) -> (ExtInt<S>, ExtInt<S>) {
    let one = || ExtInt::Fin(S::one());
    match f {
        BiFun::Const(b) => (b.clone(), b.clone()),
        BiFun::Id | BiFun::Add => (ExtInt::NegInf, ExtInt::PosInf),
        BiFun::GuardedMin(b) => (ExtInt::NegInf, b.clone()),
        BiFun::MulPlus => (ExtInt::zero(), ExtInt::PosInf),
        BiFun::MulMinus => (ExtInt::NegInf, ExtInt::zero()),
        BiFun::Pow2 | BiFun::Factorial => (one(), ExtInt::PosInf),
    }
}

impl<S: Scalar> fmt::Display for BiFun<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BiFun::Const(b) => write!(f, "const({b})"),
            BiFun::Id => f.write_str("id"),
            BiFun::GuardedMin(b) => write!(f, "min(_, {b})"),
            BiFun::Add => f.write_str("add"),
            BiFun::MulPlus => f.write_str("mulp"),
            BiFun::MulMinus => f.write_str("mulm"),
            BiFun::Pow2 => f.write_str("pow2"),
            BiFun::Factorial => f.write_str("fact"),
        }
    }
}

/// Threshold tests `θ≥b` and `θ>b`: the value input passes through once the
/// guard input clears the threshold, and `−∞` is produced otherwise.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum TestFun<S> {
    Geq(ExtInt<S>),
    Gt(ExtInt<S>),
}

impl<S: Scalar> TestFun<S> {
    pub fn threshold(&self) -> &ExtInt<S> {
        match self {
            TestFun::Geq(b) | TestFun::Gt(b) => b,
        }
    }

    /// Whether a guard value activates the test.
    pub fn holds(&self, guard: &ExtInt<S>) -> bool {
        match self {
            TestFun::Geq(b) => guard >= b,
            TestFun::Gt(b) => guard > b,
        }
    }

    pub fn apply(&self, guard: &ExtInt<S>, value: &ExtInt<S>) -> ExtInt<S> {
        if self.holds(guard) {
            value.clone()
        } else {
            ExtInt::NegInf
        }
    }

    pub fn convert<T: Scalar>(&self) -> Option<TestFun<T>> {
        Some(match self {
            TestFun::Geq(b) => TestFun::Geq(b.convert()?),
            TestFun::Gt(b) => TestFun::Gt(b.convert()?),
        })
    }
}

impl<S: Scalar> fmt::Display for TestFun<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TestFun::Geq(b) => write!(f, "test_geq({b})"),
            TestFun::Gt(b) => write!(f, "test_gt({b})"),
        }
    }
}
