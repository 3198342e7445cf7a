//! Integer intervals, interval constraint systems and their exact solution
//! through integer constraint systems.

mod ivs;
mod transform;
mod translate;

pub use ivs::parse_ivs;
pub use transform::{is_positive_mult, positive_mult_transform};
pub use translate::{decode_valuation, solve_interval, translate_to_integer, TranslateError, Translation};

use std::fmt;
use std::str::FromStr;

use crate::csys::{Form, Lattice, System, Valuation};
use crate::extint::{ext_add, ext_mul, ExtInt};
use crate::scalar::{Overflow, Scalar};

/// A set of consecutive integers, possibly unbounded or empty.
///
/// Stored as the pair `(I⁻, I⁺) = (sup −I, sup I)`; the empty interval is
/// `(−∞, −∞)`. Every constructor canonicalizes, so structural equality is
/// set equality and the lattice order is the componentwise order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Interval<S> {
    neg_lo: ExtInt<S>,
    hi: ExtInt<S>,
}

impl<S: Scalar> Interval<S> {
    pub fn empty() -> Self {
        Interval { neg_lo: ExtInt::NegInf, hi: ExtInt::NegInf }
    }

    pub fn full() -> Self {
        Interval { neg_lo: ExtInt::PosInf, hi: ExtInt::PosInf }
    }

    /// The interval with encoding `(neg_lo, hi)`, or `∅` if no integer fits.
    pub fn from_encoding(neg_lo: ExtInt<S>, hi: ExtInt<S>) -> Self {
        let nonempty = match ext_add(&neg_lo, &hi) {
            Ok(width) => width.is_nonnegative(),
            Err(Overflow::Above) => true,
            Err(Overflow::Below) => false,
        };
        if nonempty {
            Interval { neg_lo, hi }
        } else {
            Interval::empty()
        }
    }

    /// `{x | lo ≤ x ≤ hi}`.
    pub fn from_bounds(lo: ExtInt<S>, hi: ExtInt<S>) -> Self {
        Interval::from_encoding(-lo, hi)
    }

    /// `[lo, hi]` from machine integers.
    pub fn range(lo: i64, hi: i64) -> Self {
        Interval::from_bounds(ExtInt::int(lo), ExtInt::int(hi))
    }

    pub fn point(x: i64) -> Self {
        Interval::range(x, x)
    }

    /// `[0, +∞)`.
    pub fn naturals() -> Self {
        Interval::from_bounds(ExtInt::zero(), ExtInt::PosInf)
    }

    /// `I⁻`.
    pub fn neg_lo(&self) -> &ExtInt<S> {
        &self.neg_lo
    }

    /// `I⁺`, the upper bound.
    pub fn hi(&self) -> &ExtInt<S> {
        &self.hi
    }

    /// The lower bound `−I⁻`.
    pub fn lo(&self) -> ExtInt<S> {
        -&self.neg_lo
    }

    pub fn is_empty(&self) -> bool {
        self.hi == ExtInt::NegInf
    }

    pub fn contains(&self, x: &S) -> bool {
        let x = ExtInt::Fin(x.clone());
        !self.is_empty() && self.lo() <= x && x <= self.hi
    }

    /// Whether every element is nonnegative.
    pub fn is_natural(&self) -> bool {
        self.is_empty() || self.lo().is_nonnegative()
    }

    pub fn convert<T: Scalar>(&self) -> Option<Interval<T>> {
        Some(Interval { neg_lo: self.neg_lo.convert()?, hi: self.hi.convert()? })
    }
}

/// `−I`.
pub fn iv_neg<S: Scalar>(i: &Interval<S>) -> Interval<S> {
    Interval { neg_lo: i.hi.clone(), hi: i.neg_lo.clone() }
}

/// `I1 + I2`; an empty operand gives `∅`.
pub fn iv_add<S: Scalar>(a: &Interval<S>, b: &Interval<S>) -> Result<Interval<S>, Overflow> {
    Ok(Interval::from_encoding(ext_add(&a.neg_lo, &b.neg_lo)?, ext_add(&a.hi, &b.hi)?))
}

/// The hull of `{x1·x2 | x1 ∈ I1, x2 ∈ I2}`; an empty operand gives `∅`.
pub fn iv_mul<S: Scalar>(a: &Interval<S>, b: &Interval<S>) -> Result<Interval<S>, Overflow> {
    if a.is_empty() || b.is_empty() {
        return Ok(Interval::empty());
    }
    let (la, lb) = (a.lo(), b.lo());
    let products = [ext_mul(&la, &lb)?, ext_mul(&la, &b.hi)?, ext_mul(&a.hi, &lb)?, ext_mul(&a.hi, &b.hi)?];
    let lo = products.iter().min().expect("four products").clone();
    let hi = products.iter().max().expect("four products").clone();
    Ok(Interval::from_bounds(lo, hi))
}

/// `I ∩ K`.
pub fn iv_meet<S: Scalar>(i: &Interval<S>, k: &Interval<S>) -> Interval<S> {
    Interval::from_encoding(i.neg_lo.clone().min(k.neg_lo.clone()), i.hi.clone().min(k.hi.clone()))
}

impl<S: Scalar> Lattice for Interval<S> {
    fn bottom() -> Self {
        Interval::empty()
    }

    fn top() -> Self {
        Interval::full()
    }

    fn join(&self, other: &Self) -> Self {
        Interval {
            neg_lo: self.neg_lo.clone().max(other.neg_lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
        }
    }

    fn leq(&self, other: &Self) -> bool {
        self.neg_lo <= other.neg_lo && self.hi <= other.hi
    }

    fn magnitude_bits(&self) -> u64 {
        self.neg_lo.magnitude_bits().max(self.hi.magnitude_bits())
    }
}

/// `empty`, `top`, or `[L,U]` with `-inf`/`+inf` for unbounded ends.
impl<S: Scalar> fmt::Display for Interval<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            f.write_str("empty")
        } else if self.is_top() {
            f.write_str("top")
        } else {
            write!(f, "[{},{}]", self.lo(), self.hi)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("invalid interval `{0}`")]
pub struct ParseIntervalError(String);

impl<S: Scalar> FromStr for Interval<S> {
    type Err = ParseIntervalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ParseIntervalError(s.to_string());
        match s.trim() {
            "empty" => return Ok(Interval::empty()),
            "top" => return Ok(Interval::full()),
            _ => {}
        }
        let inner = s.trim().strip_prefix('[').and_then(|r| r.strip_suffix(']')).ok_or_else(bad)?;
        let (l, u) = inner.split_once(',').ok_or_else(bad)?;
        let lo = l.trim().parse().map_err(|_| bad())?;
        let hi = u.trim().parse().map_err(|_| bad())?;
        Ok(Interval::from_bounds(lo, hi))
    }
}

/// Right-hand sides of interval constraints.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum IvForm<S> {
    /// `−X1`.
    Neg,
    Const(Interval<S>),
    /// `X1 + X2`.
    Add,
    /// `X1 ⊓ K` for a constant `K`.
    Meet(Interval<S>),
    /// `X1 · X2`.
    Mul,
}

impl<S: Scalar> IvForm<S> {
    pub fn convert<T: Scalar>(&self) -> Option<IvForm<T>> {
        Some(match self {
            IvForm::Neg => IvForm::Neg,
            IvForm::Const(k) => IvForm::Const(k.convert()?),
            IvForm::Add => IvForm::Add,
            IvForm::Meet(k) => IvForm::Meet(k.convert()?),
            IvForm::Mul => IvForm::Mul,
        })
    }
}

impl<S: Scalar> Form for IvForm<S> {
    type Value = Interval<S>;

    fn arity(&self) -> usize {
        match self {
            IvForm::Const(_) => 0,
            IvForm::Neg | IvForm::Meet(_) => 1,
            IvForm::Add | IvForm::Mul => 2,
        }
    }

    fn eval(&self, args: &[&Interval<S>]) -> Result<Interval<S>, Overflow> {
        match self {
            IvForm::Neg => Ok(iv_neg(args[0])),
            IvForm::Const(k) => Ok(k.clone()),
            IvForm::Add => iv_add(args[0], args[1]),
            IvForm::Meet(k) => Ok(iv_meet(args[0], k)),
            IvForm::Mul => iv_mul(args[0], args[1]),
        }
    }

    fn identity() -> Self {
        IvForm::Meet(Interval::full())
    }

    fn render(&self, a: &[&str]) -> String {
        match self {
            IvForm::Neg => format!("neg({})", a[0]),
            IvForm::Const(k) => k.to_string(),
            IvForm::Add => format!("add({}, {})", a[0], a[1]),
            IvForm::Meet(k) => format!("meet({}, {k})", a[0]),
            IvForm::Mul => format!("mul({}, {})", a[0], a[1]),
        }
    }
}

/// Interval constraint systems.
pub type IntervalSystem<S> = System<IvForm<S>>;

impl<S: Scalar> IntervalSystem<S> {
    /// The same system over another scalar type, if every constant fits.
    pub fn convert_scalar<T: Scalar>(&self) -> Option<IntervalSystem<T>> {
        self.map_forms(IvForm::convert)
    }
}

/// Valuations of interval systems.
pub type IntervalValuation<S> = Valuation<Interval<S>>;
