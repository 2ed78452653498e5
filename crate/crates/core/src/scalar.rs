//! Exact scalar types shared by the solvers.
//!
//! Everything that has to be compared for equality (scores, prices, LP
//! pivots) lives in an exact ordered field. Floating point types do not
//! implement [`Scalar`] because they are not `Ord`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{NumAssignRef, NumRef, One, Signed, Zero};

use crate::error::{Error, Result};

/// An exact ordered field.
pub trait Scalar:
    Clone + Ord + Signed + NumRef + NumAssignRef + fmt::Debug + fmt::Display
{
}

impl<T> Scalar for T where
    T: Clone + Ord + Signed + NumRef + NumAssignRef + fmt::Debug + fmt::Display
{
}

/// A value of `T` extended with a positive infinity sentinel.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Extended<T> {
    Finite(T),
    Infinite,
}

impl<T> Extended<T> {
    pub fn is_finite(&self) -> bool {
        matches!(self, Extended::Finite(_))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Extended::Infinite)
    }

    pub fn finite(&self) -> Option<&T> {
        match self {
            Extended::Finite(x) => Some(x),
            Extended::Infinite => None,
        }
    }

    pub fn into_finite(self) -> Option<T> {
        match self {
            Extended::Finite(x) => Some(x),
            Extended::Infinite => None,
        }
    }
}

impl<T: Zero> Extended<T> {
    pub fn zero() -> Self {
        Extended::Finite(T::zero())
    }
}

impl From<i64> for Extended<BigRational> {
    fn from(value: i64) -> Self {
        Extended::Finite(int(value))
    }
}

impl<T: Ord> PartialOrd for Extended<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<T: Ord> Ord for Extended<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Extended::Finite(a), Extended::Finite(b)) => a.cmp(b),
            (Extended::Finite(_), Extended::Infinite) => Ordering::Less,
            (Extended::Infinite, Extended::Finite(_)) => Ordering::Greater,
            (Extended::Infinite, Extended::Infinite) => Ordering::Equal,
        }
    }
}

impl<T: Scalar> Add for Extended<T> {
    type Output = Extended<T>;

    fn add(self, rhs: Self) -> Self::Output {
        match (self, rhs) {
            (Extended::Finite(a), Extended::Finite(b)) => Extended::Finite(a + b),
            _ => Extended::Infinite,
        }
    }
}

impl<'a, T: Scalar> Add<&'a Extended<T>> for &'a Extended<T> {
    type Output = Extended<T>;

    fn add(self, rhs: &'a Extended<T>) -> Self::Output {
        match (self, rhs) {
            (Extended::Finite(a), Extended::Finite(b)) => Extended::Finite(a.clone() + b),
            _ => Extended::Infinite,
        }
    }
}

impl<T: Scalar> std::iter::Sum for Extended<T> {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Extended::Finite(T::zero()), |acc, x| acc + x)
    }
}

impl<T: fmt::Display> fmt::Display for Extended<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extended::Finite(x) => write!(f, "{x}"),
            Extended::Infinite => f.write_str("inf"),
        }
    }
}

pub fn int(value: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(value))
}

pub fn ratio(numer: i64, denom: i64) -> BigRational {
    BigRational::new(BigInt::from(numer), BigInt::from(denom))
}

/// `⌊x⌋` as an integer. Fails on negative input or overflow.
pub fn floor_usize(x: &BigRational) -> Option<usize> {
    if x.is_negative() {
        return None;
    }
    usize::try_from(x.floor().to_integer()).ok()
}

/// `⌈x⌉` as an integer. Fails on negative input or overflow.
pub fn ceil_usize(x: &BigRational) -> Option<usize> {
    if x.is_negative() {
        return None;
    }
    usize::try_from(x.ceil().to_integer()).ok()
}

/// `x ∈ {0, 1}`.
pub fn is_zero_one<T: Integer + Clone>(x: &Ratio<T>) -> bool {
    x.is_zero() || x.is_one()
}

/// Parses a rational written as `p/q` or `p`.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let text = text.trim();
    let parsed: BigRational = text
        .parse()
        .map_err(|_| Error::Syntax(format!("not a rational number: {text:?}")))?;
    Ok(parsed)
}

/// Parses `inf` or a nonnegative rational.
pub fn parse_price(text: &str) -> Result<Extended<BigRational>> {
    if text.trim() == "inf" {
        return Ok(Extended::Infinite);
    }
    let value = parse_rational(text)?;
    if value.is_negative() {
        return Err(Error::Syntax(format!("negative price: {text:?}")));
    }
    Ok(Extended::Finite(value))
}

/// Parses `p/q`, an integer, or a plain decimal such as `0.25`.
pub fn parse_decimal_or_rational(text: &str) -> Result<BigRational> {
    let text = text.trim();
    if let Some((whole, frac)) = text.split_once('.') {
        let digits = format!("{whole}{frac}");
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::Syntax(format!("not a decimal number: {text:?}")));
        }
        let numer: BigInt = digits
            .parse()
            .map_err(|_| Error::Syntax(format!("not a decimal number: {text:?}")))?;
        let denom = num_traits::pow(BigInt::from(10), frac.len());
        return Ok(BigRational::new(numer, denom));
    }
    parse_rational(text)
}
