//! Coefficient rings.
//!
//! Every carrier in this crate is a matrix over a commutative ℚ-algebra:
//! plain rationals, multivariate polynomials (symbolic mode), truncated
//! Laurent series in ε = 1/n, and the jet ring ℚ[t,s]/(t², s²). The
//! [`Scalar`] trait is the common interface; the wrappers compose, so
//! `Laurent<Jet<Rational>>` is a valid coefficient ring.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always stored reduced with positive denominator.
pub type Rational = BigRational;

/// A commutative ℚ-algebra with exact arithmetic and canonical equality.
pub trait Scalar: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn negated(&self) -> Self;
    fn from_rational(q: &Rational) -> Self;

    fn scaled(&self, q: &Rational) -> Self {
        self.times(&Self::from_rational(q))
    }

    fn from_int(n: i64) -> Self {
        Self::from_rational(&int(n))
    }
}

impl Scalar for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn negated(&self) -> Self {
        -self
    }
    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }
    fn scaled(&self, q: &Rational) -> Self {
        self * q
    }
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `"p/q"`, `"p"` or `"-p/q"`; the result is reduced.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num = BigInt::from_str(num).map_err(|e| Error::Parse(format!("`{s}`: {e}")))?;
    let den = BigInt::from_str(den).map_err(|e| Error::Parse(format!("`{s}`: {e}")))?;
    if den.is_zero() {
        return Err(Error::Parse(format!("`{s}`: zero denominator")));
    }
    Ok(Rational::new(num, den))
}

/// Reduced-fraction string: `"3"`, `"-1/2"`.
pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn rational_to_f64(q: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    q.to_f64().unwrap_or(f64::NAN)
}

pub(crate) fn factorial_inverse(k: usize) -> Rational {
    let mut f = BigInt::one();
    for i in 2..=k {
        f *= BigInt::from(i);
    }
    Rational::new(BigInt::one(), f)
}
