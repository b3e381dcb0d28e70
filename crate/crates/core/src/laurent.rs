//! Laurent polynomials in ε = 1/n.
//!
//! Every `lim_{n→∞}` is evaluated by expanding in ε exactly and reading off
//! the ε⁰ coefficient; the limit exists iff no negative power survives.

use std::collections::BTreeMap;
use std::fmt;

use crate::scalar::{Rational, Scalar};

#[derive(Clone, PartialEq, Debug)]
pub struct Laurent<C> {
    coeffs: BTreeMap<i32, C>,
}

pub type EpsSeries = Laurent<Rational>;

impl<C: Scalar> Default for Laurent<C> {
    fn default() -> Self {
        Laurent {
            coeffs: BTreeMap::new(),
        }
    }
}

impl<C: Scalar> Laurent<C> {
    pub fn constant(c: C) -> Self {
        Self::monomial(0, c)
    }

    /// `c·ε^degree`.
    pub fn monomial(degree: i32, c: C) -> Self {
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(degree, c);
        }
        Laurent { coeffs }
    }

    /// ε itself.
    pub fn eps() -> Self {
        Self::monomial(1, C::one())
    }

    /// 1/ε, i.e. n.
    pub fn inv_eps() -> Self {
        Self::monomial(-1, C::one())
    }

    pub fn coeff(&self, degree: i32) -> C {
        self.coeffs.get(&degree).cloned().unwrap_or_else(C::zero)
    }

    pub fn min_degree(&self) -> Option<i32> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_degree(&self) -> Option<i32> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, &C)> {
        self.coeffs.iter().map(|(d, c)| (*d, c))
    }

    /// First nonzero coefficient of negative degree, if any.
    pub fn divergent_term(&self) -> Option<(i32, &C)> {
        self.coeffs
            .iter()
            .find(|(d, _)| **d < 0)
            .map(|(d, c)| (*d, c))
    }

    /// Lifts a rational series into this coefficient ring.
    pub fn lift(series: &EpsSeries) -> Self {
        let mut coeffs = BTreeMap::new();
        for (d, q) in series.terms() {
            coeffs.insert(d, C::from_rational(q));
        }
        Laurent { coeffs }
    }

    pub fn map<D: Scalar>(&self, f: impl Fn(&C) -> D) -> Laurent<D> {
        let mut coeffs = BTreeMap::new();
        for (d, c) in &self.coeffs {
            let v = f(c);
            if !v.is_zero() {
                coeffs.insert(*d, v);
            }
        }
        Laurent { coeffs }
    }

    fn insert_add(&mut self, degree: i32, c: C) {
        if c.is_zero() {
            return;
        }
        let v = match self.coeffs.remove(&degree) {
            Some(old) => old.plus(&c),
            None => c,
        };
        if !v.is_zero() {
            self.coeffs.insert(degree, v);
        }
    }
}

impl EpsSeries {
    /// Value at ε = x, for ε-families evaluated at a concrete n.
    pub fn evaluate_at(&self, x: &Rational) -> Rational {
        let mut acc = <Rational as Scalar>::zero();
        for (d, c) in self.terms() {
            let base = if d < 0 { x.recip() } else { x.clone() };
            let mut p = <Rational as Scalar>::one();
            for _ in 0..d.unsigned_abs() {
                p = &p * &base;
            }
            acc += c * p;
        }
        acc
    }
}

impl<C: Scalar> Scalar for Laurent<C> {
    fn zero() -> Self {
        Laurent::default()
    }
    fn one() -> Self {
        Laurent::constant(C::one())
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    fn plus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (d, c) in &other.coeffs {
            out.insert_add(*d, c.clone());
        }
        out
    }
    fn minus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (d, c) in &other.coeffs {
            out.insert_add(*d, c.negated());
        }
        out
    }
    fn times(&self, other: &Self) -> Self {
        let mut out = Laurent::default();
        for (da, ca) in &self.coeffs {
            for (db, cb) in &other.coeffs {
                out.insert_add(da + db, ca.times(cb));
            }
        }
        out
    }
    fn negated(&self) -> Self {
        self.map(|c| c.negated())
    }
    fn from_rational(q: &Rational) -> Self {
        Laurent::constant(C::from_rational(q))
    }
    fn scaled(&self, q: &Rational) -> Self {
        self.map(|c| c.scaled(q))
    }
}

impl<C: Scalar> fmt::Display for Laurent<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .map(|(d, c)| match d {
                0 => format!("({c})"),
                1 => format!("({c})ε"),
                _ => format!("({c})ε^{d}"),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}
