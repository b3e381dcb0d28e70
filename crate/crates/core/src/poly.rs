//! Sparse multivariate polynomials over ℚ.
//!
//! Used as the coefficient ring in symbolic mode: group elements get
//! indeterminate coordinates and an identity holds iff both sides expand to
//! the same canonical polynomial.

use std::collections::BTreeMap;
use std::fmt;

use crate::scalar::{format_rational, Rational, Scalar};

/// Exponent vector stored sparsely as sorted `(variable, power)` pairs.
pub type Monomial = Vec<(u32, u32)>;

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, Rational>,
}

fn mono_mul(a: &Monomial, b: &Monomial) -> Monomial {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                out.push((a[i].0, a[i].1 + b[j].1));
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

impl Poly {
    pub fn var(index: u32) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(vec![(index, 1)], <Rational as Scalar>::one());
        Poly { terms }
    }

    pub fn constant(q: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !Scalar::is_zero(&q) {
            terms.insert(Vec::new(), q);
        }
        Poly { terms }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|m| m.iter().map(|&(_, e)| e).sum())
            .max()
            .unwrap_or(0)
    }

    /// The constant term if the polynomial is constant.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(<Rational as Scalar>::zero()),
            1 => self.terms.get(&Vec::new()).cloned(),
            _ => None,
        }
    }

    /// Substitutes rational values for every variable (missing ones read as 0).
    pub fn evaluate(&self, values: &[Rational]) -> Rational {
        let mut acc = <Rational as Scalar>::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for &(v, e) in m {
                let x = values
                    .get(v as usize)
                    .cloned()
                    .unwrap_or_else(<Rational as Scalar>::zero);
                for _ in 0..e {
                    t = &t * &x;
                }
            }
            acc += t;
        }
        acc
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if Scalar::is_zero(&c) {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if Scalar::is_zero(e.get()) {
                    e.remove();
                }
            }
        }
    }
}

impl Scalar for Poly {
    fn zero() -> Self {
        Poly::default()
    }
    fn one() -> Self {
        Poly::constant(<Rational as Scalar>::one())
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn plus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
    fn minus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
    fn times(&self, other: &Self) -> Self {
        let mut out = Poly::default();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(mono_mul(ma, mb), ca * cb);
            }
        }
        out
    }
    fn negated(&self) -> Self {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
    fn from_rational(q: &Rational) -> Self {
        Poly::constant(q.clone())
    }
    fn scaled(&self, q: &Rational) -> Self {
        if Scalar::is_zero(q) {
            return Poly::default();
        }
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * q)).collect(),
        }
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let mono: Vec<String> = m
                .iter()
                .map(|&(v, e)| {
                    if e == 1 {
                        format!("x{v}")
                    } else {
                        format!("x{v}^{e}")
                    }
                })
                .collect();
            if mono.is_empty() {
                write!(f, "{}", format_rational(c))?;
            } else if *c == <Rational as Scalar>::one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{}*{}", format_rational(c), mono.join("*"))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{frac, int};

    #[test]
    fn square_of_binomial() {
        let x = Poly::var(0);
        let y = Poly::var(1);
        let s = x.plus(&y);
        let lhs = s.times(&s);
        let two_xy = x.times(&y).scaled(&int(2));
        let rhs = x.times(&x).plus(&two_xy).plus(&y.times(&y));
        assert_eq!(lhs, rhs);
        assert_eq!(lhs.total_degree(), 2);
    }

    #[test]
    fn cancellation_is_canonical() {
        let x = Poly::var(3);
        assert!(x.minus(&x).is_zero());
        assert_eq!(x.minus(&x), Poly::zero());
        assert_eq!(Poly::constant(frac(1, 2)).as_constant(), Some(frac(1, 2)));
        assert_eq!(x.as_constant(), None);
    }

    #[test]
    fn evaluation() {
        let p = Poly::var(0)
            .times(&Poly::var(1))
            .plus(&Poly::constant(int(1)));
        assert_eq!(p.evaluate(&[int(2), frac(1, 3)]), frac(5, 3));
    }
}
