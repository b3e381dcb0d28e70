//! The jet ring C[t,s]/(t², s²).
//!
//! A value `c + t·a + s·b + ts·m`; the ts-component of a composite
//! expression is its mixed second derivative at t = s = 0.

use std::fmt;

use crate::scalar::{Rational, Scalar};

#[derive(Clone, PartialEq, Debug)]
pub struct Jet<C> {
    pub c: C,
    pub t: C,
    pub s: C,
    pub ts: C,
}

impl<C: Scalar> Jet<C> {
    pub fn new(c: C, t: C, s: C, ts: C) -> Self {
        Jet { c, t, s, ts }
    }

    pub fn constant(c: C) -> Self {
        Jet::new(c, C::zero(), C::zero(), C::zero())
    }

    pub fn t_unit() -> Self {
        Jet::new(C::zero(), C::one(), C::zero(), C::zero())
    }

    pub fn s_unit() -> Self {
        Jet::new(C::zero(), C::zero(), C::one(), C::zero())
    }

    fn map(&self, f: impl Fn(&C) -> C) -> Self {
        Jet::new(f(&self.c), f(&self.t), f(&self.s), f(&self.ts))
    }

    fn zip(&self, o: &Self, f: impl Fn(&C, &C) -> C) -> Self {
        Jet::new(
            f(&self.c, &o.c),
            f(&self.t, &o.t),
            f(&self.s, &o.s),
            f(&self.ts, &o.ts),
        )
    }
}

impl<C: Scalar> Scalar for Jet<C> {
    fn zero() -> Self {
        Jet::constant(C::zero())
    }
    fn one() -> Self {
        Jet::constant(C::one())
    }
    fn is_zero(&self) -> bool {
        self.c.is_zero() && self.t.is_zero() && self.s.is_zero() && self.ts.is_zero()
    }
    fn plus(&self, o: &Self) -> Self {
        self.zip(o, C::plus)
    }
    fn minus(&self, o: &Self) -> Self {
        self.zip(o, C::minus)
    }
    fn times(&self, o: &Self) -> Self {
        let c = self.c.times(&o.c);
        let t = self.c.times(&o.t).plus(&self.t.times(&o.c));
        let s = self.c.times(&o.s).plus(&self.s.times(&o.c));
        let ts = self
            .c
            .times(&o.ts)
            .plus(&self.ts.times(&o.c))
            .plus(&self.t.times(&o.s))
            .plus(&self.s.times(&o.t));
        Jet::new(c, t, s, ts)
    }
    fn negated(&self) -> Self {
        self.map(C::negated)
    }
    fn from_rational(q: &Rational) -> Self {
        Jet::constant(C::from_rational(q))
    }
    fn scaled(&self, q: &Rational) -> Self {
        self.map(|x| x.scaled(q))
    }
}

impl<C: Scalar> fmt::Display for Jet<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}; t:{}; s:{}; ts:{}]",
            self.c, self.t, self.s, self.ts
        )
    }
}
