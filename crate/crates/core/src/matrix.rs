//! Dense square matrices over any [`Scalar`] ring.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::jet::Jet;
use crate::laurent::Laurent;
use crate::scalar::{Rational, Scalar};

#[derive(Clone, PartialEq, Debug)]
pub struct Matrix<S> {
    dim: usize,
    data: Vec<S>,
}

pub type ExactMatrix = Matrix<Rational>;
pub type EpsMatrix = Matrix<Laurent<Rational>>;
pub type JetMatrix = Matrix<Jet<Rational>>;

impl<S: Scalar> Matrix<S> {
    pub fn zero(dim: usize) -> Self {
        Matrix {
            dim,
            data: vec![S::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, |i, j| if i == j { S::one() } else { S::zero() })
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Matrix { dim, data }
    }

    /// Row-major; panics unless `rows` is square.
    pub fn from_rows(rows: Vec<Vec<S>>) -> Self {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for r in rows {
            assert_eq!(r.len(), dim, "matrix rows must form a square");
            data.extend(r);
        }
        Matrix { dim, data }
    }

    /// Matrix unit with a single one at 0-based `(row, col)`.
    pub fn unit(dim: usize, row: usize, col: usize) -> Self {
        let mut m = Self::zero(dim);
        m.set(row, col, S::one());
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &S {
        &self.data[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: S) {
        self.data[i * self.dim + j] = v;
    }

    pub fn rows(&self) -> Vec<Vec<S>> {
        self.data
            .chunks(self.dim.max(1))
            .map(|r| r.to_vec())
            .collect()
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &S)> {
        let d = self.dim;
        self.data
            .iter()
            .enumerate()
            .map(move |(k, v)| (k / d, k % d, v))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(S::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.dim)
    }

    /// First nonzero entry on or below the diagonal.
    pub fn lower_violation(&self) -> Option<(usize, usize)> {
        self.entries()
            .find(|(i, j, v)| i >= j && !v.is_zero())
            .map(|(i, j, _)| (i, j))
    }

    pub fn is_strictly_upper(&self) -> bool {
        self.lower_violation().is_none()
    }

    pub fn map<D: Scalar>(&self, f: impl Fn(&S) -> D) -> Matrix<D> {
        Matrix {
            dim: self.dim,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn scaled(&self, q: &Rational) -> Self {
        self.map(|x| x.scaled(q))
    }

    /// Every entry multiplied by a ring element.
    pub fn times_scalar(&self, c: &S) -> Self {
        self.map(|x| x.times(c))
    }

    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::identity(self.dim);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Matrix–vector product.
    pub fn apply(&self, v: &[S]) -> Vec<S> {
        assert_eq!(v.len(), self.dim, "vector length mismatch");
        (0..self.dim)
            .map(|i| {
                let mut acc = S::zero();
                for (j, x) in v.iter().enumerate() {
                    let a = self.get(i, j);
                    if !a.is_zero() && !x.is_zero() {
                        acc = acc.plus(&a.times(x));
                    }
                }
                acc
            })
            .collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self.get(j, i).clone())
    }

    fn check_dim(&self, other: &Self) {
        assert_eq!(self.dim, other.dim, "matrix dimension mismatch");
    }
}

impl<S: Scalar> Add for &Matrix<S> {
    type Output = Matrix<S>;
    fn add(self, o: Self) -> Matrix<S> {
        self.check_dim(o);
        Matrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&o.data)
                .map(|(a, b)| a.plus(b))
                .collect(),
        }
    }
}

impl<S: Scalar> Sub for &Matrix<S> {
    type Output = Matrix<S>;
    fn sub(self, o: Self) -> Matrix<S> {
        self.check_dim(o);
        Matrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&o.data)
                .map(|(a, b)| a.minus(b))
                .collect(),
        }
    }
}

impl<S: Scalar> Mul for &Matrix<S> {
    type Output = Matrix<S>;
    fn mul(self, o: Self) -> Matrix<S> {
        self.check_dim(o);
        let d = self.dim;
        let mut out = Matrix::<S>::zero(d);
        for i in 0..d {
            for k in 0..d {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..d {
                    let b = o.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let v = out.data[i * d + j].plus(&a.times(b));
                    out.data[i * d + j] = v;
                }
            }
        }
        out
    }
}

impl<S: Scalar> Neg for &Matrix<S> {
    type Output = Matrix<S>;
    fn neg(self) -> Matrix<S> {
        self.map(S::negated)
    }
}

impl<C: Scalar> Matrix<Laurent<C>> {
    /// Constant ε-family.
    pub fn lift_constant(m: &Matrix<C>) -> Self {
        m.map(|x| Laurent::constant(x.clone()))
    }

    /// Coefficient matrix of ε^degree.
    pub fn coefficient(&self, degree: i32) -> Matrix<C> {
        self.map(|x| x.coeff(degree))
    }

    pub fn degree_range(&self) -> Option<(i32, i32)> {
        let mut range: Option<(i32, i32)> = None;
        for (_, _, v) in self.entries() {
            if let (Some(lo), Some(hi)) = (v.min_degree(), v.max_degree()) {
                range = Some(match range {
                    None => (lo, hi),
                    Some((a, b)) => (a.min(lo), b.max(hi)),
                });
            }
        }
        range
    }
}

impl EpsMatrix {
    /// Substitutes ε := x, giving the n-th member of the family for x = 1/n.
    pub fn evaluate_at(&self, x: &Rational) -> ExactMatrix {
        self.map(|s| s.evaluate_at(x))
    }
}

impl<C: Scalar> Matrix<Jet<C>> {
    pub fn lift_constant(m: &Matrix<C>) -> Self {
        m.map(|x| Jet::constant(x.clone()))
    }

    /// `M₀ + t·Mt + s·Ms + ts·Mts`.
    pub fn from_blocks(c: &Matrix<C>, t: &Matrix<C>, s: &Matrix<C>, ts: &Matrix<C>) -> Self {
        Matrix::from_fn(c.dim(), |i, j| {
            Jet::new(
                c.get(i, j).clone(),
                t.get(i, j).clone(),
                s.get(i, j).clone(),
                ts.get(i, j).clone(),
            )
        })
    }

    /// The (constant, t, s, ts) component matrices.
    pub fn blocks(&self) -> [Matrix<C>; 4] {
        [
            self.map(|x| x.c.clone()),
            self.map(|x| x.t.clone()),
            self.map(|x| x.s.clone()),
            self.map(|x| x.ts.clone()),
        ]
    }
}

impl<S: Scalar> fmt::Display for Matrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, row) in self.data.chunks(self.dim.max(1)).enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            write!(f, "{}", cells.join(", "))?;
        }
        write!(f, "]")
    }
}
