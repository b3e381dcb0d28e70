//! Finite-dimensional Lie algebras given by structure constants, linear and
//! bilinear maps on coordinate vectors, ε-linear map pairs, and exact
//! Gaussian elimination for derivation spaces.

use rand::Rng;

use crate::error::{Error, Result};
use crate::laurent::EpsSeries;
use crate::matrix::{ExactMatrix, Matrix};
use crate::nilpotent::UpperBasis;
use crate::scalar::{int, Rational, Scalar};

/// `B[i][j]` is the coefficient of `eᵢ` in `B(eⱼ)`.
pub type LinearMap = ExactMatrix;

pub fn vzero<S: Scalar>(n: usize) -> Vec<S> {
    vec![S::zero(); n]
}

pub fn vadd<S: Scalar>(a: &[S], b: &[S]) -> Vec<S> {
    a.iter().zip(b).map(|(x, y)| x.plus(y)).collect()
}

pub fn vsub<S: Scalar>(a: &[S], b: &[S]) -> Vec<S> {
    a.iter().zip(b).map(|(x, y)| x.minus(y)).collect()
}

pub fn vscale<S: Scalar>(a: &[S], c: &S) -> Vec<S> {
    a.iter().map(|x| x.times(c)).collect()
}

pub fn unit_vector<S: Scalar>(n: usize, k: usize) -> Vec<S> {
    let mut v = vzero(n);
    v[k] = S::one();
    v
}

pub fn lift_vec<S: Scalar>(v: &[Rational]) -> Vec<S> {
    v.iter().map(S::from_rational).collect()
}

/// Applies a rational linear map to a vector over any coefficient ring.
pub fn apply_linear<S: Scalar>(m: &LinearMap, v: &[S]) -> Vec<S> {
    assert_eq!(m.dim(), v.len(), "vector length mismatch");
    (0..m.dim())
        .map(|i| {
            let mut acc = S::zero();
            for (j, x) in v.iter().enumerate() {
                let a = m.get(i, j);
                if !Scalar::is_zero(a) && !x.is_zero() {
                    acc = acc.plus(&x.scaled(a));
                }
            }
            acc
        })
        .collect()
}

/// A bilinear map `f(eᵢ, eⱼ) = Σₖ t[i][j][k] eₖ`.
#[derive(Clone, Debug, PartialEq)]
pub struct Bilinear {
    n: usize,
    t: Vec<Rational>,
}

impl Bilinear {
    pub fn zero(n: usize) -> Self {
        Bilinear {
            n,
            t: vec![Rational::zero(); n * n * n],
        }
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Vec<Rational>) -> Self {
        let mut b = Bilinear::zero(n);
        for i in 0..n {
            for j in 0..n {
                let v = f(i, j);
                for (k, c) in v.into_iter().enumerate() {
                    b.set(i, j, k, c);
                }
            }
        }
        b
    }

    /// Rank-3 nested array `[i][j][k]`.
    pub fn from_nested(t: Vec<Vec<Vec<Rational>>>) -> Result<Self> {
        let n = t.len();
        let mut b = Bilinear::zero(n);
        for (i, row) in t.into_iter().enumerate() {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: row.len(),
                });
            }
            for (j, col) in row.into_iter().enumerate() {
                if col.len() != n {
                    return Err(Error::DimensionMismatch {
                        expected: n,
                        found: col.len(),
                    });
                }
                for (k, c) in col.into_iter().enumerate() {
                    b.set(i, j, k, c);
                }
            }
        }
        Ok(b)
    }

    pub fn to_nested(&self) -> Vec<Vec<Vec<Rational>>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.on_basis(i, j).to_vec()).collect())
            .collect()
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> &Rational {
        &self.t[(i * self.n + j) * self.n + k]
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, c: Rational) {
        let n = self.n;
        self.t[(i * n + j) * n + k] = c;
    }

    pub fn on_basis(&self, i: usize, j: usize) -> &[Rational] {
        let start = (i * self.n + j) * self.n;
        &self.t[start..start + self.n]
    }

    pub fn apply<S: Scalar>(&self, u: &[S], v: &[S]) -> Vec<S> {
        let n = self.n;
        let mut out = vzero::<S>(n);
        for (i, ui) in u.iter().enumerate() {
            if ui.is_zero() {
                continue;
            }
            for (j, vj) in v.iter().enumerate() {
                if vj.is_zero() {
                    continue;
                }
                let uv = ui.times(vj);
                for (k, o) in out.iter_mut().enumerate() {
                    let c = self.get(i, j, k);
                    if !Scalar::is_zero(c) {
                        *o = o.plus(&uv.scaled(c));
                    }
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.t.iter().all(Scalar::is_zero)
    }
}

/// A Lie algebra on `kⁿ` with bracket given by structure constants.
#[derive(Clone, Debug, PartialEq)]
pub struct LieAlgebra {
    structure: Bilinear,
}

impl LieAlgebra {
    pub fn new(structure: Bilinear) -> Self {
        LieAlgebra { structure }
    }

    pub fn abelian(n: usize) -> Self {
        LieAlgebra::new(Bilinear::zero(n))
    }

    /// Structure constants from `(i, j, k, c)` meaning `[eᵢ, eⱼ] ∋ c·eₖ`;
    /// the antisymmetric partner is filled in.
    pub fn from_brackets(n: usize, rules: &[(usize, usize, usize, i64)]) -> Self {
        let mut b = Bilinear::zero(n);
        for &(i, j, k, c) in rules {
            let old = b.get(i, j, k).clone();
            b.set(i, j, k, old + int(c));
            let old = b.get(j, i, k).clone();
            b.set(j, i, k, old - int(c));
        }
        LieAlgebra::new(b)
    }

    /// Strictly upper triangular `dim×dim` matrices with the commutator,
    /// in the [`UpperBasis`] order.
    pub fn strictly_upper(dim: usize) -> Self {
        let basis = UpperBasis::new(dim);
        let elems: Vec<ExactMatrix> = basis.elements();
        let n = elems.len();
        LieAlgebra::new(Bilinear::from_fn(n, |i, j| {
            basis.coords(&elems[i].commutator(&elems[j]))
        }))
    }

    /// The 3-dimensional Heisenberg algebra, basis E12, E23, E13.
    pub fn heisenberg() -> Self {
        Self::strictly_upper(3)
    }

    pub fn dim(&self) -> usize {
        self.structure.dim()
    }

    pub fn structure(&self) -> &Bilinear {
        &self.structure
    }

    pub fn bracket<S: Scalar>(&self, u: &[S], v: &[S]) -> Vec<S> {
        self.structure.apply(u, v)
    }

    pub fn basis(&self) -> Vec<Vec<Rational>> {
        (0..self.dim())
            .map(|k| unit_vector(self.dim(), k))
            .collect()
    }

    /// `ad_y` as a linear map.
    pub fn ad(&self, y: &[Rational]) -> LinearMap {
        let n = self.dim();
        let cols: Vec<Vec<Rational>> = self.basis().iter().map(|e| self.bracket(y, e)).collect();
        Matrix::from_fn(n, |i, j| cols[j][i].clone())
    }

    /// First basis pair violating antisymmetry, if any.
    pub fn antisymmetry_violation(&self) -> Option<(usize, usize)> {
        let n = self.dim();
        for i in 0..n {
            for j in i..n {
                let a = self.structure.on_basis(i, j);
                let b = self.structure.on_basis(j, i);
                if a.iter().zip(b).any(|(x, y)| !Scalar::is_zero(&(x + y))) {
                    return Some((i, j));
                }
            }
        }
        None
    }

    /// First basis triple violating the Jacobi identity, if any.
    pub fn jacobi_violation(&self) -> Option<(usize, usize, usize)> {
        let e = self.basis();
        let n = self.dim();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let t1 = self.bracket(&e[i], &self.bracket(&e[j], &e[k]));
                    let t2 = self.bracket(&e[j], &self.bracket(&e[k], &e[i]));
                    let t3 = self.bracket(&e[k], &self.bracket(&e[i], &e[j]));
                    if vadd(&vadd(&t1, &t2), &t3)
                        .iter()
                        .any(|x| !Scalar::is_zero(x))
                    {
                        return Some((i, j, k));
                    }
                }
            }
        }
        None
    }

    /// First basis pair on which `D[u,v] = [Du,v] + [u,Dv]` fails.
    pub fn derivation_violation(&self, d: &LinearMap) -> Option<(usize, usize)> {
        let e = self.basis();
        let n = self.dim();
        for i in 0..n {
            for j in 0..n {
                let lhs = apply_linear(d, &self.bracket(&e[i], &e[j]));
                let rhs = vadd(
                    &self.bracket(&apply_linear(d, &e[i]), &e[j]),
                    &self.bracket(&e[i], &apply_linear(d, &e[j])),
                );
                if lhs != rhs {
                    return Some((i, j));
                }
            }
        }
        None
    }

    /// A basis of the derivation algebra, from the exact nullspace of the
    /// Leibniz equations in the n² entries of D.
    pub fn derivation_basis(&self) -> Vec<LinearMap> {
        let n = self.dim();
        let var = |a: usize, b: usize| a * n + b; // coefficient of e_a in D e_b
        let mut rows = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let mut row = vec![Rational::zero(); n * n];
                    for l in 0..n {
                        let c = self.structure.get(i, j, l);
                        if !Scalar::is_zero(c) {
                            row[var(k, l)] += c;
                        }
                    }
                    for a in 0..n {
                        let c = self.structure.get(a, j, k);
                        if !Scalar::is_zero(c) {
                            row[var(a, i)] -= c;
                        }
                        let c = self.structure.get(i, a, k);
                        if !Scalar::is_zero(c) {
                            row[var(a, j)] -= c;
                        }
                    }
                    if row.iter().any(|x| !Scalar::is_zero(x)) {
                        rows.push(row);
                    }
                }
            }
        }
        nullspace(&rows, n * n)
            .into_iter()
            .map(|v| Matrix::from_fn(n, |a, b| v[var(a, b)].clone()))
            .collect()
    }

    /// Same algebra in the basis `fᵢ = Σₖ P[k][i] eₖ`; `p` must be invertible.
    pub fn change_basis(&self, p: &ExactMatrix) -> Result<Self> {
        let n = self.dim();
        let pinv = inverse(p)?;
        let cols: Vec<Vec<Rational>> = (0..n)
            .map(|i| (0..n).map(|k| p.get(k, i).clone()).collect())
            .collect();
        Ok(LieAlgebra::new(Bilinear::from_fn(n, |i, j| {
            pinv.apply(&self.bracket(&cols[i], &cols[j]))
        })))
    }
}

/// ε-dependent linear maps `(ℒ, ℋ)` on an algebra, with ℒℋ = id.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearPair {
    pub lower: Matrix<EpsSeries>,
    pub raise: Matrix<EpsSeries>,
}

/// `ℒ = λ·id`, `ℋ = μ·id`.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalarPair {
    pub lower_scale: EpsSeries,
    pub raise_scale: EpsSeries,
}

impl Default for ScalarPair {
    fn default() -> Self {
        ScalarPair {
            lower_scale: EpsSeries::eps(),
            raise_scale: EpsSeries::inv_eps(),
        }
    }
}

impl ScalarPair {
    pub fn new(lower_scale: EpsSeries, raise_scale: EpsSeries) -> Self {
        ScalarPair {
            lower_scale,
            raise_scale,
        }
    }

    pub fn identity() -> Self {
        ScalarPair::new(EpsSeries::one(), EpsSeries::one())
    }

    pub fn is_inverse_pair(&self) -> bool {
        self.lower_scale.times(&self.raise_scale) == EpsSeries::one()
    }

    pub fn to_linear(&self, n: usize) -> LinearPair {
        let id = Matrix::<EpsSeries>::identity(n);
        LinearPair {
            lower: id.times_scalar(&self.lower_scale),
            raise: id.times_scalar(&self.raise_scale),
        }
    }
}

impl LinearPair {
    pub fn dim(&self) -> usize {
        self.lower.dim()
    }

    pub fn lower(&self, v: &[EpsSeries]) -> Vec<EpsSeries> {
        self.lower.apply(v)
    }

    pub fn raise(&self, v: &[EpsSeries]) -> Vec<EpsSeries> {
        self.raise.apply(v)
    }

    pub fn lower_exact(&self, v: &[Rational]) -> Vec<EpsSeries> {
        self.lower(&lift_vec::<EpsSeries>(v))
    }

    pub fn is_inverse_pair(&self) -> bool {
        (&self.lower * &self.raise).is_identity()
    }

    /// `lim ℋ([ℒu, ℒv])`.
    pub fn limit_bracket(
        &self,
        g: &LieAlgebra,
        u: &[Rational],
        v: &[Rational],
    ) -> Result<Vec<Rational>> {
        let b = g.bracket(&self.lower_exact(u), &self.lower_exact(v));
        lim_vec(&self.raise(&b))
    }
}

/// ε⁰ coefficients of a vector of series, failing on any surviving negative power.
pub fn lim_vec(v: &[EpsSeries]) -> Result<Vec<Rational>> {
    v.iter()
        .enumerate()
        .map(|(k, s)| match s.divergent_term() {
            Some((degree, c)) => Err(Error::LimitDoesNotExist {
                degree,
                row: k,
                col: 0,
                coefficient: c.to_string(),
            }),
            None => Ok(s.coeff(0)),
        })
        .collect()
}

/// The Lie-level action `u ↦ γ_u`.
#[derive(Clone, Debug, PartialEq)]
pub enum LieAction {
    Adjoint,
    Trivial,
    Explicit(Bilinear),
}

impl LieAction {
    pub fn act<S: Scalar>(&self, g: &LieAlgebra, u: &[S], v: &[S]) -> Vec<S> {
        match self {
            LieAction::Adjoint => g.bracket(u, v),
            LieAction::Trivial => vzero(v.len()),
            LieAction::Explicit(t) => t.apply(u, v),
        }
    }

    pub fn tensor(&self, g: &LieAlgebra) -> Bilinear {
        match self {
            LieAction::Adjoint => g.structure().clone(),
            LieAction::Trivial => Bilinear::zero(g.dim()),
            LieAction::Explicit(t) => t.clone(),
        }
    }

    /// First basis triple `(u, v, w)` with `γ_u[v,w] ≠ [γ_u v, w] + [v, γ_u w]`.
    pub fn derivation_violation(&self, g: &LieAlgebra) -> Option<(usize, usize, usize)> {
        let e = g.basis();
        let n = g.dim();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let lhs = self.act(g, &e[i], &g.bracket(&e[j], &e[k]));
                    let rhs = vadd(
                        &g.bracket(&self.act(g, &e[i], &e[j]), &e[k]),
                        &g.bracket(&e[j], &self.act(g, &e[i], &e[k])),
                    );
                    if lhs != rhs {
                        return Some((i, j, k));
                    }
                }
            }
        }
        None
    }
}

/// Reduced row echelon form in place; returns pivot columns.
pub fn rref(rows: &mut [Vec<Rational>], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !Scalar::is_zero(&rows[i][c])) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows.len() {
            if i != r && !Scalar::is_zero(&rows[i][c]) {
                let f = rows[i][c].clone();
                for k in 0..rows[r].len() {
                    let d = &rows[r][k] * &f;
                    rows[i][k] -= d;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Basis of `{x : Ax = 0}`.
pub fn nullspace(rows: &[Vec<Rational>], ncols: usize) -> Vec<Vec<Rational>> {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); ncols];
            v[f] = Rational::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -m[r][f].clone();
            }
            v
        })
        .collect()
}

pub fn inverse(m: &ExactMatrix) -> Result<ExactMatrix> {
    let n = m.dim();
    let mut rows: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            let mut r: Vec<Rational> = (0..n).map(|j| m.get(i, j).clone()).collect();
            r.extend(unit_vector::<Rational>(n, i));
            r
        })
        .collect();
    let pivots = rref(&mut rows, n);
    if pivots.len() < n {
        return Err(Error::Precondition("matrix is singular".into()));
    }
    Ok(Matrix::from_fn(n, |i, j| rows[i][n + j].clone()))
}

/// Named Lie algebras of dimension ≤ 4 used as seeds for random fixtures.
pub fn catalogue() -> Vec<(&'static str, LieAlgebra)> {
    vec![
        ("abelian-1", LieAlgebra::abelian(1)),
        ("abelian-2", LieAlgebra::abelian(2)),
        ("r2", LieAlgebra::from_brackets(2, &[(0, 1, 0, 1)])),
        ("abelian-3", LieAlgebra::abelian(3)),
        ("heisenberg", LieAlgebra::heisenberg()),
        ("r2+R", LieAlgebra::from_brackets(3, &[(0, 1, 0, 1)])),
        (
            "sl2",
            LieAlgebra::from_brackets(3, &[(0, 1, 1, 2), (0, 2, 2, -2), (1, 2, 0, 1)]),
        ),
        (
            "r3",
            LieAlgebra::from_brackets(3, &[(2, 0, 0, 1), (2, 1, 1, 1)]),
        ),
        (
            "r3-lambda",
            LieAlgebra::from_brackets(3, &[(2, 0, 0, 1), (2, 1, 1, -2)]),
        ),
        (
            "heisenberg+R",
            LieAlgebra::from_brackets(4, &[(0, 1, 2, 1)]),
        ),
        (
            "r2+r2",
            LieAlgebra::from_brackets(4, &[(0, 1, 0, 1), (2, 3, 2, 1)]),
        ),
        (
            "gl2",
            LieAlgebra::from_brackets(4, &[(0, 1, 1, 2), (0, 2, 2, -2), (1, 2, 0, 1)]),
        ),
        (
            "filiform-4",
            LieAlgebra::from_brackets(4, &[(0, 1, 2, 1), (0, 2, 3, 1)]),
        ),
    ]
}

fn random_invertible<R: Rng>(rng: &mut R, n: usize) -> ExactMatrix {
    loop {
        let m = Matrix::from_fn(n, |_, _| int(rng.random_range(-2..=2)));
        if inverse(&m).is_ok() {
            return m;
        }
    }
}

/// A catalogue algebra of dimension ≤ `max_dim` in a random rational basis.
pub fn random_lie_algebra<R: Rng>(rng: &mut R, max_dim: usize) -> (String, LieAlgebra) {
    let pool: Vec<_> = catalogue()
        .into_iter()
        .filter(|(_, g)| g.dim() <= max_dim)
        .collect();
    let (name, g) = pool[rng.random_range(0..pool.len())].clone();
    let p = random_invertible(rng, g.dim());
    let h = g
        .change_basis(&p)
        .expect("random basis change is invertible");
    (name.to_string(), h)
}

/// A random integer combination of a derivation basis (coefficients in −3..=3).
pub fn random_derivation<R: Rng>(rng: &mut R, g: &LieAlgebra) -> LinearMap {
    let basis = g.derivation_basis();
    let mut d = LinearMap::zero(g.dim());
    for b in &basis {
        d = &d + &b.scaled(&int(rng.random_range(-3..=3)));
    }
    d
}
