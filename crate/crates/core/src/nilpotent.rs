//! Exponential, logarithm, inverse and powers on strictly upper triangular
//! carriers, plus limit extraction and jet derivatives.
//!
//! All series are finite: a strictly upper triangular `dim×dim` matrix `N`
//! satisfies `N^dim = 0`, so every formula below is an exact finite sum.
//! "Strictly upper" is required of the whole entry, in whatever ring the
//! entries live (ε-series, jets, polynomials).

use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::laurent::{EpsSeries, Laurent};
use crate::matrix::{ExactMatrix, JetMatrix, Matrix};
use crate::scalar::{factorial_inverse, frac, Rational, Scalar};

/// Smallest `k` with `N^k = 0`.
pub fn nil_index<S: Scalar>(n: &Matrix<S>) -> Result<usize> {
    if let Some((row, col)) = n.lower_violation() {
        return Err(Error::NotNilpotent { row, col });
    }
    let mut p = Matrix::identity(n.dim());
    for k in 0..=n.dim() {
        if p.is_zero() {
            return Ok(k);
        }
        p = &p * n;
    }
    Ok(n.dim())
}

pub fn mat_exp<S: Scalar>(n: &Matrix<S>) -> Result<Matrix<S>> {
    if let Some((row, col)) = n.lower_violation() {
        return Err(Error::NotNilpotent { row, col });
    }
    let dim = n.dim();
    let mut acc = Matrix::identity(dim);
    let mut p = Matrix::identity(dim);
    for k in 1..dim {
        p = &p * n;
        if p.is_zero() {
            break;
        }
        acc = &acc + &p.scaled(&factorial_inverse(k));
    }
    Ok(acc)
}

fn unipotent_part<S: Scalar>(u: &Matrix<S>) -> Result<Matrix<S>> {
    let x = u - &Matrix::identity(u.dim());
    match x.lower_violation() {
        Some((row, col)) => Err(Error::NotUnipotent { row, col }),
        None => Ok(x),
    }
}

pub fn is_unipotent<S: Scalar>(u: &Matrix<S>) -> bool {
    unipotent_part(u).is_ok()
}

pub fn mat_log<S: Scalar>(u: &Matrix<S>) -> Result<Matrix<S>> {
    let x = unipotent_part(u)?;
    let dim = u.dim();
    let mut acc = Matrix::zero(dim);
    let mut p = Matrix::identity(dim);
    for k in 1..dim {
        p = &p * &x;
        if p.is_zero() {
            break;
        }
        let sign = if k % 2 == 1 { 1 } else { -1 };
        acc = &acc + &p.scaled(&frac(sign, k as i64));
    }
    Ok(acc)
}

/// Neumann series `Σ (I−U)^k`.
pub fn unipotent_inverse<S: Scalar>(u: &Matrix<S>) -> Result<Matrix<S>> {
    let x = unipotent_part(u)?;
    let dim = u.dim();
    let y = -&x;
    let mut acc = Matrix::identity(dim);
    let mut p = Matrix::identity(dim);
    for _ in 1..dim {
        p = &p * &y;
        if p.is_zero() {
            break;
        }
        acc = &acc + &p;
    }
    Ok(acc)
}

/// Admissible ε-degree window `±(dim−1)·dim` for a carrier of this dimension.
pub fn degree_bound(dim: usize) -> i32 {
    ((dim.saturating_sub(1)) * dim) as i32
}

pub(crate) fn check_degrees<C: Scalar>(m: &Matrix<Laurent<C>>) -> Result<()> {
    let bound = degree_bound(m.dim());
    if let Some((lo, hi)) = m.degree_range() {
        let degree = if lo < -bound {
            lo
        } else if hi > bound {
            hi
        } else {
            return Ok(());
        };
        return Err(Error::DegreeOverflow {
            degree,
            bound,
            dim: m.dim(),
        });
    }
    Ok(())
}

/// `exp(λ·log U)` for an ε-series exponent λ: ε gives `U^{1/n}`, 1/ε gives `Uⁿ`.
pub fn unipotent_power<C: Scalar>(
    u: &Matrix<Laurent<C>>,
    exponent: &EpsSeries,
) -> Result<Matrix<Laurent<C>>> {
    if *exponent == EpsSeries::one() {
        unipotent_part(u)?;
        return Ok(u.clone());
    }
    let log = mat_log(u)?;
    let out = mat_exp(&log.times_scalar(&Laurent::lift(exponent)))?;
    check_degrees(&out)?;
    Ok(out)
}

/// ε⁰ coefficient, provided no negative power of ε survives.
pub fn laurent_limit<C: Scalar>(m: &Matrix<Laurent<C>>) -> Result<Matrix<C>> {
    let mut worst: Option<(i32, usize, usize, String)> = None;
    for (row, col, v) in m.entries() {
        if let Some((degree, c)) = v.divergent_term() {
            if worst.as_ref().is_none_or(|w| degree < w.0) {
                worst = Some((degree, row, col, c.to_string()));
            }
        }
    }
    if let Some((degree, row, col, coefficient)) = worst {
        return Err(Error::LimitDoesNotExist {
            degree,
            row,
            col,
            coefficient,
        });
    }
    Ok(m.coefficient(0))
}

fn jet_result_log(m: &JetMatrix, what: &str) -> Result<JetMatrix> {
    let [c, ..] = m.blocks();
    if !c.is_identity() {
        return Err(Error::TangentUndefined(format!(
            "{what} does not fix the identity"
        )));
    }
    mat_log(m).map_err(|e| Error::TangentUndefined(format!("{what}: {e}")))
}

/// ts-coefficient of `log f(exp(t·u), exp(s·v))`.
pub fn mixed_partial<F>(f: F, u: &ExactMatrix, v: &ExactMatrix) -> Result<ExactMatrix>
where
    F: Fn(&JetMatrix, &JetMatrix) -> Result<JetMatrix>,
{
    let tu = u.map(|x| {
        Jet::new(
            Rational::zero(),
            x.clone(),
            Rational::zero(),
            Rational::zero(),
        )
    });
    let sv = v.map(|x| {
        Jet::new(
            Rational::zero(),
            Rational::zero(),
            x.clone(),
            Rational::zero(),
        )
    });
    let a = mat_exp(&tu)?;
    let b = mat_exp(&sv)?;
    let out = f(&a, &b).map_err(|e| match e {
        Error::NotNilpotent { .. } | Error::NotUnipotent { .. } => {
            Error::TangentUndefined(e.to_string())
        }
        other => other,
    })?;
    let [_, _, _, ts] = jet_result_log(&out, "map")?.blocks();
    Ok(ts)
}

/// t-coefficient of `log f(exp(t·u))`.
pub fn first_order_jet<F>(f: F, u: &ExactMatrix) -> Result<ExactMatrix>
where
    F: Fn(&JetMatrix) -> Result<JetMatrix>,
{
    let tu = u.map(|x| {
        Jet::new(
            Rational::zero(),
            x.clone(),
            Rational::zero(),
            Rational::zero(),
        )
    });
    let out = f(&mat_exp(&tu)?).map_err(|e| match e {
        Error::NotNilpotent { .. } | Error::NotUnipotent { .. } => {
            Error::TangentUndefined(e.to_string())
        }
        other => other,
    })?;
    let [_, t, _, _] = jet_result_log(&out, "map")?.blocks();
    Ok(t)
}

/// Basis of the strictly upper triangular algebra, ordered by superdiagonal
/// level and then by row. For dim 3 this is E12, E23, E13.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UpperBasis {
    dim: usize,
    slots: Vec<(usize, usize)>,
}

impl UpperBasis {
    pub fn new(dim: usize) -> Self {
        let mut slots = Vec::new();
        for level in 1..dim {
            for i in 0..dim - level {
                slots.push((i, i + level));
            }
        }
        UpperBasis { dim, slots }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    pub fn slots(&self) -> &[(usize, usize)] {
        &self.slots
    }

    pub fn element<S: Scalar>(&self, k: usize) -> Matrix<S> {
        let (i, j) = self.slots[k];
        Matrix::unit(self.dim, i, j)
    }

    pub fn elements<S: Scalar>(&self) -> Vec<Matrix<S>> {
        (0..self.len()).map(|k| self.element(k)).collect()
    }

    pub fn coords<S: Scalar>(&self, m: &Matrix<S>) -> Vec<S> {
        self.slots
            .iter()
            .map(|&(i, j)| m.get(i, j).clone())
            .collect()
    }

    pub fn from_coords<S: Scalar>(&self, coords: &[S]) -> Matrix<S> {
        let mut m = Matrix::zero(self.dim);
        for (&(i, j), c) in self.slots.iter().zip(coords) {
            m.set(i, j, c.clone());
        }
        m
    }

    /// `exp(Σ cₖ Eₖ)`; for dim 3 this is the coordinate element ⟨a,b,c⟩.
    pub fn group_element<S: Scalar>(&self, coords: &[S]) -> Matrix<S> {
        mat_exp(&self.from_coords(coords)).expect("basis combinations are strictly upper")
    }

    /// Exponential coordinates of a unipotent element.
    pub fn group_coords<S: Scalar>(&self, u: &Matrix<S>) -> Result<Vec<S>> {
        Ok(self.coords(&mat_log(u)?))
    }
}

/// ⟨a,b,c⟩ := exp(aE12 + bE23 + cE13) in the 3×3 Heisenberg group.
pub fn heisenberg<S: Scalar>(a: S, b: S, c: S) -> Matrix<S> {
    UpperBasis::new(3).group_element(&[a, b, c])
}

pub fn heisenberg_q(a: Rational, b: Rational, c: Rational) -> ExactMatrix {
    heisenberg(a, b, c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::EpsSeries;
    use crate::matrix::EpsMatrix;
    use crate::scalar::{frac, int};

    fn e(i: usize, j: usize) -> ExactMatrix {
        ExactMatrix::unit(3, i - 1, j - 1)
    }

    #[test]
    fn exp_of_unit_is_one_term() {
        assert_eq!(
            mat_exp(&e(1, 2)).unwrap(),
            &ExactMatrix::identity(3) + &e(1, 2)
        );
        assert_eq!(
            mat_exp(&ExactMatrix::zero(3)).unwrap(),
            ExactMatrix::identity(3)
        );
    }

    #[test]
    fn exp_two_term_series() {
        // (E12+E23)² = E13, so exp = I + E12 + E23 + ½E13.
        let n = &e(1, 2) + &e(2, 3);
        let want =
            &(&(&ExactMatrix::identity(3) + &e(1, 2)) + &e(2, 3)) + &e(1, 3).scaled(&frac(1, 2));
        assert_eq!(mat_exp(&n).unwrap(), want);
    }

    #[test]
    fn log_two_term_series() {
        // X = E12+E23+E13, X² = E13, log = X − ½X².
        let u = &(&(&ExactMatrix::identity(3) + &e(1, 2)) + &e(2, 3)) + &e(1, 3);
        let want = &(&e(1, 2) + &e(2, 3)) + &e(1, 3).scaled(&frac(1, 2));
        assert_eq!(mat_log(&u).unwrap(), want);
        assert!(mat_log(&ExactMatrix::identity(3)).unwrap().is_zero());
    }

    #[test]
    fn rejects_non_nilpotent() {
        let bad = ExactMatrix::unit(3, 1, 0);
        assert_eq!(mat_exp(&bad), Err(Error::NotNilpotent { row: 1, col: 0 }));
        assert!(matches!(mat_log(&bad), Err(Error::NotUnipotent { .. })));
        assert!(matches!(
            unipotent_inverse(&bad),
            Err(Error::NotUnipotent { .. })
        ));
    }

    #[test]
    fn neumann_inverse() {
        let i = ExactMatrix::identity(3);
        assert_eq!(unipotent_inverse(&(&i + &e(1, 2))).unwrap(), &i - &e(1, 2));
        let u = &(&i + &e(1, 2)) + &e(1, 3);
        assert_eq!(unipotent_inverse(&u).unwrap(), &(&i - &e(1, 2)) - &e(1, 3));
        assert_eq!(unipotent_inverse(&i).unwrap(), i);
    }

    #[test]
    fn nil_index_values() {
        assert_eq!(nil_index(&ExactMatrix::zero(3)).unwrap(), 1);
        assert_eq!(nil_index(&e(1, 3)).unwrap(), 2);
        assert_eq!(nil_index(&(&e(1, 2) + &e(2, 3))).unwrap(), 3);
    }

    #[test]
    fn power_scales_logarithm() {
        let u = EpsMatrix::lift_constant(&(&ExactMatrix::identity(3) + &e(1, 3)));
        let p = unipotent_power(&u, &EpsSeries::inv_eps()).unwrap();
        let mut want = EpsMatrix::identity(3);
        want.set(0, 2, EpsSeries::inv_eps());
        assert_eq!(p, want);
    }

    #[test]
    fn power_exponents_cancel() {
        let n = EpsMatrix::lift_constant(&(&e(1, 2) + &e(2, 3))).times_scalar(&EpsSeries::eps());
        let u = mat_exp(&n).unwrap();
        let p = unipotent_power(&u, &EpsSeries::inv_eps()).unwrap();
        assert_eq!(
            p,
            EpsMatrix::lift_constant(&mat_exp(&(&e(1, 2) + &e(2, 3))).unwrap())
        );
        assert_eq!(unipotent_power(&u, &EpsSeries::one()).unwrap(), u);
    }

    #[test]
    fn degree_overflow_is_an_error() {
        let mut u = EpsMatrix::identity(2);
        u.set(0, 1, EpsSeries::inv_eps());
        let huge = EpsSeries::monomial(-5, int(1));
        assert!(matches!(
            unipotent_power(&u, &huge),
            Err(Error::DegreeOverflow { bound: 2, .. })
        ));
    }

    #[test]
    fn limits() {
        let mut m = EpsMatrix::identity(3);
        m.set(0, 1, EpsSeries::eps());
        assert_eq!(laurent_limit(&m).unwrap(), ExactMatrix::identity(3));

        // exp((E12+E23) + (ε/2)E13) → I + E12 + E23 + ½E13.
        let mut n = EpsMatrix::lift_constant(&(&e(1, 2) + &e(2, 3)));
        n.set(0, 2, EpsSeries::eps().scaled(&frac(1, 2)));
        let lim = laurent_limit(&mat_exp(&n).unwrap()).unwrap();
        assert_eq!(lim, mat_exp(&(&e(1, 2) + &e(2, 3))).unwrap());

        let mut bad = EpsMatrix::identity(3);
        bad.set(0, 2, EpsSeries::inv_eps());
        assert_eq!(
            laurent_limit(&bad),
            Err(Error::LimitDoesNotExist {
                degree: -1,
                row: 0,
                col: 2,
                coefficient: "1".into()
            })
        );
    }

    #[test]
    fn mixed_partials() {
        let prod = mixed_partial(|a, b| Ok(a * b), &e(1, 2), &e(2, 3)).unwrap();
        assert_eq!(prod, e(1, 3).scaled(&frac(1, 2)));

        let comm = mixed_partial(
            |a, b| {
                let ai = unipotent_inverse(a)?;
                let bi = unipotent_inverse(b)?;
                Ok(&(&(a * b) * &ai) * &bi)
            },
            &e(1, 2),
            &e(2, 3),
        )
        .unwrap();
        assert_eq!(comm, e(1, 3));

        let second = mixed_partial(|_, b| Ok(b.clone()), &e(1, 2), &e(2, 3)).unwrap();
        assert!(second.is_zero());
    }

    #[test]
    fn mixed_partial_rejects_non_unipotent_output() {
        let r = mixed_partial(
            |a, _| Ok(&(a + a) - &JetMatrix::identity(3).scaled(&int(0))),
            &e(1, 2),
            &e(2, 3),
        );
        assert!(matches!(r, Err(Error::TangentUndefined(_))));
    }

    #[test]
    fn upper_basis_order() {
        let b = UpperBasis::new(3);
        assert_eq!(b.slots(), &[(0, 1), (1, 2), (0, 2)]);
        assert_eq!(UpperBasis::new(4).len(), 6);
        assert!(UpperBasis::new(1).is_empty());
        let h = heisenberg_q(int(1), int(1), int(0));
        assert_eq!(h, mat_exp(&(&e(1, 2) + &e(2, 3))).unwrap());
        assert_eq!(b.group_coords(&h).unwrap(), vec![int(1), int(1), int(0)]);
    }
}
