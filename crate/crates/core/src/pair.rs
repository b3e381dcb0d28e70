//! Map pairs `(𝔏, 𝔥)` as ε-families, transported multiplication and the
//! checks that go with it.
//!
//! A pair acts on unipotent ε-matrices by `a ↦ exp(λ·log a)`, so the power
//! pair `(a^{1/n}, aⁿ)` is `(λ, μ) = (ε, 1/ε)` and the identity pair is
//! `(1, 1)`. Every `lim_{n→∞}` below is [`laurent_limit`] of one exact
//! ε-expansion, which evaluates the diagonal limit with the same n in
//! every slot.

use serde::{Deserialize, Serialize};

use crate::check::{compare, run_cases, witness, CheckResult};
use crate::error::Result;
use crate::laurent::{EpsSeries, Laurent};
use crate::lie::ScalarPair;
use crate::matrix::Matrix;
use crate::nilpotent::{laurent_limit, unipotent_inverse, unipotent_power};
use crate::sample::Triple;
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PairKind {
    Identity,
    Power,
    Custom,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MapPair {
    pub kind: PairKind,
    pub lower_scale: EpsSeries,
    pub raise_scale: EpsSeries,
}

/// ε-lift of an exact matrix.
pub fn lift<C: Scalar>(a: &Matrix<C>) -> Matrix<Laurent<C>> {
    Matrix::<Laurent<C>>::lift_constant(a)
}

impl MapPair {
    /// `𝔏(a) = a^{1/n}`, `𝔥(a) = aⁿ`.
    pub fn power() -> Self {
        MapPair {
            kind: PairKind::Power,
            lower_scale: EpsSeries::eps(),
            raise_scale: EpsSeries::inv_eps(),
        }
    }

    pub fn identity() -> Self {
        MapPair {
            kind: PairKind::Identity,
            lower_scale: EpsSeries::one(),
            raise_scale: EpsSeries::one(),
        }
    }

    /// `𝔏(a) = exp(λ log a)`, `𝔥(a) = exp(μ log a)`; not required to be inverse.
    pub fn custom(lower_scale: EpsSeries, raise_scale: EpsSeries) -> Self {
        MapPair {
            kind: PairKind::Custom,
            lower_scale,
            raise_scale,
        }
    }

    pub fn lower<C: Scalar>(&self, a: &Matrix<Laurent<C>>) -> Result<Matrix<Laurent<C>>> {
        unipotent_power(a, &self.lower_scale)
    }

    pub fn raise<C: Scalar>(&self, a: &Matrix<Laurent<C>>) -> Result<Matrix<Laurent<C>>> {
        unipotent_power(a, &self.raise_scale)
    }

    pub fn lower_exact<C: Scalar>(&self, a: &Matrix<C>) -> Result<Matrix<Laurent<C>>> {
        self.lower(&lift(a))
    }

    /// `lim 𝔥(x)`.
    pub fn raise_limit<C: Scalar>(&self, x: &Matrix<Laurent<C>>) -> Result<Matrix<C>> {
        laurent_limit(&self.raise(x)?)
    }

    /// `lim 𝔏(a) = e` for every `a` (the weight-zero situation).
    pub fn lowers_to_identity(&self) -> bool {
        self.lower_scale.min_degree().is_some_and(|d| d > 0)
    }

    /// The Lie-level pair: the derivative of `exp(λ·log ·)` at `e` is `λ·id`.
    pub fn tangent(&self) -> ScalarPair {
        ScalarPair::new(self.lower_scale.clone(), self.raise_scale.clone())
    }
}

/// Right-action-free group actions `Γ: G → Aut(G)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GroupAction {
    Conjugation,
    Trivial,
}

impl GroupAction {
    /// `Γ_g(x)`.
    pub fn act<S: Scalar>(&self, g: &Matrix<S>, x: &Matrix<S>) -> Result<Matrix<S>> {
        match self {
            GroupAction::Conjugation => Ok(&(g * x) * &unipotent_inverse(g)?),
            GroupAction::Trivial => Ok(x.clone()),
        }
    }
}

/// `a ·∞ b = lim 𝔥(𝔏(a)·𝔏(b))`.
pub fn transported_mul<C: Scalar>(p: &MapPair, a: &Matrix<C>, b: &Matrix<C>) -> Result<Matrix<C>> {
    let x = &p.lower_exact(a)? * &p.lower_exact(b)?;
    p.raise_limit(&x)
}

/// `lim 𝔥(e)`.
pub fn transported_unit<C: Scalar>(p: &MapPair, dim: usize) -> Result<Matrix<C>> {
    p.raise_limit(&Matrix::identity(dim))
}

/// `lim 𝔥(𝔏(a)⁻¹)`.
pub fn transported_inverse<C: Scalar>(p: &MapPair, a: &Matrix<C>) -> Result<Matrix<C>> {
    p.raise_limit(&unipotent_inverse(&p.lower_exact(a)?)?)
}

/// `Γ_a b = lim 𝔥(a·𝔏(b)·a⁻¹)`.
pub fn transported_conjugation<C: Scalar>(
    p: &MapPair,
    a: &Matrix<C>,
    b: &Matrix<C>,
) -> Result<Matrix<C>> {
    let x = GroupAction::Conjugation.act(&lift(a), &p.lower_exact(b)?)?;
    p.raise_limit(&x)
}

/// `lim 𝔥(𝔏(a)𝔏(b)𝔏(a)⁻¹𝔏(b)⁻¹)`.
pub fn limit_commutator<C: Scalar>(p: &MapPair, a: &Matrix<C>, b: &Matrix<C>) -> Result<Matrix<C>> {
    let la = p.lower_exact(a)?;
    let lb = p.lower_exact(b)?;
    let x = &(&(&la * &lb) * &unipotent_inverse(&la)?) * &unipotent_inverse(&lb)?;
    p.raise_limit(&x)
}

/// `𝔏𝔥 = id` on every sample.
pub fn check_pair_identity<C: Scalar>(p: &MapPair, samples: &[Matrix<C>]) -> CheckResult {
    if samples.is_empty() {
        return CheckResult::error("pair-identity", "no samples");
    }
    run_cases("pair-identity", samples, |a| {
        let a_eps = lift(a);
        let back = p.lower(&p.raise(&a_eps)?)?;
        Ok(compare(&back, &a_eps, &[]).map(|_| {
            let mut w = witness(&[("a", a)]);
            w.extend(witness(&[("lower(raise(a))", &back)]));
            w
        }))
    })
}

/// Associativity on triples, two-sided unit `lim 𝔥(e)`, two-sided inverse `lim 𝔥(𝔏(a)⁻¹)`.
pub fn check_transported_semigroup<C: Scalar>(p: &MapPair, triples: &[Triple<C>]) -> CheckResult {
    let assoc = run_cases("associativity", triples, |[a, b, c]| {
        let lhs = transported_mul(p, &transported_mul(p, a, b)?, c)?;
        let rhs = transported_mul(p, a, &transported_mul(p, b, c)?)?;
        Ok(compare(&lhs, &rhs, &[("a", a), ("b", b), ("c", c)]))
    });
    let unit = run_cases("unit", triples, |[a, ..]| {
        let e: Matrix<C> = transported_unit(p, a.dim())?;
        let l = transported_mul(p, &e, a)?;
        let r = transported_mul(p, a, &e)?;
        Ok(compare(&l, a, &[("a", a), ("unit", &e)]).or(compare(&r, a, &[("a", a), ("unit", &e)])))
    });
    let inverse = run_cases("inverse", triples, |[a, ..]| {
        let e: Matrix<C> = transported_unit(p, a.dim())?;
        let ai = transported_inverse(p, a)?;
        let l = transported_mul(p, &ai, a)?;
        let r = transported_mul(p, a, &ai)?;
        Ok(compare(&l, &e, &[("a", a), ("inverse", &ai)]).or(compare(
            &r,
            &e,
            &[("a", a), ("inverse", &ai)],
        )))
    });
    CheckResult::group("transported-semigroup", vec![assoc, unit, inverse])
}

/// `a ·∞ b = b ·∞ a`, and the limit commutator is `e`.
pub fn is_limit_abelian<C: Scalar>(p: &MapPair, triples: &[Triple<C>]) -> CheckResult {
    let comm = run_cases("commutative", triples, |[a, b, _]| {
        let ab = transported_mul(p, a, b)?;
        let ba = transported_mul(p, b, a)?;
        Ok(compare(&ab, &ba, &[("a", a), ("b", b)]))
    });
    let commutator = run_cases("limit-commutator", triples, |[a, b, _]| {
        let k = limit_commutator(p, a, b)?;
        Ok(compare(
            &k,
            &Matrix::identity(a.dim()),
            &[("a", a), ("b", b)],
        ))
    });
    CheckResult::group("limit-abelian", vec![comm, commutator])
}

/// `lim 𝔥(𝔏(a(ε))·𝔏(b(ε))) = lim a(ε) ·∞ lim b(ε)`.
pub fn check_synchronized<C: Scalar>(
    p: &MapPair,
    families: &[(Matrix<Laurent<C>>, Matrix<Laurent<C>>)],
) -> CheckResult {
    run_cases("synchronized-limit", families, |(a, b)| {
        let a0 = laurent_limit(a)?;
        let b0 = laurent_limit(b)?;
        let diagonal = p.raise_limit(&(&p.lower(a)? * &p.lower(b)?))?;
        let iterated = transported_mul(p, &a0, &b0)?;
        Ok(compare(
            &diagonal,
            &iterated,
            &[("lim a", &a0), ("lim b", &b0)],
        ))
    })
}

/// Γ is an action by automorphisms of `(G, ·∞)`:
/// `Γ_a(b ·∞ c) = Γ_a b ·∞ Γ_a c` and `Γ_{ab} = Γ_a ∘ Γ_b`.
pub fn check_transported_action<C: Scalar>(p: &MapPair, triples: &[Triple<C>]) -> CheckResult {
    let auto = run_cases("automorphism", triples, |[a, b, c]| {
        let lhs = transported_conjugation(p, a, &transported_mul(p, b, c)?)?;
        let rhs = transported_mul(
            p,
            &transported_conjugation(p, a, b)?,
            &transported_conjugation(p, a, c)?,
        )?;
        Ok(compare(&lhs, &rhs, &[("a", a), ("b", b), ("c", c)]))
    });
    let hom = run_cases("action", triples, |[a, b, c]| {
        let lhs = transported_conjugation(p, &(a * b), c)?;
        let rhs = transported_conjugation(p, a, &transported_conjugation(p, b, c)?)?;
        Ok(compare(&lhs, &rhs, &[("a", a), ("b", b), ("c", c)]))
    });
    CheckResult::group("transported-action", vec![auto, hom])
}
