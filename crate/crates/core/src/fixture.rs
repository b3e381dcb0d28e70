//! Structure fixtures: a carrier, a map pair, an action and an operator.

use crate::error::{Error, Result};
use crate::lie::{apply_linear, LieAction, LieAlgebra, LinearMap, LinearPair, ScalarPair};
use crate::matrix::Matrix;
use crate::nilpotent::{mat_exp, mat_log, unipotent_inverse, UpperBasis};
use crate::novikov::{novikov_group_mul, NovikovMul};
use crate::pair::{GroupAction, MapPair};
use crate::scalar::{frac, int, Scalar};

/// Operators `G → G` on a unipotent carrier.
#[derive(Clone, Debug, PartialEq)]
pub enum GroupOperator {
    /// `a ↦ e`.
    Trivial,
    /// `a ↦ a`.
    Identity,
    /// `a ↦ a⁻¹`.
    Inverse,
    /// For `G = HK` with `K = {I + yE_{k−1,k}}` and `H = {g : g_{k−1,k} = 0}`,
    /// `hk ↦ k⁻¹`.
    SplitInverse,
    /// `exp(u) ↦ exp(Bu + ½B[u, Bu])` for a linear `B` on the algebra.
    ExpConjugateLinear(LinearMap),
    /// `exp(u) ↦ exp(Du + ½[u, Du])` for a linear `D` on the algebra.
    ExpDerivation(LinearMap),
    /// `a ↦ e ⊙ a` for a group-level Novikov product.
    FromNovikov(Box<NovikovMul>),
}

impl GroupOperator {
    pub fn apply<C: Scalar>(&self, dim: usize, a: &Matrix<C>) -> Result<Matrix<C>> {
        if a.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: a.dim(),
            });
        }
        match self {
            GroupOperator::Trivial => Ok(Matrix::identity(dim)),
            GroupOperator::Identity => Ok(a.clone()),
            GroupOperator::Inverse => unipotent_inverse(a),
            GroupOperator::SplitInverse => {
                unipotent_inverse(a)?;
                let mut k = Matrix::identity(dim);
                if dim >= 2 {
                    k.set(dim - 2, dim - 1, a.get(dim - 2, dim - 1).negated());
                }
                Ok(k)
            }
            GroupOperator::ExpConjugateLinear(b) => {
                let basis = UpperBasis::new(dim);
                let lin = |m: &Matrix<C>| basis.from_coords(&apply_linear(b, &basis.coords(m)));
                let u = mat_log(a)?;
                let bu = lin(&u);
                let quad = lin(&u.commutator(&bu)).scaled(&frac(1, 2));
                mat_exp(&(&bu + &quad))
            }
            GroupOperator::ExpDerivation(d) => {
                let basis = UpperBasis::new(dim);
                let u = mat_log(a)?;
                let du = basis.from_coords(&apply_linear(d, &basis.coords(&u)));
                let quad = u.commutator(&du).scaled(&frac(1, 2));
                mat_exp(&(&du + &quad))
            }
            GroupOperator::FromNovikov(n) => novikov_group_mul(n, &Matrix::identity(dim), a),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            GroupOperator::Trivial => "trivial".into(),
            GroupOperator::Identity => "identity".into(),
            GroupOperator::Inverse => "inverse".into(),
            GroupOperator::SplitInverse => "split-inverse".into(),
            GroupOperator::ExpConjugateLinear(_) => "exp-conjugate-linear".into(),
            GroupOperator::ExpDerivation(_) => "exp-derivation".into(),
            GroupOperator::FromNovikov(_) => "from-novikov".into(),
        }
    }
}

/// A unipotent carrier of size `dim` with a map pair, an action Γ and an
/// operator (𝔅 for Rota-Baxter fixtures, 𝔇 for differential ones).
#[derive(Clone, Debug, PartialEq)]
pub struct GroupFixture {
    pub name: String,
    pub dim: usize,
    pub pair: MapPair,
    pub action: GroupAction,
    pub operator: GroupOperator,
}

pub type GroupRBFixture = GroupFixture;
pub type GroupDiffFixture = GroupFixture;

impl GroupFixture {
    pub fn new(
        name: impl Into<String>,
        dim: usize,
        pair: MapPair,
        action: GroupAction,
        operator: GroupOperator,
    ) -> Self {
        GroupFixture {
            name: name.into(),
            dim,
            pair,
            action,
            operator,
        }
    }

    pub fn op<C: Scalar>(&self, a: &Matrix<C>) -> Result<Matrix<C>> {
        self.operator.apply(self.dim, a)
    }

    pub fn with_operator(&self, name: impl Into<String>, operator: GroupOperator) -> Self {
        GroupFixture {
            name: name.into(),
            operator,
            ..self.clone()
        }
    }

    pub fn with_pair(&self, name: impl Into<String>, pair: MapPair) -> Self {
        GroupFixture {
            name: name.into(),
            pair,
            ..self.clone()
        }
    }
}

/// A Lie algebra with an ε-linear pair, an action γ and a linear operator
/// (B for Rota-Baxter fixtures, D for differential ones).
#[derive(Clone, Debug, PartialEq)]
pub struct LieFixture {
    pub name: String,
    pub algebra: LieAlgebra,
    pub pair: LinearPair,
    pub action: LieAction,
    pub operator: LinearMap,
}

pub type LieRBFixture = LieFixture;
pub type LieDiffFixture = LieFixture;

impl LieFixture {
    pub fn scalar(
        name: impl Into<String>,
        algebra: LieAlgebra,
        pair: &ScalarPair,
        action: LieAction,
        operator: LinearMap,
    ) -> Self {
        let n = algebra.dim();
        LieFixture {
            name: name.into(),
            algebra,
            pair: pair.to_linear(n),
            action,
            operator,
        }
    }

    pub fn with_operator(&self, name: impl Into<String>, operator: LinearMap) -> Self {
        LieFixture {
            name: name.into(),
            operator,
            ..self.clone()
        }
    }
}

/// B₀ on the Heisenberg algebra: E23 ↦ E12, E12 ↦ 0, E13 ↦ 0.
pub fn heisenberg_b0() -> LinearMap {
    let mut b = LinearMap::zero(3);
    b.set(0, 1, int(1));
    b
}

/// D₀ = grading derivation: E12 ↦ E12, E23 ↦ E23, E13 ↦ 2E13.
pub fn heisenberg_d0() -> LinearMap {
    let mut d = LinearMap::identity(3);
    d.set(2, 2, int(2));
    d
}

/// HB: power pair, conjugation, 𝔅(⟨a,b,c⟩) = ⟨b,0,0⟩.
pub fn heisenberg_rb() -> GroupRBFixture {
    GroupFixture::new(
        "heisenberg-rb",
        3,
        MapPair::power(),
        GroupAction::Conjugation,
        GroupOperator::ExpConjugateLinear(heisenberg_b0()),
    )
}

/// HD: power pair, conjugation, 𝔇(exp u) = exp(D₀u + ½[u, D₀u]).
pub fn heisenberg_diff() -> GroupDiffFixture {
    GroupFixture::new(
        "heisenberg-diff",
        3,
        MapPair::power(),
        GroupAction::Conjugation,
        GroupOperator::ExpDerivation(heisenberg_d0()),
    )
}

/// Identity pair, conjugation, the split-inverse operator of weight one.
pub fn identity_pair_weight_one() -> GroupRBFixture {
    GroupFixture::new(
        "identity-pair-weight-one",
        3,
        MapPair::identity(),
        GroupAction::Conjugation,
        GroupOperator::SplitInverse,
    )
}

/// Heisenberg algebra, scalar pair (ε, 1/ε), adjoint action, B₀.
pub fn scalar_pair_algebra() -> LieRBFixture {
    LieFixture::scalar(
        "scalar-pair-algebra",
        LieAlgebra::heisenberg(),
        &ScalarPair::default(),
        LieAction::Adjoint,
        heisenberg_b0(),
    )
}

/// Heisenberg algebra, scalar pair, adjoint action, D₀.
pub fn scalar_pair_derivation() -> LieDiffFixture {
    scalar_pair_algebra().with_operator("scalar-pair-derivation", heisenberg_d0())
}

/// The 2-dimensional algebra `[x, y] = x` with `D = ad_y`.
pub fn solvable_two_dim() -> LieDiffFixture {
    let g = LieAlgebra::from_brackets(2, &[(0, 1, 0, 1)]);
    let d = g.ad(&[int(0), int(1)]);
    LieFixture::scalar(
        "solvable-2",
        g,
        &ScalarPair::default(),
        LieAction::Adjoint,
        d,
    )
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatalogueEntry {
    pub name: &'static str,
    pub kind: &'static str,
    pub description: &'static str,
}

pub fn list_fixtures() -> Vec<CatalogueEntry> {
    vec![
        CatalogueEntry {
            name: "heisenberg-rb",
            kind: "group-rota-baxter",
            description: "3x3 Heisenberg, power pair, conjugation, B(<a,b,c>) = <b,0,0>",
        },
        CatalogueEntry {
            name: "heisenberg-diff",
            kind: "group-differential",
            description: "3x3 Heisenberg, power pair, conjugation, D(exp u) = exp(D0 u + [u, D0 u]/2), D0 = grading",
        },
        CatalogueEntry {
            name: "identity-pair-weight-one",
            kind: "group-rota-baxter",
            description: "3x3 unipotent, identity pair, conjugation, B(hk) = k^-1 for the split G = HK",
        },
        CatalogueEntry {
            name: "scalar-pair-algebra",
            kind: "lie-rota-baxter",
            description: "Heisenberg algebra, scalar pair (1/n, n), adjoint action, B0",
        },
        CatalogueEntry {
            name: "ode-polynomial-set",
            kind: "ode",
            description: "2x2 polynomial coefficient paths on [0,1] for the flow operator",
        },
    ]
}

/// Resolves a built-in group fixture by name.
pub fn group_fixture(name: &str) -> Result<GroupFixture> {
    match name {
        "heisenberg-rb" => Ok(heisenberg_rb()),
        "heisenberg-diff" => Ok(heisenberg_diff()),
        "identity-pair-weight-one" => Ok(identity_pair_weight_one()),
        _ => Err(Error::UnknownFixture(name.to_string())),
    }
}
