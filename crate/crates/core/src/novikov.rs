//! Relative differential operators with limit-weight and the Novikov
//! structures they induce, on groups and on Lie algebras.

use rand::Rng;

use crate::check::{compare, compare_vec, run_cases, witness, CheckResult, Status};
use crate::error::{Error, Result};
use crate::fixture::{GroupDiffFixture, GroupFixture, GroupOperator, LieDiffFixture, LieFixture};
use crate::laurent::EpsSeries;
use crate::lie::{
    apply_linear, lift_vec, lim_vec, random_derivation, random_lie_algebra, vadd, vsub, Bilinear,
    LieAction, LieAlgebra, LinearMap, LinearPair, ScalarPair,
};
use crate::matrix::Matrix;
use crate::nilpotent::{mat_exp, mat_log, UpperBasis};
use crate::pair::{is_limit_abelian, lift, transported_mul, GroupAction, MapPair};
use crate::rota_baxter::{bilinear_jet, rb_group_tangent};
use crate::sample::Triple;
use crate::scalar::{frac, Rational, Scalar};

/// Binary operations `⊙` on a unipotent carrier.
#[derive(Clone, Debug, PartialEq)]
pub enum NovikovMul {
    /// `a ⊙ b = lim 𝔥(Γ_a(𝔏𝔇(b)))` for the fixture's pair, action and 𝔇.
    FromDiff(Box<GroupDiffFixture>),
    /// `exp(u) ⊙ exp(v) = exp(Dv + ½[v, Dv] + κ[u, Dv])`.
    Twisted {
        dim: usize,
        d: LinearMap,
        kappa: Rational,
    },
    /// `a ⊙ b = b`.
    Projection { dim: usize },
    /// `a ⊙ b = e`.
    Trivial { dim: usize },
}

pub fn novikov_group_mul<C: Scalar>(
    n: &NovikovMul,
    a: &Matrix<C>,
    b: &Matrix<C>,
) -> Result<Matrix<C>> {
    match n {
        NovikovMul::FromDiff(f) => {
            let x = f.action.act(&lift(a), &f.pair.lower_exact(&f.op(b)?)?)?;
            f.pair.raise_limit(&x)
        }
        NovikovMul::Twisted { dim, d, kappa } => {
            let basis = UpperBasis::new(*dim);
            let u = mat_log(a)?;
            let v = mat_log(b)?;
            let dv = basis.from_coords(&apply_linear(d, &basis.coords(&v)));
            let x =
                &(&dv + &v.commutator(&dv).scaled(&frac(1, 2))) + &u.commutator(&dv).scaled(kappa);
            mat_exp(&x)
        }
        NovikovMul::Projection { .. } => Ok(b.clone()),
        NovikovMul::Trivial { dim } => Ok(Matrix::identity(*dim)),
    }
}

/// `𝔇(ab) = lim 𝔥(𝔏𝔇(a)·Γ_a(𝔏𝔇(b)))` on sampled pairs.
pub fn check_group_rdiff<C: Scalar>(f: &GroupDiffFixture, triples: &[Triple<C>]) -> CheckResult {
    run_cases("group-rdiff", triples, |[a, b, _]| {
        let lhs = f.op(&(a * b))?;
        let x = &f.pair.lower_exact(&f.op(a)?)?
            * &f.action.act(&lift(a), &f.pair.lower_exact(&f.op(b)?)?)?;
        let rhs = f.pair.raise_limit(&x)?;
        Ok(compare(&lhs, &rhs, &[("a", a), ("b", b)]))
    })
}

/// The Novikov-group axioms for `⊙` relative to a pair and an action:
/// `a ⊙ e = e`, `a ⊙ (bc) = (a ⊙ b) ·∞ ((ab) ⊙ c)`,
/// `lim 𝔥(Γ_a(𝔏(b ⊙ c))) = (ab) ⊙ c`, plus limit-abelianness of the carrier.
pub fn check_novikov_group<C: Scalar>(
    pair: &MapPair,
    action: GroupAction,
    n: &NovikovMul,
    triples: &[Triple<C>],
) -> CheckResult {
    let abelian = is_limit_abelian(pair, triples);
    let unit = run_cases("right-unit", triples, |[a, ..]| {
        let e = Matrix::identity(a.dim());
        Ok(compare(&novikov_group_mul(n, a, &e)?, &e, &[("a", a)]))
    });
    let split = run_cases("product-rule", triples, |[a, b, c]| {
        let lhs = novikov_group_mul(n, a, &(b * c))?;
        let rhs = transported_mul(
            pair,
            &novikov_group_mul(n, a, b)?,
            &novikov_group_mul(n, &(a * b), c)?,
        )?;
        Ok(compare(&lhs, &rhs, &[("a", a), ("b", b), ("c", c)]))
    });
    let shift = run_cases("action-shift", triples, |[a, b, c]| {
        let x = action.act(&lift(a), &pair.lower_exact(&novikov_group_mul(n, b, c)?)?)?;
        let lhs = pair.raise_limit(&x)?;
        let rhs = novikov_group_mul(n, &(a * b), c)?;
        Ok(compare(&lhs, &rhs, &[("a", a), ("b", b), ("c", c)]))
    });
    CheckResult::group("novikov-group", vec![abelian, unit, split, shift])
}

/// [`check_novikov_group`] for the product induced by a differential fixture.
pub fn check_novikov_fixture<C: Scalar>(
    f: &GroupDiffFixture,
    triples: &[Triple<C>],
) -> CheckResult {
    let n = NovikovMul::FromDiff(Box::new(f.clone()));
    check_novikov_group(&f.pair, f.action, &n, triples)
}

/// `𝔇(a) := e ⊙ a`, gated on `⊙` passing the Novikov-group axioms on `samples`.
pub fn diff_from_novikov(
    name: &str,
    dim: usize,
    pair: &MapPair,
    action: GroupAction,
    n: &NovikovMul,
    samples: &[Triple<Rational>],
) -> Result<GroupDiffFixture> {
    let gate = check_novikov_group(pair, action, n, samples);
    if !gate.passed() {
        let why = gate
            .first_failure()
            .map(|c| c.name.clone())
            .unwrap_or_default();
        return Err(Error::Precondition(format!(
            "product is not a Novikov group product ({why} fails)"
        )));
    }
    Ok(GroupFixture::new(
        name,
        dim,
        pair.clone(),
        action,
        GroupOperator::FromNovikov(Box::new(n.clone())),
    ))
}

/// `⊙` and the round trip `𝔇 ↦ ⊙ ↦ 𝔇` agree with the original on samples.
pub fn check_round_trip<C: Scalar>(f: &GroupDiffFixture, triples: &[Triple<C>]) -> CheckResult {
    let n = NovikovMul::FromDiff(Box::new(f.clone()));
    let back = f.with_operator(
        format!("{}-recovered", f.name),
        GroupOperator::FromNovikov(Box::new(n.clone())),
    );
    let recovered = run_cases("operator-recovered", triples, |[a, ..]| {
        Ok(compare(&back.op(a)?, &f.op(a)?, &[("a", a)]))
    });
    let n2 = NovikovMul::FromDiff(Box::new(back.clone()));
    let product = run_cases("product-recovered", triples, |[a, b, _]| {
        Ok(compare(
            &novikov_group_mul(&n2, a, b)?,
            &novikov_group_mul(&n, a, b)?,
            &[("a", a), ("b", b)],
        ))
    });
    let rdiff = check_group_rdiff(&back, triples);
    CheckResult::group("round-trip", vec![recovered, product, rdiff])
}

/// The oracle-computed `⊙` of a fixture with an `ExpDerivation` operator,
/// compared against the closed form with coefficient κ on `[u, Dv]` for
/// κ = 1 and κ = ½. Passes when exactly κ = 1 reproduces the limit.
pub fn closed_form_finding(f: &GroupDiffFixture, triples: &[Triple<Rational>]) -> CheckResult {
    let GroupOperator::ExpDerivation(d) = &f.operator else {
        return CheckResult::error(
            "novikov-closed-form-coefficient",
            "fixture operator is not exp-derivation",
        );
    };
    let limit = NovikovMul::FromDiff(Box::new(f.clone()));
    let with = |kappa| NovikovMul::Twisted {
        dim: f.dim,
        d: d.clone(),
        kappa,
    };
    let agree = |kappa: Rational| {
        let t = with(kappa);
        run_cases("closed-form", triples, |[a, b, _]| {
            let got = novikov_group_mul(&limit, a, b)?;
            let want = novikov_group_mul(&t, a, b)?;
            Ok(compare(&got, &want, &[("a", a), ("b", b)]))
        })
    };
    let one = CheckResult {
        name: "kappa-1".into(),
        ..agree(Rational::one())
    };
    let half = agree(frac(1, 2));
    let half_status = half.status;
    let mut half = CheckResult {
        name: "kappa-1/2".into(),
        ..half
    };
    let resolved = one.passed() && half_status == Status::Fail;
    let detail = if resolved {
        "defining limit has coefficient 1 on [u, D(v)]; the closed form with 1/2 disagrees (witness attached)"
    } else {
        "closed-form coefficient not resolved by the samples"
    };
    // The ½ mismatch is the expected outcome here, so it is reported as data.
    let witness = half.witness.take();
    half.status = Status::Pass;
    half.detail = "disagrees with the defining limit".into();
    CheckResult {
        witness: if resolved { witness } else { None },
        status: if resolved { Status::Pass } else { Status::Fail },
        ..CheckResult::group("novikov-closed-form-coefficient", vec![one, half])
    }
    .with_detail(detail)
}

/// `lim ℋ(γ_u(ℒx))`.
fn effective_action(f: &LieFixture, u: &[Rational], x: &[Rational]) -> Result<Vec<Rational>> {
    let lu: Vec<EpsSeries> = lift_vec(u);
    lim_vec(
        &f.pair
            .raise(&f.action.act(&f.algebra, &lu, &f.pair.lower_exact(x))),
    )
}

/// `D[u,v] = lim ℋ(γ_u(ℒDv) − γ_v(ℒDu) + [ℒDu, ℒDv])` on basis pairs.
pub fn check_lie_rdiff(f: &LieDiffFixture) -> CheckResult {
    let g = &f.algebra;
    let e = g.basis();
    let pairs: Vec<(usize, usize)> = (0..g.dim())
        .flat_map(|i| (0..g.dim()).map(move |j| (i, j)))
        .collect();
    run_cases("lie-rdiff", &pairs, |&(i, j)| {
        let (u, v) = (&e[i], &e[j]);
        let lhs = apply_linear(&f.operator, &g.bracket(u, v));
        let ldu = f.pair.lower_exact(&apply_linear(&f.operator, u));
        let ldv = f.pair.lower_exact(&apply_linear(&f.operator, v));
        let uu: Vec<EpsSeries> = lift_vec(u);
        let vv: Vec<EpsSeries> = lift_vec(v);
        let inner = vadd(
            &vsub(&f.action.act(g, &uu, &ldv), &f.action.act(g, &vv, &ldu)),
            &g.bracket(&ldu, &ldv),
        );
        let rhs = lim_vec(&f.pair.raise(&inner))?;
        Ok(compare_vec(
            &lhs,
            &rhs,
            &[("u", u.as_slice()), ("v", v.as_slice())],
        ))
    })
}

/// `lim ℋ([ℒu, ℒv]) = 0` on basis pairs.
pub fn check_lie_limit_abelian(g: &LieAlgebra, pair: &LinearPair) -> CheckResult {
    let e = g.basis();
    let pairs: Vec<(usize, usize)> = (0..g.dim())
        .flat_map(|i| (0..g.dim()).map(move |j| (i, j)))
        .collect();
    run_cases("lie-limit-abelian", &pairs, |&(i, j)| {
        let b = pair.limit_bracket(g, &e[i], &e[j])?;
        let z = vec![Rational::zero(); g.dim()];
        Ok(compare_vec(
            &b,
            &z,
            &[("u", e[i].as_slice()), ("v", e[j].as_slice())],
        ))
    })
}

/// A bilinear product `∘` on a Lie algebra with a pair and an action.
#[derive(Clone, Debug, PartialEq)]
pub struct NovikovLie {
    pub name: String,
    pub algebra: LieAlgebra,
    pub pair: LinearPair,
    pub action: LieAction,
    pub product: Bilinear,
}

impl NovikovLie {
    pub fn mul(&self, u: &[Rational], v: &[Rational]) -> Vec<Rational> {
        self.product.apply(u, v)
    }

    fn as_fixture(&self) -> LieFixture {
        LieFixture {
            name: self.name.clone(),
            algebra: self.algebra.clone(),
            pair: self.pair.clone(),
            action: self.action.clone(),
            operator: LinearMap::zero(self.algebra.dim()),
        }
    }
}

/// `u ∘ v = lim ℋ(γ_u(ℒDv))`, gated on the Leibniz identity and limit-abelianness.
pub fn novikov_lie_from_derivation(f: &LieDiffFixture) -> Result<NovikovLie> {
    let rd = check_lie_rdiff(f);
    if !rd.passed() {
        return Err(Error::Precondition(format!(
            "{} is not a relative differential operator",
            f.name
        )));
    }
    if !check_lie_limit_abelian(&f.algebra, &f.pair).passed() {
        return Err(Error::Precondition(format!(
            "{} is not limit-abelian",
            f.name
        )));
    }
    let e = f.algebra.basis();
    let n = f.algebra.dim();
    let mut product = Bilinear::zero(n);
    for i in 0..n {
        for j in 0..n {
            let v = effective_action(f, &e[i], &apply_linear(&f.operator, &e[j]))?;
            for (k, c) in v.into_iter().enumerate() {
                product.set(i, j, k, c);
            }
        }
    }
    Ok(NovikovLie {
        name: format!("{}-novikov", f.name),
        algebra: f.algebra.clone(),
        pair: f.pair.clone(),
        action: f.action.clone(),
        product,
    })
}

/// `u∘[v,w] = lim ℋ(γ_u ℒ(v∘w)) − lim ℋ(γ_u ℒ(w∘v))` and
/// `[u,v]∘w = lim ℋ(γ_u ℒ(v∘w)) − lim ℋ(γ_v ℒ(u∘w))` on basis triples.
pub fn check_novikov_lie(n: &NovikovLie) -> CheckResult {
    let g = &n.algebra;
    let f = n.as_fixture();
    let e = g.basis();
    let d = g.dim();
    let triples: Vec<(usize, usize, usize)> = (0..d)
        .flat_map(|i| (0..d).flat_map(move |j| (0..d).map(move |k| (i, j, k))))
        .collect();
    let first = run_cases("left-bracket", &triples, |&(i, j, k)| {
        let (u, v, w) = (&e[i], &e[j], &e[k]);
        let lhs = n.mul(u, &g.bracket(v, w));
        let rhs = vsub(
            &effective_action(&f, u, &n.mul(v, w))?,
            &effective_action(&f, u, &n.mul(w, v))?,
        );
        Ok(compare_vec(
            &lhs,
            &rhs,
            &[
                ("u", u.as_slice()),
                ("v", v.as_slice()),
                ("w", w.as_slice()),
            ],
        ))
    });
    let second = run_cases("right-bracket", &triples, |&(i, j, k)| {
        let (u, v, w) = (&e[i], &e[j], &e[k]);
        let lhs = n.mul(&g.bracket(u, v), w);
        let rhs = vsub(
            &effective_action(&f, u, &n.mul(v, w))?,
            &effective_action(&f, v, &n.mul(u, w))?,
        );
        Ok(compare_vec(
            &lhs,
            &rhs,
            &[
                ("u", u.as_slice()),
                ("v", v.as_slice()),
                ("w", w.as_slice()),
            ],
        ))
    });
    CheckResult::group("novikov-lie", vec![first, second])
}

/// D from the first-order jet of 𝔇, with the tangent action and pair.
pub fn diff_group_tangent(f: &GroupDiffFixture) -> Result<LieDiffFixture> {
    rb_group_tangent(f)
}

/// `u ∘ v` = mixed partial of `⊙` at `(e, e)`.
pub fn novikov_group_tangent(f: &GroupDiffFixture) -> Result<NovikovLie> {
    let n = NovikovMul::FromDiff(Box::new(f.clone()));
    let product = bilinear_jet(f.dim, |a, b| novikov_group_mul(&n, a, b))?;
    let t = rb_group_tangent(f)?;
    Ok(NovikovLie {
        name: format!("{}-tangent-novikov", f.name),
        algebra: t.algebra,
        pair: t.pair,
        action: t.action,
        product,
    })
}

/// A random algebra of dimension ≤ `max_dim` with a random derivation,
/// scalar pair (ε, 1/ε) and adjoint action.
pub fn random_derivation_fixture<R: Rng>(rng: &mut R, max_dim: usize) -> LieDiffFixture {
    let (name, g) = random_lie_algebra(rng, max_dim);
    let d = random_derivation(rng, &g);
    LieFixture::scalar(name, g, &ScalarPair::default(), LieAction::Adjoint, d)
}

/// The group commutator of `⊙` outputs, recorded per fixture; unused by checks
/// but handy for reports.
pub fn novikov_witness<C: Scalar>(
    n: &NovikovMul,
    a: &Matrix<C>,
    b: &Matrix<C>,
) -> Result<Vec<crate::check::NamedMatrix>> {
    let p = novikov_group_mul(n, a, b)?;
    Ok(witness(&[("a", a), ("b", b), ("a⊙b", &p)]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixture::{
        heisenberg_d0, heisenberg_diff, scalar_pair_derivation, solvable_two_dim,
    };
    use crate::matrix::ExactMatrix;
    use crate::nilpotent::{heisenberg, heisenberg_q};
    use crate::poly::Poly;
    use crate::sample::{random_triples, rng, symbolic_triple};
    use crate::scalar::int;

    fn q(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn hd_is_differential() {
        let f = heisenberg_diff();
        assert!(check_group_rdiff(&f, &random_triples(21, 3, 30)).passed());
        assert!(check_group_rdiff(&f, &symbolic_triple(3)).passed());
        let triv = f.with_operator("t", GroupOperator::Trivial);
        assert!(check_group_rdiff(&triv, &random_triples(22, 3, 10)).passed());
        let bad = f
            .with_pair("id", MapPair::identity())
            .with_operator("id", GroupOperator::Identity);
        let r = check_group_rdiff(&bad, &random_triples(23, 3, 10));
        assert_eq!(r.status, Status::Fail);
        assert!(r.witness.is_some());
    }

    #[test]
    fn hd_product_closed_form() {
        // ⟨a,b,c⟩ ⊙ ⟨a',b',c'⟩ = ⟨a', b', 2c' + ab' − ba'⟩.
        let n = NovikovMul::FromDiff(Box::new(heisenberg_diff()));
        let [a, b, _] = symbolic_triple(3).pop().unwrap();
        let x = |k| Poly::var(k);
        let third = x(5)
            .scaled(&int(2))
            .plus(&x(0).times(&x(4)))
            .minus(&x(1).times(&x(3)));
        assert_eq!(
            novikov_group_mul(&n, &a, &b).unwrap(),
            heisenberg(x(3), x(4), third)
        );
        let e = ExactMatrix::identity(3);
        let a = heisenberg_q(int(1), int(2), int(3));
        assert!(novikov_group_mul(&n, &a, &e).unwrap().is_identity());
        assert_eq!(
            novikov_group_mul(&n, &e, &a).unwrap(),
            heisenberg_diff().op(&a).unwrap()
        );
    }

    #[test]
    fn hd_novikov_axioms() {
        let f = heisenberg_diff();
        assert!(check_novikov_fixture(&f, &random_triples(24, 3, 30)).passed());
        assert!(check_novikov_fixture(&f, &symbolic_triple(3)).passed());
        assert!(check_round_trip(&f, &random_triples(25, 3, 20)).passed());
    }

    #[test]
    fn twisted_kappa_one_matches_limit() {
        let r = closed_form_finding(&heisenberg_diff(), &random_triples(26, 3, 20));
        assert!(r.passed(), "{r:?}");
        assert!(r.witness.is_some());
    }

    #[test]
    fn diff_from_novikov_gate() {
        let s = random_triples(27, 3, 10);
        let p = MapPair::power();
        let good = NovikovMul::Twisted {
            dim: 3,
            d: heisenberg_d0(),
            kappa: int(1),
        };
        let f = diff_from_novikov("hd", 3, &p, GroupAction::Conjugation, &good, &s).unwrap();
        assert!(check_group_rdiff(&f, &s).passed());
        for [a, ..] in &s {
            assert_eq!(f.op(a).unwrap(), heisenberg_diff().op(a).unwrap());
        }
        let proj = NovikovMul::Projection { dim: 3 };
        assert!(matches!(
            diff_from_novikov("proj", 3, &p, GroupAction::Conjugation, &proj, &s),
            Err(Error::Precondition(_))
        ));
        let one = vec![[
            ExactMatrix::identity(1),
            ExactMatrix::identity(1),
            ExactMatrix::identity(1),
        ]];
        let f1 = diff_from_novikov(
            "one",
            1,
            &p,
            GroupAction::Conjugation,
            &NovikovMul::Projection { dim: 1 },
            &one,
        )
        .unwrap();
        assert!(f1.op(&ExactMatrix::identity(1)).unwrap().is_identity());
    }

    #[test]
    fn trivial_product_passes_axioms() {
        // a ⊙ b = e satisfies every axiom, with 𝔇 ≡ e.
        let s = random_triples(28, 3, 10);
        let r = check_novikov_group(
            &MapPair::power(),
            GroupAction::Conjugation,
            &NovikovMul::Trivial { dim: 3 },
            &s,
        );
        assert!(r.passed());
    }

    #[test]
    fn lie_level_derivations() {
        assert!(check_lie_rdiff(&scalar_pair_derivation()).passed());
        let zero = scalar_pair_derivation().with_operator("z", LinearMap::zero(3));
        assert!(check_lie_rdiff(&zero).passed());
        let mut swap = LinearMap::zero(3);
        swap.set(0, 2, int(1));
        swap.set(2, 0, int(1));
        let bad = scalar_pair_derivation().with_operator("swap", swap);
        assert_eq!(check_lie_rdiff(&bad).status, Status::Fail);
        assert!(check_lie_rdiff(&solvable_two_dim()).passed());
    }

    #[test]
    fn heisenberg_novikov_lie() {
        let n = novikov_lie_from_derivation(&scalar_pair_derivation()).unwrap();
        assert_eq!(n.mul(&q(&[1, 0, 0]), &q(&[0, 1, 0])), q(&[0, 0, 1]));
        assert_eq!(n.mul(&q(&[0, 0, 1]), &q(&[0, 0, 1])), q(&[0, 0, 0]));
        assert!(check_novikov_lie(&n).passed());
    }

    #[test]
    fn solvable_novikov_lie() {
        let n = novikov_lie_from_derivation(&solvable_two_dim()).unwrap();
        assert_eq!(n.mul(&q(&[0, 1]), &q(&[1, 0])), q(&[1, 0]));
        assert!(check_novikov_lie(&n).passed());
    }

    #[test]
    fn tangents_match_algebra_level() {
        let f = heisenberg_diff();
        let t = diff_group_tangent(&f).unwrap();
        assert_eq!(t.operator, heisenberg_d0());
        assert!(check_lie_rdiff(&t).passed());
        let ng = novikov_group_tangent(&f).unwrap();
        let na = novikov_lie_from_derivation(&t).unwrap();
        assert_eq!(ng.product, na.product);
        assert!(check_novikov_lie(&ng).passed());
        let triv = novikov_group_tangent(&f.with_operator("t", GroupOperator::Trivial)).unwrap();
        assert!(triv.product.is_zero());
    }

    #[test]
    fn random_derivation_fixtures() {
        let mut r = rng(5);
        for _ in 0..20 {
            let f = random_derivation_fixture(&mut r, 4);
            let n = novikov_lie_from_derivation(&f).unwrap();
            assert!(check_novikov_lie(&n).passed(), "{}", f.name);
        }
    }
}
