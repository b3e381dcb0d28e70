//! Relative Rota-Baxter operators with limit-weight: descent groups, the
//! Lie-level identity, tangents, and a brute-force search for weight-zero
//! operators on the Heisenberg algebra.

use crate::check::{compare, compare_vec, run_cases, CheckResult};
use crate::error::Result;
use crate::fixture::{GroupRBFixture, LieFixture, LieRBFixture};
use crate::laurent::EpsSeries;
use crate::lie::{
    apply_linear, lift_vec, lim_vec, vadd, vsub, Bilinear, LieAction, LieAlgebra, LinearMap,
};
use crate::matrix::{ExactMatrix, Matrix};
use crate::nilpotent::{first_order_jet, mixed_partial, unipotent_inverse, UpperBasis};
use crate::pair::lift;
use crate::sample::Triple;
use crate::scalar::{int, Rational, Scalar};

/// `a ∗ b = lim 𝔥(𝔏(a)·Γ_{𝔅(a)}(𝔏(b)))`.
pub fn descent_mul<C: Scalar>(
    f: &GroupRBFixture,
    a: &Matrix<C>,
    b: &Matrix<C>,
) -> Result<Matrix<C>> {
    let ba = lift(&f.op(a)?);
    let x = &f.pair.lower_exact(a)? * &f.action.act(&ba, &f.pair.lower_exact(b)?)?;
    f.pair.raise_limit(&x)
}

/// `lim 𝔥(e)`.
pub fn descent_unit<C: Scalar>(f: &GroupRBFixture) -> Result<Matrix<C>> {
    f.pair.raise_limit(&Matrix::identity(f.dim))
}

/// `lim 𝔥(Γ_{𝔅(a)⁻¹}(𝔏(a)⁻¹))`.
pub fn descent_inverse<C: Scalar>(f: &GroupRBFixture, a: &Matrix<C>) -> Result<Matrix<C>> {
    let bai = lift(&unipotent_inverse(&f.op(a)?)?);
    let lai = unipotent_inverse(&f.pair.lower_exact(a)?)?;
    f.pair.raise_limit(&f.action.act(&bai, &lai)?)
}

/// `𝔅(a)·𝔅(b) = 𝔅(a ∗ b)` on sampled pairs.
pub fn check_group_rrb<C: Scalar>(f: &GroupRBFixture, triples: &[Triple<C>]) -> CheckResult {
    run_cases("group-rrb", triples, |[a, b, _]| {
        let lhs = &f.op(a)? * &f.op(b)?;
        let rhs = f.op(&descent_mul(f, a, b)?)?;
        Ok(compare(&lhs, &rhs, &[("a", a), ("b", b)]))
    })
}

/// Associativity, unit, inverse, and 𝔅 as a homomorphism `(G, ∗) → (G, ·)`.
pub fn check_descent_group<C: Scalar>(f: &GroupRBFixture, triples: &[Triple<C>]) -> CheckResult {
    let assoc = run_cases("associativity", triples, |[a, b, c]| {
        let lhs = descent_mul(f, &descent_mul(f, a, b)?, c)?;
        let rhs = descent_mul(f, a, &descent_mul(f, b, c)?)?;
        Ok(compare(&lhs, &rhs, &[("a", a), ("b", b), ("c", c)]))
    });
    let unit = run_cases("unit", triples, |[a, ..]| {
        let e: Matrix<C> = descent_unit(f)?;
        let l = descent_mul(f, &e, a)?;
        let r = descent_mul(f, a, &e)?;
        Ok(compare(&l, a, &[("a", a), ("unit", &e)]).or(compare(&r, a, &[("a", a), ("unit", &e)])))
    });
    let inverse = run_cases("inverse", triples, |[a, ..]| {
        let e: Matrix<C> = descent_unit(f)?;
        let ai = descent_inverse(f, a)?;
        let r = descent_mul(f, a, &ai)?;
        let l = descent_mul(f, &ai, a)?;
        Ok(compare(&r, &e, &[("a", a), ("inverse", &ai)]).or(compare(
            &l,
            &e,
            &[("a", a), ("inverse", &ai)],
        )))
    });
    let hom = check_group_rrb(f, triples);
    let hom = CheckResult {
        name: "homomorphism".into(),
        ..hom
    };
    CheckResult::group("descent-group", vec![assoc, unit, inverse, hom])
}

/// `lim ℋ(γ_x(ℒv) − γ_y(ℒu) + [ℒu, ℒv])` with `x = Bu`, `y = Bv`.
fn lie_rrb_argument(f: &LieFixture, u: &[Rational], v: &[Rational]) -> Result<Vec<Rational>> {
    let g = &f.algebra;
    let bu: Vec<EpsSeries> = lift_vec(&apply_linear(&f.operator, u));
    let bv: Vec<EpsSeries> = lift_vec(&apply_linear(&f.operator, v));
    let lu = f.pair.lower_exact(u);
    let lv = f.pair.lower_exact(v);
    let inner = vadd(
        &vsub(&f.action.act(g, &bu, &lv), &f.action.act(g, &bv, &lu)),
        &g.bracket(&lu, &lv),
    );
    lim_vec(&f.pair.raise(&inner))
}

/// `[Bu, Bv] = B(lim ℋ(γ_{Bu}(ℒv) − γ_{Bv}(ℒu) + [ℒu, ℒv]))` on all basis pairs.
pub fn check_lie_rrb(f: &LieRBFixture) -> CheckResult {
    let g = &f.algebra;
    let e = g.basis();
    let pairs: Vec<(usize, usize)> = (0..g.dim())
        .flat_map(|i| (0..g.dim()).map(move |j| (i, j)))
        .collect();
    run_cases("lie-rrb", &pairs, |&(i, j)| {
        let (u, v) = (&e[i], &e[j]);
        let lhs = g.bracket(&apply_linear(&f.operator, u), &apply_linear(&f.operator, v));
        let rhs = apply_linear(&f.operator, &lie_rrb_argument(f, u, v)?);
        Ok(compare_vec(
            &lhs,
            &rhs,
            &[("u", u.as_slice()), ("v", v.as_slice())],
        ))
    })
}

/// Linear part of a group operator at `e`, as a map on the [`UpperBasis`] coordinates.
pub fn operator_jet(f: &GroupRBFixture) -> Result<LinearMap> {
    let basis = UpperBasis::new(f.dim);
    let cols: Vec<Vec<Rational>> = basis
        .elements::<Rational>()
        .iter()
        .map(|e| first_order_jet(|a| f.op(a), e).map(|m| basis.coords(&m)))
        .collect::<Result<_>>()?;
    Ok(Matrix::from_fn(basis.len(), |i, j| cols[j][i].clone()))
}

/// A binary group map differentiated at `(e, e)`, as a bilinear map on coordinates.
pub fn bilinear_jet<F>(dim: usize, f: F) -> Result<Bilinear>
where
    F: Fn(
        &Matrix<crate::jet::Jet<Rational>>,
        &Matrix<crate::jet::Jet<Rational>>,
    ) -> Result<Matrix<crate::jet::Jet<Rational>>>,
{
    let basis = UpperBasis::new(dim);
    let elems: Vec<ExactMatrix> = basis.elements();
    let m = elems.len();
    let mut out = Bilinear::zero(m);
    for i in 0..m {
        for j in 0..m {
            let d = mixed_partial(&f, &elems[i], &elems[j])?;
            for (k, c) in basis.coords(&d).into_iter().enumerate() {
                out.set(i, j, k, c);
            }
        }
    }
    Ok(out)
}

/// Tangent of the action: `γ_u(v) = ∂²/∂t∂s log Γ_{exp tu}(exp sv)`.
pub fn action_jet(f: &GroupRBFixture) -> Result<Bilinear> {
    bilinear_jet(f.dim, |a, b| f.action.act(a, b))
}

/// The Lie-level fixture induced at the identity: B from the jet of 𝔅, γ from
/// the mixed partial of Γ, and the pair's scalar derivative.
pub fn rb_group_tangent(f: &GroupRBFixture) -> Result<LieRBFixture> {
    let algebra = LieAlgebra::strictly_upper(f.dim);
    let gamma = action_jet(f)?;
    let action = if gamma == *algebra.structure() {
        LieAction::Adjoint
    } else if gamma.is_zero() {
        LieAction::Trivial
    } else {
        LieAction::Explicit(gamma)
    };
    Ok(LieFixture::scalar(
        format!("{}-tangent", f.name),
        algebra,
        &f.pair.tangent(),
        action,
        operator_jet(f)?,
    ))
}

/// Every linear map on the Heisenberg algebra with entries in {−1, 0, 1}
/// satisfying `[Bu, Bv] = B([Bu, v] + [u, Bv])` and `B(E13) ∈ span(E13)`.
pub fn weight_zero_search() -> Vec<LinearMap> {
    // [x, y] on coordinates (a, b, c) is (0, 0, a·b' − b·a').
    fn br(x: [i64; 3], y: [i64; 3]) -> [i64; 3] {
        [0, 0, x[0] * y[1] - x[1] * y[0]]
    }
    fn ap(b: &[[i64; 3]; 3], v: [i64; 3]) -> [i64; 3] {
        let mut o = [0; 3];
        for (i, row) in b.iter().enumerate() {
            o[i] = row[0] * v[0] + row[1] * v[1] + row[2] * v[2];
        }
        o
    }
    let e = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];
    let mut found = Vec::new();
    for code in 0..3i64.pow(9) {
        let mut b = [[0i64; 3]; 3];
        let mut c = code;
        for row in b.iter_mut() {
            for x in row.iter_mut() {
                *x = c % 3 - 1;
                c /= 3;
            }
        }
        if b[0][2] != 0 || b[1][2] != 0 {
            continue;
        }
        let ok = e.iter().all(|&u| {
            e.iter().all(|&v| {
                let lhs = br(ap(&b, u), ap(&b, v));
                let s = br(ap(&b, u), v);
                let t = br(u, ap(&b, v));
                lhs == ap(&b, [s[0] + t[0], s[1] + t[1], s[2] + t[2]])
            })
        });
        if ok {
            found.push(Matrix::from_fn(3, |i, j| int(b[i][j])));
        }
    }
    found
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::check::Status;
    use crate::fixture::{
        heisenberg_b0, heisenberg_rb, identity_pair_weight_one, scalar_pair_algebra, GroupOperator,
    };
    use crate::nilpotent::heisenberg_q;
    use crate::pair::{GroupAction, MapPair};
    use crate::poly::Poly;
    use crate::sample::{random_triples, symbolic_triple};
    use crate::scalar::frac;

    fn h(a: i64, b: i64, c: i64) -> ExactMatrix {
        heisenberg_q(int(a), int(b), int(c))
    }

    #[test]
    fn hb_descent_value() {
        let f = heisenberg_rb();
        assert_eq!(
            descent_mul(&f, &h(0, 1, 0), &h(0, 1, 0)).unwrap(),
            h(0, 2, 1)
        );
        let a = heisenberg_q(frac(1, 2), int(3), int(-2));
        assert_eq!(descent_mul(&f, &a, &ExactMatrix::identity(3)).unwrap(), a);
    }

    #[test]
    fn hb_descent_symbolic_closed_form() {
        // ⟨a,b,c⟩ ∗ ⟨a',b',c'⟩ = ⟨a+a', b+b', c+c'+b·b'⟩.
        let f = heisenberg_rb();
        let [a, b, _] = symbolic_triple(3).pop().unwrap();
        let x = |k| Poly::var(k);
        let want = crate::nilpotent::heisenberg(
            x(0).plus(&x(3)),
            x(1).plus(&x(4)),
            x(2).plus(&x(5)).plus(&x(1).times(&x(4))),
        );
        assert_eq!(descent_mul(&f, &a, &b).unwrap(), want);
    }

    #[test]
    fn hb_is_rota_baxter() {
        let f = heisenberg_rb();
        assert!(check_group_rrb(&f, &random_triples(11, 3, 30)).passed());
        assert!(check_group_rrb(&f, &symbolic_triple(3)).passed());
        assert!(check_descent_group(&f, &random_triples(12, 3, 30)).passed());
        assert!(check_descent_group(&f, &symbolic_triple(3)).passed());
    }

    #[test]
    fn trivial_operator_passes() {
        for pair in [MapPair::power(), MapPair::identity()] {
            let f = heisenberg_rb()
                .with_pair("p", pair)
                .with_operator("t", GroupOperator::Trivial);
            assert!(check_group_rrb(&f, &random_triples(13, 3, 10)).passed());
        }
    }

    #[test]
    fn identity_operator_is_not_rota_baxter() {
        let f = identity_pair_weight_one().with_operator("id", GroupOperator::Identity);
        let r = check_group_rrb(&f, &random_triples(14, 3, 10));
        assert_eq!(r.status, Status::Fail);
        assert!(r.witness.is_some());
        // The descent product is still the literal a·(a b a⁻¹).
        let [a, b, _] = random_triples(15, 3, 1).pop().unwrap();
        let ai = unipotent_inverse(&a).unwrap();
        assert_eq!(descent_mul(&f, &a, &b).unwrap(), &a * &(&(&a * &b) * &ai));
    }

    #[test]
    fn weight_one_fixtures() {
        let t = random_triples(16, 3, 30);
        assert!(check_descent_group(&identity_pair_weight_one(), &t).passed());
        let inv = identity_pair_weight_one().with_operator("inv", GroupOperator::Inverse);
        assert!(check_descent_group(&inv, &t).passed());
        let four = GroupRBFixture {
            dim: 4,
            ..identity_pair_weight_one()
        };
        assert!(check_descent_group(&four, &random_triples(17, 4, 10)).passed());
    }

    #[test]
    fn one_by_one_carrier() {
        let f = GroupRBFixture::new(
            "one",
            1,
            MapPair::power(),
            GroupAction::Conjugation,
            GroupOperator::Identity,
        );
        let t = vec![[
            ExactMatrix::identity(1),
            ExactMatrix::identity(1),
            ExactMatrix::identity(1),
        ]];
        assert!(check_descent_group(&f, &t).passed());
    }

    #[test]
    fn lie_level() {
        assert!(check_lie_rrb(&scalar_pair_algebra()).passed());
        let zero = scalar_pair_algebra().with_operator("zero", LinearMap::zero(3));
        assert!(check_lie_rrb(&zero).passed());
        let id = scalar_pair_algebra().with_operator("id", LinearMap::identity(3));
        let r = check_lie_rrb(&id);
        assert_eq!(r.status, Status::Fail);
        // witness (E12, E23): [E12, E23] = E13 but B(2E13) = 2E13.
        let w = r.witness.unwrap();
        assert_eq!(w[0].entries[0], vec!["1", "0", "0"]);
        assert_eq!(w[1].entries[0], vec!["0", "1", "0"]);
        assert_eq!(w[2].entries[0], vec!["0", "0", "1"]);
        assert_eq!(w[3].entries[0], vec!["0", "0", "2"]);
    }

    #[test]
    fn tangents() {
        let t = rb_group_tangent(&heisenberg_rb()).unwrap();
        assert_eq!(t.operator, heisenberg_b0());
        assert_eq!(t.action, LieAction::Adjoint);
        assert!(check_lie_rrb(&t).passed());

        let triv =
            rb_group_tangent(&heisenberg_rb().with_operator("t", GroupOperator::Trivial)).unwrap();
        assert!(triv.operator.is_zero());

        let w1 = rb_group_tangent(
            &identity_pair_weight_one().with_operator("inv", GroupOperator::Inverse),
        )
        .unwrap();
        assert_eq!(w1.operator, LinearMap::identity(3).scaled(&int(-1)));
        assert!(check_lie_rrb(&w1).passed());

        let split = rb_group_tangent(&identity_pair_weight_one()).unwrap();
        let mut want = LinearMap::zero(3);
        want.set(1, 1, int(-1));
        assert_eq!(split.operator, want);
        assert!(check_lie_rrb(&split).passed());

        let id = rb_group_tangent(
            &identity_pair_weight_one().with_operator("id", GroupOperator::Identity),
        )
        .unwrap();
        assert_eq!(id.operator, LinearMap::identity(3));
        assert!(!check_lie_rrb(&id).passed());
    }

    #[test]
    fn search_recovers_b0() {
        let found = weight_zero_search();
        assert!(found.contains(&heisenberg_b0()));
        assert!(found.contains(&LinearMap::zero(3)));
        let f = scalar_pair_algebra();
        for b in &found {
            assert!(check_lie_rrb(&f.with_operator("s", b.clone())).passed());
        }
    }
}
