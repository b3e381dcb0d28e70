use limrb_core::brace::YbeMap;
use limrb_core::fixture::{heisenberg_diff, heisenberg_rb, identity_pair_weight_one};
use limrb_core::json::{matrix_from_json, matrix_to_json};
use limrb_core::nilpotent::{mat_exp, mat_log, unipotent_inverse, UpperBasis};
use limrb_core::novikov::novikov_group_mul;
use limrb_core::novikov::NovikovMul;
use limrb_core::pair::transported_mul;
use limrb_core::rota_baxter::{descent_inverse, descent_mul, descent_unit};
use limrb_core::scalar::{format_rational, frac, parse_rational, Rational};
use limrb_core::{ExactMatrix, MapPair};
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Rational> {
    (-20i64..=20, 1i64..=9).prop_map(|(p, q)| frac(p, q))
}

fn unipotent(dim: usize) -> impl Strategy<Value = ExactMatrix> {
    let m = UpperBasis::new(dim).len();
    prop::collection::vec(rational(), m).prop_map(move |c| UpperBasis::new(dim).group_element(&c))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rational_text_round_trip(q in rational()) {
        prop_assert_eq!(parse_rational(&format_rational(&q)).unwrap(), q);
    }

    #[test]
    fn matrix_json_round_trip(a in unipotent(4)) {
        prop_assert_eq!(matrix_from_json(&matrix_to_json(&a)).unwrap(), a);
    }

    #[test]
    fn exp_log_inverse(a in unipotent(4)) {
        let n = mat_log(&a).unwrap();
        prop_assert_eq!(mat_exp(&n).unwrap(), a.clone());
        prop_assert!((&a * &unipotent_inverse(&a).unwrap()).is_identity());
    }

    #[test]
    fn power_pair_transported_is_bch_free(a in unipotent(3), b in unipotent(3)) {
        let lhs = transported_mul(&MapPair::power(), &a, &b).unwrap();
        let rhs = mat_exp(&(&mat_log(&a).unwrap() + &mat_log(&b).unwrap())).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn descent_group_laws(a in unipotent(3), b in unipotent(3), c in unipotent(3)) {
        for f in [heisenberg_rb(), identity_pair_weight_one()] {
            let ab_c = descent_mul(&f, &descent_mul(&f, &a, &b).unwrap(), &c).unwrap();
            let a_bc = descent_mul(&f, &a, &descent_mul(&f, &b, &c).unwrap()).unwrap();
            prop_assert_eq!(ab_c, a_bc);
            let e: ExactMatrix = descent_unit(&f).unwrap();
            let ai = descent_inverse(&f, &a).unwrap();
            prop_assert_eq!(descent_mul(&f, &a, &ai).unwrap(), e);
            prop_assert_eq!(&f.op(&a).unwrap() * &f.op(&b).unwrap(), f.op(&descent_mul(&f, &a, &b).unwrap()).unwrap());
        }
    }

    #[test]
    fn ybe_inverse_and_braid(x in unipotent(3), y in unipotent(3), z in unipotent(3)) {
        let s = YbeMap::from_rrb(&heisenberg_rb());
        let (p, q) = s.apply(&x, &y).unwrap();
        prop_assert_eq!(s.inverse(&p, &q).unwrap(), (x.clone(), y.clone()));
        let (a, b) = s.apply(&x, &y).unwrap();
        let (b, c) = s.apply(&b, &z).unwrap();
        let (a, b) = s.apply(&a, &b).unwrap();
        let (q, r) = s.apply(&y, &z).unwrap();
        let (p, q) = s.apply(&x, &q).unwrap();
        let (q, r) = s.apply(&q, &r).unwrap();
        prop_assert_eq!((a, b, c), (p, q, r));
    }

    #[test]
    fn novikov_right_unit(a in unipotent(3)) {
        let n = NovikovMul::FromDiff(Box::new(heisenberg_diff()));
        let e = ExactMatrix::identity(3);
        prop_assert_eq!(novikov_group_mul(&n, &a, &e).unwrap(), e);
    }
}
