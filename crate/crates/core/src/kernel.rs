//! Exact-kernel checks: exp/log round trips and limit-product compatibility.

use rand::Rng;

use crate::check::{compare, run_cases, CheckResult};
use crate::laurent::Laurent;
use crate::matrix::{EpsMatrix, Matrix};
use crate::nilpotent::{laurent_limit, mat_exp, mat_log, unipotent_inverse, UpperBasis};
use crate::poly::Poly;
use crate::sample::{random_eps_family, random_rational};
use crate::scalar::Scalar;

/// `exp(log a) = a`, `log(exp(log a)) = log a` and `exp(−log a) = a⁻¹`.
pub fn check_exp_log<C: Scalar>(samples: &[Matrix<C>]) -> CheckResult {
    let exp_log = run_cases("exp-log", samples, |a| {
        Ok(compare(&mat_exp(&mat_log(a)?)?, a, &[("a", a)]))
    });
    let log_exp = run_cases("log-exp", samples, |a| {
        let n = mat_log(a)?;
        Ok(compare(&mat_log(&mat_exp(&n)?)?, &n, &[("log a", &n)]))
    });
    let inverse = run_cases("exp-negation", samples, |a| {
        let n = mat_log(a)?;
        Ok(compare(
            &mat_exp(&-&n)?,
            &unipotent_inverse(a)?,
            &[("a", a)],
        ))
    });
    CheckResult::group("exp-log", vec![exp_log, log_exp, inverse])
}

/// `lim(A·B) = lim A · lim B` whenever both limits exist.
pub fn check_limit_product<C: Scalar>(
    families: &[(Matrix<Laurent<C>>, Matrix<Laurent<C>>)],
) -> CheckResult {
    run_cases("limit-product", families, |(a, b)| {
        let la = laurent_limit(a)?;
        let lb = laurent_limit(b)?;
        let lab = laurent_limit(&(a * b))?;
        Ok(compare(
            &lab,
            &(&la * &lb),
            &[("lim A", &la), ("lim B", &lb)],
        ))
    })
}

/// `exp(Σ (rᵢ + sᵢε + tᵢε²) Eᵢ)` with random rationals: every degree is nonnegative.
pub fn random_limit_family<R: Rng>(rng: &mut R, dim: usize) -> EpsMatrix {
    let base = random_eps_family(rng, dim);
    let basis = UpperBasis::new(dim);
    let coords: Vec<Laurent<_>> = (0..basis.len())
        .map(|_| Laurent::monomial(2, random_rational(rng)))
        .collect();
    &base * &basis.group_element(&coords)
}

/// `exp(Σ (x_{k} + x_{k+1}ε) Eᵢ)` in fresh variables starting at `offset`.
pub fn symbolic_limit_family(dim: usize, offset: u32) -> Matrix<Laurent<Poly>> {
    let basis = UpperBasis::new(dim);
    let coords: Vec<Laurent<Poly>> = (0..basis.len() as u32)
        .map(|k| {
            Laurent::constant(Poly::var(offset + 2 * k))
                .plus(&Laurent::monomial(1, Poly::var(offset + 2 * k + 1)))
        })
        .collect();
    basis.group_element(&coords)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::EpsSeries;
    use crate::sample::{random_unipotent, rng, symbolic_unipotent};
    use crate::scalar::int;

    #[test]
    fn exp_log_random_and_symbolic() {
        let mut r = rng(7);
        let s: Vec<_> = (0..20).map(|_| random_unipotent(&mut r, 4)).collect();
        assert!(check_exp_log(&s).passed());
        assert!(check_exp_log(&[symbolic_unipotent(3, 0)]).passed());
    }

    #[test]
    fn limit_product_random_and_symbolic() {
        let mut r = rng(8);
        let fams: Vec<_> = (0..20)
            .map(|_| {
                (
                    random_limit_family(&mut r, 3),
                    random_limit_family(&mut r, 3),
                )
            })
            .collect();
        assert!(check_limit_product(&fams).passed());
        let m = 2 * UpperBasis::new(3).len() as u32;
        let sym = [(symbolic_limit_family(3, 0), symbolic_limit_family(3, m))];
        assert!(check_limit_product(&sym).passed());
    }

    #[test]
    fn divergent_family_is_an_error() {
        let mut a = EpsMatrix::identity(2);
        a.set(0, 1, EpsSeries::monomial(-1, int(1)));
        let r = check_limit_product(&[(a.clone(), a)]);
        assert_eq!(r.status, crate::check::Status::Error);
    }
}
