//! Deterministic samplers: seeded random rational elements and symbolic
//! elements with indeterminate coordinates.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::laurent::EpsSeries;
use crate::matrix::{EpsMatrix, ExactMatrix, Matrix};
use crate::nilpotent::{mat_exp, UpperBasis};
use crate::poly::Poly;
use crate::scalar::{frac, Rational, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[default]
    Random,
    Symbolic,
}

pub type Triple<C> = [Matrix<C>; 3];

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `p/q` with `|p| ≤ 6`, `1 ≤ q ≤ 4`.
pub fn random_rational<R: Rng>(rng: &mut R) -> Rational {
    frac(rng.random_range(-6..=6), rng.random_range(1..=4))
}

pub fn random_nilpotent<R: Rng>(rng: &mut R, dim: usize) -> ExactMatrix {
    let basis = UpperBasis::new(dim);
    let coords: Vec<Rational> = (0..basis.len()).map(|_| random_rational(rng)).collect();
    basis.from_coords(&coords)
}

pub fn random_unipotent<R: Rng>(rng: &mut R, dim: usize) -> ExactMatrix {
    mat_exp(&random_nilpotent(rng, dim)).expect("strictly upper")
}

pub fn random_triples(seed: u64, dim: usize, count: usize) -> Vec<Triple<Rational>> {
    let mut r = rng(seed);
    (0..count)
        .map(|_| {
            [
                random_unipotent(&mut r, dim),
                random_unipotent(&mut r, dim),
                random_unipotent(&mut r, dim),
            ]
        })
        .collect()
}

/// `exp(Σ xᵢ Eᵢ)` with fresh variables `x_offset, x_offset+1, …`.
pub fn symbolic_unipotent(dim: usize, offset: u32) -> Matrix<Poly> {
    let basis = UpperBasis::new(dim);
    let coords: Vec<Poly> = (0..basis.len() as u32)
        .map(|k| Poly::var(offset + k))
        .collect();
    basis.group_element(&coords)
}

/// One triple of generic elements in disjoint variables; an identity that
/// holds on it holds for all elements of the carrier.
pub fn symbolic_triple(dim: usize) -> Vec<Triple<Poly>> {
    let m = UpperBasis::new(dim).len() as u32;
    vec![[
        symbolic_unipotent(dim, 0),
        symbolic_unipotent(dim, m),
        symbolic_unipotent(dim, 2 * m),
    ]]
}

/// A family `exp(Σ (rᵢ + sᵢε) Eᵢ)` whose limit is `exp(Σ rᵢ Eᵢ)`.
pub fn random_eps_family<R: Rng>(rng: &mut R, dim: usize) -> EpsMatrix {
    let basis = UpperBasis::new(dim);
    let coords: Vec<EpsSeries> = (0..basis.len())
        .map(|_| {
            EpsSeries::constant(random_rational(rng))
                .plus(&EpsSeries::eps().scaled(&random_rational(rng)))
        })
        .collect();
    basis.group_element(&coords)
}
