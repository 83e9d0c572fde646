#![allow(dead_code)]

use std::sync::Arc;

use mtopos_core::algebra::{transformation_monoid, FiniteMonoid};
use mtopos_core::linalg::{ComplexMatrix, Complex64, Projector, Subspace, TolerancePolicy, Vector};
use mtopos_core::mset::MSet;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn tol() -> TolerancePolicy {
    TolerancePolicy::default()
}

/// A transformation monoid on `points` points from 1–3 random generators.
pub fn random_monoid(rng: &mut ChaCha8Rng, points: usize, limit: usize) -> Option<(Arc<FiniteMonoid>, Vec<Vec<usize>>)> {
    let gens: Vec<Vec<usize>> = (0..rng.gen_range(1..=3))
        .map(|_| (0..points).map(|_| rng.gen_range(0..points)).collect())
        .collect();
    transformation_monoid(points, &gens, limit)
        .ok()
        .map(|(m, maps)| (Arc::new(m), maps))
}

/// The monoid acting on its defining points.
pub fn defining_action(monoid: &Arc<FiniteMonoid>, maps: &[Vec<usize>]) -> MSet {
    MSet::new(monoid.clone(), maps).expect("transformation action")
}

pub fn random_vector(rng: &mut ChaCha8Rng, dim: usize) -> Vector {
    (0..dim)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect()
}

/// Orthonormal basis of `ℂ^dim` from random vectors.
pub fn random_basis(rng: &mut ChaCha8Rng, dim: usize) -> Vec<Vector> {
    loop {
        let raw: Vec<Vector> = (0..dim).map(|_| random_vector(rng, dim)).collect();
        let s = Subspace::span(dim, &raw, &TolerancePolicy::new(1e-9, 1e-6).unwrap());
        if s.rank() == dim {
            return s.basis().to_vec();
        }
    }
}

/// `Σ values[i] |bᵢ⟩⟨bᵢ|` in a random orthonormal basis.
pub fn hermitian_with_spectrum(rng: &mut ChaCha8Rng, values: &[f64]) -> ComplexMatrix {
    let basis = random_basis(rng, values.len());
    basis
        .iter()
        .zip(values)
        .fold(ComplexMatrix::zeros(values.len()), |acc, (b, &v)| {
            &acc + &ComplexMatrix::outer(b).scaled(Complex64::new(v, 0.0))
        })
}

/// A Hermitian matrix with independent random entries.
pub fn random_hermitian(rng: &mut ChaCha8Rng, dim: usize) -> ComplexMatrix {
    let mut rows = vec![vec![Complex64::new(0.0, 0.0); dim]; dim];
    for r in 0..dim {
        rows[r][r] = Complex64::new(rng.gen_range(-2.0..2.0), 0.0);
        for c in r + 1..dim {
            let z = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            rows[r][c] = z;
            rows[c][r] = z.conj();
        }
    }
    ComplexMatrix::from_rows(&rows).unwrap()
}

/// A projector of rank `1..dim` onto a random subspace.
pub fn random_projector(rng: &mut ChaCha8Rng, dim: usize) -> Projector {
    let rank = rng.gen_range(1..dim.max(2));
    let basis = random_basis(rng, dim);
    Subspace::span(dim, &basis[..rank.min(dim)], &tol()).projector()
}

/// A projector onto a span of coordinate and "plus" vectors, so that
/// products of alphabet letters are frequently zero or rank-deficient.
pub fn structured_projector(rng: &mut ChaCha8Rng, dim: usize) -> Projector {
    let mut candidates: Vec<Vector> = (0..dim)
        .map(|i| {
            let mut e = vec![Complex64::new(0.0, 0.0); dim];
            e[i] = Complex64::new(1.0, 0.0);
            e
        })
        .collect();
    candidates.push(vec![Complex64::new(1.0, 0.0); dim]);
    candidates.shuffle(rng);
    let take = rng.gen_range(1..dim.max(2));
    Subspace::span(dim, &candidates[..take], &tol()).projector()
}
