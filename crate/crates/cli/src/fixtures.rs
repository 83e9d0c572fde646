//! Seeded generators for random monoids, operators, states and alphabets,
//! plus a small catalogue of named monoids.

use std::sync::Arc;

use mtopos_core::algebra::{transformation_monoid, FiniteMonoid};
use mtopos_core::linalg::{ComplexMatrix, Projector, Subspace, TolerancePolicy, Vector};
use mtopos_core::reduction::{Alphabet, Reducer};
use mtopos_core::linalg::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Rng64 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng64 {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Monoids that can be named on the command line without a definition file.
pub fn builtin_monoid(name: &str) -> Option<FiniteMonoid> {
    let (table, names): (Vec<Vec<usize>>, &[&str]) = match name {
        // {1, e} with e idempotent: the smallest non-Boolean truth algebra.
        "M2" => (vec![vec![0, 1], vec![1, 1]], &["1", "e"]),
        "Z2" => (vec![vec![0, 1], vec![1, 0]], &["1", "g"]),
        // Identity and the two constant maps on two points.
        "T2" => (vec![vec![0, 1, 2], vec![1, 1, 1], vec![2, 2, 2]], &["1", "c0", "c1"]),
        _ => return None,
    };
    let m = FiniteMonoid::from_table(&table).ok()?;
    m.with_names(names.iter().map(|s| s.to_string()).collect()).ok()
}

pub const BUILTIN_MONOIDS: [&str; 3] = ["M2", "Z2", "T2"];

/// A transformation monoid on `points` points from 1 to 3 random generators,
/// with its defining maps. `None` if it exceeds `limit` elements.
pub fn random_transformation_monoid(
    rng: &mut Rng64,
    points: usize,
    limit: usize,
) -> Option<(Arc<FiniteMonoid>, Vec<Vec<usize>>)> {
    let gens: Vec<Vec<usize>> = (0..rng.gen_range(1..=3))
        .map(|_| (0..points).map(|_| rng.gen_range(0..points)).collect())
        .collect();
    transformation_monoid(points, &gens, limit)
        .ok()
        .map(|(m, maps)| (Arc::new(m), maps))
}

/// Draws transformation monoids until one has between `min` and `max`
/// elements.
pub fn random_monoid_of_size(rng: &mut Rng64, min: usize, max: usize) -> (Arc<FiniteMonoid>, Vec<Vec<usize>>) {
    loop {
        let points = rng.gen_range(2..=4);
        if let Some((m, maps)) = random_transformation_monoid(rng, points, max) {
            if m.size() >= min {
                return (m, maps);
            }
        }
    }
}

pub fn random_vector(rng: &mut Rng64, dim: usize) -> Vector {
    (0..dim)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect()
}

/// An orthonormal basis of `ℂ^dim`.
pub fn random_basis(rng: &mut Rng64, dim: usize) -> Vec<Vector> {
    let tol = TolerancePolicy::new(1e-9, 1e-6).expect("valid tolerance");
    loop {
        let raw: Vec<Vector> = (0..dim).map(|_| random_vector(rng, dim)).collect();
        let s = Subspace::span(dim, &raw, &tol);
        if s.rank() == dim {
            return s.basis().to_vec();
        }
    }
}

/// `Σ values[i] |bᵢ⟩⟨bᵢ|` in a random orthonormal basis.
pub fn hermitian_with_spectrum(rng: &mut Rng64, values: &[f64]) -> ComplexMatrix {
    let basis = random_basis(rng, values.len());
    basis
        .iter()
        .zip(values)
        .fold(ComplexMatrix::zeros(values.len()), |acc, (b, &v)| {
            &acc + &ComplexMatrix::outer(b).scaled(Complex64::new(v, 0.0))
        })
}

/// A spectrum of length `dim` drawn from `values`, using every value at
/// least once when `dim` allows it.
pub fn random_spectrum(rng: &mut Rng64, values: &[f64], dim: usize) -> Vec<f64> {
    let mut spec: Vec<f64> = values.iter().copied().take(dim).collect();
    while spec.len() < dim {
        spec.push(*values.choose(rng).expect("non-empty values"));
    }
    spec.shuffle(rng);
    spec
}

/// A projector onto a span of coordinate and all-ones vectors. Products of
/// such letters are often zero or rank-deficient, which exercises the
/// annihilation paths.
pub fn structured_projector(rng: &mut Rng64, dim: usize, tol: &TolerancePolicy) -> Projector {
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
    Subspace::span(dim, &candidates[..take], tol).projector()
}

/// A projector of rank `1..dim` onto a random subspace.
pub fn random_projector(rng: &mut Rng64, dim: usize, tol: &TolerancePolicy) -> Projector {
    let rank = rng.gen_range(1..dim.max(2));
    let basis = random_basis(rng, dim);
    Subspace::span(dim, &basis[..rank.min(dim)], tol).projector()
}

/// A reducer over `letters` projectors in dimension `dim`, mixing structured
/// and generic letters.
pub fn random_reducer(rng: &mut Rng64, dim: usize, letters: usize, tol: &TolerancePolicy) -> Reducer {
    let projectors: Vec<Projector> = (0..letters)
        .map(|_| {
            if rng.gen_bool(0.5) {
                structured_projector(rng, dim, tol)
            } else {
                random_projector(rng, dim, tol)
            }
        })
        .collect();
    let names = (0..letters).map(|i| format!("P{i}")).collect();
    let alphabet = Alphabet::projectors(names, projectors).expect("valid alphabet");
    Reducer::new(alphabet, *tol)
}

/// A state that is either generic or an eigenvector-like coordinate or
/// all-ones vector, so annihilation by structured letters occurs.
pub fn random_state(rng: &mut Rng64, dim: usize) -> Vector {
    match rng.gen_range(0..3) {
        0 => {
            let mut e = vec![Complex64::new(0.0, 0.0); dim];
            e[rng.gen_range(0..dim)] = Complex64::new(1.0, 0.0);
            e
        }
        1 => vec![Complex64::new(1.0, 0.0); dim],
        _ => random_vector(rng, dim),
    }
}
