mod common;

use mtopos_core::linalg::{
    apply_function, hermitian_eig, image_subspace, norm, spectral_projector, ComplexMatrix, Subspace,
};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn spectral_reconstruction(seed in any::<u64>(), dim in 1usize..=8) {
        let mut rng = common::rng(seed);
        let a = common::random_hermitian(&mut rng, dim);
        let op = hermitian_eig(&a, &common::tol()).unwrap();
        let err = (&op.reconstruct() - &a).frobenius_norm();
        prop_assert!(err <= 10.0 * 1e-9 * a.frobenius_norm(), "error {err}");
        let sum = op.spectrum().iter().fold(ComplexMatrix::zeros(dim), |acc, c| &acc + c.projector.matrix());
        prop_assert!(sum.approx_eq(&ComplexMatrix::identity(dim), 1e-9));
        for (i, ci) in op.spectrum().iter().enumerate() {
            let p = ci.projector.matrix();
            prop_assert!((&(p * p) - p).max_abs() < 1e-9);
            for cj in &op.spectrum()[i + 1..] {
                prop_assert!((p * cj.projector.matrix()).max_abs() < 1e-9);
            }
        }
    }

    #[test]
    fn spectral_projectors_are_ordered_under_functions(seed in any::<u64>(), dim in 1usize..=6) {
        let mut rng = common::rng(seed);
        let labels = [-1.0, 0.0, 1.0, 2.0];
        let spectrum: Vec<f64> = (0..dim).map(|_| *labels.choose(&mut rng).unwrap()).collect();
        let a = common::hermitian_with_spectrum(&mut rng, &spectrum);
        let op = hermitian_eig(&a, &common::tol()).unwrap().snap_to(&labels, 1e-9).unwrap();
        let delta: Vec<f64> = labels.iter().copied().filter(|_| rng.gen_bool(0.5)).collect();
        let table: Vec<f64> = labels.iter().map(|_| *labels.choose(&mut rng).unwrap()).collect();
        let f = |v: f64| labels.iter().position(|&l| l == v).map(|i| table[i]);
        let fa = apply_function(&op, f).unwrap();
        let f_delta: Vec<f64> = delta.iter().filter_map(|&d| f(d)).collect();
        let e = spectral_projector(&op, &delta, 1e-9);
        let ef = spectral_projector(&fa, &f_delta, 1e-9);
        prop_assert!((e.matrix() * ef.matrix()).approx_eq(e.matrix(), 1e-8));
    }

    #[test]
    fn image_subspace_is_functorial(seed in any::<u64>(), dim in 1usize..=5) {
        let mut rng = common::rng(seed);
        let a = common::random_projector(&mut rng, dim);
        let b = common::structured_projector(&mut rng, dim);
        let vecs: Vec<_> = (0..rng.gen_range(0..=dim)).map(|_| common::random_vector(&mut rng, dim)).collect();
        let k = Subspace::span(dim, &vecs, &common::tol());
        let ab = a.matrix() * b.matrix();
        let direct = image_subspace(&ab, &k, &common::tol());
        let nested = image_subspace(a.matrix(), &image_subspace(b.matrix(), &k, &common::tol()), &common::tol());
        prop_assert!(direct.approx_eq(&nested, &mtopos_core::linalg::TolerancePolicy::new(1e-9, 1e-7).unwrap()));
        prop_assert!(direct.rank() <= k.rank());
    }

    #[test]
    fn projectors_are_contractions(seed in any::<u64>(), dim in 1usize..=6) {
        let mut rng = common::rng(seed);
        let p = common::random_projector(&mut rng, dim);
        let v = common::random_vector(&mut rng, dim);
        prop_assert!(norm(&p.apply(&v)) <= norm(&v) * (1.0 + 1e-9));
    }
}
