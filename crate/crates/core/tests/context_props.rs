mod common;

use fixedbitset::FixedBitSet;
use mtopos_core::algebra::enumerate_strings;
use mtopos_core::context::{
    arrows_out, in_sp0, presheaf_contains, presheaf_restrict, sieve_truth_equal, sieve_valuation,
    GaloisContext, RaySet, StringUniverse,
};
use mtopos_core::linalg::{norm, sub, Ray};
use mtopos_core::reduction::{Alphabet, Reducer};
use proptest::prelude::*;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

fn reducer(rng: &mut ChaCha8Rng, dim: usize) -> Reducer {
    let letters: Vec<_> = (0..rng.gen_range(1..=3))
        .map(|_| common::structured_projector(rng, dim))
        .collect();
    let names = (0..letters.len()).map(|i| format!("P{i}")).collect();
    Reducer::new(Alphabet::projectors(names, letters).unwrap(), common::tol())
}

fn random_subset(rng: &mut ChaCha8Rng, n: usize) -> FixedBitSet {
    let mut s = FixedBitSet::with_capacity(n);
    for i in 0..n {
        if rng.gen_bool(0.3) {
            s.insert(i);
        }
    }
    s
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn galois_laws(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let dim = rng.gen_range(2..=3);
        let r = reducer(&mut rng, dim);
        let u = StringUniverse::new(&r, 3).unwrap();
        let mut named = Vec::new();
        for i in 0..rng.gen_range(1..=12) {
            let v = if rng.gen_bool(0.5) {
                common::structured_projector(&mut rng, dim).range(&common::tol()).basis()[0].clone()
            } else {
                common::random_vector(&mut rng, dim)
            };
            named.push((format!("r{i}"), Ray::new(&v, &common::tol()).unwrap()));
        }
        let mut unique: Vec<(String, Ray)> = Vec::new();
        for (n, ray) in named {
            if !unique.iter().any(|(_, r)| r.same(&ray, 1e-9)) {
                unique.push((n, ray));
            }
        }
        let g = GaloisContext::new(r, u, RaySet::new(unique, 1e-9).unwrap()).unwrap();
        let (nv, nu) = (g.rays().len(), g.strings().len());
        let xi1 = random_subset(&mut rng, nv);
        let mut xi2 = xi1.clone();
        xi2.union_with(&random_subset(&mut rng, nv));
        prop_assert!(g.polar_of_rays(&xi2).unwrap().is_subset(&g.polar_of_rays(&xi1).unwrap()));
        prop_assert!(xi1.is_subset(&g.closure_rays(&xi1).unwrap()));
        let j = random_subset(&mut rng, nu);
        prop_assert!(j.is_subset(&g.closure_strings(&j).unwrap()));
        let j0 = g.polar_of_strings(&j).unwrap();
        prop_assert_eq!(g.closure_rays(&j0).unwrap(), j0.clone());
        prop_assert!(g.is_full(&j0).unwrap());
        let xi0 = g.polar_of_rays(&xi1).unwrap();
        prop_assert_eq!(g.closure_strings(&xi0).unwrap(), xi0);
    }

    #[test]
    fn presheaf_is_functorial(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let dim = rng.gen_range(2..=3);
        let r = reducer(&mut rng, dim);
        let psi = common::random_vector(&mut rng, dim);
        for q in enumerate_strings(r.alphabet().len(), 4, 1 << 12).unwrap() {
            if !in_sp0(&r, &q).unwrap() || !presheaf_contains(&r, &q, &psi).unwrap() {
                continue;
            }
            let arrows = arrows_out(&r, &q).unwrap();
            for a1 in &arrows {
                prop_assert!(in_sp0(&r, &a1.codomain).unwrap());
                prop_assert!(in_sp0(&r, &a1.tail).unwrap());
                let mid = presheaf_restrict(&r, a1, &psi).unwrap();
                for a2 in arrows_out(&r, &a1.codomain).unwrap() {
                    let two = presheaf_restrict(&r, &a2, &mid).unwrap();
                    let one = presheaf_restrict(&r, &a1.then(&a2).unwrap(), &psi).unwrap();
                    prop_assert!(norm(&sub(&two, &one)) <= 1e-9);
                }
            }
        }
    }

    #[test]
    fn sieves_are_final_segments(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let dim = rng.gen_range(2..=3);
        let r = reducer(&mut rng, dim);
        let psi = common::random_vector(&mut rng, dim);
        let phi = common::random_vector(&mut rng, dim);
        let k = common::structured_projector(&mut rng, dim).range(&common::tol());
        for q in enumerate_strings(r.alphabet().len(), 3, 1 << 12).unwrap() {
            if presheaf_contains(&r, &q, &psi).unwrap() && presheaf_contains(&r, &q, &phi).unwrap() {
                let s = sieve_truth_equal(&r, &psi, &phi, &q).unwrap();
                let lens = s.included_tail_lengths();
                prop_assert!(lens.is_empty() || *lens.last().unwrap() == q.len());
                prop_assert!(lens.windows(2).all(|w| w[1] == w[0] + 1));
            }
            if presheaf_contains(&r, &q, &psi).unwrap() {
                sieve_valuation(&r, &psi, &k, &q).unwrap();
            }
        }
    }
}
