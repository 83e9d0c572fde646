mod common;

use mtopos_core::algebra::LeftIdeal;
use mtopos_core::mset::{classified_subset, is_equivariant, KFamily};
use proptest::prelude::*;
use rand::Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn characteristic_arrows_classify_invariant_subsets(seed in any::<u64>(), points in 2usize..=4) {
        let mut rng = common::rng(seed);
        let Some((m, maps)) = common::random_monoid(&mut rng, points, 16) else { return Ok(()); };
        let x = common::defining_action(&m, &maps);
        for j in x.invariant_subsets().unwrap() {
            let chi = x.characteristic_arrow(&j).unwrap();
            prop_assert!(is_equivariant(&x, &chi).unwrap());
            prop_assert_eq!(classified_subset(&chi), j);
        }
    }

    #[test]
    fn subset_truth_values_are_ideals(seed in any::<u64>(), points in 2usize..=4) {
        let mut rng = common::rng(seed);
        let Some((m, maps)) = common::random_monoid(&mut rng, points, 16) else { return Ok(()); };
        let x = common::defining_action(&m, &maps);
        let k = x.subset((0..points).filter(|_| rng.gen_bool(0.5))).unwrap();
        let k2 = x.subset((0..points).filter(|_| rng.gen_bool(0.5))).unwrap();
        for p in 0..points {
            let t = x.truth_in_subset(p, &k).unwrap();
            prop_assert!(LeftIdeal::new(m.clone(), t.members().clone()).is_ok());
            let fam = KFamily::from_subset(&x, &k).unwrap();
            prop_assert_eq!(x.truth_in_family(p, &fam).unwrap(), t);
            for q in 0..points {
                let e = x.truth_equal(p, q).unwrap();
                prop_assert!(LeftIdeal::new(m.clone(), e.members().clone()).is_ok());
            }
        }
        let leq = x.truth_subset_leq(&k, &k2).unwrap();
        prop_assert!(LeftIdeal::new(m.clone(), leq.members().clone()).is_ok());
        let fam = KFamily::from_subset(&x, &k).unwrap();
        let lambda = fam.to_lambda(&x).unwrap();
        prop_assert_eq!(lambda.to_family(&x).unwrap(), fam);
    }
}
