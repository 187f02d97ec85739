mod common;

use entrochar::characterisation::{
    factorize_relabeling, preserves_agreement, relabel_vector, witness_joint_map, MatchOptions,
};
use entrochar::{
    identify_indicators, oracle_from_distribution, reconstruct_scalar, scalar_equivalent, vector_equivalent,
    verify_partition_match, DiscreteDistribution, EntropyQuery,
};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reconstruction_recovers_sorted_probabilities(seed in any::<u64>(), n in 2usize..=6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = common::random_scalar(&mut rng, n, 0.01);
        let o = oracle_from_distribution(&d).unwrap();
        let got = reconstruct_scalar(&o, n).unwrap();
        for (a, b) in got.iter().zip(d.sorted_probs()) {
            prop_assert!((a - b).abs() < 1e-6);
        }
    }

    #[test]
    fn identified_indicators_are_singletons_in_probability_order(seed in any::<u64>(), n in 3usize..=6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = common::random_scalar(&mut rng, n, 0.01);
        let o = oracle_from_distribution(&d).unwrap();
        let found = identify_indicators(&o, n).unwrap();
        let order = d.sorted_order();
        for (rank, &k) in found.iter().enumerate() {
            let p = o.family().partitions()[k];
            prop_assert_eq!(p.indicated_atom(n), Some(order[rank]));
        }
    }

    #[test]
    fn later_indicators_never_determine_an_earlier_one(seed in any::<u64>(), n in 3usize..=5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = common::random_sorted(&mut rng, n, 0.05);
        let o = oracle_from_distribution(&d).unwrap();
        let ind: Vec<usize> = (0..n).map(|a| o.family().indicator_of(a).unwrap()).collect();
        for i in 1..n {
            prop_assert!(o.conditional(&[ind[i]], &ind[i + 1..]).unwrap() > 1e-9);
        }
    }

    #[test]
    fn scalar_witnesses_preserve_probabilities(seed in any::<u64>(), n in 1usize..=8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = common::random_scalar(&mut rng, n, 0.01);
        let mut idx: Vec<usize> = (0..n).collect();
        idx.shuffle(&mut rng);
        let q = DiscreteDistribution::new(
            idx.iter().map(|&i| format!("y{i}")).collect(),
            idx.iter().map(|&i| d.probs()[i]).collect(),
        ).unwrap();
        let w = scalar_equivalent(&d, &q).unwrap();
        for (x, y) in &w.maps[0] {
            prop_assert_eq!(d.prob_of(x), q.prob_of(y));
        }
    }

    #[test]
    fn vector_witnesses_factor_and_keep_agreement(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sizes = [rng.gen_range(1..=4), rng.gen_range(1..=4)];
        let d = common::random_vector(&mut rng, &sizes, 16);
        let e = relabel_vector(&d, &common::random_relabeling(&mut rng, &d)).unwrap();
        let w = vector_equivalent(&d, &e).unwrap().unwrap();
        let sigma = witness_joint_map(&d, &e, &w).unwrap();
        prop_assert!(preserves_agreement(&d, &e, &sigma));
        prop_assert_eq!(factorize_relabeling(&d, &e, &sigma).unwrap(), Some(w));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// On supports of at most four atoms every subfamily is checked, so a
    /// partition match exists exactly when the distributions agree up to
    /// relabelling.
    #[test]
    fn partition_match_iff_scalar_equivalent(seed in any::<u64>(), n in 2usize..=4, related in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = common::random_scalar(&mut rng, n, 0.02);
        let q = if related {
            let mut probs = p.probs().to_vec();
            probs.shuffle(&mut rng);
            DiscreteDistribution::from_probs(&probs).unwrap()
        } else {
            common::random_scalar(&mut rng, n, 0.02)
        };
        let opts = MatchOptions::default();
        let matched = verify_partition_match(&p, &q, &opts).unwrap();
        let equivalent = scalar_equivalent(&p, &q);
        prop_assert_eq!(matched.is_some(), equivalent.is_some());
        if let Some(w) = matched {
            prop_assert_eq!(w.assignment.len(), (1usize << (n - 1)) - 1);
        }
    }
}
