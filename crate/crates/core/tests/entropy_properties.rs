mod common;

use entrochar::dist::{binary_entropy, invert_binary_entropy, subset_entropy};
use entrochar::{
    joint_entropy, oracle_from_distribution, BinaryPartition, DiscreteDistribution, EntropyQuery, VarSet,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn probs(max_n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.01f64..1.0, 1..=max_n).prop_map(|w| {
        let s: f64 = w.iter().sum();
        let mut p: Vec<f64> = w.iter().map(|x| x / s).collect();
        let err = 1.0 - p.iter().sum::<f64>();
        p[0] += err;
        p
    })
}

proptest! {
    #[test]
    fn entropy_is_between_zero_and_log_support(p in probs(12)) {
        let d = DiscreteDistribution::from_probs(&p).unwrap();
        let h = d.entropy();
        prop_assert!(h >= 0.0);
        prop_assert!(h <= (p.len() as f64).log2() + 1e-12);
    }

    #[test]
    fn binary_entropy_inverts(q in 0.0f64..=0.5) {
        let back = invert_binary_entropy(binary_entropy(q).unwrap()).unwrap();
        // Near q = 1/2 the slope of h_b vanishes, so the error in q scales
        // like the square root of rounding error.
        prop_assert!((back - q).abs() < 1e-7, "{} -> {}", q, back);
    }

    #[test]
    fn subset_entropy_is_monotone_and_submodular(seed in any::<u64>(), n in 1usize..=4, k in 2usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = common::random_joint(&mut rng, n, k);
        let full = VarSet::full(n);
        let h = |s: VarSet| if s.is_empty() { 0.0 } else { subset_entropy(&d, s).unwrap() };
        for a in full.subsets() {
            for b in full.subsets() {
                if a.is_subset(b) {
                    prop_assert!(h(a) <= h(b) + 1e-9);
                }
                prop_assert!(h(a) + h(b) + 1e-9 >= h(a.union(b)) + h(a.intersection(b)));
            }
        }
    }

    #[test]
    fn partitions_are_functions_of_the_outcome(seed in any::<u64>(), n in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = common::random_joint(&mut rng, n, 2);
        prop_assume!(d.len() >= 2);
        let oracle = oracle_from_distribution(&d).unwrap();
        let all: Vec<BinaryPartition> = oracle.family().partitions().to_vec();
        let full = VarSet::full(n);
        let hx = subset_entropy(&d, full).unwrap();
        prop_assert_eq!(joint_entropy(&d, &all, full).unwrap(), hx);
        prop_assert_eq!(joint_entropy(&d, &all[..1], full).unwrap(), hx);
    }

    #[test]
    fn oracle_is_monotone_and_submodular(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = common::random_joint(&mut rng, 2, 2);
        prop_assume!(d.len() >= 3);
        let o = oracle_from_distribution(&d).unwrap();
        let m = o.num_partitions();
        // Elements of the lattice: partition subsets crossed with coordinate subsets.
        let elems: Vec<(Vec<usize>, VarSet)> = (0u32..1 << m.min(4))
            .flat_map(|s| {
                VarSet::full(2).subsets().map(move |t| ((0..m.min(4)).filter(|i| s >> i & 1 == 1).collect(), t))
            })
            .collect();
        let q = |(delta, tau): &(Vec<usize>, VarSet)| o.query(delta, *tau).unwrap();
        for a in &elems {
            for b in &elems {
                let union: Vec<usize> = {
                    let mut u = a.0.clone();
                    u.extend(&b.0);
                    u
                };
                let inter: Vec<usize> = a.0.iter().copied().filter(|i| b.0.contains(i)).collect();
                let ua = (union.clone(), a.1.union(b.1));
                let ia = (inter, a.1.intersection(b.1));
                prop_assert!(q(a) <= q(&ua) + 1e-9);
                prop_assert!(q(a) + q(b) + 1e-9 >= q(&ua) + q(&ia));
            }
        }
    }

    #[test]
    fn oracle_matches_direct_computation(p in probs(6)) {
        prop_assume!(p.len() >= 2);
        let d = DiscreteDistribution::from_probs(&p).unwrap();
        let o = oracle_from_distribution(&d).unwrap();
        let parts = o.family().partitions().to_vec();
        let all: Vec<usize> = (0..parts.len()).collect();
        let direct = joint_entropy(&d, &parts, VarSet::EMPTY).unwrap();
        prop_assert_eq!(o.entropy_of(&all).unwrap(), direct);
        let before = o.computations();
        prop_assert_eq!(o.entropy_of(&all).unwrap(), direct);
        prop_assert_eq!(o.computations(), before);
        prop_assert!((direct - d.entropy()).abs() < 1e-12);
    }
}
