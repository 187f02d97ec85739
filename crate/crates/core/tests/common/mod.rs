#![allow(dead_code)]

use std::collections::BTreeMap;

use entrochar::{DiscreteDistribution, RandomVectorDistribution, Relabeling};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::{Distribution, Exp1};

/// Random probability vector of length `n` with every entry at least
/// `p_min` (requires `n * p_min < 1`).
pub fn random_probs<R: Rng>(rng: &mut R, n: usize, p_min: f64) -> Vec<f64> {
    let w: Vec<f64> = (0..n).map(|_| Exp1.sample(rng)).collect();
    let total: f64 = w.iter().sum();
    let free = 1.0 - n as f64 * p_min;
    let mut p: Vec<f64> = w.iter().map(|x| p_min + free * x / total).collect();
    // Put rounding error on the largest entry so the sum is 1 to within an ulp.
    let err = 1.0 - p.iter().sum::<f64>();
    let big = (0..n).max_by(|&a, &b| p[a].total_cmp(&p[b])).unwrap();
    p[big] += err;
    p
}

pub fn random_scalar<R: Rng>(rng: &mut R, n: usize, p_min: f64) -> DiscreteDistribution {
    DiscreteDistribution::from_probs(&random_probs(rng, n, p_min)).unwrap()
}

/// Random sorted (decreasing) distribution.
pub fn random_sorted<R: Rng>(rng: &mut R, n: usize, p_min: f64) -> DiscreteDistribution {
    let mut p = random_probs(rng, n, p_min);
    p.sort_by(|a, b| b.total_cmp(a));
    DiscreteDistribution::from_probs(&p).unwrap()
}

/// Random distribution over a random subset of the product of the given
/// alphabet sizes, keeping every symbol in use and at most `max_support`
/// atoms.
pub fn random_vector<R: Rng>(rng: &mut R, sizes: &[usize], max_support: usize) -> RandomVectorDistribution {
    let total: usize = sizes.iter().product();
    let mut cells: Vec<Vec<usize>> = (0..total)
        .map(|mut c| {
            sizes
                .iter()
                .map(|&k| {
                    let s = c % k;
                    c /= k;
                    s
                })
                .collect()
        })
        .collect();
    loop {
        cells.shuffle(rng);
        let keep = rng.gen_range(1..=total.min(max_support));
        let chosen = &cells[..keep];
        let tight = sizes
            .iter()
            .enumerate()
            .all(|(m, &k)| (0..k).all(|s| chosen.iter().any(|c| c[m] == s)));
        if tight {
            let tuples = chosen
                .iter()
                .map(|c| c.iter().enumerate().map(|(m, s)| format!("{}{s}", (b'a' + m as u8) as char)).collect())
                .collect();
            let p = random_probs(rng, keep, 0.01 / keep as f64);
            return RandomVectorDistribution::new(tuples, p).unwrap();
        }
    }
}

/// Random per-coordinate bijections onto fresh label sets.
pub fn random_relabeling<R: Rng>(rng: &mut R, d: &RandomVectorDistribution) -> Relabeling {
    let maps = d
        .alphabets()
        .iter()
        .enumerate()
        .map(|(m, alpha)| {
            let mut targets: Vec<String> = (0..alpha.len()).map(|i| format!("m{m}s{i}")).collect();
            targets.shuffle(rng);
            alpha.iter().cloned().zip(targets).collect::<BTreeMap<_, _>>()
        })
        .collect();
    Relabeling { maps }
}

/// Joint distribution over `n` variables with alphabets of size `k`,
/// including zero cells (dropped from the support).
pub fn random_joint<R: Rng>(rng: &mut R, n: usize, k: usize) -> RandomVectorDistribution {
    let sizes = vec![k; n];
    let total: usize = sizes.iter().product();
    let mut tuples = Vec::new();
    let mut weights = Vec::new();
    for c in 0..total {
        if rng.gen_bool(0.3) && total > 1 {
            continue;
        }
        let mut x = c;
        tuples.push(
            (0..n)
                .map(|_| {
                    let s = x % k;
                    x /= k;
                    s.to_string()
                })
                .collect::<Vec<_>>(),
        );
        weights.push(rng.gen_range(0.05..1.0));
    }
    if tuples.is_empty() {
        tuples.push(vec!["0".to_string(); n]);
        weights.push(1.0);
    }
    let s: f64 = weights.iter().sum();
    let mut p: Vec<f64> = weights.iter().map(|w| w / s).collect();
    let err = 1.0 - p.iter().sum::<f64>();
    p[0] += err;
    RandomVectorDistribution::new(tuples, p).unwrap()
}
