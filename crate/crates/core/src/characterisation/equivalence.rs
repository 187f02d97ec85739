use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{MatchWitness, Relabeling};
use crate::dist::DiscreteDistribution;
use crate::error::{Error, Result};
use crate::partition::{enumerate_partitions, joint_entropy, oracle_from_distribution, BinaryPartition};
use crate::varset::VarSet;
use crate::{Tolerances, ENTROPY_TOL};

/// Largest support accepted by [`verify_partition_match`].
pub const MAX_MATCH_SUPPORT: usize = 8;

/// Supports up to this size are checked on every subfamily.
const EXHAUSTIVE_SUPPORT: usize = 4;

/// Subfamily size checked exhaustively on larger supports.
const CHECK_DEPTH: usize = 3;

/// Scalar equivalence with the default probability tolerance of `1e-9`.
pub fn scalar_equivalent(p: &DiscreteDistribution, q: &DiscreteDistribution) -> Option<Relabeling> {
    scalar_equivalent_with(p, q, 1e-9)
}

/// A bijection `σ` with `Pr(X = i) = Pr(X* = σ(i))` (within `tol`), pairing
/// the canonical sorted views of both distributions.
pub fn scalar_equivalent_with(
    p: &DiscreteDistribution,
    q: &DiscreteDistribution,
    tol: f64,
) -> Option<Relabeling> {
    if p.len() != q.len() {
        return None;
    }
    let (ps, qs) = (p.sorted(), q.sorted());
    if ps.probs().iter().zip(qs.probs()).any(|(a, b)| (a - b).abs() > tol) {
        return None;
    }
    let map: BTreeMap<String, String> = ps
        .support()
        .iter()
        .cloned()
        .zip(qs.support().iter().cloned())
        .collect();
    Some(Relabeling { maps: vec![map] })
}

#[derive(Clone, Copy, Debug)]
pub struct MatchOptions {
    pub tol_entropy: f64,
    pub seed: u64,
    /// Random subfamilies larger than the exhaustive depth to check on
    /// supports above four atoms.
    pub samples: usize,
}

impl Default for MatchOptions {
    fn default() -> Self {
        Self {
            tol_entropy: ENTROPY_TOL,
            seed: 0,
            samples: 10_000,
        }
    }
}

impl From<&Tolerances> for MatchOptions {
    fn from(t: &Tolerances) -> Self {
        Self {
            tol_entropy: t.entropy,
            ..Self::default()
        }
    }
}

struct Search<'a> {
    q: &'a DiscreteDistribution,
    order: Vec<BinaryPartition>,
    a_oracle: crate::partition::EntropyOracle,
    a_index: Vec<usize>,
    candidates: Vec<Vec<BinaryPartition>>,
    chosen: Vec<BinaryPartition>,
    depth: Option<usize>,
    tol: f64,
    samples: usize,
    rng: ChaCha8Rng,
}

impl Search<'_> {
    fn h_a(&self, positions: &[usize]) -> Result<f64> {
        let idx: Vec<usize> = positions.iter().map(|&k| self.a_index[k]).collect();
        self.a_oracle.query(&idx, VarSet::EMPTY)
    }

    fn h_b(&self, positions: &[usize]) -> Result<f64> {
        let parts: Vec<BinaryPartition> = positions.iter().map(|&k| self.chosen[k]).collect();
        joint_entropy(self.q, &parts, VarSet::EMPTY)
    }

    fn agrees(&self, positions: &[usize]) -> Result<bool> {
        Ok((self.h_a(positions)? - self.h_b(positions)?).abs() <= self.tol)
    }

    /// Checks every subfamily that contains position `k` and otherwise only
    /// earlier positions, up to the configured size.
    fn check_new(&self, k: usize) -> Result<bool> {
        let limit = self.depth.unwrap_or(usize::MAX);
        let mut stack: Vec<usize> = vec![k];
        self.extend_check(&mut stack, 0, k, limit)
    }

    fn extend_check(&self, stack: &mut Vec<usize>, from: usize, k: usize, limit: usize) -> Result<bool> {
        if !self.agrees(stack)? {
            return Ok(false);
        }
        if stack.len() >= limit {
            return Ok(true);
        }
        for j in from..k {
            stack.push(j);
            let ok = self.extend_check(stack, j + 1, k, limit)?;
            stack.pop();
            if !ok {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn sample_check(&mut self) -> Result<bool> {
        let m = self.order.len();
        let depth = self.depth.unwrap_or(m);
        if depth >= m {
            return Ok(true);
        }
        for _ in 0..self.samples {
            let mut picked: Vec<usize>;
            loop {
                picked = (0..m).filter(|_| self.rng.gen_bool(0.5)).collect();
                if picked.len() > depth {
                    break;
                }
            }
            if !self.agrees(&picked)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn dfs(&mut self, k: usize) -> Result<bool> {
        if k == self.order.len() {
            return self.sample_check();
        }
        for c in self.candidates[k].clone() {
            self.chosen.push(c);
            if self.check_new(k)? && self.dfs(k + 1)? {
                return Ok(true);
            }
            self.chosen.pop();
        }
        Ok(false)
    }
}

/// Searches for partition variables `B_<α>` of `q`'s support whose joint
/// entropies reproduce those of `p`'s partition variables `A_<α>`.
///
/// Supports of at most four atoms are checked on every subfamily; larger
/// ones (up to eight atoms) on every subfamily of at most three variables
/// plus `opts.samples` random larger subfamilies. Supports of different
/// sizes never match.
pub fn verify_partition_match(
    p: &DiscreteDistribution,
    q: &DiscreteDistribution,
    opts: &MatchOptions,
) -> Result<Option<MatchWitness>> {
    for d in [p, q] {
        if d.len() > MAX_MATCH_SUPPORT {
            return Err(Error::SupportTooLarge {
                size: d.len(),
                limit: MAX_MATCH_SUPPORT,
                what: "partition matching",
            });
        }
    }
    if p.len() != q.len() {
        return Ok(None);
    }
    let n = p.len();
    if n < 2 {
        return Ok(Some(MatchWitness {
            assignment: Vec::new(),
            verified_depth: 0,
            sampled: 0,
            seed: opts.seed,
        }));
    }
    let fam_p = enumerate_partitions(n)?;
    let fam_q = enumerate_partitions(n)?;
    let a_oracle = oracle_from_distribution(p)?;

    // Indicators first: they pin down the rest fastest.
    let mut a_index: Vec<usize> = (0..fam_p.len()).collect();
    a_index.sort_by_key(|&i| {
        let part = fam_p.partitions()[i];
        (!part.is_indicator(n), part.alpha_len(), part.alpha())
    });
    let order: Vec<BinaryPartition> = a_index.iter().map(|&i| fam_p.partitions()[i]).collect();

    let tol = opts.tol_entropy;
    let mut candidates = Vec::with_capacity(order.len());
    for &i in &a_index {
        let h = a_oracle.query(&[i], VarSet::EMPTY)?;
        let mut c = Vec::new();
        for &b in fam_q.partitions() {
            if (joint_entropy(q, &[b], VarSet::EMPTY)? - h).abs() <= tol {
                c.push(b);
            }
        }
        if c.is_empty() {
            return Ok(None);
        }
        candidates.push(c);
    }

    let depth = (n > EXHAUSTIVE_SUPPORT).then_some(CHECK_DEPTH);
    let mut search = Search {
        q,
        order,
        a_oracle,
        a_index,
        candidates,
        chosen: Vec::new(),
        depth,
        tol,
        samples: opts.samples,
        rng: ChaCha8Rng::seed_from_u64(opts.seed),
    };
    if !search.dfs(0)? {
        return Ok(None);
    }
    let m = search.order.len();
    let sampled = if depth.is_some_and(|d| d < m) { opts.samples } else { 0 };
    let mut assignment: Vec<(BinaryPartition, BinaryPartition)> =
        search.order.iter().copied().zip(search.chosen.iter().copied()).collect();
    assignment.sort_by_key(|(a, _)| fam_p.index_of(*a));
    Ok(Some(MatchWitness {
        assignment,
        verified_depth: depth.unwrap_or(m).min(m),
        sampled,
        seed: opts.seed,
    }))
}
