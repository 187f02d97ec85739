use super::preserves_agreement;
use crate::dist::{grouped_entropy, DiscreteDistribution, RandomVectorDistribution};
use crate::error::{Error, Result};
use crate::partition::{
    enumerate_partitions, joint_entropy, oracle_from_distribution, Atoms, BinaryPartition, EntropyQuery,
};
use crate::{ENTROPY_TOL, PROB_TOL};

/// Largest support accepted by the exhaustive property checkers.
pub const MAX_PROPS_SUPPORT: usize = 10;

fn check_size(n: usize, what: &'static str) -> Result<()> {
    if n > MAX_PROPS_SUPPORT {
        return Err(Error::SupportTooLarge {
            size: n,
            limit: MAX_PROPS_SUPPORT,
            what,
        });
    }
    if n < 2 {
        return Err(Error::SupportTooSmall {
            size: n,
            reason: "partition variables need at least two atoms",
        });
    }
    Ok(())
}

/// Smallest `H(A_<α> | A_<β>)` over ordered pairs of distinct partitions.
pub fn distinctness_margin<D: Atoms + ?Sized>(d: &D) -> Result<f64> {
    let n = d.atom_probs().len();
    check_size(n, "distinctness check")?;
    let o = oracle_from_distribution(d)?;
    let m = o.num_partitions();
    let mut margin = f64::INFINITY;
    for a in 0..m {
        for b in (0..m).filter(|&b| b != a) {
            margin = margin.min(o.conditional(&[a], &[b])?);
        }
    }
    Ok(margin)
}

/// Checks that every non-constant binary function of the outcome carries the
/// same information as exactly one partition variable, and that each
/// partition variable arises from exactly two such functions (`f` and `1-f`).
///
/// Returns one message per violation.
pub fn check_completeness<D: Atoms + ?Sized>(d: &D) -> Result<Vec<String>> {
    let probs = d.atom_probs();
    let n = probs.len();
    check_size(n, "completeness check")?;
    let family = enumerate_partitions(n)?;
    let mut hits = vec![0usize; family.len()];
    let mut violations = Vec::new();
    for f in 0u32..(1 << n) {
        let value = |a: usize| (f >> a) & 1;
        let hf = grouped_entropy(probs, value);
        if hf <= ENTROPY_TOL {
            continue;
        }
        let matches: Vec<usize> = (0..family.len())
            .filter(|&k| {
                let p = family.partitions()[k];
                let ha = grouped_entropy(probs, |a| p.contains(a));
                let joint = grouped_entropy(probs, |a| (value(a), p.contains(a)));
                joint - ha <= ENTROPY_TOL && joint - hf <= ENTROPY_TOL
            })
            .collect();
        if matches.len() != 1 {
            violations.push(format!(
                "binary function {f:#b} matches {} partition variables",
                matches.len()
            ));
        }
        for k in matches {
            hits[k] += 1;
        }
    }
    for (k, &h) in hits.iter().enumerate() {
        if h != 2 {
            violations.push(format!("{} is induced by {h} binary functions", family.partitions()[k]));
        }
    }
    Ok(violations)
}

/// Greedily extends `<α>` (family index `alpha`) by `n - 2` partitions, each
/// with positive entropy given all previous ones. Returns the chain without
/// `alpha`, or `None` if greedy extension stalls.
pub fn basis_chain<D: Atoms + ?Sized>(d: &D, alpha: usize) -> Result<Option<Vec<usize>>> {
    let n = d.atom_probs().len();
    check_size(n, "basis chain search")?;
    let o = oracle_from_distribution(d)?;
    let m = o.num_partitions();
    if alpha >= m {
        return Err(Error::PartitionOutOfRange { index: alpha, len: m });
    }
    let mut chosen = vec![alpha];
    for _ in 0..n - 2 {
        let mut next = None;
        for b in (0..m).filter(|b| !chosen.contains(b)) {
            if o.conditional(&[b], &chosen)? > ENTROPY_TOL {
                next = Some(b);
                break;
            }
        }
        match next {
            Some(b) => chosen.push(b),
            None => return Ok(None),
        }
    }
    chosen.remove(0);
    Ok(Some(chosen))
}

/// Checks the entropic characterisation of indicator variables on a
/// distribution sorted by decreasing probability.
///
/// For every atom `i >= 2` (1-based), with `J = {A_<j>, j > i}`:
/// `H(A_<i> | J) > 0`; every `<α>` with `H(A_<α> | J) > 0` has
/// `H(A_<i>) <= H(A_<α>)`, with equality only for indicators of atoms `ℓ`
/// with `p_ℓ = p_i`. Also checks that `A_<1>` is the only variable with
/// positive entropy given the indicators of any proper subset of
/// `{2, ..., n}`. Returns one message per violation.
pub fn check_indicator_props(d: &DiscreteDistribution) -> Result<Vec<String>> {
    let n = d.len();
    check_size(n, "indicator property check")?;
    if n < 3 {
        return Err(Error::SupportTooSmall {
            size: n,
            reason: "indicators are distinct partition variables only from three atoms",
        });
    }
    let p = d.probs();
    if p.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::Contract("distribution must be sorted by decreasing probability".into()));
    }
    let o = oracle_from_distribution(d)?;
    let family = o.family();
    let m = family.len();
    let ind: Vec<usize> = (0..n).map(|a| family.indicator_of(a).expect("n >= 3")).collect();
    let single: Vec<f64> = (0..m).map(|k| o.entropy_of(&[k])).collect::<Result<_>>()?;
    let mut violations = Vec::new();

    for i in 1..n {
        let later = &ind[i + 1..];
        let h = o.conditional(&[ind[i]], later)?;
        if h <= ENTROPY_TOL {
            violations.push(format!("H(A_<{}> | later indicators) = {h:e}", i + 1));
        }
        for k in 0..m {
            if o.conditional(&[k], later)? <= ENTROPY_TOL {
                continue;
            }
            let gap = single[k] - single[ind[i]];
            let part = family.partitions()[k];
            if gap < -ENTROPY_TOL {
                violations.push(format!(
                    "H({part}) < H(A_<{}>) by {:e} although undetermined by later indicators",
                    i + 1,
                    -gap
                ));
            } else if gap <= ENTROPY_TOL {
                let tie = part
                    .indicated_atom(n)
                    .is_some_and(|l| (p[l] - p[i]).abs() <= ENTROPY_TOL);
                if !tie {
                    violations.push(format!("H({part}) equals H(A_<{}>) without a probability tie", i + 1));
                }
            }
        }
    }

    // Proper subsets of {2..n}: masks over positions 1..n of `ind`, excluding the full one.
    let rest = n - 1;
    let mut unique: Vec<usize> = Vec::new();
    for k in 0..m {
        let mut always_positive = true;
        for s in 0u32..(1 << rest) - 1 {
            let given: Vec<usize> = (0..rest).filter(|b| s >> b & 1 == 1).map(|b| ind[b + 1]).collect();
            if o.conditional(&[k], &given)? <= ENTROPY_TOL {
                always_positive = false;
                break;
            }
        }
        if always_positive {
            unique.push(k);
        }
    }
    if unique != [ind[0]] {
        violations.push(format!(
            "variables undetermined by every proper subset of later indicators: {:?}, expected only {}",
            unique.iter().map(|&k| family.partitions()[k].to_string()).collect::<Vec<_>>(),
            family.partitions()[ind[0]]
        ));
    }
    Ok(violations)
}

/// Outcome of [`check_partition_props_with`].
#[derive(Clone, Debug, PartialEq)]
pub struct PartitionPropsReport {
    pub support_size: usize,
    pub partitions_checked: usize,
    /// Partitions `<α>` for which the number of variables satisfying both
    /// vanishing conditions is not exactly one, or the unique one differs
    /// from the image of `α`.
    pub violations: Vec<String>,
    /// Whether the atom map keeps per-coordinate agreement between every
    /// pair of atoms.
    pub agreement_preserved: bool,
}

impl PartitionPropsReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty() && self.agreement_preserved
    }
}

/// [`check_partition_props_with`] for a distribution against itself under
/// the identity map.
pub fn check_partition_props(d: &RandomVectorDistribution) -> Result<PartitionPropsReport> {
    let identity: Vec<usize> = (0..d.len()).collect();
    check_partition_props_with(d, d, &identity)
}

/// Transports the indicators of `p` to `q` through `sigma` (atom `i` of `p`
/// goes to atom `sigma[i]` of `q`) and, for every partition `<α>` of `p`,
/// searches all partitions `<β>` of `q` for those with
///
/// * `H(A*_<β> | A*_<σ(x)>, x ∈ γ) = 0` iff `γ = α`, for all `γ ⊆ α`;
/// * the same with `α^c` in place of `α`.
///
/// Exactly one `<β>` must qualify and it must equal `<{σ(x) : x ∈ α}>`.
pub fn check_partition_props_with(
    p: &RandomVectorDistribution,
    q: &RandomVectorDistribution,
    sigma: &[usize],
) -> Result<PartitionPropsReport> {
    let n = p.len();
    check_size(n, "partition property check")?;
    if q.len() != n || sigma.len() != n {
        return Err(Error::Contract("atom map is not a bijection between the supports".into()));
    }
    let mut hit = vec![false; n];
    for (i, &j) in sigma.iter().enumerate() {
        if j >= n || std::mem::replace(&mut hit[j], true) {
            return Err(Error::Contract("atom map is not a bijection between the supports".into()));
        }
        if (p.probs()[i] - q.probs()[j]).abs() > PROB_TOL {
            return Err(Error::Contract(format!("atom {i} and its image {j} differ in probability")));
        }
    }

    let fq = enumerate_partitions(n)?;
    let indicator = |y: usize| BinaryPartition::new(1 << y, n).expect("atom in range");
    // zero[s][b]: H(A*_b | indicators of the q-atoms in s) vanishes.
    let mut zero = vec![vec![false; fq.len()]; 1 << n];
    for (s, row) in zero.iter_mut().enumerate() {
        let given: Vec<BinaryPartition> = (0..n).filter(|y| s >> y & 1 == 1).map(indicator).collect();
        let base = joint_entropy(q, &given, Default::default())?;
        let mut with = given.clone();
        with.push(indicator(0));
        for (b, z) in row.iter_mut().enumerate() {
            *with.last_mut().expect("pushed") = fq.partitions()[b];
            *z = joint_entropy(q, &with, Default::default())? - base <= ENTROPY_TOL;
        }
    }
    let image = |mask: u32| -> usize {
        (0..n).filter(|x| mask >> x & 1 == 1).fold(0, |acc, x| acc | 1 << sigma[x])
    };
    let full = (1u32 << n) - 1;
    // Vanishes exactly at gamma = side, over all gamma ⊆ side.
    let sharp = |side: u32, b: usize| -> bool {
        let mut g = side;
        loop {
            if zero[image(g)][b] != (g == side) {
                return false;
            }
            if g == 0 {
                return true;
            }
            g = (g - 1) & side;
        }
    };

    let fp = enumerate_partitions(n)?;
    let mut violations = Vec::new();
    for alpha in fp.partitions() {
        let a = alpha.alpha();
        let found: Vec<usize> = (0..fq.len()).filter(|&b| sharp(a, b) && sharp(full ^ a, b)).collect();
        let expected = BinaryPartition::new(image(a) as u32, n)?;
        match found.as_slice() {
            [b] if fq.partitions()[*b] == expected => {}
            [b] => violations.push(format!(
                "{alpha}: unique qualifying partition {} differs from its image {expected}",
                fq.partitions()[*b]
            )),
            many => violations.push(format!("{alpha}: {} partitions satisfy both conditions", many.len())),
        }
    }
    Ok(PartitionPropsReport {
        support_size: n,
        partitions_checked: fp.len(),
        violations,
        agreement_preserved: preserves_agreement(p, q, sigma),
    })
}
