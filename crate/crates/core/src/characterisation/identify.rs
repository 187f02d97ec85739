use crate::dist::{entropy_of_masses, invert_binary_entropy};
use crate::error::{Error, Result};
use crate::partition::EntropyQuery;
use crate::varset::VarSet;
use crate::Tolerances;

/// Tolerance on `Σ p = 1` and on pairwise joint entropies when choosing
/// between `q` and `1 - q` for each atom.
const BRANCH_TOL: f64 = 1e-8;

/// Largest support for the `2^n` branch search.
const MAX_BRANCH_ATOMS: usize = 20;

/// Recognises the indicator variables among the partition variables using
/// entropy queries only.
///
/// Returns family indices of the indicators for atoms `1..=n` of the
/// canonical sorted distribution (`p_1 >= ... >= p_n`): position 0 holds the
/// indicator of the most likely atom.
pub fn identify_indicators<Q: EntropyQuery + ?Sized>(oracle: &Q, n: usize) -> Result<Vec<usize>> {
    identify_indicators_with(oracle, n, &Tolerances::default())
}

pub fn identify_indicators_with<Q: EntropyQuery + ?Sized>(
    oracle: &Q,
    n: usize,
    tol: &Tolerances,
) -> Result<Vec<usize>> {
    if n < 3 {
        return Err(Error::SupportTooSmall {
            size: n,
            reason: "indicator identification needs at least three atoms",
        });
    }
    check_shape(oracle, n)?;
    let m = oracle.num_partitions();
    let eps = tol.entropy;
    let single: Vec<f64> = (0..m).map(|j| oracle.entropy_of(&[j])).collect::<Result<_>>()?;

    // Peel i = n, n-1, ..., 2: the indicator of atom i has the least entropy
    // among variables not determined by the indicators already found.
    let mut peeled: Vec<usize> = Vec::with_capacity(n - 1);
    for _ in 0..n - 1 {
        let mut best: Option<usize> = None;
        for j in (0..m).filter(|j| !peeled.contains(j)) {
            if oracle.conditional(&[j], &peeled)? <= eps {
                continue;
            }
            match best {
                Some(b) if single[j] >= single[b] - eps => {}
                _ => best = Some(j),
            }
        }
        let j = best.ok_or_else(|| {
            Error::NonEntropic(format!(
                "no undetermined partition variable left after {} indicators",
                peeled.len()
            ))
        })?;
        peeled.push(j);
    }

    // The indicator of atom 1 is the only remaining variable that keeps
    // positive entropy given the indicators of any proper subset of atoms
    // 2..n.
    let others = VarSet::full(n - 1);
    let mut first: Vec<usize> = Vec::new();
    for j in (0..m).filter(|j| !peeled.contains(j)) {
        let mut undetermined = true;
        // Largest subsets first: they are the likeliest to determine `j`.
        let mut subsets: Vec<VarSet> = others.subsets().filter(|s| *s != others).collect();
        subsets.sort_by_key(|s| std::cmp::Reverse(s.len()));
        for beta in subsets {
            let given: Vec<usize> = beta.iter().map(|k| peeled[k]).collect();
            if oracle.conditional(&[j], &given)? <= eps {
                undetermined = false;
                break;
            }
        }
        if undetermined {
            first.push(j);
        }
    }
    let first = match first.as_slice() {
        [j] => *j,
        [] => return Err(Error::NonEntropic("no candidate for the indicator of the most likely atom".into())),
        many => {
            return Err(Error::NonEntropic(format!(
                "{} candidates for the indicator of the most likely atom",
                many.len()
            )))
        }
    };

    let mut indicators = vec![first];
    indicators.extend(peeled.iter().rev());
    let all: Vec<usize> = (0..m).collect();
    let (h_ind, h_all) = (oracle.entropy_of(&indicators)?, oracle.entropy_of(&all)?);
    if (h_ind - h_all).abs() > eps {
        return Err(Error::NonEntropic(format!(
            "indicators carry {h_ind} bits but the whole family carries {h_all}"
        )));
    }
    Ok(indicators)
}

fn check_shape<Q: EntropyQuery + ?Sized>(oracle: &Q, n: usize) -> Result<()> {
    if oracle.support_size() != n {
        return Err(Error::Contract(format!(
            "oracle describes {} atoms, not {n}",
            oracle.support_size()
        )));
    }
    let expected = (1usize << (n - 1)) - 1;
    if oracle.num_partitions() != expected {
        return Err(Error::NonEntropic(format!(
            "{} partition variables instead of {expected}",
            oracle.num_partitions()
        )));
    }
    Ok(())
}

/// Recovers the sorted probability vector `p_1 >= ... >= p_n` from the
/// oracle's entropies.
pub fn reconstruct_scalar<Q: EntropyQuery + ?Sized>(oracle: &Q, n: usize) -> Result<Vec<f64>> {
    reconstruct_scalar_with(oracle, n, &Tolerances::default())
}

pub fn reconstruct_scalar_with<Q: EntropyQuery + ?Sized>(
    oracle: &Q,
    n: usize,
    tol: &Tolerances,
) -> Result<Vec<f64>> {
    if n < 2 {
        return Err(Error::SupportTooSmall {
            size: n,
            reason: "nothing to reconstruct below two atoms",
        });
    }
    if n > MAX_BRANCH_ATOMS {
        return Err(Error::SupportTooLarge {
            size: n,
            limit: MAX_BRANCH_ATOMS,
            what: "branch search",
        });
    }
    check_shape(oracle, n)?;
    if n == 2 {
        let q = invert_clamped(oracle.entropy_of(&[0])?, tol)?;
        return Ok(vec![1.0 - q, q]);
    }

    let ind = identify_indicators_with(oracle, n, tol)?;
    let q: Vec<f64> = ind
        .iter()
        .map(|&j| invert_clamped(oracle.entropy_of(&[j])?, tol))
        .collect::<Result<_>>()?;
    let mut pair = vec![vec![0.0; n]; n];
    for a in 0..n {
        for b in a + 1..n {
            pair[a][b] = oracle.entropy_of(&[ind[a], ind[b]])?;
        }
    }

    let mut found: Vec<Vec<f64>> = Vec::new();
    for flips in 0u32..(1 << n) {
        let p: Vec<f64> = (0..n)
            .map(|i| if flips >> i & 1 == 1 { 1.0 - q[i] } else { q[i] })
            .collect();
        if (p.iter().sum::<f64>() - 1.0).abs() > BRANCH_TOL {
            continue;
        }
        let consistent = (0..n).all(|a| {
            (a + 1..n).all(|b| {
                let rest = 1.0 - p[a] - p[b];
                rest >= -BRANCH_TOL
                    && (entropy_of_masses(&[p[a], p[b], rest.max(0.0)]) - pair[a][b]).abs() <= BRANCH_TOL
            })
        });
        if !consistent {
            continue;
        }
        let mut sorted = p;
        sorted.sort_by(|x, y| y.total_cmp(x));
        if !found
            .iter()
            .any(|f| f.iter().zip(&sorted).all(|(x, y)| (x - y).abs() <= BRANCH_TOL))
        {
            found.push(sorted);
        }
    }
    match found.len() {
        0 => Err(Error::NonEntropic(
            "no assignment of indicator probabilities matches the joint entropies".into(),
        )),
        1 => Ok(found.pop().unwrap()),
        k => Err(Error::Ambiguous(format!("{k} distinct probability vectors fit the entropies"))),
    }
}

fn invert_clamped(v: f64, tol: &Tolerances) -> Result<f64> {
    if v < -tol.entropy || v > 1.0 + tol.entropy {
        return Err(Error::NonEntropic(format!(
            "a binary variable cannot carry {v} bits"
        )));
    }
    invert_binary_entropy(v.clamp(0.0, 1.0))
}
