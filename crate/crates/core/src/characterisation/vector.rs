use std::collections::{BTreeMap, HashMap};

use super::{scalar_equivalent_with, Relabeling};
use crate::dist::RandomVectorDistribution;
use crate::error::{Error, Result};
use crate::PROB_TOL;

/// Largest per-coordinate alphabet accepted by [`vector_equivalent`].
pub const MAX_ALPHABET: usize = 8;

/// Per-coordinate bijections `σ_m` with
/// `Pr(X = (x_1..x_M)) = Pr(X* = (σ_1(x_1)..σ_M(x_M)))`, compared within
/// `1e-12`.
///
/// The search assigns symbols in the order they first occur in `p`'s
/// support and tries images in alphabet order, so the witness returned is
/// the first one in that order.
pub fn vector_equivalent(
    p: &RandomVectorDistribution,
    q: &RandomVectorDistribution,
) -> Result<Option<Relabeling>> {
    for d in [p, q] {
        if let Some(a) = d.alphabets().iter().find(|a| a.len() > MAX_ALPHABET) {
            return Err(Error::SupportTooLarge {
                size: a.len(),
                limit: MAX_ALPHABET,
                what: "per-coordinate bijection search",
            });
        }
    }
    if p.arity() != q.arity()
        || p.len() != q.len()
        || p.alphabets().iter().zip(q.alphabets()).any(|(a, b)| a.len() != b.len())
    {
        return Ok(None);
    }
    if p.arity() == 1 {
        return Ok(scalar_equivalent_with(p.joint(), q.joint(), PROB_TOL));
    }
    let arity = p.arity();

    // Symbols can only map to symbols with the same sorted profile of atom
    // probabilities.
    let profile = |d: &RandomVectorDistribution, m: usize, x: usize| -> Vec<f64> {
        let mut v: Vec<f64> = d
            .atoms()
            .iter()
            .zip(d.probs())
            .filter(|(a, _)| a[m] == x)
            .map(|(_, &pr)| pr)
            .collect();
        v.sort_by(|a, b| b.total_cmp(a));
        v
    };
    let same = |a: &[f64], b: &[f64]| a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= PROB_TOL);
    let mut candidates: Vec<Vec<Vec<usize>>> = Vec::with_capacity(arity);
    for m in 0..arity {
        let qp: Vec<Vec<f64>> = (0..q.alphabet(m).len()).map(|y| profile(q, m, y)).collect();
        let mut per = Vec::new();
        for x in 0..p.alphabet(m).len() {
            let px = profile(p, m, x);
            let c: Vec<usize> = (0..qp.len()).filter(|&y| same(&px, &qp[y])).collect();
            if c.is_empty() {
                return Ok(None);
            }
            per.push(c);
        }
        candidates.push(per);
    }

    // Variable order: (coordinate, symbol) pairs as they first appear in
    // p's atoms, so every atom becomes checkable as early as possible.
    let mut order: Vec<(usize, usize)> = Vec::new();
    let mut seen: Vec<Vec<bool>> = p.alphabets().iter().map(|a| vec![false; a.len()]).collect();
    let mut completes: Vec<Vec<usize>> = Vec::new();
    for (i, atom) in p.atoms().iter().enumerate() {
        for (m, &x) in atom.iter().enumerate() {
            if !seen[m][x] {
                seen[m][x] = true;
                order.push((m, x));
                completes.push(Vec::new());
            }
        }
        completes.last_mut().expect("atoms have coordinates").push(i);
    }

    let q_index: HashMap<&[usize], f64> =
        q.atoms().iter().map(Vec::as_slice).zip(q.probs().iter().copied()).collect();

    struct State<'a> {
        p: &'a RandomVectorDistribution,
        q_index: HashMap<&'a [usize], f64>,
        order: Vec<(usize, usize)>,
        completes: Vec<Vec<usize>>,
        candidates: Vec<Vec<Vec<usize>>>,
        image: Vec<Vec<Option<usize>>>,
        used: Vec<Vec<bool>>,
    }

    impl State<'_> {
        fn dfs(&mut self, k: usize) -> bool {
            if k == self.order.len() {
                return true;
            }
            let (m, x) = self.order[k];
            for c in 0..self.candidates[m][x].len() {
                let y = self.candidates[m][x][c];
                if self.used[m][y] {
                    continue;
                }
                self.image[m][x] = Some(y);
                self.used[m][y] = true;
                if self.atoms_match(k) && self.dfs(k + 1) {
                    return true;
                }
                self.used[m][y] = false;
                self.image[m][x] = None;
            }
            false
        }

        fn atoms_match(&self, k: usize) -> bool {
            self.completes[k].iter().all(|&i| {
                let atom = &self.p.atoms()[i];
                let img: Vec<usize> = atom
                    .iter()
                    .enumerate()
                    .map(|(m, &x)| self.image[m][x].expect("assigned"))
                    .collect();
                self.q_index
                    .get(img.as_slice())
                    .is_some_and(|&pq| (pq - self.p.probs()[i]).abs() <= PROB_TOL)
            })
        }
    }

    let mut state = State {
        p,
        q_index,
        order,
        completes,
        candidates,
        image: p.alphabets().iter().map(|a| vec![None; a.len()]).collect(),
        used: q.alphabets().iter().map(|a| vec![false; a.len()]).collect(),
    };
    if !state.dfs(0) {
        return Ok(None);
    }
    let maps = (0..arity)
        .map(|m| {
            state.image[m]
                .iter()
                .enumerate()
                .map(|(x, y)| (p.alphabet(m)[x].clone(), q.alphabet(m)[y.expect("complete")].clone()))
                .collect()
        })
        .collect();
    Ok(Some(Relabeling { maps }))
}

/// The joint map on support atoms induced by a per-coordinate relabelling:
/// entry `i` is the index of the image of `p`'s atom `i` in `q`.
pub fn witness_joint_map(
    p: &RandomVectorDistribution,
    q: &RandomVectorDistribution,
    r: &Relabeling,
) -> Result<Vec<usize>> {
    let q_index: HashMap<Vec<&str>, usize> = (0..q.len()).map(|i| (q.tuple(i), i)).collect();
    (0..p.len())
        .map(|i| {
            let img: Option<Vec<&str>> = p
                .tuple(i)
                .iter()
                .enumerate()
                .map(|(m, s)| r.image(m, s))
                .collect();
            img.and_then(|t| q_index.get(&t).copied()).ok_or_else(|| {
                Error::Contract(format!("atom {:?} has no image in the target support", p.tuple(i)))
            })
        })
        .collect()
}

/// Applies per-coordinate label maps to every support tuple.
pub fn relabel_vector(p: &RandomVectorDistribution, r: &Relabeling) -> Result<RandomVectorDistribution> {
    let tuples: Option<Vec<Vec<String>>> = (0..p.len())
        .map(|i| {
            p.tuple(i)
                .iter()
                .enumerate()
                .map(|(m, s)| r.image(m, s).map(str::to_string))
                .collect()
        })
        .collect();
    let tuples = tuples.ok_or_else(|| Error::Contract("relabelling is not total".into()))?;
    RandomVectorDistribution::new(tuples, p.probs().to_vec())
}

/// Whether a joint map keeps per-coordinate agreement: for any two atoms,
/// `x_m = x'_m` exactly when their images agree on coordinate `m`.
pub fn preserves_agreement(p: &RandomVectorDistribution, q: &RandomVectorDistribution, sigma: &[usize]) -> bool {
    if p.arity() != q.arity() || sigma.len() != p.len() || sigma.iter().any(|&j| j >= q.len()) {
        return false;
    }
    let (pa, qa) = (p.atoms(), q.atoms());
    (0..p.len()).all(|i| {
        (i + 1..p.len()).all(|j| {
            (0..p.arity()).all(|m| (pa[i][m] == pa[j][m]) == (qa[sigma[i]][m] == qa[sigma[j]][m]))
        })
    })
}

/// Splits a probability-preserving bijection between supports into
/// per-coordinate bijections, if it is coordinate-wise.
///
/// `sigma[i]` is the index in `q` of the image of `p`'s atom `i`.
pub fn factorize_relabeling(
    p: &RandomVectorDistribution,
    q: &RandomVectorDistribution,
    sigma: &[usize],
) -> Result<Option<Relabeling>> {
    if sigma.len() != p.len() || p.len() != q.len() {
        return Err(Error::Contract("map is not a bijection between the supports".into()));
    }
    let mut hit = vec![false; q.len()];
    for (i, &j) in sigma.iter().enumerate() {
        if j >= q.len() || std::mem::replace(&mut hit[j], true) {
            return Err(Error::Contract("map is not a bijection between the supports".into()));
        }
        if (p.probs()[i] - q.probs()[j]).abs() > PROB_TOL {
            return Err(Error::Contract(format!(
                "atom {:?} ({}) mapped to {:?} ({})",
                p.tuple(i),
                p.probs()[i],
                q.tuple(j),
                q.probs()[j]
            )));
        }
    }
    if p.arity() != q.arity() {
        return Ok(None);
    }
    let mut maps = Vec::with_capacity(p.arity());
    for m in 0..p.arity() {
        let mut fwd: BTreeMap<String, String> = BTreeMap::new();
        let mut back: HashMap<&str, &str> = HashMap::new();
        for (i, &j) in sigma.iter().enumerate() {
            let x = p.alphabet(m)[p.atoms()[i][m]].as_str();
            let y = q.alphabet(m)[q.atoms()[j][m]].as_str();
            if let Some(prev) = fwd.get(x) {
                if prev != y {
                    return Ok(None);
                }
            } else {
                fwd.insert(x.to_string(), y.to_string());
            }
            if *back.entry(y).or_insert(x) != x {
                return Ok(None);
            }
        }
        maps.push(fwd);
    }
    Ok(Some(Relabeling { maps }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vd(cells: &[(&str, &str, f64)]) -> RandomVectorDistribution {
        RandomVectorDistribution::new(
            cells.iter().map(|(a, b, _)| vec![a.to_string(), b.to_string()]).collect(),
            cells.iter().map(|c| c.2).collect(),
        )
        .unwrap()
    }

    fn twin_pair() -> (RandomVectorDistribution, RandomVectorDistribution) {
        let e = 0.125;
        let x = vd(&[
            ("a", "1", e), ("a", "2", e), ("b", "1", e), ("b", "2", e),
            ("c", "3", e), ("c", "4", e), ("d", "3", e), ("d", "4", e),
        ]);
        let xs = vd(&[
            ("a", "1", e), ("a", "2", e), ("b", "2", e), ("b", "3", e),
            ("c", "3", e), ("c", "4", e), ("d", "1", e), ("d", "4", e),
        ]);
        (x, xs)
    }

    /// Independent oracle: try every pair of coordinate bijections.
    fn brute_force_equivalent(p: &RandomVectorDistribution, q: &RandomVectorDistribution) -> bool {
        fn perms(n: usize) -> Vec<Vec<usize>> {
            if n == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for rest in perms(n - 1) {
                for pos in 0..=rest.len() {
                    let mut v = rest.clone();
                    v.insert(pos, n - 1);
                    out.push(v);
                }
            }
            out
        }
        let (k1, k2) = (p.alphabet(0).len(), p.alphabet(1).len());
        if (k1, k2) != (q.alphabet(0).len(), q.alphabet(1).len()) {
            return false;
        }
        for s1 in perms(k1) {
            for s2 in perms(k2) {
                let ok = (0..k1).all(|x| {
                    (0..k2).all(|y| (p.prob_of_atom(&[x, y]) - q.prob_of_atom(&[s1[x], s2[y]])).abs() <= 1e-12)
                });
                if ok {
                    return true;
                }
            }
        }
        false
    }

    #[test]
    fn twin_pair_is_not_vector_equivalent() {
        let (x, xs) = twin_pair();
        assert!(!brute_force_equivalent(&x, &xs));
        assert!(vector_equivalent(&x, &xs).unwrap().is_none());
        assert!(vector_equivalent(&x, &x).unwrap().unwrap().is_identity());
    }

    #[test]
    fn coordinate_relabelled_copy_is_found() {
        let (x, _) = twin_pair();
        let r = Relabeling {
            maps: vec![
                [("a", "q"), ("b", "r"), ("c", "s"), ("d", "t")].iter().map(|(a, b)| (a.to_string(), b.to_string())).collect(),
                [("1", "4"), ("2", "3"), ("3", "2"), ("4", "1")].iter().map(|(a, b)| (a.to_string(), b.to_string())).collect(),
            ],
        };
        let y = relabel_vector(&x, &r).unwrap();
        let w = vector_equivalent(&x, &y).unwrap().unwrap();
        let sigma = witness_joint_map(&x, &y, &w).unwrap();
        for (i, &j) in sigma.iter().enumerate() {
            assert_eq!(x.probs()[i], y.probs()[j]);
        }
        assert!(preserves_agreement(&x, &y, &sigma));
        assert_eq!(factorize_relabeling(&x, &y, &sigma).unwrap().unwrap(), w);
    }

    #[test]
    fn scalar_case_reduces_to_scalar_equivalence() {
        let p = RandomVectorDistribution::new(
            vec![vec!["a".into()], vec!["b".into()], vec!["c".into()]],
            vec![0.5, 0.3, 0.2],
        )
        .unwrap();
        let q = RandomVectorDistribution::new(
            vec![vec!["x".into()], vec!["y".into()], vec!["z".into()]],
            vec![0.2, 0.5, 0.3],
        )
        .unwrap();
        let w = vector_equivalent(&p, &q).unwrap().unwrap();
        assert_eq!(Some(w), scalar_equivalent_with(p.joint(), q.joint(), 1e-12));
    }

    #[test]
    fn factorisation_rejects_pattern_breaking_swaps() {
        // Atoms (0,0) and (0,1) agree on coordinate 0; send them to atoms
        // that disagree on coordinate 0.
        let p = vd(&[("0", "0", 0.25), ("0", "1", 0.25), ("1", "0", 0.25), ("1", "1", 0.25)]);
        let sigma = [0, 2, 1, 3];
        assert!(!preserves_agreement(&p, &p, &sigma));
        assert!(factorize_relabeling(&p, &p, &sigma).unwrap().is_none());
        let identity = [0, 1, 2, 3];
        assert!(factorize_relabeling(&p, &p, &identity).unwrap().unwrap().is_identity());
    }

    #[test]
    fn twin_scalar_bijections_never_factorise() {
        let (x, xs) = twin_pair();
        // Every bijection preserves the uniform pmf; sample a few structured ones.
        for shift in 0..8 {
            let sigma: Vec<usize> = (0..8).map(|i| (i + shift) % 8).collect();
            assert!(factorize_relabeling(&x, &xs, &sigma).unwrap().is_none());
        }
    }

    #[test]
    fn factorisation_rejects_pmf_violations() {
        let p = vd(&[("0", "0", 0.5), ("0", "1", 0.25), ("1", "1", 0.25)]);
        assert!(matches!(factorize_relabeling(&p, &p, &[1, 0, 2]), Err(Error::Contract(_))));
        assert!(matches!(factorize_relabeling(&p, &p, &[0, 0, 2]), Err(Error::Contract(_))));
    }

    #[test]
    fn alphabet_limit() {
        let tuples: Vec<Vec<String>> = (0..9).map(|i| vec![i.to_string(), "0".into()]).collect();
        let d = RandomVectorDistribution::new(tuples, vec![1.0 / 9.0; 9]).unwrap();
        assert!(matches!(vector_equivalent(&d, &d), Err(Error::SupportTooLarge { .. })));
    }
}
