//! Finite discrete distributions and their Shannon entropies (in bits).

use std::collections::{HashMap, HashSet};
use std::hash::Hash;

use crate::error::{Error, Result};
use crate::varset::VarSet;
use crate::PROB_TOL;

/// Maximum number of bisection steps used by [`invert_binary_entropy`].
const BISECTION_STEPS: usize = 200;

/// A finite distribution with an exact support: every listed outcome has
/// strictly positive probability.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscreteDistribution {
    support: Vec<String>,
    probs: Vec<f64>,
}

impl DiscreteDistribution {
    pub fn new(support: Vec<String>, probs: Vec<f64>) -> Result<Self> {
        if support.is_empty() {
            return Err(Error::InvalidDistribution("empty support".into()));
        }
        if support.len() != probs.len() {
            return Err(Error::InvalidDistribution(format!(
                "{} outcomes but {} probabilities",
                support.len(),
                probs.len()
            )));
        }
        for (label, &p) in support.iter().zip(&probs) {
            if !p.is_finite() || !(PROB_TOL..=1.0 + PROB_TOL).contains(&p) {
                return Err(Error::InvalidDistribution(format!(
                    "probability {p} of outcome {label:?} is not in [1e-12, 1]"
                )));
            }
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > PROB_TOL {
            return Err(Error::InvalidDistribution(format!(
                "probabilities sum to {total}, not 1"
            )));
        }
        let mut seen = HashSet::with_capacity(support.len());
        for label in &support {
            if !seen.insert(label.as_str()) {
                return Err(Error::InvalidDistribution(format!(
                    "duplicate outcome {label:?}"
                )));
            }
        }
        Ok(Self { support, probs })
    }

    /// Outcomes labelled `1..=n`.
    pub fn from_probs(probs: &[f64]) -> Result<Self> {
        let support = (1..=probs.len()).map(|i| i.to_string()).collect();
        Self::new(support, probs.to_vec())
    }

    pub fn uniform(n: usize) -> Result<Self> {
        Self::from_probs(&vec![1.0 / n as f64; n])
    }

    pub fn support(&self) -> &[String] {
        &self.support
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn prob_of(&self, label: &str) -> Option<f64> {
        self.support
            .iter()
            .position(|l| l == label)
            .map(|i| self.probs[i])
    }

    /// Atom indices ordered by decreasing probability, ties broken by label.
    pub fn sorted_order(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by(|&a, &b| {
            self.probs[b]
                .total_cmp(&self.probs[a])
                .then_with(|| self.support[a].cmp(&self.support[b]))
        });
        order
    }

    /// Canonical view with `p_1 >= p_2 >= ... >= p_n`.
    pub fn sorted(&self) -> Self {
        let order = self.sorted_order();
        Self {
            support: order.iter().map(|&i| self.support[i].clone()).collect(),
            probs: order.iter().map(|&i| self.probs[i]).collect(),
        }
    }

    /// Probabilities in decreasing order.
    pub fn sorted_probs(&self) -> Vec<f64> {
        let mut p = self.probs.clone();
        p.sort_by(|a, b| b.total_cmp(a));
        p
    }

    /// Shannon entropy in bits.
    pub fn entropy(&self) -> f64 {
        entropy_of_masses(&self.probs)
    }
}

/// A distribution over `M`-tuples, with per-coordinate alphabets.
///
/// Alphabets are tight: each symbol occurs in at least one support tuple.
#[derive(Clone, Debug, PartialEq)]
pub struct RandomVectorDistribution {
    alphabets: Vec<Vec<String>>,
    atoms: Vec<Vec<usize>>,
    joint: DiscreteDistribution,
}

impl RandomVectorDistribution {
    /// Builds a vector distribution, collecting each coordinate's alphabet
    /// in order of first appearance.
    pub fn new(tuples: Vec<Vec<String>>, probs: Vec<f64>) -> Result<Self> {
        let arity = tuples.first().map(Vec::len).unwrap_or(0);
        let mut alphabets: Vec<Vec<String>> = vec![Vec::new(); arity];
        for t in &tuples {
            if t.len() != arity {
                return Err(Error::InvalidDistribution(format!(
                    "tuple {t:?} has length {} instead of {arity}",
                    t.len()
                )));
            }
            for (m, sym) in t.iter().enumerate() {
                if !alphabets[m].contains(sym) {
                    alphabets[m].push(sym.clone());
                }
            }
        }
        Self::with_alphabets(alphabets, tuples, probs)
    }

    pub fn with_alphabets(
        alphabets: Vec<Vec<String>>,
        tuples: Vec<Vec<String>>,
        probs: Vec<f64>,
    ) -> Result<Self> {
        let arity = alphabets.len();
        if arity == 0 || arity > 32 {
            return Err(Error::InvalidDistribution(format!(
                "arity {arity} not in 1..=32"
            )));
        }
        let index: Vec<HashMap<&str, usize>> = alphabets
            .iter()
            .map(|a| a.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect())
            .collect();
        for (m, a) in alphabets.iter().enumerate() {
            if index[m].len() != a.len() {
                return Err(Error::InvalidDistribution(format!(
                    "coordinate {m} alphabet has duplicate symbols"
                )));
            }
        }
        let mut atoms = Vec::with_capacity(tuples.len());
        let mut used: Vec<Vec<bool>> = alphabets.iter().map(|a| vec![false; a.len()]).collect();
        for t in &tuples {
            if t.len() != arity {
                return Err(Error::InvalidDistribution(format!(
                    "tuple {t:?} has length {} instead of {arity}",
                    t.len()
                )));
            }
            let mut atom = Vec::with_capacity(arity);
            for (m, sym) in t.iter().enumerate() {
                let &i = index[m].get(sym.as_str()).ok_or_else(|| {
                    Error::InvalidDistribution(format!(
                        "symbol {sym:?} not in alphabet of coordinate {m}"
                    ))
                })?;
                used[m][i] = true;
                atom.push(i);
            }
            atoms.push(atom);
        }
        for (m, u) in used.iter().enumerate() {
            if let Some(i) = u.iter().position(|&x| !x) {
                return Err(Error::InvalidDistribution(format!(
                    "symbol {:?} of coordinate {m} never occurs in the support",
                    alphabets[m][i]
                )));
            }
        }
        let labels = tuples.iter().map(|t| tuple_label(t)).collect();
        let joint = DiscreteDistribution::new(labels, probs)?;
        Ok(Self {
            alphabets,
            atoms,
            joint,
        })
    }

    /// Views a scalar distribution as a one-coordinate vector.
    pub fn from_scalar(d: &DiscreteDistribution) -> Self {
        Self {
            alphabets: vec![d.support().to_vec()],
            atoms: (0..d.len()).map(|i| vec![i]).collect(),
            joint: d.clone(),
        }
    }

    pub fn arity(&self) -> usize {
        self.alphabets.len()
    }

    pub fn alphabets(&self) -> &[Vec<String>] {
        &self.alphabets
    }

    pub fn alphabet(&self, coord: usize) -> &[String] {
        &self.alphabets[coord]
    }

    /// Support tuples as symbol indices into the alphabets.
    pub fn atoms(&self) -> &[Vec<usize>] {
        &self.atoms
    }

    pub fn tuple(&self, atom: usize) -> Vec<&str> {
        self.atoms[atom]
            .iter()
            .enumerate()
            .map(|(m, &s)| self.alphabets[m][s].as_str())
            .collect()
    }

    pub fn probs(&self) -> &[f64] {
        self.joint.probs()
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// The joint distribution with tuple labels such as `(a,1)`.
    pub fn joint(&self) -> &DiscreteDistribution {
        &self.joint
    }

    /// Probability of a tuple given as symbol indices; zero if absent.
    pub fn prob_of_atom(&self, atom: &[usize]) -> f64 {
        self.atoms
            .iter()
            .position(|a| a == atom)
            .map_or(0.0, |i| self.probs()[i])
    }

    /// Marginal probability of each symbol of a coordinate.
    pub fn coordinate_marginal(&self, coord: usize) -> Vec<f64> {
        let mut out = vec![0.0; self.alphabets[coord].len()];
        for (atom, &p) in self.atoms.iter().zip(self.probs()) {
            out[atom[coord]] += p;
        }
        out
    }

    fn check_coords(&self, tau: VarSet) -> Result<()> {
        if tau.is_empty() {
            return Err(Error::EmptyCoordinateSet);
        }
        if let Some(index) = tau.iter().find(|&i| i >= self.arity()) {
            return Err(Error::CoordinateOutOfRange {
                index,
                arity: self.arity(),
            });
        }
        Ok(())
    }
}

pub(crate) fn tuple_label<S: AsRef<str>>(parts: &[S]) -> String {
    if parts.len() == 1 {
        parts[0].as_ref().to_string()
    } else {
        let inner: Vec<&str> = parts.iter().map(|s| s.as_ref()).collect();
        format!("({})", inner.join(","))
    }
}

/// `-sum p log2 p` over masses; zero masses contribute nothing.
pub fn entropy_of_masses(masses: &[f64]) -> f64 {
    let h: f64 = masses
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.log2())
        .sum();
    h.max(0.0)
}

/// Entropy of the random variable `key(X)`, where `X` has the given atom
/// probabilities. Groups are summed in order of first appearance so the
/// result is deterministic.
pub fn grouped_entropy<K, F>(probs: &[f64], mut key: F) -> f64
where
    K: Hash + Eq,
    F: FnMut(usize) -> K,
{
    let mut slot: HashMap<K, usize> = HashMap::new();
    let mut masses: Vec<f64> = Vec::new();
    for (i, &p) in probs.iter().enumerate() {
        let next = masses.len();
        let s = *slot.entry(key(i)).or_insert(next);
        if s == next {
            masses.push(0.0);
        }
        masses[s] += p;
    }
    entropy_of_masses(&masses)
}

/// Shannon entropy of `d` in bits.
pub fn entropy(d: &DiscreteDistribution) -> f64 {
    d.entropy()
}

/// `h_b(q) = -q log2 q - (1-q) log2 (1-q)`, with `h_b(0) = h_b(1) = 0`.
pub fn binary_entropy(q: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&q) {
        return Err(Error::ProbabilityOutOfRange(q));
    }
    Ok(entropy_of_masses(&[q, 1.0 - q]))
}

fn hb(q: f64) -> f64 {
    entropy_of_masses(&[q, 1.0 - q])
}

/// The unique `q` in `[0, 1/2]` with `h_b(q) = v`.
///
/// Bisection runs until the bracket stops shrinking (at most 200 steps), so
/// the result is accurate to the last representable bit of `q`.
pub fn invert_binary_entropy(v: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&v) {
        return Err(Error::EntropyOutOfRange(v));
    }
    if v == 0.0 {
        return Ok(0.0);
    }
    if v == 1.0 {
        return Ok(0.5);
    }
    let (mut lo, mut hi) = (0.0f64, 0.5f64);
    for _ in 0..BISECTION_STEPS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if hb(mid) < v {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(if (hb(lo) - v).abs() <= (hb(hi) - v).abs() {
        lo
    } else {
        hi
    })
}

/// Distribution of the projection of `d` onto the coordinates in `tau`.
pub fn marginal(d: &RandomVectorDistribution, tau: VarSet) -> Result<DiscreteDistribution> {
    d.check_coords(tau)?;
    let coords: Vec<usize> = tau.iter().collect();
    let mut slot: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut labels = Vec::new();
    let mut masses: Vec<f64> = Vec::new();
    for (atom, &p) in d.atoms().iter().zip(d.probs()) {
        let key: Vec<usize> = coords.iter().map(|&m| atom[m]).collect();
        let next = masses.len();
        let s = *slot.entry(key.clone()).or_insert(next);
        if s == next {
            let parts: Vec<&str> = coords
                .iter()
                .zip(&key)
                .map(|(&m, &sym)| d.alphabet(m)[sym].as_str())
                .collect();
            labels.push(tuple_label(&parts));
            masses.push(0.0);
        }
        masses[s] += p;
    }
    // Merged masses carry rounding; renormalise within the validation tolerance.
    let total: f64 = masses.iter().sum();
    let masses = masses.into_iter().map(|m| m / total).collect();
    DiscreteDistribution::new(labels, masses)
}

/// `H(X_j : j in tau)` in bits.
pub fn subset_entropy(d: &RandomVectorDistribution, tau: VarSet) -> Result<f64> {
    d.check_coords(tau)?;
    Ok(grouped_entropy(d.probs(), |i| {
        tau.iter().map(|m| d.atoms()[i][m]).collect::<Vec<_>>()
    }))
}

/// `H(X_a | X_b) = H(X_{a ∪ b}) - H(X_b)`; `b` may be empty.
pub fn conditional_entropy(d: &RandomVectorDistribution, a: VarSet, b: VarSet) -> Result<f64> {
    let joint = subset_entropy(d, a.union(b))?;
    if b.is_empty() {
        Ok(joint)
    } else {
        Ok(joint - subset_entropy(d, b)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn twin_x() -> RandomVectorDistribution {
        let cells = [("a", "1"), ("a", "2"), ("b", "1"), ("b", "2"), ("c", "3"), ("c", "4"), ("d", "3"), ("d", "4")];
        RandomVectorDistribution::new(
            cells.iter().map(|(x, y)| vec![x.to_string(), y.to_string()]).collect(),
            vec![0.125; 8],
        )
        .unwrap()
    }

    #[test]
    fn entropy_examples() {
        assert_eq!(DiscreteDistribution::from_probs(&[1.0]).unwrap().entropy(), 0.0);
        assert_abs_diff_eq!(DiscreteDistribution::uniform(8).unwrap().entropy(), 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(
            DiscreteDistribution::from_probs(&[0.5, 0.25, 0.25]).unwrap().entropy(),
            1.5,
            epsilon = 1e-15
        );
    }

    #[test]
    fn binary_entropy_examples() {
        assert_eq!(binary_entropy(0.5).unwrap(), 1.0);
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(1.0).unwrap(), 0.0);
        // -(1/8) log2(1/8) - (7/8) log2(7/8) = 3/8 + (7/8)(3 - log2 7)
        let expected = 0.375 + 0.875 * (3.0 - 7f64.log2());
        assert_abs_diff_eq!(binary_entropy(0.125).unwrap(), expected, epsilon = 1e-15);
        assert_abs_diff_eq!(expected, 0.543_564_443, epsilon = 1e-9);
        assert!(matches!(binary_entropy(1.5), Err(Error::ProbabilityOutOfRange(_))));
        assert!(binary_entropy(-0.1).is_err());
    }

    #[test]
    fn invert_binary_entropy_examples() {
        assert_eq!(invert_binary_entropy(1.0).unwrap(), 0.5);
        assert_eq!(invert_binary_entropy(0.0).unwrap(), 0.0);
        let v = binary_entropy(0.125).unwrap();
        assert_abs_diff_eq!(invert_binary_entropy(v).unwrap(), 0.125, epsilon = 1e-14);
        assert!(invert_binary_entropy(1.0001).is_err());
        assert!(invert_binary_entropy(-1e-3).is_err());
    }

    #[test]
    fn invert_round_trips_on_grid() {
        for k in 0..=1000 {
            let q = k as f64 / 1000.0;
            let back = invert_binary_entropy(binary_entropy(q).unwrap()).unwrap();
            assert!((back - q.min(1.0 - q)).abs() <= 1e-10, "q={q} back={back}");
            assert!((hb(back) - hb(q)).abs() <= 1e-12);
        }
    }

    #[test]
    fn rejects_bad_distributions() {
        assert!(DiscreteDistribution::from_probs(&[0.5, 0.5, 0.0]).is_err());
        assert!(DiscreteDistribution::from_probs(&[0.5, 0.4]).is_err());
        assert!(DiscreteDistribution::new(vec!["a".into(), "a".into()], vec![0.5, 0.5]).is_err());
        assert!(DiscreteDistribution::from_probs(&[1.0 - 1e-13, 1e-13]).is_err());
    }

    #[test]
    fn sorted_view_breaks_ties_by_label() {
        let d = DiscreteDistribution::new(
            vec!["z".into(), "b".into(), "a".into()],
            vec![0.25, 0.5, 0.25],
        )
        .unwrap();
        let s = d.sorted();
        assert_eq!(s.support(), ["b", "a", "z"]);
        assert_eq!(s.probs(), [0.5, 0.25, 0.25]);
    }

    #[test]
    fn twin_marginals() {
        let x = twin_x();
        let m1 = marginal(&x, VarSet::singleton(0)).unwrap();
        assert_eq!(m1.support(), ["a", "b", "c", "d"]);
        assert!(m1.probs().iter().all(|&p| (p - 0.25).abs() < 1e-15));
        let m2 = marginal(&x, VarSet::singleton(1)).unwrap();
        assert_eq!(m2.support(), ["1", "2", "3", "4"]);
        assert!(m2.probs().iter().all(|&p| (p - 0.25).abs() < 1e-15));
        let all = marginal(&x, VarSet::full(2)).unwrap();
        assert_eq!(&all, x.joint());
        assert!(matches!(marginal(&x, VarSet::EMPTY), Err(Error::EmptyCoordinateSet)));
        assert!(marginal(&x, VarSet::singleton(2)).is_err());
    }

    #[test]
    fn twin_subset_entropies() {
        let x = twin_x();
        assert_abs_diff_eq!(subset_entropy(&x, VarSet::full(2)).unwrap(), 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(subset_entropy(&x, VarSet::singleton(0)).unwrap(), 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(
            conditional_entropy(&x, VarSet::singleton(1), VarSet::singleton(0)).unwrap(),
            1.0,
            epsilon = 1e-15
        );
    }

    #[test]
    fn independent_bits() {
        let tuples = ["00", "01", "10", "11"]
            .iter()
            .map(|s| s.chars().map(|c| c.to_string()).collect())
            .collect();
        let d = RandomVectorDistribution::new(tuples, vec![0.25; 4]).unwrap();
        assert_abs_diff_eq!(subset_entropy(&d, VarSet::full(2)).unwrap(), 2.0, epsilon = 1e-15);
    }

    #[test]
    fn vector_validation() {
        let t = |a: &str, b: &str| vec![a.to_string(), b.to_string()];
        assert!(RandomVectorDistribution::new(vec![t("a", "1"), vec!["b".into()]], vec![0.5, 0.5]).is_err());
        assert!(RandomVectorDistribution::new(vec![t("a", "1"), t("a", "1")], vec![0.5, 0.5]).is_err());
        let loose = RandomVectorDistribution::with_alphabets(
            vec![vec!["a".into(), "b".into()], vec!["1".into()]],
            vec![t("a", "1")],
            vec![1.0],
        );
        assert!(loose.is_err());
    }
}
