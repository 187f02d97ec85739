//! Binary partition random variables of a finite support.
//!
//! A partition `<α> = {α, α^c}` of the support is stored as the bitmask of
//! its canonical side: the side that does not contain atom 0.

use std::collections::HashMap;
use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use crate::dist::{entropy_of_masses, DiscreteDistribution, RandomVectorDistribution};
use crate::error::{Error, Result};
use crate::varset::VarSet;

/// Largest support handled by the bitmask encoding.
pub const MAX_PARTITION_ATOMS: usize = 24;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BinaryPartition {
    alpha: u32,
}

impl BinaryPartition {
    /// Canonicalises either side of a split of `n` atoms.
    pub fn new(side: u32, n: usize) -> Result<Self> {
        check_support_size(n, 2)?;
        let full = full_mask(n);
        if side & !full != 0 {
            return Err(Error::InvalidDistribution(format!(
                "partition side {side:#b} references atoms beyond {n}"
            )));
        }
        let alpha = if side & 1 == 1 { full & !side } else { side };
        if alpha == 0 {
            return Err(Error::InvalidDistribution(
                "a binary partition needs two nonempty sides".into(),
            ));
        }
        Ok(Self { alpha })
    }

    /// The canonical side (never contains atom 0).
    pub fn alpha(self) -> u32 {
        self.alpha
    }

    pub fn complement(self, n: usize) -> u32 {
        full_mask(n) & !self.alpha
    }

    /// Whether `atom` falls on the canonical side.
    pub fn contains(self, atom: usize) -> bool {
        self.alpha >> atom & 1 == 1
    }

    pub fn alpha_len(self) -> usize {
        self.alpha.count_ones() as usize
    }

    pub fn is_indicator(self, n: usize) -> bool {
        let k = self.alpha_len();
        k == 1 || k + 1 == n
    }

    /// The single atom isolated by an indicator partition. For `n = 2` both
    /// atoms are isolated and atom 1 is reported.
    pub fn indicated_atom(self, n: usize) -> Option<usize> {
        if self.alpha_len() == 1 {
            Some(self.alpha.trailing_zeros() as usize)
        } else if self.alpha_len() + 1 == n {
            Some(0)
        } else {
            None
        }
    }

    /// Canonical side rendered with the given outcome labels, e.g. `{b,c}`.
    pub fn label_with<S: AsRef<str>>(self, labels: &[S]) -> String {
        let parts: Vec<&str> = VarSet(self.alpha).iter().map(|i| labels[i].as_ref()).collect();
        format!("{{{}}}", parts.join(","))
    }

    /// Probability of the canonical side under `probs`.
    pub fn mass(self, probs: &[f64]) -> f64 {
        VarSet(self.alpha).iter().map(|i| probs[i]).sum()
    }
}

/// Renders the canonical side with 1-based atom numbers, e.g. `{2,3}`.
impl fmt::Display for BinaryPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = VarSet(self.alpha).iter().map(|i| (i + 1).to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

impl fmt::Debug for BinaryPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{self}>")
    }
}

pub(crate) fn full_mask(n: usize) -> u32 {
    if n >= 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

fn check_support_size(n: usize, min: usize) -> Result<()> {
    if n < min {
        return Err(Error::SupportTooSmall {
            size: n,
            reason: "a binary partition needs at least two atoms",
        });
    }
    if n > MAX_PARTITION_ATOMS {
        return Err(Error::SupportTooLarge {
            size: n,
            limit: MAX_PARTITION_ATOMS,
            what: "partition bitmasks",
        });
    }
    Ok(())
}

/// All `2^(n-1) - 1` binary partitions of an `n`-atom support, ordered by
/// `|α|` and then by bitmask value.
#[derive(Clone, Debug)]
pub struct PartitionFamily {
    n: usize,
    partitions: Vec<BinaryPartition>,
    index: HashMap<u32, usize>,
}

impl PartitionFamily {
    pub fn support_size(&self) -> usize {
        self.n
    }

    pub fn partitions(&self) -> &[BinaryPartition] {
        &self.partitions
    }

    pub fn len(&self) -> usize {
        self.partitions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.partitions.is_empty()
    }

    pub fn get(&self, i: usize) -> Result<BinaryPartition> {
        self.partitions.get(i).copied().ok_or(Error::PartitionOutOfRange {
            index: i,
            len: self.len(),
        })
    }

    pub fn index_of(&self, p: BinaryPartition) -> Option<usize> {
        self.index.get(&p.alpha()).copied()
    }

    /// Index of the partition with the given side (either side accepted).
    pub fn index_of_side(&self, side: u32) -> Option<usize> {
        BinaryPartition::new(side, self.n).ok().and_then(|p| self.index_of(p))
    }

    /// Index of the indicator partition isolating `atom`.
    pub fn indicator_of(&self, atom: usize) -> Option<usize> {
        (atom < self.n).then(|| self.index_of_side(1 << atom)).flatten()
    }
}

pub fn enumerate_partitions(n: usize) -> Result<PartitionFamily> {
    check_support_size(n, 2)?;
    let mut partitions: Vec<BinaryPartition> = (1..(1u32 << (n - 1)))
        .map(|m| BinaryPartition { alpha: m << 1 })
        .collect();
    partitions.sort_by_key(|p| (p.alpha_len(), p.alpha));
    let index = partitions.iter().enumerate().map(|(i, p)| (p.alpha, i)).collect();
    Ok(PartitionFamily {
        n,
        partitions,
        index,
    })
}

/// Indices of the `n` indicator partitions, ordered by the atom they isolate.
pub fn indicator_partitions(f: &PartitionFamily) -> Result<Vec<usize>> {
    if f.n < 3 {
        return Err(Error::SupportTooSmall {
            size: f.n,
            reason: "with two atoms the single partition indicates both atoms at once",
        });
    }
    Ok((0..f.n).map(|a| f.indicator_of(a).expect("indicator exists")).collect())
}

/// Atom-level access shared by scalar and vector distributions.
pub trait Atoms {
    fn atom_probs(&self) -> &[f64];
    /// Number of coordinates; zero for scalar distributions.
    fn arity(&self) -> usize;
    fn alphabet_len(&self, coord: usize) -> usize;
    fn symbol(&self, atom: usize, coord: usize) -> usize;
}

impl Atoms for DiscreteDistribution {
    fn atom_probs(&self) -> &[f64] {
        self.probs()
    }
    fn arity(&self) -> usize {
        0
    }
    fn alphabet_len(&self, _: usize) -> usize {
        0
    }
    fn symbol(&self, _: usize, _: usize) -> usize {
        0
    }
}

impl Atoms for RandomVectorDistribution {
    fn atom_probs(&self) -> &[f64] {
        self.probs()
    }
    fn arity(&self) -> usize {
        RandomVectorDistribution::arity(self)
    }
    fn alphabet_len(&self, coord: usize) -> usize {
        self.alphabet(coord).len()
    }
    fn symbol(&self, atom: usize, coord: usize) -> usize {
        self.atoms()[atom][coord]
    }
}

/// `P(X ∈ α)` for the canonical side of `p`.
pub fn induced_variable<D: Atoms + ?Sized>(d: &D, p: BinaryPartition) -> Result<f64> {
    let n = d.atom_probs().len();
    if p.alpha() & !full_mask(n) != 0 || n > MAX_PARTITION_ATOMS {
        return Err(Error::PartitionOutOfRange {
            index: 31 - p.alpha().leading_zeros() as usize,
            len: n,
        });
    }
    Ok(p.mass(d.atom_probs()))
}

/// Refines the atoms of `d` by the partitions in `delta` and the coordinates
/// in `tau`, returning a class id per atom (ids in order of first appearance).
fn signature_classes<D: Atoms + ?Sized>(d: &D, delta: &[BinaryPartition], tau: VarSet) -> Vec<usize> {
    let n = d.atom_probs().len();
    let mut class = vec![0usize; n];
    let mut classes = 1;
    let mut remap: Vec<usize> = Vec::new();
    let mut refine = |class: &mut Vec<usize>, classes: &mut usize, width: usize, key: &dyn Fn(usize) -> usize| {
        remap.clear();
        remap.resize(*classes * width, usize::MAX);
        let mut next = 0;
        for (a, c) in class.iter_mut().enumerate() {
            let k = *c * width + key(a);
            if remap[k] == usize::MAX {
                remap[k] = next;
                next += 1;
            }
            *c = remap[k];
        }
        *classes = next;
    };
    for p in delta {
        if classes == n {
            break;
        }
        refine(&mut class, &mut classes, 2, &|a| p.contains(a) as usize);
    }
    for m in tau.iter() {
        if classes == n {
            break;
        }
        refine(&mut class, &mut classes, d.alphabet_len(m), &|a| d.symbol(a, m));
    }
    class
}

fn classes_entropy(probs: &[f64], class: &[usize]) -> f64 {
    let k = class.iter().copied().max().map_or(0, |c| c + 1);
    let mut masses = vec![0.0; k];
    for (&c, &p) in class.iter().zip(probs) {
        masses[c] += p;
    }
    entropy_of_masses(&masses)
}

/// `H(A_<α>, <α> ∈ delta, X_j, j ∈ tau)` in bits.
pub fn joint_entropy<D: Atoms + ?Sized>(d: &D, delta: &[BinaryPartition], tau: VarSet) -> Result<f64> {
    let n = d.atom_probs().len();
    if !tau.is_empty() {
        if d.arity() == 0 {
            return Err(Error::ScalarProjection);
        }
        if let Some(index) = tau.iter().find(|&m| m >= d.arity()) {
            return Err(Error::CoordinateOutOfRange {
                index,
                arity: d.arity(),
            });
        }
    }
    let full = full_mask(n);
    if let Some(p) = delta.iter().find(|p| p.alpha() & !full != 0) {
        return Err(Error::InvalidDistribution(format!(
            "partition {p} does not fit a support of {n} atoms"
        )));
    }
    if delta.is_empty() && tau.is_empty() {
        return Ok(0.0);
    }
    Ok(classes_entropy(d.atom_probs(), &signature_classes(d, delta, tau)))
}

/// Read access to joint entropies of partition variables by family index.
///
/// Identification routines are written against this trait only, so they see
/// nothing but entropy values.
pub trait EntropyQuery {
    /// Size of the support the partitions split.
    fn support_size(&self) -> usize;
    /// Number of partition variables (`2^(n-1) - 1`).
    fn num_partitions(&self) -> usize;
    /// Joint entropy of the partition variables with the given indices.
    fn entropy_of(&self, delta: &[usize]) -> Result<f64>;

    /// `H(A_a | A_given)`.
    fn conditional(&self, a: &[usize], given: &[usize]) -> Result<f64> {
        let mut both = a.to_vec();
        both.extend_from_slice(given);
        Ok(self.entropy_of(&both)? - self.entropy_of(given)?)
    }
}

/// Lazily evaluated, memoised joint entropies `H(A_Δ, X_τ)` of one
/// distribution. Safe to share between threads.
pub struct EntropyOracle {
    probs: Vec<f64>,
    arity: usize,
    alphabet_lens: Vec<usize>,
    symbols: Vec<Vec<usize>>,
    family: PartitionFamily,
    memo: Mutex<HashMap<(Vec<usize>, u32), f64>>,
    computations: AtomicUsize,
}

impl fmt::Debug for EntropyOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("EntropyOracle")
            .field("support_size", &self.probs.len())
            .field("arity", &self.arity)
            .field("computations", &self.computations())
            .finish()
    }
}

impl Atoms for EntropyOracle {
    fn atom_probs(&self) -> &[f64] {
        &self.probs
    }
    fn arity(&self) -> usize {
        self.arity
    }
    fn alphabet_len(&self, coord: usize) -> usize {
        self.alphabet_lens[coord]
    }
    fn symbol(&self, atom: usize, coord: usize) -> usize {
        self.symbols[atom][coord]
    }
}

/// Builds a memoising oracle over all partitions of `d`'s support.
pub fn oracle_from_distribution<D: Atoms + ?Sized>(d: &D) -> Result<EntropyOracle> {
    let n = d.atom_probs().len();
    let family = enumerate_partitions(n)?;
    let arity = d.arity();
    Ok(EntropyOracle {
        probs: d.atom_probs().to_vec(),
        arity,
        alphabet_lens: (0..arity).map(|m| d.alphabet_len(m)).collect(),
        symbols: (0..n).map(|a| (0..arity).map(|m| d.symbol(a, m)).collect()).collect(),
        family,
        memo: Mutex::new(HashMap::new()),
        computations: AtomicUsize::new(0),
    })
}

impl EntropyOracle {
    pub fn family(&self) -> &PartitionFamily {
        &self.family
    }

    /// Number of entropies actually evaluated (cache misses).
    pub fn computations(&self) -> usize {
        self.computations.load(Ordering::Relaxed)
    }

    /// `H(A_<α>, <α> ∈ delta, X_j, j ∈ tau)` with `delta` given as family
    /// indices.
    pub fn query(&self, delta: &[usize], tau: VarSet) -> Result<f64> {
        let mut key = delta.to_vec();
        key.sort_unstable();
        key.dedup();
        if let Some(&i) = key.iter().find(|&&i| i >= self.family.len()) {
            return Err(Error::PartitionOutOfRange {
                index: i,
                len: self.family.len(),
            });
        }
        let key = (key, tau.bits());
        if let Some(&h) = self.memo.lock().expect("oracle cache poisoned").get(&key) {
            return Ok(h);
        }
        let parts: Vec<BinaryPartition> = key.0.iter().map(|&i| self.family.partitions[i]).collect();
        let h = joint_entropy(self, &parts, tau)?;
        self.computations.fetch_add(1, Ordering::Relaxed);
        self.memo.lock().expect("oracle cache poisoned").insert(key, h);
        Ok(h)
    }
}

impl EntropyQuery for EntropyOracle {
    fn support_size(&self) -> usize {
        self.probs.len()
    }
    fn num_partitions(&self) -> usize {
        self.family.len()
    }
    fn entropy_of(&self, delta: &[usize]) -> Result<f64> {
        self.query(delta, VarSet::EMPTY)
    }
}
