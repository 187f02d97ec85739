use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::dist::RandomVectorDistribution;
use crate::error::{Error, Result};
use crate::partition::enumerate_partitions;

/// A deterministic function of the joint source outcome.
///
/// Map keys are source symbols joined by `,` in source order, e.g. `"00,01,01"`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuxVar {
    pub id: String,
    pub map: BTreeMap<String, String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuxSpec {
    pub aux: Vec<AuxVar>,
}

impl AuxSpec {
    pub fn none() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.aux.len()
    }

    pub fn is_empty(&self) -> bool {
        self.aux.is_empty()
    }

    /// Ids must be unique and usable as ground-variable names.
    pub fn validate(&self) -> Result<()> {
        let mut seen = HashSet::new();
        for a in &self.aux {
            if a.id.is_empty() || a.id.chars().any(|c| c.is_whitespace() || ",{}:".contains(c)) {
                return Err(Error::InvalidAux(format!("bad auxiliary id {:?}", a.id)));
            }
            if !seen.insert(a.id.as_str()) {
                return Err(Error::InvalidAux(format!("duplicate auxiliary id {:?}", a.id)));
            }
        }
        Ok(())
    }
}

/// Which auxiliary variables [`generate_aux`] generates.
#[derive(Clone, Debug, PartialEq)]
pub enum AuxPolicy {
    /// The given maps, checked for totality.
    Explicit(AuxSpec),
    /// One indicator per atom of the joint source support.
    Indicators,
    /// Every binary partition of the joint source support; refused when the
    /// support has more than `cap` atoms.
    JointPartitions { cap: usize },
    /// Every binary partition of the joint support of the sources at the
    /// given coordinates; refused when that support has more than `cap` atoms.
    SubsetPartitions { sources: Vec<usize>, cap: usize },
}

/// Builds binary auxiliary variables as functions of the sources, keeping
/// only the first of any group that induce the same partition of the joint
/// source support.
pub fn generate_aux(srcdist: &RandomVectorDistribution, policy: &AuxPolicy) -> Result<AuxSpec> {
    let keys: Vec<String> = (0..srcdist.len()).map(|i| srcdist.tuple(i).join(",")).collect();
    let mut out: Vec<AuxVar> = Vec::new();
    match policy {
        AuxPolicy::Explicit(spec) => {
            spec.validate()?;
            for a in &spec.aux {
                if let Some(k) = keys.iter().find(|k| !a.map.contains_key(*k)) {
                    return Err(Error::InvalidAux(format!("auxiliary {:?} is undefined on {k:?}", a.id)));
                }
            }
            out = spec.aux.clone();
        }
        AuxPolicy::Indicators => {
            for (x, kx) in keys.iter().enumerate() {
                out.push(AuxVar {
                    id: format!("ind{}", x + 1),
                    map: keys
                        .iter()
                        .map(|k| (k.clone(), if k == kx { "1" } else { "0" }.to_string()))
                        .collect(),
                });
            }
        }
        AuxPolicy::JointPartitions { cap } => {
            let n = keys.len();
            check_cap(n, *cap)?;
            let family = enumerate_partitions(n)?;
            for p in family.partitions() {
                out.push(AuxVar {
                    id: format!("part{}", atoms_tag(p.alpha())),
                    map: keys
                        .iter()
                        .enumerate()
                        .map(|(i, k)| (k.clone(), (p.contains(i) as u8).to_string()))
                        .collect(),
                });
            }
        }
        AuxPolicy::SubsetPartitions { sources, cap } => {
            if sources.is_empty() {
                return Err(Error::InvalidAux("no sources chosen".into()));
            }
            if let Some(&m) = sources.iter().find(|&&m| m >= srcdist.arity()) {
                return Err(Error::CoordinateOutOfRange {
                    index: m,
                    arity: srcdist.arity(),
                });
            }
            let project = |i: usize| -> String {
                let t = srcdist.tuple(i);
                sources.iter().map(|&m| t[m]).collect::<Vec<_>>().join(",")
            };
            let mut sub: Vec<String> = Vec::new();
            for i in 0..srcdist.len() {
                let k = project(i);
                if !sub.contains(&k) {
                    sub.push(k);
                }
            }
            check_cap(sub.len(), *cap)?;
            if sub.len() < 2 {
                return Ok(AuxSpec::none());
            }
            let family = enumerate_partitions(sub.len())?;
            let tag: Vec<String> = sources.iter().map(|m| (m + 1).to_string()).collect();
            for p in family.partitions() {
                out.push(AuxVar {
                    id: format!("w{}.part{}", tag.join("+"), atoms_tag(p.alpha())),
                    map: (0..srcdist.len())
                        .map(|i| {
                            let pos = sub.iter().position(|k| *k == project(i)).expect("collected above");
                            (keys[i].clone(), (p.contains(pos) as u8).to_string())
                        })
                        .collect(),
                });
            }
        }
    }
    Ok(AuxSpec { aux: dedup(&keys, out) })
}

fn check_cap(n: usize, cap: usize) -> Result<()> {
    if n > cap {
        return Err(Error::SupportTooLarge {
            size: n,
            limit: cap,
            what: "auxiliary partition family",
        });
    }
    Ok(())
}

/// 1-based atoms of a mask joined by `_`.
fn atoms_tag(mask: u32) -> String {
    (0..32)
        .filter(|i| mask >> i & 1 == 1)
        .map(|i| (i + 1).to_string())
        .collect::<Vec<_>>()
        .join("_")
}

fn dedup(keys: &[String], aux: Vec<AuxVar>) -> Vec<AuxVar> {
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    aux.into_iter()
        .filter(|a| {
            // Class id per atom in order of first appearance identifies the
            // induced partition of the support.
            let mut ids: HashMap<&str, usize> = HashMap::new();
            let sig: Vec<usize> = keys
                .iter()
                .map(|k| {
                    let next = ids.len();
                    *ids.entry(a.map[k].as_str()).or_insert(next)
                })
                .collect();
            seen.insert(sig)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netcode::example_sources;

    #[test]
    fn indicator_policy_on_example_sources() {
        let (src, _) = example_sources();
        let a = generate_aux(&src, &AuxPolicy::Indicators).unwrap();
        assert_eq!(a.len(), 8);
    }

    #[test]
    fn explicit_policy_keeps_bits() {
        let (src, bits) = example_sources();
        let a = generate_aux(&src, &AuxPolicy::Explicit(bits.clone())).unwrap();
        assert_eq!(a, bits);
        let mut partial = bits.clone();
        partial.aux[0].map.pop_first();
        assert!(matches!(generate_aux(&src, &AuxPolicy::Explicit(partial)), Err(Error::InvalidAux(_))));
    }

    #[test]
    fn subset_partitions() {
        let src = RandomVectorDistribution::new(
            vec![vec!["a".into(), "x".into()], vec!["b".into(), "x".into()], vec!["b".into(), "y".into()]],
            vec![0.5, 0.25, 0.25],
        )
        .unwrap();
        let a = generate_aux(&src, &AuxPolicy::SubsetPartitions { sources: vec![1], cap: 4 }).unwrap();
        assert_eq!(a.len(), 1);
        let a = generate_aux(&src, &AuxPolicy::SubsetPartitions { sources: vec![0, 1], cap: 4 }).unwrap();
        assert_eq!(a.len(), 3);
        assert!(generate_aux(&src, &AuxPolicy::JointPartitions { cap: 2 }).is_err());
    }

    #[test]
    fn duplicates_are_dropped() {
        let (src, bits) = example_sources();
        let mut twice = bits.clone();
        for a in &bits.aux {
            let mut b = a.clone();
            b.id.push_str("dup");
            // Relabelled outputs induce the same partition.
            for v in b.map.values_mut() {
                *v = if v == "0" { "z".into() } else { "o".into() };
            }
            twice.aux.push(b);
        }
        assert_eq!(generate_aux(&src, &AuxPolicy::Explicit(twice)).unwrap(), bits);
    }
}
