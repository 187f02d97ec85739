//! Identifying a distribution from partition-variable entropies, and
//! deciding equality of distributions up to relabelling of outcomes.

mod equivalence;
mod identify;
mod props;
mod vector;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::partition::BinaryPartition;

pub use equivalence::{
    scalar_equivalent, scalar_equivalent_with, verify_partition_match, MatchOptions,
    MAX_MATCH_SUPPORT,
};
pub use identify::{identify_indicators, identify_indicators_with, reconstruct_scalar, reconstruct_scalar_with};
pub use props::{
    basis_chain, check_completeness, check_indicator_props, check_partition_props,
    check_partition_props_with, distinctness_margin, PartitionPropsReport, MAX_PROPS_SUPPORT,
};
pub use vector::{
    factorize_relabeling, preserves_agreement, relabel_vector, vector_equivalent,
    witness_joint_map, MAX_ALPHABET,
};

/// Outcome renaming: one label map per coordinate (a single map for
/// scalar distributions).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Relabeling {
    pub maps: Vec<BTreeMap<String, String>>,
}

impl Relabeling {
    pub fn is_identity(&self) -> bool {
        self.maps.iter().all(|m| m.iter().all(|(k, v)| k == v))
    }

    /// Image of a label under coordinate `coord`'s map.
    pub fn image(&self, coord: usize, label: &str) -> Option<&str> {
        self.maps.get(coord)?.get(label).map(String::as_str)
    }
}

/// Evidence that a family of partitions of a second support reproduces
/// every checked joint entropy of the first support's partition variables.
#[derive(Clone, Debug, PartialEq)]
pub struct MatchWitness {
    /// `(<α>, B_<α>)` pairs: a partition of the first support and the
    /// partition of the second support assigned to it.
    pub assignment: Vec<(BinaryPartition, BinaryPartition)>,
    /// Largest subfamily size checked exhaustively.
    pub verified_depth: usize,
    /// Number of larger, randomly drawn subfamilies also checked.
    pub sampled: usize,
    pub seed: u64,
}
