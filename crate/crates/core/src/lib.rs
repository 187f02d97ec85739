//! Entropic characterisation of discrete distributions, and computable
//! linear-programming outer bounds for network coding with correlated
//! sources.
//!
//! The crate is organised bottom-up:
//!
//! - [`dist`]: finite distributions and entropies in bits.
//! - [`partition`]: binary partition random variables and a memoising
//!   entropy oracle over them.
//! - [`characterisation`]: recovering a distribution (up to relabelling)
//!   from partition-variable entropies, and relabelling equivalence tests.
//! - [`entropy_lp`]: entropy-space points, elemental Shannon inequalities and
//!   LP feasibility against the Shannon outer bound.
//! - [`netcode`]: network models and the outer-bound LPs built from them.
//! - [`io`]: JSON document formats.

pub mod characterisation;
pub mod dist;
pub mod entropy_lp;
pub mod error;
pub mod io;
pub mod netcode;
pub mod partition;
pub mod varset;

pub use characterisation::{
    check_partition_props, factorize_relabeling, identify_indicators, reconstruct_scalar,
    scalar_equivalent, vector_equivalent, verify_partition_match, MatchWitness, Relabeling,
};
pub use dist::{
    binary_entropy, entropy, invert_binary_entropy, marginal, subset_entropy,
    DiscreteDistribution, RandomVectorDistribution,
};
pub use entropy_lp::{
    elemental_inequalities, entropic_point, feasibility, maximize, EntropySpacePoint, Feasibility,
    GroundSet, LinearConstraint, Optimum, Relation,
};
pub use error::{Error, Result};
pub use netcode::{
    build_constraints, generate_aux, example_network, membership, scale_query, AuxSpec,
    BoundProblem, Membership, NetworkSpec,
};
pub use partition::{
    enumerate_partitions, indicator_partitions, induced_variable, joint_entropy,
    oracle_from_distribution, BinaryPartition, EntropyOracle, EntropyQuery, PartitionFamily,
};
pub use varset::VarSet;

/// Probabilities below this are rejected on ingestion; probability
/// comparisons use it as their tolerance.
pub const PROB_TOL: f64 = 1e-12;

/// Tolerance for entropy equalities in identification logic.
pub const ENTROPY_TOL: f64 = 1e-9;

/// LP feasibility tolerance.
pub const LP_TOL: f64 = 1e-7;

/// Tolerances used by the identification and LP routines.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    pub entropy: f64,
    pub lp: f64,
    pub prob: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            entropy: ENTROPY_TOL,
            lp: LP_TOL,
            prob: PROB_TOL,
        }
    }
}
