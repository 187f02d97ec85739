//! Networks with correlated sources on acyclic graphs, and the
//! linear-programming outer bound on their capacity regions.
//!
//! The LP ground set holds one variable `X.<s>` per source, `J.<k>` per
//! auxiliary variable and `U.<e>` per edge that carries its own message.
//! Rows, in order:
//!
//! 1. `h(X_W, J_Z) = H(Y_W, K_Z)` for every nonempty `W ∪ Z`, with the
//!    right-hand sides computed from the source distribution;
//! 2. `h(U_e | inputs at tail(e)) = 0` per message-carrying edge;
//! 3. `h(X_s | inputs at u) = 0` per source `s` and node `u` demanding it;
//! 4. `C_e - h(U_e) >= 0` per finite-capacity edge;
//! 5. the elemental inequalities over the ground set.
//!
//! The inputs at a node are the sources placed there plus what every
//! incoming edge carries.

mod aux;
mod example;

use std::collections::{BTreeMap, HashMap, HashSet};
use std::ops::Range;

use petgraph::algo::{has_path_connecting, toposort};
use petgraph::graph::{DiGraph, NodeIndex};
use serde::{Deserialize, Serialize};

use crate::dist::RandomVectorDistribution;
use crate::entropy_lp::lp::{LpOutcome, Sense};
use crate::entropy_lp::{
    dump, elemental_inequalities, entropic_point, feasibility_with, to_model, EntropySpacePoint, Feasibility,
    GroundSet, LinearConstraint, LpOptions,
};
use crate::error::{Error, Result};
use crate::varset::VarSet;

pub use aux::{generate_aux, AuxPolicy, AuxSpec, AuxVar};
pub use example::{example_network, example_sources};

/// Edge capacity in bits per network use.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Capacity {
    Finite(f64),
    Unconstrained,
}

impl Serialize for Capacity {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Capacity::Finite(c) => s.serialize_f64(*c),
            Capacity::Unconstrained => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Capacity {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(c) => Ok(Capacity::Finite(c)),
            Raw::Str(s) if s == "inf" => Ok(Capacity::Unconstrained),
            Raw::Str(s) => Err(serde::de::Error::custom(format!("capacity {s:?} is neither a number nor \"inf\""))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub id: String,
    pub tail: String,
    pub head: String,
    pub capacity: Capacity,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Source {
    pub id: String,
    /// Nodes where the source is available.
    pub placed: Vec<String>,
    /// Nodes that must decode the source.
    pub demanded: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NetworkSpec {
    pub nodes: Vec<String>,
    pub edges: Vec<Edge>,
    pub sources: Vec<Source>,
}

impl NetworkSpec {
    /// Checks names, endpoints, capacities, acyclicity, and that no source
    /// is demanded where it is placed.
    pub fn validate(&self) -> Result<()> {
        self.graph().map(|_| ())
    }

    /// Edges with a finite capacity, in declaration order.
    pub fn finite_edges(&self) -> impl Iterator<Item = &Edge> {
        self.edges.iter().filter(|e| matches!(e.capacity, Capacity::Finite(_)))
    }

    /// The declared finite capacities, in [`finite_edges`](Self::finite_edges) order.
    pub fn capacities(&self) -> Vec<f64> {
        self.finite_edges()
            .map(|e| match e.capacity {
                Capacity::Finite(c) => c,
                Capacity::Unconstrained => unreachable!(),
            })
            .collect()
    }

    fn node_index(&self) -> HashMap<&str, usize> {
        self.nodes.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect()
    }

    fn graph(&self) -> Result<DiGraph<(), usize>> {
        let bad = |m: String| Err(Error::InvalidNetwork(m));
        let index = self.node_index();
        if index.len() != self.nodes.len() {
            return bad("duplicate node names".into());
        }
        let mut g = DiGraph::new();
        for _ in &self.nodes {
            g.add_node(());
        }
        let mut ids = HashSet::new();
        for (k, e) in self.edges.iter().enumerate() {
            if !ids.insert(e.id.as_str()) {
                return bad(format!("duplicate edge id {:?}", e.id));
            }
            let (Some(&t), Some(&h)) = (index.get(e.tail.as_str()), index.get(e.head.as_str())) else {
                return bad(format!("edge {:?} joins unknown nodes", e.id));
            };
            if let Capacity::Finite(c) = e.capacity {
                if !(c.is_finite() && c > 0.0) {
                    return bad(format!("edge {:?} has capacity {c}; capacities must be positive", e.id));
                }
            }
            g.add_edge(NodeIndex::new(t), NodeIndex::new(h), k);
        }
        if toposort(&g, None).is_err() {
            return bad("graph has a cycle".into());
        }
        let mut sids = HashSet::new();
        for s in &self.sources {
            if !sids.insert(s.id.as_str()) {
                return bad(format!("duplicate source id {:?}", s.id));
            }
            if s.placed.is_empty() {
                return bad(format!("source {:?} is not placed anywhere", s.id));
            }
            for n in s.placed.iter().chain(&s.demanded) {
                if !index.contains_key(n.as_str()) {
                    return bad(format!("source {:?} mentions unknown node {n:?}", s.id));
                }
            }
            if let Some(n) = s.placed.iter().find(|n| s.demanded.contains(n)) {
                return bad(format!("source {:?} is both placed and demanded at node {n:?}", s.id));
            }
        }
        Ok(g)
    }
}

/// How edges without a capacity constraint enter the LP.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum EdgeModel {
    /// Unconstrained edges get no variable of their own: they forward
    /// everything available at their tail.
    #[default]
    Economical,
    /// Every edge gets a variable and an encoding row; only finite edges get
    /// a capacity row.
    Explicit,
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct BoundOptions {
    pub edge_model: EdgeModel,
    pub lp: LpOptions,
}

/// Row counts per block of a [`BoundProblem`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RowCounts {
    pub source_entropy: usize,
    pub encoding: usize,
    pub decoding: usize,
    pub capacity: usize,
    pub elemental: usize,
}

/// The outer-bound LP of one network instance at one capacity tuple.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundProblem {
    pub ground: GroundSet,
    pub constraints: Vec<LinearConstraint>,
    pub counts: RowCounts,
    /// Finite-capacity edge ids with their capacities, in row order.
    pub capacities: Vec<(String, f64)>,
    /// Ground variable of each finite-capacity edge.
    capacity_vars: Vec<usize>,
    capacity_rows: Range<usize>,
}

impl BoundProblem {
    pub fn dump(&self) -> String {
        dump(&self.constraints, &self.ground)
    }
}

/// The joint distribution of sources followed by auxiliary variables.
pub fn push_forward(srcdist: &RandomVectorDistribution, aux: &AuxSpec) -> Result<RandomVectorDistribution> {
    let tuples: Vec<Vec<String>> = (0..srcdist.len())
        .map(|i| {
            let src = srcdist.tuple(i);
            let key = src.join(",");
            let mut t: Vec<String> = src.iter().map(|s| s.to_string()).collect();
            for a in &aux.aux {
                let v = a.map.get(&key).ok_or_else(|| {
                    Error::InvalidAux(format!("auxiliary {:?} is undefined on source outcome {key:?}", a.id))
                })?;
                t.push(v.clone());
            }
            Ok(t)
        })
        .collect::<Result<_>>()?;
    RandomVectorDistribution::new(tuples, srcdist.probs().to_vec())
}

pub fn build_constraints(
    net: &NetworkSpec,
    srcdist: &RandomVectorDistribution,
    aux: &AuxSpec,
    caps: &[f64],
) -> Result<BoundProblem> {
    build_constraints_with(net, srcdist, aux, caps, EdgeModel::default())
}

pub fn build_constraints_with(
    net: &NetworkSpec,
    srcdist: &RandomVectorDistribution,
    aux: &AuxSpec,
    caps: &[f64],
    model: EdgeModel,
) -> Result<BoundProblem> {
    let graph = net.graph()?;
    let ns = net.sources.len();
    if srcdist.arity() != ns {
        return Err(Error::InvalidNetwork(format!(
            "source distribution has {} coordinates for {ns} sources",
            srcdist.arity()
        )));
    }
    let finite: Vec<&Edge> = net.finite_edges().collect();
    if caps.len() != finite.len() {
        return Err(Error::InvalidNetwork(format!(
            "{} capacities given for {} finite-capacity edges",
            caps.len(),
            finite.len()
        )));
    }
    if let Some(c) = caps.iter().find(|c| !(c.is_finite() && **c >= 0.0)) {
        return Err(Error::InvalidNetwork(format!("capacity {c} is not a nonnegative number")));
    }
    let index = net.node_index();
    for s in &net.sources {
        for u in &s.demanded {
            let reachable = s
                .placed
                .iter()
                .any(|p| has_path_connecting(&graph, NodeIndex::new(index[p.as_str()]), NodeIndex::new(index[u.as_str()]), None));
            if !reachable {
                return Err(Error::StructurallyInfeasible(format!(
                    "node {u:?} demands source {:?} but no path leads there from its placement",
                    s.id
                )));
            }
        }
    }
    aux.validate()?;

    let mut names: Vec<String> = net.sources.iter().map(|s| format!("X.{}", s.id)).collect();
    names.extend(aux.aux.iter().map(|a| format!("J.{}", a.id)));
    let carrying: Vec<usize> = (0..net.edges.len())
        .filter(|&k| model == EdgeModel::Explicit || matches!(net.edges[k].capacity, Capacity::Finite(_)))
        .collect();
    let mut edge_var: HashMap<usize, usize> = HashMap::new();
    for &k in &carrying {
        edge_var.insert(k, names.len());
        names.push(format!("U.{}", net.edges[k].id));
    }
    let ground = GroundSet::new(names)?;
    let n_src_aux = ns + aux.aux.len();

    // What each edge carries, as a set of ground variables.
    let mut carried: Vec<Option<VarSet>> = vec![None; net.edges.len()];
    fn carried_by(
        k: usize,
        net: &NetworkSpec,
        edge_var: &HashMap<usize, usize>,
        memo: &mut Vec<Option<VarSet>>,
    ) -> VarSet {
        if let Some(v) = memo[k] {
            return v;
        }
        let v = match edge_var.get(&k) {
            Some(&u) => VarSet::singleton(u),
            None => inputs_at(&net.edges[k].tail, net, edge_var, memo),
        };
        memo[k] = Some(v);
        v
    }
    fn inputs_at(
        node: &str,
        net: &NetworkSpec,
        edge_var: &HashMap<usize, usize>,
        memo: &mut Vec<Option<VarSet>>,
    ) -> VarSet {
        let mut v = VarSet::EMPTY;
        for (m, s) in net.sources.iter().enumerate() {
            if s.placed.iter().any(|p| p == node) {
                v = v.with(m);
            }
        }
        for k in 0..net.edges.len() {
            if net.edges[k].head == node {
                v = v.union(carried_by(k, net, edge_var, memo));
            }
        }
        v
    }

    let mut constraints = Vec::new();
    let mut counts = RowCounts::default();

    let joint = push_forward(srcdist, aux)?;
    let sa_ground = GroundSet::numbered(n_src_aux)?;
    let h = entropic_point(&joint, &sa_ground)?;
    for s in VarSet::full(n_src_aux).nonempty_subsets().collect::<Vec<_>>().into_iter().rev() {
        constraints.push(LinearConstraint::fix(s, h.get(s))?);
        counts.source_entropy += 1;
    }

    for &k in &carrying {
        let given = inputs_at(&net.edges[k].tail, net, &edge_var, &mut carried);
        if let Some(c) = LinearConstraint::determined(VarSet::singleton(edge_var[&k]), given)? {
            constraints.push(c);
            counts.encoding += 1;
        }
    }

    for (m, s) in net.sources.iter().enumerate() {
        for u in &s.demanded {
            let given = inputs_at(u, net, &edge_var, &mut carried);
            if let Some(c) = LinearConstraint::determined(VarSet::singleton(m), given)? {
                constraints.push(c);
                counts.decoding += 1;
            }
        }
    }

    let start = constraints.len();
    let mut capacities = Vec::new();
    let mut capacity_vars = Vec::new();
    let finite_ids: Vec<usize> = (0..net.edges.len())
        .filter(|&k| matches!(net.edges[k].capacity, Capacity::Finite(_)))
        .collect();
    for (&k, &c) in finite_ids.iter().zip(caps) {
        let u = edge_var[&k];
        constraints.push(LinearConstraint::at_most(VarSet::singleton(u), c)?);
        capacities.push((net.edges[k].id.clone(), c));
        capacity_vars.push(u);
        counts.capacity += 1;
    }
    let capacity_rows = start..constraints.len();

    let elemental = elemental_inequalities(&ground)?;
    counts.elemental = elemental.len();
    constraints.extend(elemental);

    Ok(BoundProblem {
        ground,
        constraints,
        counts,
        capacities,
        capacity_vars,
        capacity_rows,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub enum Verdict {
    /// A point of the outer bound meets every row; it is the witness.
    InBound(EntropySpacePoint),
    /// No point does; `gap` is the least total violation.
    OutOfBound { gap: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Membership {
    pub verdict: Verdict,
    pub problem: BoundProblem,
}

impl Membership {
    pub fn in_bound(&self) -> bool {
        matches!(self.verdict, Verdict::InBound(_))
    }
}

/// Whether capacity tuple `caps` lies in the outer bound.
pub fn membership(
    net: &NetworkSpec,
    srcdist: &RandomVectorDistribution,
    aux: &AuxSpec,
    caps: &[f64],
) -> Result<Membership> {
    membership_with(net, srcdist, aux, caps, &BoundOptions::default())
}

pub fn membership_with(
    net: &NetworkSpec,
    srcdist: &RandomVectorDistribution,
    aux: &AuxSpec,
    caps: &[f64],
    opts: &BoundOptions,
) -> Result<Membership> {
    let problem = build_constraints_with(net, srcdist, aux, caps, opts.edge_model)?;
    let verdict = match feasibility_with(&problem.constraints, &problem.ground, &opts.lp)? {
        Feasibility::Feasible(h) => Verdict::InBound(h),
        Feasibility::Infeasible { gap } => Verdict::OutOfBound { gap },
    };
    Ok(Membership { verdict, problem })
}

/// Result of [`scale_query`].
#[derive(Clone, Debug, PartialEq)]
pub struct Scale {
    /// Least `t` with `t · direction` in the bound, or `None` if no
    /// multiple of `direction` is.
    pub t: Option<f64>,
    pub witness: Option<EntropySpacePoint>,
}

/// Least `t >= 0` such that `t · direction` lies in the outer bound.
///
/// The bound is closed upwards in every capacity, so this is the boundary
/// point on the ray; beyond it every multiple is inside.
pub fn scale_query(
    net: &NetworkSpec,
    srcdist: &RandomVectorDistribution,
    aux: &AuxSpec,
    direction: &[f64],
) -> Result<Scale> {
    scale_query_with(net, srcdist, aux, direction, &BoundOptions::default())
}

pub fn scale_query_with(
    net: &NetworkSpec,
    srcdist: &RandomVectorDistribution,
    aux: &AuxSpec,
    direction: &[f64],
    opts: &BoundOptions,
) -> Result<Scale> {
    if direction.iter().any(|d| !(d.is_finite() && *d >= 0.0)) || direction.iter().all(|&d| d == 0.0) {
        return Err(Error::InvalidNetwork("direction must be nonnegative and nonzero".into()));
    }
    let problem = build_constraints_with(net, srcdist, aux, direction, opts.edge_model)?;
    let rest: Vec<LinearConstraint> = problem
        .constraints
        .iter()
        .enumerate()
        .filter(|(i, _)| !problem.capacity_rows.contains(i))
        .map(|(_, c)| c.clone())
        .collect();
    let mut m = to_model(&rest, &problem.ground)?;
    let t = m.add_col(1.0, true);
    for (&u, &d) in problem.capacity_vars.iter().zip(direction) {
        m.add_row(vec![(t, d), ((1usize << u) - 1, -1.0)], Sense::Ge, 0.0);
    }
    match m.solve(opts.lp.backend)? {
        LpOutcome::Optimal { x, .. } => {
            let point = EntropySpacePoint::from_coords(problem.ground.len(), x[..problem.ground.dim()].to_vec())?;
            let tv = x[t].max(0.0);
            let worst = m.max_violation(&x);
            if worst > opts.lp.tol {
                return Err(Error::Numerical(format!("scaling witness violates a row by {worst:e}")));
            }
            Ok(Scale {
                t: Some(tv),
                witness: Some(point),
            })
        }
        LpOutcome::Infeasible => Ok(Scale { t: None, witness: None }),
        LpOutcome::Unbounded => Err(Error::Numerical("scaling LP reported unbounded below".into())),
    }
}

/// Entropy constants `H(Y_W, K_Z)` keyed by the ground-variable names.
pub fn source_constants(
    net: &NetworkSpec,
    srcdist: &RandomVectorDistribution,
    aux: &AuxSpec,
) -> Result<BTreeMap<String, f64>> {
    let joint = push_forward(srcdist, aux)?;
    let mut names: Vec<String> = net.sources.iter().map(|s| format!("X.{}", s.id)).collect();
    names.extend(aux.aux.iter().map(|a| format!("J.{}", a.id)));
    let g = GroundSet::new(names)?;
    let h = entropic_point(&joint, &g)?;
    Ok(g.full().nonempty_subsets().map(|s| (g.format_set(s), h.get(s))).collect())
}
