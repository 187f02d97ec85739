//! Points and affine constraints in entropy space, and feasibility against
//! the polymatroidal (Shannon) outer bound.
//!
//! Coordinates are indexed by nonempty subsets of the ground set, encoded as
//! bitmasks; `h(∅) = 0` is implicit. Column `S - 1` of every LP is `h(S)`.

pub mod lp;

use std::collections::{BTreeMap, HashSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use self::lp::{Backend, LpOutcome, Model, Sense};
use crate::dist::{subset_entropy, RandomVectorDistribution};
use crate::error::{Error, Result};
use crate::varset::VarSet;
use crate::LP_TOL;

/// Largest ground set; the LP has `2^N - 1` columns.
pub const MAX_GROUND: usize = 16;

/// Named ground variables, in order. Names are non-empty and contain no
/// whitespace or any of `,{}:`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroundSet {
    names: Vec<String>,
}

impl GroundSet {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Self> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.is_empty() || names.len() > MAX_GROUND {
            return Err(Error::InvalidGroundSet(format!(
                "{} variables; between 1 and {MAX_GROUND} are supported",
                names.len()
            )));
        }
        let mut seen = HashSet::new();
        for n in &names {
            if n.is_empty() || n.chars().any(|c| c.is_whitespace() || ",{}:".contains(c)) {
                return Err(Error::InvalidGroundSet(format!("bad variable name {n:?}")));
            }
            if !seen.insert(n.as_str()) {
                return Err(Error::InvalidGroundSet(format!("duplicate variable name {n:?}")));
            }
        }
        Ok(Self { names })
    }

    /// Ground set `1, 2, ..., n`.
    pub fn numbered(n: usize) -> Result<Self> {
        Self::new((1..=n).map(|i| i.to_string()))
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn full(&self) -> VarSet {
        VarSet::full(self.len())
    }

    /// Number of LP columns, `2^N - 1`.
    pub fn dim(&self) -> usize {
        (1usize << self.len()) - 1
    }

    pub fn set_of<S: AsRef<str>>(&self, names: &[S]) -> Result<VarSet> {
        names.iter().try_fold(VarSet::EMPTY, |acc, n| {
            self.index_of(n.as_ref())
                .map(|i| acc.with(i))
                .ok_or_else(|| Error::InvalidConstraint(format!("unknown variable {:?}", n.as_ref())))
        })
    }

    /// `{A,B}` with names in ground order.
    pub fn format_set(&self, s: VarSet) -> String {
        let inner: Vec<&str> = s.iter().map(|i| self.names[i].as_str()).collect();
        format!("{{{}}}", inner.join(","))
    }
}

/// A vector `h(S)` over nonempty subsets `S`, in bits.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntropySpacePoint {
    n: usize,
    /// `coords[S - 1] = h(S)`.
    coords: Vec<f64>,
}

impl EntropySpacePoint {
    pub fn zero(n: usize) -> Self {
        Self {
            n,
            coords: vec![0.0; (1usize << n) - 1],
        }
    }

    pub fn from_coords(n: usize, coords: Vec<f64>) -> Result<Self> {
        if n == 0 || n > MAX_GROUND || coords.len() != (1usize << n) - 1 {
            return Err(Error::InvalidGroundSet(format!(
                "{} coordinates do not describe a ground set of {n}",
                coords.len()
            )));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::Numerical("non-finite coordinate".into()));
        }
        Ok(Self { n, coords })
    }

    pub fn ground_len(&self) -> usize {
        self.n
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    /// `h(S)`, with `h(∅) = 0`.
    pub fn get(&self, s: VarSet) -> f64 {
        if s.is_empty() {
            0.0
        } else {
            self.coords[s.bits() as usize - 1]
        }
    }

    pub fn set(&mut self, s: VarSet, v: f64) {
        assert!(!s.is_empty(), "h(∅) is fixed at zero");
        self.coords[s.bits() as usize - 1] = v;
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "=")]
    Eq,
    #[serde(rename = ">=")]
    Ge,
}

impl Relation {
    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Eq => "=",
            Relation::Ge => ">=",
        }
    }
}

/// `Σ coeff · h(S) rel rhs`, with terms merged per subset and zero
/// coefficients dropped.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearConstraint {
    terms: Vec<(VarSet, f64)>,
    relation: Relation,
    rhs: f64,
}

impl LinearConstraint {
    pub fn new(terms: impl IntoIterator<Item = (VarSet, f64)>, relation: Relation, rhs: f64) -> Result<Self> {
        let terms = merge_terms(terms)?;
        if terms.is_empty() {
            return Err(Error::InvalidConstraint("constraint has no terms".into()));
        }
        if !rhs.is_finite() {
            return Err(Error::InvalidConstraint(format!("right-hand side {rhs}")));
        }
        Ok(Self { terms, relation, rhs })
    }

    /// `h(S) = value`.
    pub fn fix(s: VarSet, value: f64) -> Result<Self> {
        Self::new([(s, 1.0)], Relation::Eq, value)
    }

    /// `h(a | given) = 0`, or `None` when `a ⊆ given` makes it vacuous.
    pub fn determined(a: VarSet, given: VarSet) -> Result<Option<Self>> {
        let both = a.union(given);
        if both == given {
            return Ok(None);
        }
        let mut terms = vec![(both, 1.0)];
        if !given.is_empty() {
            terms.push((given, -1.0));
        }
        Self::new(terms, Relation::Eq, 0.0).map(Some)
    }

    /// `cap - h(S) >= 0`, stored as `-h(S) >= -cap`.
    pub fn at_most(s: VarSet, cap: f64) -> Result<Self> {
        Self::new([(s, -1.0)], Relation::Ge, -cap)
    }

    pub fn terms(&self) -> &[(VarSet, f64)] {
        &self.terms
    }

    pub fn relation(&self) -> Relation {
        self.relation
    }

    pub fn rhs(&self) -> f64 {
        self.rhs
    }

    /// Union of all subsets mentioned.
    pub fn support(&self) -> VarSet {
        self.terms.iter().fold(VarSet::EMPTY, |acc, &(s, _)| acc.union(s))
    }

    pub fn lhs(&self, h: &EntropySpacePoint) -> f64 {
        self.terms.iter().map(|&(s, c)| c * h.get(s)).sum()
    }

    /// How far `h` is from satisfying the constraint (zero when satisfied).
    pub fn violation(&self, h: &EntropySpacePoint) -> f64 {
        let lhs = self.lhs(h);
        match self.relation {
            Relation::Eq => (lhs - self.rhs).abs(),
            Relation::Ge => (self.rhs - lhs).max(0.0),
        }
    }

    /// `rel rhs {A,B}:coeff ...` with names from `g`.
    pub fn format(&self, g: &GroundSet) -> String {
        let mut s = format!("{} {:?}", self.relation.symbol(), self.rhs);
        for &(set, c) in &self.terms {
            write!(s, " {}:{:?}", g.format_set(set), c).expect("writing to a String");
        }
        s
    }
}

fn merge_terms(terms: impl IntoIterator<Item = (VarSet, f64)>) -> Result<Vec<(VarSet, f64)>> {
    let mut merged: BTreeMap<u32, f64> = BTreeMap::new();
    for (s, c) in terms {
        if s.is_empty() {
            return Err(Error::InvalidConstraint("term over the empty set".into()));
        }
        if !c.is_finite() {
            return Err(Error::InvalidConstraint(format!("coefficient {c}")));
        }
        *merged.entry(s.bits()).or_insert(0.0) += c;
    }
    Ok(merged
        .into_iter()
        .filter(|&(_, c)| c != 0.0)
        .map(|(b, c)| (VarSet(b), c))
        .collect())
}

/// The elemental inequalities over `g`: `h(X_i | rest) >= 0` for every `i`,
/// and `I(X_i; X_j | X_K) >= 0` for every pair `i < j` and every `K` in the
/// remaining variables. There are `N + C(N,2) 2^(N-2)` of them.
pub fn elemental_inequalities(g: &GroundSet) -> Result<Vec<LinearConstraint>> {
    let n = g.len();
    let full = g.full();
    let mut out = Vec::with_capacity(n + n * n.saturating_sub(1) / 2 * (1usize << n.saturating_sub(2)));
    for i in 0..n {
        let rest = full.without(i);
        let mut terms = vec![(full, 1.0)];
        if !rest.is_empty() {
            terms.push((rest, -1.0));
        }
        out.push(LinearConstraint::new(terms, Relation::Ge, 0.0)?);
    }
    for i in 0..n {
        for j in i + 1..n {
            let others = full.without(i).without(j);
            for k in others.subsets() {
                let mut terms = vec![(k.with(i), 1.0), (k.with(j), 1.0), (k.with(i).with(j), -1.0)];
                if !k.is_empty() {
                    terms.push((k, -1.0));
                }
                out.push(LinearConstraint::new(terms, Relation::Ge, 0.0)?);
            }
        }
    }
    Ok(out)
}

/// `h(S) = H(X_S)` for the distribution whose coordinates are the ground
/// variables, in order.
pub fn entropic_point(d: &RandomVectorDistribution, g: &GroundSet) -> Result<EntropySpacePoint> {
    if d.arity() != g.len() {
        return Err(Error::InvalidGroundSet(format!(
            "distribution has {} coordinates but the ground set has {} variables",
            d.arity(),
            g.len()
        )));
    }
    let mut h = EntropySpacePoint::zero(g.len());
    for s in g.full().nonempty_subsets() {
        h.set(s, subset_entropy(d, s)?);
    }
    Ok(h)
}

/// LP solver settings.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LpOptions {
    /// Feasibility tolerance on constraint violation and phase-1 gap.
    pub tol: f64,
    pub backend: Backend,
}

impl Default for LpOptions {
    fn default() -> Self {
        Self {
            tol: LP_TOL,
            backend: Backend::Sparse,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Feasibility {
    /// A point satisfying every constraint within the tolerance.
    Feasible(EntropySpacePoint),
    /// The least total violation any point can achieve exceeds the tolerance.
    Infeasible { gap: f64 },
}

impl Feasibility {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Feasibility::Feasible(_))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Optimum {
    Value { value: f64, point: EntropySpacePoint },
    Unbounded,
    Infeasible { gap: f64 },
}

fn check_constraints(constraints: &[LinearConstraint], g: &GroundSet) -> Result<()> {
    let full = g.full();
    match constraints.iter().find(|c| !c.support().is_subset(full)) {
        Some(c) => Err(Error::InvalidConstraint(format!(
            "constraint over {:?} mentions variables outside the {}-variable ground set",
            c.support(),
            g.len()
        ))),
        None => Ok(()),
    }
}

/// The LP rows of `constraints` over columns `0..2^N - 1` (column `S - 1` is
/// `h(S)`, bounded below by zero), with zero objective.
pub fn to_model(constraints: &[LinearConstraint], g: &GroundSet) -> Result<Model> {
    check_constraints(constraints, g)?;
    let mut m = Model::new();
    for _ in 0..g.dim() {
        m.add_col(0.0, true);
    }
    for c in constraints {
        m.add_row(row_coeffs(c), sense_of(c.relation), c.rhs);
    }
    Ok(m)
}

fn row_coeffs(c: &LinearConstraint) -> Vec<(usize, f64)> {
    c.terms.iter().map(|&(s, a)| (s.bits() as usize - 1, a)).collect()
}

fn sense_of(r: Relation) -> Sense {
    match r {
        Relation::Eq => Sense::Eq,
        Relation::Ge => Sense::Ge,
    }
}

/// Elastic relaxation: every row the origin violates gets nonnegative
/// slack columns; their sum is the objective. Returns the model and the
/// slack column indices.
fn elastic_model(constraints: &[LinearConstraint], g: &GroundSet) -> Result<(Model, Vec<usize>)> {
    check_constraints(constraints, g)?;
    let mut m = Model::new();
    for _ in 0..g.dim() {
        m.add_col(0.0, true);
    }
    let mut elastic = Vec::new();
    for c in constraints {
        let mut coeffs = row_coeffs(c);
        let origin_ok = match c.relation {
            Relation::Eq => c.rhs == 0.0,
            Relation::Ge => c.rhs <= 0.0,
        };
        if !origin_ok {
            let up = m.add_col(1.0, true);
            coeffs.push((up, 1.0));
            elastic.push(up);
            if c.relation == Relation::Eq {
                let down = m.add_col(1.0, true);
                coeffs.push((down, -1.0));
                elastic.push(down);
            }
        }
        m.add_row(coeffs, sense_of(c.relation), c.rhs);
    }
    Ok((m, elastic))
}

fn point_of(g: &GroundSet, x: &[f64]) -> Result<EntropySpacePoint> {
    EntropySpacePoint::from_coords(g.len(), x[..g.dim()].to_vec())
}

fn replay(constraints: &[LinearConstraint], h: &EntropySpacePoint, tol: f64) -> Result<()> {
    for c in constraints {
        let v = c.violation(h);
        if v > tol {
            return Err(Error::Numerical(format!("witness violates a constraint by {v:e}")));
        }
    }
    Ok(())
}

/// Decides whether some `h` satisfies all `constraints`.
pub fn feasibility(constraints: &[LinearConstraint], g: &GroundSet) -> Result<Feasibility> {
    feasibility_with(constraints, g, &LpOptions::default())
}

pub fn feasibility_with(constraints: &[LinearConstraint], g: &GroundSet, opts: &LpOptions) -> Result<Feasibility> {
    let (m, _) = elastic_model(constraints, g)?;
    match m.solve(opts.backend)? {
        LpOutcome::Optimal { objective, x } => {
            let gap = objective.max(0.0);
            if gap > opts.tol {
                return Ok(Feasibility::Infeasible { gap });
            }
            let h = point_of(g, &x)?;
            replay(constraints, &h, opts.tol)?;
            Ok(Feasibility::Feasible(h))
        }
        other => Err(Error::Numerical(format!("elastic relaxation reported {other:?}"))),
    }
}

/// Maximises `Σ coeff · h(S)` subject to `constraints`.
///
/// When the constraints are only feasible within the tolerance, the
/// optimisation keeps the elastic slack with its total capped at the
/// phase-1 gap.
pub fn maximize(
    objective: &[(VarSet, f64)],
    constraints: &[LinearConstraint],
    g: &GroundSet,
) -> Result<Optimum> {
    maximize_with(objective, constraints, g, &LpOptions::default())
}

pub fn maximize_with(
    objective: &[(VarSet, f64)],
    constraints: &[LinearConstraint],
    g: &GroundSet,
    opts: &LpOptions,
) -> Result<Optimum> {
    let objective = merge_terms(objective.iter().copied())?;
    if let Some(&(s, _)) = objective.iter().find(|(s, _)| !s.is_subset(g.full())) {
        return Err(Error::InvalidConstraint(format!("objective term {s:?} outside the ground set")));
    }
    let gap = match feasibility_with(constraints, g, opts)? {
        Feasibility::Infeasible { gap } => return Ok(Optimum::Infeasible { gap }),
        Feasibility::Feasible(h) => constraints.iter().map(|c| c.violation(&h)).sum::<f64>(),
    };
    let (mut m, elastic) = elastic_model(constraints, g)?;
    for &e in &elastic {
        m.set_cost(e, 0.0);
    }
    if !elastic.is_empty() {
        m.add_row(elastic.iter().map(|&e| (e, 1.0)).collect(), Sense::Le, gap + 1e-9);
    }
    for &(s, c) in &objective {
        m.set_cost(s.bits() as usize - 1, -c);
    }
    match m.solve(opts.backend)? {
        LpOutcome::Optimal { x, .. } => {
            let point = point_of(g, &x)?;
            replay(constraints, &point, opts.tol)?;
            let value = objective.iter().map(|&(s, c)| c * point.get(s)).sum();
            Ok(Optimum::Value { value, point })
        }
        LpOutcome::Unbounded => Ok(Optimum::Unbounded),
        LpOutcome::Infeasible => Err(Error::Numerical(
            "feasible constraints became infeasible in the optimisation phase".into(),
        )),
    }
}

/// Text form: a `ground` line naming the variables, then one
/// `rel rhs {A,B}:coeff ...` line per constraint. Numbers use the shortest
/// representation that parses back to the same `f64`.
pub fn dump(constraints: &[LinearConstraint], g: &GroundSet) -> String {
    let mut s = format!("ground {}\n", g.names().join(" "));
    for c in constraints {
        s.push_str(&c.format(g));
        s.push('\n');
    }
    s
}

/// Inverse of [`dump`].
pub fn parse_dump(text: &str) -> Result<(GroundSet, Vec<LinearConstraint>)> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines.next().ok_or_else(|| Error::Parse("empty dump".into()))?;
    let names = header
        .strip_prefix("ground ")
        .ok_or_else(|| Error::Parse("dump must start with a `ground` line".into()))?;
    let g = GroundSet::new(names.split_whitespace())?;
    let mut out = Vec::new();
    for (lineno, line) in lines.enumerate() {
        let bad = |what: &str| Error::Parse(format!("constraint {}: {what}", lineno + 1));
        let mut parts = line.split_whitespace();
        let relation = match parts.next() {
            Some("=") => Relation::Eq,
            Some(">=") => Relation::Ge,
            _ => return Err(bad("relation must be `=` or `>=`")),
        };
        let rhs: f64 = parts
            .next()
            .and_then(|r| r.parse().ok())
            .ok_or_else(|| bad("missing or malformed right-hand side"))?;
        let mut terms = Vec::new();
        for t in parts {
            let (set, coeff) = t.rsplit_once(':').ok_or_else(|| bad("term without `:`"))?;
            let inner = set
                .strip_prefix('{')
                .and_then(|s| s.strip_suffix('}'))
                .ok_or_else(|| bad("subset must be braced"))?;
            let names: Vec<&str> = inner.split(',').filter(|s| !s.is_empty()).collect();
            let coeff: f64 = coeff.parse().map_err(|_| bad("malformed coefficient"))?;
            terms.push((g.set_of(&names)?, coeff));
        }
        out.push(LinearConstraint::new(terms, relation, rhs)?);
    }
    Ok((g, out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn bits(n: usize) -> RandomVectorDistribution {
        let tuples: Vec<Vec<String>> = (0..1usize << n)
            .map(|v| (0..n).map(|i| ((v >> i) & 1).to_string()).collect())
            .collect();
        let k = tuples.len();
        RandomVectorDistribution::new(tuples, vec![1.0 / k as f64; k]).unwrap()
    }

    #[test]
    fn elemental_counts() {
        assert_eq!(elemental_inequalities(&GroundSet::numbered(1).unwrap()).unwrap().len(), 1);
        assert_eq!(elemental_inequalities(&GroundSet::numbered(3).unwrap()).unwrap().len(), 9);
        assert_eq!(elemental_inequalities(&GroundSet::numbered(10).unwrap()).unwrap().len(), 11_530);
    }

    #[test]
    fn single_variable_elemental_is_nonnegativity() {
        let e = elemental_inequalities(&GroundSet::numbered(1).unwrap()).unwrap();
        assert_eq!(e[0].terms(), &[(VarSet(1), 1.0)]);
        assert_eq!(e[0].relation(), Relation::Ge);
    }

    #[test]
    fn ground_set_validation() {
        assert!(GroundSet::new(["a", "a"]).is_err());
        assert!(GroundSet::new(["a b"]).is_err());
        assert!(GroundSet::new(Vec::<String>::new()).is_err());
        assert!(GroundSet::numbered(17).is_err());
    }

    #[test]
    fn entropic_points() {
        let g = GroundSet::numbered(2).unwrap();
        let h = entropic_point(&bits(2), &g).unwrap();
        assert_eq!(h.coords(), &[1.0, 1.0, 2.0]);
        assert!(entropic_point(&bits(3), &g).is_err());
    }

    #[test]
    fn feasibility_examples() {
        for backend in [Backend::Sparse, Backend::Dense] {
            let opts = LpOptions { backend, ..Default::default() };
            let g = GroundSet::numbered(3).unwrap();
            let gamma = elemental_inequalities(&g).unwrap();
            let Feasibility::Feasible(h) = feasibility_with(&gamma, &g, &opts).unwrap() else {
                panic!("origin is feasible");
            };
            assert!(h.coords().iter().all(|&v| v.abs() < 1e-12));

            let mut bad = gamma.clone();
            bad.push(LinearConstraint::fix(VarSet(1), -1.0).unwrap());
            let Feasibility::Infeasible { gap } = feasibility_with(&bad, &g, &opts).unwrap() else {
                panic!("negative entropy is infeasible");
            };
            assert!(gap > 0.5);

            let g2 = GroundSet::numbered(2).unwrap();
            let mut indep = elemental_inequalities(&g2).unwrap();
            indep.push(LinearConstraint::fix(VarSet(1), 1.0).unwrap());
            indep.push(LinearConstraint::fix(VarSet(2), 1.0).unwrap());
            indep.push(LinearConstraint::fix(VarSet(3), 2.0).unwrap());
            let Feasibility::Feasible(h) = feasibility_with(&indep, &g2, &opts).unwrap() else {
                panic!("independent bits are feasible");
            };
            let expected = entropic_point(&bits(2), &g2).unwrap();
            for (a, b) in h.coords().iter().zip(expected.coords()) {
                assert_abs_diff_eq!(a, b, epsilon = 1e-7);
            }
        }
    }

    #[test]
    fn maximize_examples() {
        for backend in [Backend::Sparse, Backend::Dense] {
            let opts = LpOptions { backend, ..Default::default() };
            let g = GroundSet::numbered(2).unwrap();
            let gamma = elemental_inequalities(&g).unwrap();
            let one = [(VarSet(1), 1.0)];
            assert_eq!(maximize_with(&one, &gamma, &g, &opts).unwrap(), Optimum::Unbounded);

            let mut capped = gamma.clone();
            capped.push(LinearConstraint::at_most(VarSet(1), 1.0).unwrap());
            let Optimum::Value { value, .. } = maximize_with(&one, &capped, &g, &opts).unwrap() else {
                panic!("bounded");
            };
            assert_abs_diff_eq!(value, 1.0, epsilon = 1e-7);

            let Optimum::Value { value, .. } = maximize_with(&[(VarSet(1), -1.0)], &gamma, &g, &opts).unwrap()
            else {
                panic!("bounded");
            };
            assert_abs_diff_eq!(value, 0.0, epsilon = 1e-7);

            let mut bad = gamma.clone();
            bad.push(LinearConstraint::fix(VarSet(1), -1.0).unwrap());
            assert!(matches!(maximize_with(&one, &bad, &g, &opts).unwrap(), Optimum::Infeasible { .. }));
        }
    }

    #[test]
    fn dump_round_trip() {
        let g = GroundSet::new(["X.1", "X.2", "U.e1"]).unwrap();
        let mut cs = elemental_inequalities(&g).unwrap();
        cs.push(LinearConstraint::fix(VarSet(0b011), 0.1 + 0.2).unwrap());
        cs.push(LinearConstraint::at_most(VarSet(0b100), 1.0 / 3.0).unwrap());
        cs.push(LinearConstraint::determined(VarSet(0b100), VarSet(0b011)).unwrap().unwrap());
        let text = dump(&cs, &g);
        assert!(text.starts_with("ground X.1 X.2 U.e1\n"));
        assert!(text.contains("= 0.30000000000000004 {X.1,X.2}:1.0"));
        let (g2, cs2) = parse_dump(&text).unwrap();
        assert_eq!(g2, g);
        assert_eq!(cs2, cs);
        assert_eq!(dump(&cs2, &g2), text);
        assert!(parse_dump("ground a\n<= 1 {a}:1.0").is_err());
        assert!(parse_dump("ground a\n= 1 {b}:1.0").is_err());
    }

    #[test]
    fn vacuous_determination_is_dropped() {
        assert!(LinearConstraint::determined(VarSet(1), VarSet(3)).unwrap().is_none());
        assert!(LinearConstraint::new([(VarSet(1), 1.0), (VarSet(1), -1.0)], Relation::Eq, 0.0).is_err());
    }
}
