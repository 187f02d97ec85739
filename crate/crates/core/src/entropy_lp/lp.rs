//! A small sparse LP model with two interchangeable solvers.

use crate::error::{Error, Result};

/// Row sense.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Eq,
    Ge,
    Le,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Row {
    pub coeffs: Vec<(usize, f64)>,
    pub sense: Sense,
    pub rhs: f64,
}

/// Minimise `objective · x` subject to `rows`, with each column either free
/// or bounded below by zero. Upper bounds are always infinite.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Model {
    nonneg: Vec<bool>,
    objective: Vec<f64>,
    rows: Vec<Row>,
}

/// Which solver runs a [`Model`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Backend {
    /// Sparse revised simplex from the `microlp` crate.
    #[default]
    Sparse,
    /// Dense two-phase tableau simplex with Bland's rule. Quadratic memory
    /// in the model size; intended for small instances and cross-checks.
    Dense,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Optimal { objective: f64, x: Vec<f64> },
    Infeasible,
    Unbounded,
}

impl Model {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a column and returns its index.
    pub fn add_col(&mut self, cost: f64, nonneg: bool) -> usize {
        self.nonneg.push(nonneg);
        self.objective.push(cost);
        self.nonneg.len() - 1
    }

    pub fn add_row(&mut self, coeffs: Vec<(usize, f64)>, sense: Sense, rhs: f64) {
        debug_assert!(coeffs.iter().all(|&(c, _)| c < self.nonneg.len()));
        self.rows.push(Row { coeffs, sense, rhs });
    }

    pub fn set_cost(&mut self, col: usize, cost: f64) {
        self.objective[col] = cost;
    }

    pub fn num_cols(&self) -> usize {
        self.nonneg.len()
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    /// Largest violation of any row or sign bound at `x`.
    pub fn max_violation(&self, x: &[f64]) -> f64 {
        let rows = self.rows.iter().map(|r| {
            let lhs: f64 = r.coeffs.iter().map(|&(c, a)| a * x[c]).sum();
            match r.sense {
                Sense::Eq => (lhs - r.rhs).abs(),
                Sense::Ge => (r.rhs - lhs).max(0.0),
                Sense::Le => (lhs - r.rhs).max(0.0),
            }
        });
        let bounds = self.nonneg.iter().zip(x).map(|(&nn, &v)| if nn { (-v).max(0.0) } else { 0.0 });
        rows.chain(bounds).fold(0.0, f64::max)
    }

    pub fn solve(&self, backend: Backend) -> Result<LpOutcome> {
        match backend {
            Backend::Sparse => self.solve_sparse(),
            Backend::Dense => dense::solve(self),
        }
    }

    fn solve_sparse(&self) -> Result<LpOutcome> {
        use microlp::{ComparisonOp, OptimizationDirection, Problem};
        let mut p = Problem::new(OptimizationDirection::Minimize);
        let vars: Vec<_> = self
            .nonneg
            .iter()
            .zip(&self.objective)
            .map(|(&nn, &c)| p.add_var(c, (if nn { 0.0 } else { f64::NEG_INFINITY }, f64::INFINITY)))
            .collect();
        for r in &self.rows {
            let op = match r.sense {
                Sense::Eq => ComparisonOp::Eq,
                Sense::Ge => ComparisonOp::Ge,
                Sense::Le => ComparisonOp::Le,
            };
            p.add_constraint(r.coeffs.iter().map(|&(c, a)| (vars[c], a)), op, r.rhs);
        }
        match p.solve() {
            Ok(outcome) => {
                let s = outcome
                    .solution()
                    .ok_or_else(|| Error::Numerical("solver stopped without a solution".into()))?;
                Ok(LpOutcome::Optimal {
                    objective: s.objective(),
                    x: vars.iter().map(|&v| s.var_value_raw(v)).collect(),
                })
            }
            Err(microlp::Error::Infeasible) => Ok(LpOutcome::Infeasible),
            Err(microlp::Error::Unbounded) => Ok(LpOutcome::Unbounded),
            Err(e) => Err(Error::Numerical(e.to_string())),
        }
    }
}

mod dense {
    use super::{LpOutcome, Model, Sense};
    use crate::error::{Error, Result};

    const PIVOT_TOL: f64 = 1e-9;
    const ITERATION_CAP: usize = 200_000;

    /// Standard form `A y = b, y >= 0, b >= 0` with a basis of artificials.
    struct Tableau {
        /// `m` constraint rows followed by the objective row; last column is
        /// the right-hand side.
        t: Vec<Vec<f64>>,
        basis: Vec<usize>,
        width: usize,
    }

    impl Tableau {
        fn pivot(&mut self, r: usize, c: usize) {
            let p = self.t[r][c];
            for v in self.t[r].iter_mut() {
                *v /= p;
            }
            let pivot_row = self.t[r].clone();
            for (i, row) in self.t.iter_mut().enumerate() {
                if i != r {
                    let f = row[c];
                    if f != 0.0 {
                        for (v, pv) in row.iter_mut().zip(&pivot_row) {
                            *v -= f * pv;
                        }
                    }
                }
            }
            self.basis[r] = c;
        }

        /// Runs Bland's rule on the objective row over columns `< allowed`.
        /// Returns `false` if unbounded.
        fn optimise(&mut self, allowed: usize) -> Result<bool> {
            let m = self.basis.len();
            let rhs = self.width - 1;
            for _ in 0..ITERATION_CAP {
                let Some(c) = (0..allowed).find(|&c| self.t[m][c] < -PIVOT_TOL) else {
                    return Ok(true);
                };
                let mut best: Option<(f64, usize)> = None;
                for r in 0..m {
                    let a = self.t[r][c];
                    if a > PIVOT_TOL {
                        let ratio = self.t[r][rhs] / a;
                        match best {
                            Some((br, bi)) if ratio > br + 1e-12 || (ratio >= br - 1e-12 && self.basis[r] >= self.basis[bi]) => {}
                            _ => best = Some((ratio, r)),
                        }
                    }
                }
                match best {
                    Some((_, r)) => self.pivot(r, c),
                    None => return Ok(false),
                }
            }
            Err(Error::Numerical(format!("dense simplex exceeded {ITERATION_CAP} pivots")))
        }
    }

    pub(super) fn solve(model: &Model) -> Result<LpOutcome> {
        // Column layout: split free columns into +/- parts, then one slack per
        // inequality row, then one artificial per row.
        let n = model.num_cols();
        let mut pos = Vec::with_capacity(n);
        let mut neg = Vec::with_capacity(n);
        let mut k = 0;
        for &nn in &model.nonneg {
            pos.push(k);
            k += 1;
            neg.push(if nn {
                None
            } else {
                k += 1;
                Some(k - 1)
            });
        }
        let structural = k;
        let m = model.rows.len();
        let slacks = model.rows.iter().filter(|r| r.sense != Sense::Eq).count();
        let art0 = structural + slacks;
        let width = art0 + m + 1;
        let mut t = vec![vec![0.0; width]; m + 1];
        let mut s = structural;
        for (i, r) in model.rows.iter().enumerate() {
            for &(c, a) in &r.coeffs {
                t[i][pos[c]] += a;
                if let Some(nc) = neg[c] {
                    t[i][nc] -= a;
                }
            }
            match r.sense {
                Sense::Eq => {}
                Sense::Ge => {
                    t[i][s] = -1.0;
                    s += 1;
                }
                Sense::Le => {
                    t[i][s] = 1.0;
                    s += 1;
                }
            }
            t[i][width - 1] = r.rhs;
            if r.rhs < 0.0 {
                for v in t[i].iter_mut() {
                    *v = -*v;
                }
            }
            t[i][art0 + i] = 1.0;
        }
        // Phase 1 objective: sum of artificials, priced out.
        let (rows, obj) = t.split_at_mut(m);
        for row in rows.iter() {
            for (c, (o, v)) in obj[0].iter_mut().zip(row).enumerate() {
                if c < art0 || c == width - 1 {
                    *o -= v;
                }
            }
        }
        let mut tab = Tableau {
            t,
            basis: (art0..art0 + m).collect(),
            width,
        };
        tab.optimise(art0)?;
        let infeasibility = -tab.t[m][width - 1];
        if infeasibility > 1e-9 * (1.0 + model.rows.iter().map(|r| r.rhs.abs()).sum::<f64>()) {
            return Ok(LpOutcome::Infeasible);
        }
        // Drive remaining artificials out of the basis where possible.
        for r in 0..m {
            if tab.basis[r] >= art0 {
                if let Some(c) = (0..art0).find(|&c| tab.t[r][c].abs() > PIVOT_TOL) {
                    tab.pivot(r, c);
                }
            }
        }
        // Phase 2 objective.
        let mut cost = vec![0.0; width];
        for (j, &c) in model.objective.iter().enumerate() {
            cost[pos[j]] = c;
            if let Some(nc) = neg[j] {
                cost[nc] = -c;
            }
        }
        for (r, &b) in tab.basis.iter().enumerate() {
            let cb = cost[b];
            if cb != 0.0 {
                for (c, v) in cost.iter_mut().zip(&tab.t[r]) {
                    *c -= cb * v;
                }
            }
        }
        cost[art0..width - 1].fill(0.0);
        tab.t[m] = cost;
        if !tab.optimise(art0)? {
            return Ok(LpOutcome::Unbounded);
        }
        let mut y = vec![0.0; width - 1];
        for (r, &b) in tab.basis.iter().enumerate() {
            y[b] = tab.t[r][width - 1];
        }
        let x: Vec<f64> = (0..n).map(|j| y[pos[j]] - neg[j].map_or(0.0, |nc| y[nc])).collect();
        let objective = model.objective.iter().zip(&x).map(|(c, v)| c * v).sum();
        Ok(LpOutcome::Optimal { objective, x })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn both(m: &Model) -> [LpOutcome; 2] {
        [m.solve(Backend::Sparse).unwrap(), m.solve(Backend::Dense).unwrap()]
    }

    #[test]
    fn small_optimum() {
        // min -x - y  s.t. x + 2y <= 4, 3x + y <= 6, x, y >= 0  →  x = 1.6, y = 1.2
        let mut m = Model::new();
        let x = m.add_col(-1.0, true);
        let y = m.add_col(-1.0, true);
        m.add_row(vec![(x, 1.0), (y, 2.0)], Sense::Le, 4.0);
        m.add_row(vec![(x, 3.0), (y, 1.0)], Sense::Le, 6.0);
        for out in both(&m) {
            let LpOutcome::Optimal { objective, x: v } = out else { panic!("{out:?}") };
            assert!((objective + 2.8).abs() < 1e-9);
            assert!((v[0] - 1.6).abs() < 1e-9 && (v[1] - 1.2).abs() < 1e-9);
            assert!(m.max_violation(&v) < 1e-9);
        }
    }

    #[test]
    fn free_columns_and_equalities() {
        // min x  s.t. x - y = -3, y >= 1 (y free otherwise)  →  x = -2
        let mut m = Model::new();
        let x = m.add_col(1.0, false);
        let y = m.add_col(0.0, false);
        m.add_row(vec![(x, 1.0), (y, -1.0)], Sense::Eq, -3.0);
        m.add_row(vec![(y, 1.0)], Sense::Ge, 1.0);
        for out in both(&m) {
            let LpOutcome::Optimal { objective, .. } = out else { panic!("{out:?}") };
            assert!((objective + 2.0).abs() < 1e-9);
        }
    }

    #[test]
    fn infeasible_and_unbounded() {
        let mut m = Model::new();
        let x = m.add_col(0.0, true);
        m.add_row(vec![(x, 1.0)], Sense::Le, -1.0);
        assert_eq!(both(&m), [LpOutcome::Infeasible, LpOutcome::Infeasible]);

        let mut m = Model::new();
        let x = m.add_col(-1.0, true);
        m.add_row(vec![(x, 1.0)], Sense::Ge, 1.0);
        assert_eq!(both(&m), [LpOutcome::Unbounded, LpOutcome::Unbounded]);
    }

    #[test]
    fn degenerate_redundant_rows() {
        // Duplicate equality rows leave an artificial basic at zero.
        let mut m = Model::new();
        let x = m.add_col(1.0, true);
        let y = m.add_col(1.0, true);
        m.add_row(vec![(x, 1.0), (y, 1.0)], Sense::Eq, 2.0);
        m.add_row(vec![(x, 2.0), (y, 2.0)], Sense::Eq, 4.0);
        m.add_row(vec![(x, 1.0)], Sense::Ge, 0.5);
        for out in both(&m) {
            let LpOutcome::Optimal { objective, x: v } = out else { panic!("{out:?}") };
            assert!((objective - 2.0).abs() < 1e-9);
            assert!(m.max_violation(&v) < 1e-9);
        }
    }
}
