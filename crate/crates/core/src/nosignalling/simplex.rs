//! Dense two-phase primal simplex method with Bland's anti-cycling rule.

use crate::error::{Error, Result};

const TOL: f64 = 1e-9;

/// `maximize c·x subject to A x = b, x ≥ 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    pub objective: Vec<f64>,
    pub a_eq: Vec<Vec<f64>>,
    pub b_eq: Vec<f64>,
}

/// An optimal vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub value: f64,
    pub x: Vec<f64>,
    pub pivots: usize,
}

struct Tableau {
    rows: Vec<Vec<f64>>,
    cost: Vec<f64>,
    basis: Vec<usize>,
    width: usize,
    pivots: usize,
}

impl Tableau {
    fn rhs(&self, i: usize) -> f64 {
        self.rows[i][self.width]
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c];
        self.rows[r].iter_mut().for_each(|v| *v /= p);
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r && row[c] != 0.0 {
                let f = row[c];
                row.iter_mut().zip(&pivot_row).for_each(|(v, p)| *v -= f * p);
            }
        }
        if self.cost[c] != 0.0 {
            let f = self.cost[c];
            self.cost.iter_mut().zip(&pivot_row).for_each(|(v, p)| *v -= f * p);
        }
        self.basis[r] = c;
        self.pivots += 1;
    }

    /// Sets the reduced-cost row for `maximize c·x` over the current basis.
    fn price(&mut self, c: &[f64]) {
        self.cost = vec![0.0; self.width + 1];
        for (j, v) in c.iter().enumerate() {
            self.cost[j] = -v;
        }
        for i in 0..self.rows.len() {
            let f = self.cost[self.basis[i]];
            if f != 0.0 {
                let row = &self.rows[i];
                self.cost.iter_mut().zip(row).for_each(|(v, p)| *v -= f * p);
            }
        }
    }

    /// Bland's rule iterations over columns `< limit`.
    fn optimize(&mut self, limit: usize, max_pivots: usize) -> Result<()> {
        loop {
            let Some(enter) = (0..limit).find(|&j| self.cost[j] < -TOL) else {
                return Ok(());
            };
            let mut leave: Option<(usize, f64)> = None;
            for i in 0..self.rows.len() {
                let a = self.rows[i][enter];
                if a > TOL {
                    let ratio = self.rhs(i) / a;
                    leave = match leave {
                        None => Some((i, ratio)),
                        Some((k, best)) => {
                            if ratio < best - TOL
                                || (ratio <= best + TOL && self.basis[i] < self.basis[k])
                            {
                                Some((i, ratio))
                            } else {
                                Some((k, best))
                            }
                        }
                    };
                }
            }
            let Some((r, _)) = leave else {
                return Err(Error::Numerical("linear program is unbounded".into()));
            };
            if self.pivots >= max_pivots {
                return Err(Error::Numerical(format!("no optimum after {} pivots", self.pivots)));
            }
            self.pivot(r, enter);
        }
    }
}

impl LinearProgram {
    pub fn maximize(&self) -> Result<LpSolution> {
        let n = self.objective.len();
        let m = self.a_eq.len();
        if self.b_eq.len() != m || self.a_eq.iter().any(|r| r.len() != n) {
            return Err(Error::Validation("linear program has inconsistent shapes".into()));
        }
        let width = n + m;
        let mut rows = Vec::with_capacity(m);
        for (i, (a, &b)) in self.a_eq.iter().zip(&self.b_eq).enumerate() {
            let sign = if b < 0.0 { -1.0 } else { 1.0 };
            let mut row = vec![0.0; width + 1];
            for (slot, v) in row.iter_mut().zip(a) {
                *slot = sign * v;
            }
            row[n + i] = 1.0;
            row[width] = sign * b;
            rows.push(row);
        }
        let mut t = Tableau { rows, cost: Vec::new(), basis: (n..width).collect(), width, pivots: 0 };
        let max_pivots = 50 * (width + 10) * (m + 10);

        let mut phase_one = vec![0.0; width];
        phase_one[n..].iter_mut().for_each(|v| *v = -1.0);
        t.price(&phase_one);
        t.optimize(width, max_pivots)?;
        let scale = 1.0 + self.b_eq.iter().map(|b| b.abs()).sum::<f64>();
        if t.cost[width] < -TOL * scale {
            return Err(Error::Numerical(format!(
                "linear program is infeasible (residual {:e})",
                -t.cost[width]
            )));
        }

        // Drive artificial variables out of the basis; drop redundant rows.
        let mut i = 0;
        while i < t.rows.len() {
            if t.basis[i] >= n {
                match (0..n).find(|&j| t.rows[i][j].abs() > TOL) {
                    Some(j) => t.pivot(i, j),
                    None => {
                        t.rows.remove(i);
                        t.basis.remove(i);
                        continue;
                    }
                }
            }
            i += 1;
        }

        t.price(&self.objective);
        t.optimize(n, max_pivots)?;
        let mut x = vec![0.0; n];
        for (i, &b) in t.basis.iter().enumerate() {
            if b < n {
                x[b] = t.rhs(i).max(0.0);
            }
        }
        let value = self.objective.iter().zip(&x).map(|(c, v)| c * v).sum();
        Ok(LpSolution { value, x, pivots: t.pivots })
    }
}
