//! Dense primal simplex for `max c.x  s.t.  A x <= b, x >= 0` with `b >= 0`.
//!
//! The slack basis is feasible at the start, so no phase one is needed.
//! Pivoting follows Bland's rule: the entering column is the lowest index
//! with a positive reduced cost, the leaving row the minimum ratio with
//! ties going to the lowest basic variable index.

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct Solution {
    pub x: Vec<f64>,
    pub objective: f64,
    pub pivots: usize,
    /// Objective value after each pivot, starting with the initial basis.
    pub trace: Vec<f64>,
}

pub struct Simplex {
    rows: usize,
    cols: usize,
    // rows x (cols + rows + 1); last column is the rhs
    tableau: Vec<Vec<f64>>,
    // reduced costs, same width; last entry is the objective value
    cost: Vec<f64>,
    basis: Vec<usize>,
    tol: f64,
}

impl Simplex {
    pub fn new(a: &[Vec<f64>], b: &[f64], c: &[f64], tol: f64) -> Result<Self> {
        let rows = a.len();
        let cols = c.len();
        if b.len() != rows {
            return Err(Error::Solver("row count mismatch between A and b".into()));
        }
        let width = cols + rows + 1;
        let mut tableau = Vec::with_capacity(rows);
        for (i, row) in a.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::Solver(format!("row {i} has wrong width")));
            }
            if row.iter().any(|v| !v.is_finite()) || !b[i].is_finite() {
                return Err(Error::Solver(format!("row {i} has a non-finite entry")));
            }
            if b[i] < 0.0 {
                return Err(Error::Solver(format!("row {i} has negative rhs")));
            }
            let mut t = vec![0.0; width];
            t[..cols].copy_from_slice(row);
            t[cols + i] = 1.0;
            t[width - 1] = b[i];
            tableau.push(t);
        }
        let mut cost = vec![0.0; width];
        cost[..cols].copy_from_slice(c);
        Ok(Simplex {
            rows,
            cols,
            tableau,
            cost,
            basis: (cols..cols + rows).collect(),
            tol,
        })
    }

    pub fn solve(mut self, max_pivots: usize) -> Result<Solution> {
        let width = self.cols + self.rows + 1;
        let mut trace = vec![-self.cost[width - 1]];
        let mut pivots = 0;
        while let Some(enter) = (0..width - 1).find(|&j| self.cost[j] > self.tol) {
            let mut leave: Option<(usize, f64)> = None;
            for i in 0..self.rows {
                let a = self.tableau[i][enter];
                if a > self.tol {
                    let ratio = self.tableau[i][width - 1] / a;
                    leave = match leave {
                        None => Some((i, ratio)),
                        Some((r, best)) => {
                            if ratio < best - self.tol
                                || (ratio <= best + self.tol && self.basis[i] < self.basis[r])
                            {
                                Some((i, ratio))
                            } else {
                                Some((r, best))
                            }
                        }
                    };
                }
            }
            let Some((row, _)) = leave else {
                return Err(Error::Solver(format!("LP unbounded along column {enter}")));
            };
            self.pivot(row, enter);
            pivots += 1;
            trace.push(-self.cost[width - 1]);
            if pivots > max_pivots {
                return Err(Error::Solver(format!("pivot limit {max_pivots} exceeded")));
            }
        }
        let mut x = vec![0.0; self.cols];
        for (i, &var) in self.basis.iter().enumerate() {
            if var < self.cols {
                x[var] = self.tableau[i][width - 1];
            }
        }
        Ok(Solution {
            x,
            objective: -self.cost[width - 1],
            pivots,
            trace,
        })
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let width = self.cols + self.rows + 1;
        let p = self.tableau[row][col];
        for v in self.tableau[row].iter_mut() {
            *v /= p;
        }
        let pivot_row = self.tableau[row].clone();
        for (i, r) in self.tableau.iter_mut().enumerate() {
            if i == row {
                continue;
            }
            let f = r[col];
            if f != 0.0 {
                for j in 0..width {
                    r[j] -= f * pivot_row[j];
                }
                r[col] = 0.0;
            }
        }
        let f = self.cost[col];
        for (c, &v) in self.cost.iter_mut().zip(&pivot_row) {
            *c -= f * v;
        }
        self.cost[col] = 0.0;
        self.basis[row] = col;
    }
}
