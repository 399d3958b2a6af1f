//! Dense two-phase simplex for small linear programs.
//!
//! Minimises `c·x` subject to linear rows and finite lower / optional upper
//! variable bounds. Bounds are shifted away (`x = l + x'`), upper bounds
//! become rows, every row is normalised to a non-negative right-hand side,
//! and a standard tableau is pivoted with Dantzig's rule. After a run of
//! degenerate pivots the entering rule switches to Bland's to rule out
//! cycling.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cmp {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone)]
struct Row {
    coeffs: Vec<f64>,
    cmp: Cmp,
    rhs: f64,
}

#[derive(Debug, Clone)]
pub struct LinearProgram {
    objective: Vec<f64>,
    lower: Vec<f64>,
    upper: Vec<f64>,
    rows: Vec<Row>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub x: Vec<f64>,
    pub objective: f64,
    pub pivots: usize,
}

const TOL: f64 = 1e-11;
const BLAND_AFTER: usize = 50;

impl LinearProgram {
    /// `n` variables, objective zero, bounds `[0, ∞)`.
    pub fn new(n: usize) -> Self {
        LinearProgram {
            objective: vec![0.0; n],
            lower: vec![0.0; n],
            upper: vec![f64::INFINITY; n],
            rows: Vec::new(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn set_objective(&mut self, var: usize, coeff: f64) {
        self.objective[var] = coeff;
    }

    pub fn set_bounds(&mut self, var: usize, lower: f64, upper: f64) {
        self.lower[var] = lower;
        self.upper[var] = upper;
    }

    /// Adds `Σ coeff·x_var (cmp) rhs` from sparse terms.
    pub fn add_row(&mut self, terms: &[(usize, f64)], cmp: Cmp, rhs: f64) {
        let mut coeffs = vec![0.0; self.num_vars()];
        for &(v, c) in terms {
            coeffs[v] += c;
        }
        self.rows.push(Row { coeffs, cmp, rhs });
    }

    pub fn solve(&self) -> Result<LpSolution> {
        let n = self.num_vars();
        if let Some(v) = self.lower.iter().position(|l| !l.is_finite()) {
            return Err(Error::SolverFailure(format!(
                "variable {v} needs a finite lower bound"
            )));
        }
        // shifted rows: a·x' (cmp) b - a·l
        let mut rows: Vec<Row> = Vec::with_capacity(self.rows.len() + n);
        for r in &self.rows {
            let shift: f64 = r.coeffs.iter().zip(&self.lower).map(|(a, l)| a * l).sum();
            rows.push(Row {
                coeffs: r.coeffs.clone(),
                cmp: r.cmp,
                rhs: r.rhs - shift,
            });
        }
        for v in 0..n {
            if self.upper[v].is_finite() {
                if self.upper[v] < self.lower[v] {
                    return Err(Error::Infeasible);
                }
                let mut coeffs = vec![0.0; n];
                coeffs[v] = 1.0;
                rows.push(Row {
                    coeffs,
                    cmp: Cmp::Le,
                    rhs: self.upper[v] - self.lower[v],
                });
            }
        }
        for r in rows.iter_mut() {
            if r.rhs < 0.0 {
                r.rhs = -r.rhs;
                r.coeffs.iter_mut().for_each(|c| *c = -*c);
                r.cmp = match r.cmp {
                    Cmp::Le => Cmp::Ge,
                    Cmp::Ge => Cmp::Le,
                    Cmp::Eq => Cmp::Eq,
                };
            }
        }

        let mut tab = Tableau::build(n, &rows);
        if tab.n_art > 0 {
            tab.set_phase_one_objective();
            tab.run()?;
            if tab.objective_value() > 1e-9 * (1.0 + rows.len() as f64) {
                return Err(Error::Infeasible);
            }
            tab.drive_out_artificials();
        }
        tab.set_objective(&self.objective);
        tab.run()?;

        let xs = tab.primal(n);
        let x: Vec<f64> = xs.iter().zip(&self.lower).map(|(v, l)| v + l).collect();
        let objective = x.iter().zip(&self.objective).map(|(a, b)| a * b).sum();
        Ok(LpSolution {
            x,
            objective,
            pivots: tab.pivots,
        })
    }
}

/// Columns: structural `0..n`, then slack/surplus, then artificials, then rhs.
struct Tableau {
    m: usize,
    cols: usize,
    n_struct: usize,
    art_start: usize,
    n_art: usize,
    /// `(m + 1) × (cols + 1)`; the last row is the reduced-cost row.
    t: Vec<f64>,
    basis: Vec<usize>,
    /// Columns barred from entering (artificials in phase two).
    barred: Vec<bool>,
    pivots: usize,
}

impl Tableau {
    fn build(n: usize, rows: &[Row]) -> Tableau {
        let m = rows.len();
        let n_slack = rows.iter().filter(|r| r.cmp != Cmp::Eq).count();
        let n_art = rows.iter().filter(|r| r.cmp != Cmp::Le).count();
        let art_start = n + n_slack;
        let cols = art_start + n_art;
        let w = cols + 1;
        let mut t = vec![0.0; (m + 1) * w];
        let mut basis = vec![0; m];
        let (mut s, mut a) = (n, art_start);
        for (i, r) in rows.iter().enumerate() {
            t[i * w..i * w + n].copy_from_slice(&r.coeffs);
            t[i * w + cols] = r.rhs;
            match r.cmp {
                Cmp::Le => {
                    t[i * w + s] = 1.0;
                    basis[i] = s;
                    s += 1;
                }
                Cmp::Ge => {
                    t[i * w + s] = -1.0;
                    s += 1;
                    t[i * w + a] = 1.0;
                    basis[i] = a;
                    a += 1;
                }
                Cmp::Eq => {
                    t[i * w + a] = 1.0;
                    basis[i] = a;
                    a += 1;
                }
            }
        }
        Tableau {
            m,
            cols,
            n_struct: n,
            art_start,
            n_art,
            t,
            basis,
            barred: vec![false; cols],
            pivots: 0,
        }
    }

    #[inline]
    fn w(&self) -> usize {
        self.cols + 1
    }

    fn at(&self, i: usize, j: usize) -> f64 {
        self.t[i * self.w() + j]
    }

    /// Writes costs and prices out the basic columns.
    fn load_costs(&mut self, cost: &[f64]) {
        let w = self.w();
        let obj = self.m * w;
        for (j, t) in self.t[obj..obj + w].iter_mut().enumerate() {
            *t = if j < self.cols { cost[j] } else { 0.0 };
        }
        for i in 0..self.m {
            let cb = cost[self.basis[i]];
            if cb != 0.0 {
                for j in 0..w {
                    self.t[obj + j] -= cb * self.t[i * w + j];
                }
            }
        }
    }

    fn set_phase_one_objective(&mut self) {
        let mut cost = vec![0.0; self.cols];
        for c in cost.iter_mut().skip(self.art_start) {
            *c = 1.0;
        }
        self.load_costs(&cost);
    }

    fn set_objective(&mut self, objective: &[f64]) {
        let mut cost = vec![0.0; self.cols];
        cost[..self.n_struct].copy_from_slice(objective);
        for b in self.barred.iter_mut().skip(self.art_start) {
            *b = true;
        }
        self.load_costs(&cost);
    }

    fn objective_value(&self) -> f64 {
        -self.at(self.m, self.cols)
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let w = self.w();
        let p = self.t[row * w + col];
        for j in 0..w {
            self.t[row * w + j] /= p;
        }
        let (before, rest) = self.t.split_at_mut(row * w);
        let (prow, after) = rest.split_at_mut(w);
        for chunk in before.chunks_exact_mut(w).chain(after.chunks_exact_mut(w)) {
            let f = chunk[col];
            if f != 0.0 {
                for (x, &y) in chunk.iter_mut().zip(prow.iter()) {
                    *x -= f * y;
                }
                chunk[col] = 0.0;
            }
        }
        self.basis[row] = col;
        self.pivots += 1;
    }

    fn run(&mut self) -> Result<()> {
        let max_pivots = 50 * (self.m + self.cols) + 1000;
        let mut degenerate = 0usize;
        loop {
            if self.pivots > max_pivots {
                return Err(Error::SolverFailure(format!(
                    "pivot limit reached ({} rows, {} columns)",
                    self.m, self.cols
                )));
            }
            let bland = degenerate > BLAND_AFTER;
            let obj = self.m;
            let mut enter = None;
            let mut best = -TOL;
            for j in 0..self.cols {
                if self.barred[j] {
                    continue;
                }
                let d = self.at(obj, j);
                if d < best {
                    enter = Some(j);
                    if bland {
                        break;
                    }
                    best = d;
                }
            }
            let Some(col) = enter else {
                return Ok(());
            };
            let mut leave = None;
            let mut ratio = f64::INFINITY;
            for i in 0..self.m {
                let a = self.at(i, col);
                if a > TOL {
                    let r = self.at(i, self.cols) / a;
                    let better = match leave {
                        None => true,
                        Some(l) => {
                            r < ratio - TOL || (r <= ratio + TOL && self.basis[i] < self.basis[l])
                        }
                    };
                    if better {
                        ratio = r;
                        leave = Some(i);
                    }
                }
            }
            let Some(row) = leave else {
                return Err(Error::SolverFailure("objective is unbounded".into()));
            };
            if ratio <= TOL {
                degenerate += 1;
            } else {
                degenerate = 0;
            }
            self.pivot(row, col);
        }
    }

    /// Pivots zero-valued artificials out of the basis where possible.
    fn drive_out_artificials(&mut self) {
        for i in 0..self.m {
            if self.basis[i] >= self.art_start {
                if let Some(j) = (0..self.art_start).find(|&j| self.at(i, j).abs() > 1e-9) {
                    self.pivot(i, j);
                }
            }
        }
    }

    fn primal(&self, n: usize) -> Vec<f64> {
        let mut x = vec![0.0; n];
        for (i, &b) in self.basis.iter().enumerate() {
            if b < n {
                x[b] = self.at(i, self.cols).max(0.0);
            }
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn textbook_max() {
        // max 3x + 5y, x ≤ 4, 2y ≤ 12, 3x + 2y ≤ 18 → (2, 6), 36
        let mut lp = LinearProgram::new(2);
        lp.set_objective(0, -3.0);
        lp.set_objective(1, -5.0);
        lp.add_row(&[(0, 1.0)], Cmp::Le, 4.0);
        lp.add_row(&[(1, 2.0)], Cmp::Le, 12.0);
        lp.add_row(&[(0, 3.0), (1, 2.0)], Cmp::Le, 18.0);
        let s = lp.solve().unwrap();
        assert!((s.x[0] - 2.0).abs() < 1e-9 && (s.x[1] - 6.0).abs() < 1e-9);
        assert!((s.objective + 36.0).abs() < 1e-9);
    }

    #[test]
    fn needs_phase_one() {
        // min x + y, x + y ≥ 2, x - y = 0.5, bounds x ∈ [-1, 5]
        let mut lp = LinearProgram::new(2);
        lp.set_objective(0, 1.0);
        lp.set_objective(1, 1.0);
        lp.set_bounds(0, -1.0, 5.0);
        lp.add_row(&[(0, 1.0), (1, 1.0)], Cmp::Ge, 2.0);
        lp.add_row(&[(0, 1.0), (1, -1.0)], Cmp::Eq, 0.5);
        let s = lp.solve().unwrap();
        assert!((s.x[0] - 1.25).abs() < 1e-9 && (s.x[1] - 0.75).abs() < 1e-9);
    }

    #[test]
    fn detects_infeasible_and_unbounded() {
        let mut lp = LinearProgram::new(1);
        lp.add_row(&[(0, 1.0)], Cmp::Ge, 2.0);
        lp.add_row(&[(0, 1.0)], Cmp::Le, 1.0);
        assert_eq!(lp.solve().unwrap_err(), Error::Infeasible);

        let mut lp = LinearProgram::new(1);
        lp.set_objective(0, -1.0);
        assert!(matches!(lp.solve(), Err(Error::SolverFailure(_))));
    }

    #[test]
    fn scalar_minimax() {
        // min f s.t. 1 - y ≤ f, y ≤ f, y ∈ [0,1] → y = f = 1/2
        let mut lp = LinearProgram::new(2);
        lp.set_objective(1, 1.0);
        lp.set_bounds(0, 0.0, 1.0);
        lp.add_row(&[(0, -1.0), (1, -1.0)], Cmp::Le, -1.0);
        lp.add_row(&[(0, 1.0), (1, -1.0)], Cmp::Le, 0.0);
        let s = lp.solve().unwrap();
        assert!((s.x[0] - 0.5).abs() < 1e-12 && (s.objective - 0.5).abs() < 1e-12);
    }
}
