//! Dense bounded-variable revised simplex.
//!
//! Solves `max cᵀx` subject to `Ax = b`, `0 ≤ x ≤ u` (entries of `u` may be infinite).
use alloc::vec::Vec;


use crate::error::{invalid, Error, Result};

/// An LP in equality form with box constraints `0 ≤ x ≤ upper`.
#[derive(Debug, Clone, PartialEq)]
pub struct LpProblem {
    rows: usize,
    cols: usize,
    /// Column-major `rows × cols`.
    a: Vec<f64>,
    b: Vec<f64>,
    c: Vec<f64>,
    upper: Vec<f64>,
}

impl LpProblem {
    pub fn new(rows: usize, cols: usize) -> Self {
        LpProblem {
            rows,
            cols,
            a: alloc::vec![0.0; rows * cols],
            b: alloc::vec![0.0; rows],
            c: alloc::vec![0.0; cols],
            upper: alloc::vec![f64::INFINITY; cols],
        }
    }

    pub fn set(&mut self, row: usize, col: usize, v: f64) {
        self.a[col * self.rows + row] = v;
    }

    pub fn column_mut(&mut self, col: usize) -> &mut [f64] {
        &mut self.a[col * self.rows..(col + 1) * self.rows]
    }

    pub fn set_rhs(&mut self, row: usize, v: f64) {
        self.b[row] = v;
    }

    pub fn set_cost(&mut self, col: usize, v: f64) {
        self.c[col] = v;
    }

    pub fn set_upper(&mut self, col: usize, v: f64) {
        self.upper[col] = v;
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LpOptions {
    /// Optimality tolerance on reduced costs.
    pub dual_tol: f64,
    /// Smallest admissible pivot magnitude.
    pub pivot_tol: f64,
    /// Feasibility tolerance for phase one.
    pub primal_tol: f64,
    pub max_iterations: usize,
    /// Pivots between refactorisations of the basis inverse.
    pub refactor_every: usize,
}

impl Default for LpOptions {
    fn default() -> Self {
        LpOptions { dual_tol: 1e-10, pivot_tol: 1e-9, primal_tol: 1e-9, max_iterations: 200_000, refactor_every: 64 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub x: Vec<f64>,
    /// Simplex multipliers of the equality rows.
    pub duals: Vec<f64>,
    pub objective: f64,
    pub iterations: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Status {
    Basic,
    Lower,
    Upper,
}

struct Simplex<'a> {
    p: &'a LpProblem,
    m: usize,
    /// Row signs applied so that `b ≥ 0`.
    sign: Vec<f64>,
    b: Vec<f64>,
    upper: Vec<f64>,
    cost: Vec<f64>,
    x: Vec<f64>,
    status: Vec<Status>,
    basis: Vec<usize>,
    /// Row-major `m × m`.
    binv: Vec<f64>,
    iterations: usize,
    opts: LpOptions,
}

impl<'a> Simplex<'a> {
    fn new(p: &'a LpProblem, opts: LpOptions) -> Self {
        let m = p.rows;
        let sign: Vec<f64> = p.b.iter().map(|v| if *v < 0.0 { -1.0 } else { 1.0 }).collect();
        let b: Vec<f64> = p.b.iter().zip(&sign).map(|(v, s)| v * s).collect();
        let total = p.cols + m;
        let mut upper = p.upper.clone();
        upper.extend(core::iter::repeat_n(f64::INFINITY, m));
        let mut x = alloc::vec![0.0; total];
        let mut status = alloc::vec![Status::Lower; total];
        let mut basis = Vec::with_capacity(m);
        for i in 0..m {
            x[p.cols + i] = b[i];
            status[p.cols + i] = Status::Basic;
            basis.push(p.cols + i);
        }
        let mut binv = alloc::vec![0.0; m * m];
        for i in 0..m {
            binv[i * m + i] = 1.0;
        }
        Simplex {
            p,
            m,
            sign,
            b,
            upper,
            cost: alloc::vec![0.0; total],
            x,
            status,
            basis,
            binv,
            iterations: 0,
            opts,
        }
    }

    /// Column `j` of the sign-adjusted constraint matrix, artificials included.
    fn col_dot(&self, j: usize, v: &[f64]) -> f64 {
        if j >= self.p.cols {
            v[j - self.p.cols]
        } else {
            let col = &self.p.a[j * self.m..(j + 1) * self.m];
            let mut s = 0.0;
            for i in 0..self.m {
                s += col[i] * self.sign[i] * v[i];
            }
            s
        }
    }

    fn column(&self, j: usize, out: &mut [f64]) {
        if j >= self.p.cols {
            out.fill(0.0);
            out[j - self.p.cols] = 1.0;
        } else {
            let col = &self.p.a[j * self.m..(j + 1) * self.m];
            for i in 0..self.m {
                out[i] = col[i] * self.sign[i];
            }
        }
    }

    fn duals(&self) -> Vec<f64> {
        let m = self.m;
        let mut pi = alloc::vec![0.0; m];
        for (r, &j) in self.basis.iter().enumerate() {
            let c = self.cost[j];
            if c != 0.0 {
                for i in 0..m {
                    pi[i] += c * self.binv[r * m + i];
                }
            }
        }
        pi
    }

    fn refactor(&mut self) -> Result<()> {
        let m = self.m;
        let mut bm = alloc::vec![0.0; m * m];
        let mut col = alloc::vec![0.0; m];
        for (r, &j) in self.basis.iter().enumerate() {
            self.column(j, &mut col);
            for i in 0..m {
                bm[i * m + r] = col[i];
            }
        }
        let mut inv = alloc::vec![0.0; m * m];
        for i in 0..m {
            inv[i * m + i] = 1.0;
        }
        for c in 0..m {
            let (piv, best) =
                (c..m).map(|r| (r, bm[r * m + c].abs())).fold((c, -1.0), |a, b| if b.1 > a.1 { b } else { a });
            if best < 1e-14 {
                return Err(invalid("singular basis during refactorisation"));
            }
            if piv != c {
                for k in 0..m {
                    bm.swap(piv * m + k, c * m + k);
                    inv.swap(piv * m + k, c * m + k);
                }
            }
            let d = bm[c * m + c];
            for k in 0..m {
                bm[c * m + k] /= d;
                inv[c * m + k] /= d;
            }
            for r in 0..m {
                if r != c {
                    let f = bm[r * m + c];
                    if f != 0.0 {
                        for k in 0..m {
                            bm[r * m + k] -= f * bm[c * m + k];
                            inv[r * m + k] -= f * inv[c * m + k];
                        }
                    }
                }
            }
        }
        self.binv = inv;
        // x_B = B^{-1}(b − N x_N)
        let mut rhs = self.b.clone();
        for j in 0..self.x.len() {
            if self.status[j] != Status::Basic && self.x[j] != 0.0 {
                self.column(j, &mut col);
                for i in 0..m {
                    rhs[i] -= col[i] * self.x[j];
                }
            }
        }
        for (r, &j) in self.basis.iter().enumerate() {
            let mut s = 0.0;
            for i in 0..m {
                s += self.binv[r * m + i] * rhs[i];
            }
            self.x[j] = s;
        }
        Ok(())
    }

    fn pivot(&mut self, r: usize, alpha: &[f64]) {
        let m = self.m;
        let d = alpha[r];
        for k in 0..m {
            self.binv[r * m + k] /= d;
        }
        for i in 0..m {
            if i != r && alpha[i] != 0.0 {
                let f = alpha[i];
                for k in 0..m {
                    self.binv[i * m + k] -= f * self.binv[r * m + k];
                }
            }
        }
    }

    /// Runs the simplex loop on the current cost vector. `allowed(j)` filters entering columns.
    fn optimise(&mut self, allowed: &dyn Fn(usize) -> bool) -> Result<()> {
        let m = self.m;
        let total = self.x.len();
        let mut alpha = alloc::vec![0.0; m];
        let mut col = alloc::vec![0.0; m];
        let mut since_refactor = 0usize;
        let mut degenerate_run = 0usize;
        loop {
            if self.iterations >= self.opts.max_iterations {
                return Err(Error::SolverStall { iterations: self.iterations });
            }
            let pi = self.duals();
            let bland = degenerate_run > 50;
            let mut enter: Option<(usize, f64, f64)> = None;
            for j in 0..total {
                if self.status[j] == Status::Basic || !allowed(j) || self.upper[j] == 0.0 {
                    continue;
                }
                let d = self.cost[j] - self.col_dot(j, &pi);
                let dir = match self.status[j] {
                    Status::Lower if d > self.opts.dual_tol => 1.0,
                    Status::Upper if d < -self.opts.dual_tol => -1.0,
                    _ => continue,
                };
                if bland {
                    enter = Some((j, d, dir));
                    break;
                }
                if enter.is_none_or(|(_, best, _)| d.abs() > best.abs()) {
                    enter = Some((j, d, dir));
                }
            }
            let Some((j, _, dir)) = enter else {
                return Ok(());
            };
            self.column(j, &mut col);
            for r in 0..m {
                let mut s = 0.0;
                for i in 0..m {
                    s += self.binv[r * m + i] * col[i];
                }
                alpha[r] = s;
            }
            let mut theta = self.upper[j];
            let mut leave: Option<(usize, f64)> = None;
            for r in 0..m {
                let delta = dir * alpha[r];
                let bj = self.basis[r];
                let t = if delta > self.opts.pivot_tol {
                    self.x[bj].max(0.0) / delta
                } else if delta < -self.opts.pivot_tol && self.upper[bj].is_finite() {
                    (self.upper[bj] - self.x[bj]).max(0.0) / -delta
                } else {
                    continue;
                };
                let better = match leave {
                    None => t < theta,
                    Some((lr, _)) => {
                        let tie = (t - theta).abs() <= 1e-12 * (1.0 + theta.abs());
                        if tie {
                            if bland {
                                bj < self.basis[lr]
                            } else {
                                delta.abs() > alpha[lr].abs()
                            }
                        } else {
                            t < theta
                        }
                    }
                };
                if better {
                    theta = t;
                    leave = Some((r, delta));
                }
            }
            if !theta.is_finite() {
                return Err(invalid("LP is unbounded"));
            }
            self.iterations += 1;
            degenerate_run = if theta <= 1e-14 { degenerate_run + 1 } else { 0 };
            self.x[j] += dir * theta;
            for r in 0..m {
                let bj = self.basis[r];
                self.x[bj] -= theta * dir * alpha[r];
            }
            match leave {
                None => {
                    self.status[j] = if dir > 0.0 { Status::Upper } else { Status::Lower };
                    self.x[j] = if dir > 0.0 { self.upper[j] } else { 0.0 };
                }
                Some((r, delta)) => {
                    let out = self.basis[r];
                    if delta > 0.0 {
                        self.status[out] = Status::Lower;
                        self.x[out] = 0.0;
                    } else {
                        self.status[out] = Status::Upper;
                        self.x[out] = self.upper[out];
                    }
                    self.basis[r] = j;
                    self.status[j] = Status::Basic;
                    self.pivot(r, &alpha);
                    since_refactor += 1;
                    if since_refactor >= self.opts.refactor_every {
                        self.refactor()?;
                        since_refactor = 0;
                    }
                }
            }
        }
    }

    /// Pivots zero-level artificials out of the basis where possible.
    fn expel_artificials(&mut self) -> Result<()> {
        let m = self.m;
        let n = self.p.cols;
        let mut col = alloc::vec![0.0; m];
        let mut alpha = alloc::vec![0.0; m];
        for r in 0..m {
            if self.basis[r] < n {
                continue;
            }
            let row: Vec<f64> = (0..m).map(|i| self.binv[r * m + i]).collect();
            let mut best: Option<(usize, f64)> = None;
            for j in 0..n {
                if self.status[j] == Status::Basic || self.upper[j] == 0.0 {
                    continue;
                }
                let v = self.col_dot(j, &row).abs();
                if v > 1e-9 && best.is_none_or(|(_, b)| v > b) {
                    best = Some((j, v));
                }
            }
            if let Some((j, _)) = best {
                self.column(j, &mut col);
                for rr in 0..m {
                    let mut s = 0.0;
                    for i in 0..m {
                        s += self.binv[rr * m + i] * col[i];
                    }
                    alpha[rr] = s;
                }
                let out = self.basis[r];
                self.status[out] = Status::Lower;
                self.x[out] = 0.0;
                self.basis[r] = j;
                self.status[j] = Status::Basic;
                self.pivot(r, &alpha);
            }
        }
        self.refactor()
    }
}

/// Solves the problem with a two-phase method, Dantzig pricing and a Bland fallback on stalls.
pub fn solve(p: &LpProblem, opts: &LpOptions) -> Result<LpSolution> {
    let mut s = Simplex::new(p, *opts);
    let n = p.cols;
    let total = n + p.rows;
    for j in n..total {
        s.cost[j] = -1.0;
    }
    s.optimise(&|_| true)?;
    let infeas: f64 = (n..total).map(|j| s.x[j]).sum();
    let scale = 1.0 + s.b.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    if infeas > opts.primal_tol * scale {
        return Err(invalid("LP is infeasible"));
    }
    for j in n..total {
        s.upper[j] = 0.0;
        s.cost[j] = 0.0;
    }
    s.expel_artificials()?;
    s.cost[..n].copy_from_slice(&p.c);
    s.optimise(&|j| j < n)?;
    s.refactor()?;
    let pi = s.duals();
    let duals = pi.iter().zip(&s.sign).map(|(v, sg)| v * sg).collect();
    let x: Vec<f64> = s.x[..n].iter().zip(&p.upper).map(|(v, u)| v.clamp(0.0, *u)).collect();
    let objective = x.iter().zip(&p.c).map(|(a, b)| a * b).sum();
    Ok(LpSolution { x, duals, objective, iterations: s.iterations })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_boxed_lp() {
        // max x + 2y, x + y + s = 4, x <= 3, y <= 2
        let mut p = LpProblem::new(1, 3);
        p.set(0, 0, 1.0);
        p.set(0, 1, 1.0);
        p.set(0, 2, 1.0);
        p.set_rhs(0, 4.0);
        p.set_cost(0, 1.0);
        p.set_cost(1, 2.0);
        p.set_upper(0, 3.0);
        p.set_upper(1, 2.0);
        let s = solve(&p, &LpOptions::default()).unwrap();
        assert!((s.objective - 6.0).abs() < 1e-12);
        assert!((s.x[0] - 2.0).abs() < 1e-12 && (s.x[1] - 2.0).abs() < 1e-12);
        assert!((s.duals[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn negative_rhs_and_equalities() {
        // max -x1 - x2, x1 - x2 = -1, x1 + x2 = 3
        let mut p = LpProblem::new(2, 2);
        p.set(0, 0, 1.0);
        p.set(0, 1, -1.0);
        p.set(1, 0, 1.0);
        p.set(1, 1, 1.0);
        p.set_rhs(0, -1.0);
        p.set_rhs(1, 3.0);
        p.set_cost(0, -1.0);
        p.set_cost(1, -1.0);
        let s = solve(&p, &LpOptions::default()).unwrap();
        assert!((s.x[0] - 1.0).abs() < 1e-12 && (s.x[1] - 2.0).abs() < 1e-12);
        assert!((s.objective + 3.0).abs() < 1e-12);
    }

    #[test]
    fn infeasible_is_reported() {
        let mut p = LpProblem::new(1, 1);
        p.set(0, 0, 1.0);
        p.set_rhs(0, 2.0);
        p.set_upper(0, 1.0);
        assert!(solve(&p, &LpOptions::default()).is_err());
    }
}
