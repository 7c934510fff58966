//! Discrete best approximation by trigonometric polynomials of order `n − 1`.
use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::lp::{self, LpOptions, LpProblem};
use crate::trig::{PeriodicFn, TrigPoly};

/// Grid multiplier used when callers do not choose one.
pub const DEFAULT_GRID_FACTOR: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    L1,
    Uniform,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApproxResult {
    /// Optimal value of the discretised problem (trapezoid-weighted for `L1`).
    pub value: f64,
    pub argmin: TrigPoly,
    pub grid_size: usize,
    pub metric: Metric,
    /// Dual weights per grid point, normalised to `[-1, 1]` for `L1`.
    pub dual: Vec<f64>,
    /// `‖f − argmin‖` on the continuum: adaptive quadrature for `L1`, locally maximised
    /// samples for the uniform metric. An upper estimate of the true best-approximation error.
    pub norm_estimate: f64,
    pub iterations: usize,
}

impl ApproxResult {
    /// Largest violation of complementary slackness over grid points whose residual
    /// exceeds `threshold`: the dual weight must equal the residual's sign there.
    pub fn slackness_gap(&self, f: &dyn PeriodicFn, threshold: f64) -> f64 {
        let m = self.grid_size;
        let mut worst = 0.0f64;
        for i in 0..m {
            let t = grid_point(i, m);
            let r = f.eval(t) - self.argmin.eval(t);
            if r.abs() > threshold {
                worst = worst.max((self.dual[i] - r.signum()).abs());
            }
        }
        worst
    }
}

fn grid_point(i: usize, m: usize) -> f64 {
    2.0 * PI * i as f64 / m as f64
}

/// Basis row `r` of `1, cos t, sin t, …, cos (n−1)t, sin (n−1)t` at `t`.
fn basis_at(n: usize, t: f64, out: &mut [f64]) {
    out[0] = 1.0;
    for j in 1..n {
        let (s, c) = (j as f64 * t).sin_cos();
        out[2 * j - 1] = c;
        out[2 * j] = s;
    }
}

fn poly_from(n: usize, c: &[f64]) -> TrigPoly {
    let cos = (1..n).map(|j| c[2 * j - 1]).collect();
    let sin = (1..n).map(|j| c[2 * j]).collect();
    TrigPoly::new(2.0 * c[0], cos, sin)
}

fn check(n: usize, m: usize) -> Result<()> {
    if n == 0 {
        return Err(invalid("approximation order needs n >= 1"));
    }
    if m < 8 * n {
        return Err(invalid("grid size must be at least 8n"));
    }
    Ok(())
}

/// `min_c Σ_i (2π/M) |f(t_i) − t_c(t_i)|`, solved through its dual
/// `max Σ f_i y_i` with `Σ_i y_i φ_r(t_i) = 0` and `|y_i| ≤ 2π/M`.
pub fn best_l1(f: &dyn PeriodicFn, n: usize, m: usize) -> Result<ApproxResult> {
    check(n, m)?;
    let rows = 2 * n - 1;
    let w = 2.0 * PI / m as f64;
    let fv: Vec<f64> = (0..m).map(|i| f.eval(grid_point(i, m))).collect();
    let mut p = LpProblem::new(rows, m);
    let mut phi = alloc::vec![0.0; rows];
    let mut rhs = alloc::vec![0.0; rows];
    for i in 0..m {
        basis_at(n, grid_point(i, m), &mut phi);
        p.column_mut(i).copy_from_slice(&phi);
        for r in 0..rows {
            rhs[r] += phi[r] * w;
        }
        p.set_cost(i, fv[i]);
        p.set_upper(i, 2.0 * w);
    }
    for (r, v) in rhs.iter().enumerate() {
        p.set_rhs(r, *v);
    }
    let sol = lp::solve(&p, &LpOptions::default())?;
    let argmin = poly_from(n, &sol.duals);
    let value = (0..m).map(|i| w * (fv[i] - argmin.eval(grid_point(i, m))).abs()).sum();
    let dual = sol.x.iter().map(|z| (z - w) / w).collect();
    let norm_estimate = continuous_l1(&|t| f.eval(t) - argmin.eval(t), m);
    Ok(ApproxResult {
        value,
        argmin,
        grid_size: m,
        metric: Metric::L1,
        dual,
        norm_estimate,
        iterations: sol.iterations,
    })
}

/// `min_c max_i |f(t_i) − t_c(t_i)|`, solved through its dual.
pub fn best_uniform(f: &dyn PeriodicFn, n: usize, m: usize) -> Result<ApproxResult> {
    check(n, m)?;
    let rows = 2 * n - 1;
    let fv: Vec<f64> = (0..m).map(|i| f.eval(grid_point(i, m))).collect();
    // columns: p_i (0..m), q_i (m..2m), slack
    let mut p = LpProblem::new(rows + 1, 2 * m + 1);
    let mut phi = alloc::vec![0.0; rows + 1];
    for i in 0..m {
        basis_at(n, grid_point(i, m), &mut phi[..rows]);
        phi[rows] = 1.0;
        p.column_mut(i).copy_from_slice(&phi);
        for v in phi[..rows].iter_mut() {
            *v = -*v;
        }
        p.column_mut(m + i).copy_from_slice(&phi);
        p.set_cost(i, fv[i]);
        p.set_cost(m + i, -fv[i]);
    }
    p.set(rows, 2 * m, 1.0);
    p.set_rhs(rows, 1.0);
    let sol = lp::solve(&p, &LpOptions::default())?;
    let argmin = poly_from(n, &sol.duals[..rows]);
    let resid = |t: f64| f.eval(t) - argmin.eval(t);
    let value = (0..m).map(|i| resid(grid_point(i, m)).abs()).fold(0.0, f64::max);
    let dual = (0..m).map(|i| sol.x[i] - sol.x[m + i]).collect();
    let refined = refine_sup(&resid, m, value);
    Ok(ApproxResult {
        value,
        argmin,
        grid_size: m,
        metric: Metric::Uniform,
        dual,
        norm_estimate: refined,
        iterations: sol.iterations,
    })
}

/// `∫_0^{2π} |g|`, cell by cell on the solver grid.
fn continuous_l1(g: &dyn Fn(f64) -> f64, m: usize) -> f64 {
    let h = 2.0 * PI / m as f64;
    let mut acc = crate::summation::Neumaier::new();
    for i in 0..m {
        let a = i as f64 * h;
        acc.add(crate::quad::integrate(|t| g(t).abs(), a, a + h, 1e-15 * h, 1e-12).value);
    }
    acc.value()
}

/// Maximises `|g|` near the largest grid samples by golden-section search.
fn refine_sup(g: &dyn Fn(f64) -> f64, m: usize, grid_max: f64) -> f64 {
    let h = 2.0 * PI / m as f64;
    let mut best = grid_max;
    let vals: Vec<f64> = (0..m).map(|i| g(grid_point(i, m)).abs()).collect();
    for i in 0..m {
        let prev = vals[(i + m - 1) % m];
        let next = vals[(i + 1) % m];
        if vals[i] >= prev && vals[i] >= next && vals[i] >= 0.5 * grid_max {
            let t0 = grid_point(i, m);
            best = best.max(golden_max(&|t| g(t).abs(), t0 - h, t0 + h, 1e-13));
        }
    }
    best
}

/// Golden-section maximisation on `[a, b]`.
pub fn golden_max(g: &dyn Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut gc, mut gd) = (g(c), g(d));
    let mut best = gc.max(gd).max(g(a)).max(g(b));
    while b - a > tol {
        if gc > gd {
            b = d;
            d = c;
            gd = gc;
            c = b - r * (b - a);
            gc = g(c);
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + r * (b - a);
            gd = g(d);
        }
        best = best.max(gc).max(gd);
    }
    best
}

/// Independent check of [`best_l1`] for `n ≤ 2` by nested grid search and compass polish.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleResult {
    pub value: f64,
    pub coeffs: Vec<f64>,
}

pub fn oracle_best_l1(f: &dyn PeriodicFn, n: usize, m: usize) -> Result<OracleResult> {
    if n == 0 || n > 2 {
        return Err(invalid("oracle supports n = 1 or n = 2 only"));
    }
    check(n, m)?;
    let dim = 2 * n - 1;
    let w = 2.0 * PI / m as f64;
    let pts: Vec<(f64, Vec<f64>)> = (0..m)
        .map(|i| {
            let t = grid_point(i, m);
            let mut phi = alloc::vec![0.0; dim];
            basis_at(n, t, &mut phi);
            (f.eval(t), phi)
        })
        .collect();
    let objective = |c: &[f64]| -> f64 {
        pts.iter().map(|(fv, phi)| (fv - phi.iter().zip(c).map(|(a, b)| a * b).sum::<f64>()).abs()).sum::<f64>() * w
    };
    let norm = objective(&alloc::vec![0.0; dim]);
    // any minimiser satisfies ‖t_c‖₁ ≤ 2‖f‖₁, which bounds every coefficient by 2‖f‖₁/π
    let bound = 2.0 * norm / PI + 1e-12;
    let mut center = alloc::vec![0.0; dim];
    let mut half = bound;
    let mut best = norm;
    let per_dim = if dim == 1 { 201 } else { 21 };
    while half > 1e-10 {
        let step = 2.0 * half / (per_dim - 1) as f64;
        let mut idx = alloc::vec![0usize; dim];
        let base = center.clone();
        loop {
            let c: Vec<f64> = (0..dim).map(|d| base[d] - half + step * idx[d] as f64).collect();
            let v = objective(&c);
            if v < best {
                best = v;
                center = c;
            }
            let mut d = 0;
            while d < dim {
                idx[d] += 1;
                if idx[d] < per_dim {
                    break;
                }
                idx[d] = 0;
                d += 1;
            }
            if d == dim {
                break;
            }
        }
        half = 2.0 * step;
    }
    // compass polish over axis and diagonal directions
    let mut dirs: Vec<Vec<f64>> = Vec::new();
    for mask in 1..(3usize.pow(dim as u32)) {
        let mut v = alloc::vec![0.0; dim];
        let mut k = mask;
        for x in v.iter_mut() {
            *x = (k % 3) as f64 - 1.0;
            k /= 3;
        }
        dirs.push(v);
    }
    let mut step = 1e-3 * bound.max(1e-6);
    while step > 1e-13 {
        let mut improved = false;
        for dvec in &dirs {
            let c: Vec<f64> = center.iter().zip(dvec).map(|(a, b)| a + step * b).collect();
            let v = objective(&c);
            if v < best {
                best = v;
                center = c;
                improved = true;
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    Ok(OracleResult { value: best, coeffs: center })
}
