//! Lagrange trigonometric interpolation on `2n − 1` equidistant nodes.
use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{invalid, Result};
use crate::summation::Neumaier;
use crate::trig::{dirichlet, PeriodicFn, TrigPoly};

/// The nodes `x_k = 2kπ/(2n−1)`, `k = 0..2n−2`.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeSet {
    n: usize,
    nodes: Vec<f64>,
}

impl NodeSet {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(invalid("interpolation needs n >= 1"));
        }
        let m = 2 * n - 1;
        let nodes = (0..m).map(|k| 2.0 * PI * k as f64 / m as f64).collect();
        Ok(NodeSet { n, nodes })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn sample(&self, f: &dyn PeriodicFn) -> Vec<f64> {
        self.nodes.iter().map(|&x| f.eval(x)).collect()
    }
}

/// Position of `x` relative to the node grid: `x·N/(2π) = j + δ` with `|δ| ≤ 1/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NodePhase {
    pub j: usize,
    pub delta: f64,
    /// `x` coincides with node `j` up to rounding.
    pub on_node: bool,
}

pub fn node_phase(n: usize, x: f64) -> NodePhase {
    let m = (2 * n - 1) as f64;
    let mut u = (x * m / (2.0 * PI)) % m;
    if u < 0.0 {
        u += m;
    }
    let r = u.round();
    let delta = u - r;
    let j = (r as usize) % (2 * n - 1);
    NodePhase { j, delta, on_node: delta.abs() <= 1e-12 * u.max(1.0) }
}

/// `|sin((2n−1)x/2)|`, exactly zero at the nodes.
pub fn sine_factor(n: usize, x: f64) -> f64 {
    let p = node_phase(n, x);
    if p.on_node {
        0.0
    } else {
        (PI * p.delta).sin().abs()
    }
}

/// `D_{n−1}(x − x_k)` for every node, evaluated from the phase to avoid cancellation.
fn dirichlet_row(n: usize, p: NodePhase, mut visit: impl FnMut(usize, f64)) {
    let m = 2 * n - 1;
    let mf = m as f64;
    let s = (PI * p.delta).sin();
    for k in 0..m {
        let v = p.j as f64 - k as f64 + p.delta;
        let den = (PI * v / mf).sin();
        let d = if den.abs() < 1e-8 {
            dirichlet(n, 2.0 * PI * v / mf)
        } else {
            let sign = if (p.j + 2 * m - k).is_multiple_of(2) { 1.0 } else { -1.0 };
            sign * s / (2.0 * den)
        };
        visit(k, d);
    }
}

fn check_samples(samples: &[f64], n: usize) -> Result<()> {
    if n == 0 || samples.len() != 2 * n - 1 {
        return Err(invalid("interpolation needs exactly 2n - 1 samples"));
    }
    Ok(())
}

/// Coefficients of the interpolant of order `n − 1` by discrete Fourier sums.
pub fn interpolate(samples: &[f64], n: usize) -> Result<TrigPoly> {
    check_samples(samples, n)?;
    let m = 2 * n - 1;
    let scale = 2.0 / m as f64;
    let table: Vec<(f64, f64)> = (0..m).map(|i| (2.0 * PI * i as f64 / m as f64).sin_cos()).collect();
    let a0 = scale * crate::summation::neumaier_sum(samples.iter().copied());
    let mut cos = Vec::with_capacity(n - 1);
    let mut sin = Vec::with_capacity(n - 1);
    for j in 1..n {
        let (mut a, mut b) = (Neumaier::new(), Neumaier::new());
        for (k, f) in samples.iter().enumerate() {
            let (s, c) = table[(j * k) % m];
            a.add(f * c);
            b.add(f * s);
        }
        cos.push(scale * a.value());
        sin.push(scale * b.value());
    }
    Ok(TrigPoly::new(a0, cos, sin))
}

/// `S̃_{n−1}(x)` from the Dirichlet form.
pub fn interpolant_at(samples: &[f64], n: usize, x: f64) -> Result<f64> {
    check_samples(samples, n)?;
    let p = node_phase(n, x);
    if p.on_node {
        return Ok(samples[p.j]);
    }
    let mut acc = Neumaier::new();
    dirichlet_row(n, p, |k, d| acc.add(samples[k] * d));
    Ok(2.0 / (2 * n - 1) as f64 * acc.value())
}

/// `ρ̃_n(f; x) = f(x) − S̃_{n−1}(f; x)`.
pub fn deviation(f: &dyn PeriodicFn, n: usize, x: f64) -> Result<f64> {
    let nodes = NodeSet::new(n)?;
    let samples = nodes.sample(f);
    Ok(f.eval(x) - interpolant_at(&samples, n, x)?)
}

/// Interpolant kept in coefficient form for repeated evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct Interpolant {
    pub n: usize,
    pub samples: Vec<f64>,
    pub poly: TrigPoly,
}

impl Interpolant {
    pub fn new(f: &dyn PeriodicFn, n: usize) -> Result<Self> {
        let samples = NodeSet::new(n)?.sample(f);
        let poly = interpolate(&samples, n)?;
        Ok(Interpolant { n, samples, poly })
    }

    pub fn eval(&self, x: f64) -> f64 {
        let p = node_phase(self.n, x);
        if p.on_node {
            self.samples[p.j]
        } else {
            self.poly.eval(x)
        }
    }

    pub fn deviation(&self, f: &dyn PeriodicFn, x: f64) -> f64 {
        f.eval(x) - self.eval(x)
    }
}

/// `L̄_n(x) = (2/(2n−1)) Σ_k |D_{n−1}(x − x_k)|`.
pub fn lebesgue_fn(n: usize, x: f64) -> f64 {
    assert!(n >= 1, "lebesgue_fn needs n >= 1");
    let p = node_phase(n, x);
    if p.on_node {
        return 1.0;
    }
    let mut acc = Neumaier::new();
    dirichlet_row(n, p, |_, d| acc.add(d.abs()));
    2.0 / (2 * n - 1) as f64 * acc.value()
}

/// `L̄_n(x) − (2/π)|sin((2n−1)x/2)| ln n`.
pub fn lebesgue_residual(n: usize, x: f64) -> f64 {
    lebesgue_fn(n, x) - 2.0 / PI * sine_factor(n, x) * (n as f64).ln()
}
