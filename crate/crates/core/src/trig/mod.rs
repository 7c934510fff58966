//! Trigonometric polynomials and the Dirichlet kernel.
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;
use serde::{Deserialize, Serialize};

pub mod kernel;

pub use kernel::{convolve_quadrature, kernel_eval, psi_derivative, psi_integral, KernelSpec, KernelTruncation};

/// `a0/2 + Σ_{k=1}^{m} (a_k cos kx + b_k sin kx)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(from = "RawTrigPoly")]
pub struct TrigPoly {
    pub a0: f64,
    pub cos: Vec<f64>,
    pub sin: Vec<f64>,
}

#[derive(Deserialize)]
struct RawTrigPoly {
    #[serde(default)]
    a0: f64,
    #[serde(default)]
    cos: Vec<f64>,
    #[serde(default)]
    sin: Vec<f64>,
}

impl From<RawTrigPoly> for TrigPoly {
    fn from(r: RawTrigPoly) -> Self {
        TrigPoly::new(r.a0, r.cos, r.sin)
    }
}

impl TrigPoly {
    /// Pads the shorter coefficient list with zeros.
    pub fn new(a0: f64, mut cos: Vec<f64>, mut sin: Vec<f64>) -> Self {
        let m = cos.len().max(sin.len());
        cos.resize(m, 0.0);
        sin.resize(m, 0.0);
        TrigPoly { a0, cos, sin }
    }

    pub fn zero(order: usize) -> Self {
        TrigPoly { a0: 0.0, cos: alloc::vec![0.0; order], sin: alloc::vec![0.0; order] }
    }

    /// `amp · cos(kx)`.
    pub fn cosine(k: usize, amp: f64) -> Self {
        let mut p = Self::zero(k);
        if k == 0 {
            p.a0 = 2.0 * amp;
        } else {
            p.cos[k - 1] = amp;
        }
        p
    }

    /// `amp · sin(kx)`.
    pub fn sine(k: usize, amp: f64) -> Self {
        let mut p = Self::zero(k.max(1));
        if k > 0 {
            p.sin[k - 1] = amp;
        }
        p
    }

    pub fn order(&self) -> usize {
        self.cos.len()
    }

    /// `(a_k, b_k)` for `k ≥ 1`, zero beyond the order.
    pub fn coeff(&self, k: usize) -> (f64, f64) {
        if k == 0 || k > self.order() {
            (0.0, 0.0)
        } else {
            (self.cos[k - 1], self.sin[k - 1])
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        let mut acc = 0.5 * self.a0;
        for (i, (a, b)) in self.cos.iter().zip(&self.sin).enumerate() {
            let (s, c) = ((i + 1) as f64 * x).sin_cos();
            acc += a * c + b * s;
        }
        acc
    }

    pub fn resized(&self, order: usize) -> Self {
        let mut p = self.clone();
        p.cos.resize(order, 0.0);
        p.sin.resize(order, 0.0);
        p
    }

    /// Drops trailing zero harmonics.
    pub fn trimmed(&self) -> Self {
        let mut m = self.order();
        while m > 0 && self.cos[m - 1] == 0.0 && self.sin[m - 1] == 0.0 {
            m -= 1;
        }
        self.resized(m)
    }

    pub fn scale(&self, c: f64) -> Self {
        TrigPoly {
            a0: self.a0 * c,
            cos: self.cos.iter().map(|v| v * c).collect(),
            sin: self.sin.iter().map(|v| v * c).collect(),
        }
    }

    /// `a·self + b·other`.
    pub fn combine(&self, a: f64, other: &TrigPoly, b: f64) -> Self {
        let m = self.order().max(other.order());
        let (p, q) = (self.resized(m), other.resized(m));
        TrigPoly {
            a0: a * p.a0 + b * q.a0,
            cos: p.cos.iter().zip(&q.cos).map(|(x, y)| a * x + b * y).collect(),
            sin: p.sin.iter().zip(&q.sin).map(|(x, y)| a * x + b * y).collect(),
        }
    }

    pub fn add(&self, other: &TrigPoly) -> Self {
        self.combine(1.0, other, 1.0)
    }

    pub fn sub(&self, other: &TrigPoly) -> Self {
        self.combine(1.0, other, -1.0)
    }

    /// `√(a0²/2 + Σ a_k² + b_k²)`, the `L2`-norm divided by `√π`.
    pub fn coeff_norm(&self) -> f64 {
        let s: f64 = self.cos.iter().chain(&self.sin).map(|v| v * v).sum();
        (0.5 * self.a0 * self.a0 + s).sqrt()
    }

    /// Largest absolute coefficient difference.
    pub fn max_coeff_diff(&self, other: &TrigPoly) -> f64 {
        let d = self.sub(other);
        d.cos.iter().chain(&d.sin).fold((0.5 * d.a0).abs(), |m, v| m.max(v.abs()))
    }
}

/// A 2π-periodic function of one real variable.
pub trait PeriodicFn: Sync {
    fn eval(&self, x: f64) -> f64;
    /// Exact Fourier representation, when known.
    fn fourier(&self) -> Option<&TrigPoly> {
        None
    }
}

impl PeriodicFn for TrigPoly {
    fn eval(&self, x: f64) -> f64 {
        TrigPoly::eval(self, x)
    }
    fn fourier(&self) -> Option<&TrigPoly> {
        Some(self)
    }
}

/// Adapter turning a closure into a [`PeriodicFn`].
pub struct FnPeriodic<F>(pub F);

impl<F: Fn(f64) -> f64 + Sync> PeriodicFn for FnPeriodic<F> {
    fn eval(&self, x: f64) -> f64 {
        (self.0)(x)
    }
}

/// `D_{n-1}(t) = 1/2 + Σ_{k=1}^{n-1} cos kt = sin((n-1/2)t) / (2 sin(t/2))`.
pub fn dirichlet(n: usize, t: f64) -> f64 {
    let h = (0.5 * t).sin();
    if h.abs() < 1e-8 {
        let mut acc = 0.5;
        for k in 1..n {
            acc += (k as f64 * t).cos();
        }
        return acc;
    }
    ((n as f64 - 0.5) * t).sin() / (2.0 * h)
}
