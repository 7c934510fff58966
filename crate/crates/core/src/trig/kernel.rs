//! The kernel `Ψ_β(t) = Σ ψ(k) cos(kt − βπ/2)` and the multiplier it induces.
use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;
use serde::{Deserialize, Serialize};

use super::{PeriodicFn, TrigPoly};
use crate::error::{Error, Result};
use crate::psi::{PsiFamily, TailNeeds, TailTable};
use crate::summation::{CertifiedSum, Neumaier, SumConfig};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelSpec {
    pub psi: PsiFamily,
    pub beta: f64,
}

impl KernelSpec {
    pub fn new(psi: PsiFamily, beta: f64) -> Self {
        KernelSpec { psi, beta }
    }

    /// `βπ/2`.
    pub fn phase(&self) -> f64 {
        0.5 * self.beta * PI
    }

    /// Smallest `K` with `Σ_{k>K} ψ(k) ≤ rel_tol · Σ_{k≥1} ψ(k)`.
    pub fn truncation(&self, rel_tol: f64) -> Result<KernelTruncation> {
        let cfg = SumConfig { rel_tol: 0.1 * rel_tol, ..SumConfig::default() };
        let mut span = 1u64;
        let table = loop {
            let table = TailTable::build(&self.psi, 1, span, &cfg, TailNeeds::TAIL)?;
            let end = table.cutoff();
            if table.tail_interval(end + 1).hi <= rel_tol * table.tail_interval(1).lo {
                break table;
            }
            if end >= cfg.max_terms {
                return Err(Error::SlowConvergence { terms: end, rel_tol });
            }
            span = end;
        };
        let target = rel_tol * table.tail_interval(1).lo;
        let (mut lo, mut hi) = (0u64, table.cutoff());
        // invariant: T(hi+1).hi <= target
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            if table.tail_interval(mid + 1).hi <= target {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        let order = hi;
        let coeffs = (1..=order).map(|k| self.psi.eval(k)).collect();
        Ok(KernelTruncation { order, tail_bound: table.tail_interval(order + 1).hi, coeffs, phase: self.phase() })
    }
}

/// Truncated kernel `Σ_{k≤K} ψ(k) cos(kt − βπ/2)` with a bound on the dropped part.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelTruncation {
    pub order: u64,
    pub tail_bound: f64,
    pub coeffs: Vec<f64>,
    pub phase: f64,
}

impl KernelTruncation {
    pub fn eval(&self, t: f64) -> f64 {
        let mut acc = Neumaier::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            acc.add(c * ((i + 1) as f64 * t - self.phase).cos());
        }
        acc.value()
    }
}

/// `Ψ_β(t)` truncated where the tail drops below `rel_tol · Σψ`.
///
/// The true value lies within `remainder_bound` of `value` on either side.
pub fn kernel_eval(spec: &KernelSpec, t: f64, rel_tol: f64) -> Result<CertifiedSum> {
    let tr = spec.truncation(rel_tol)?;
    Ok(CertifiedSum { value: tr.eval(t), remainder_bound: tr.tail_bound, terms_used: tr.order })
}

/// The `(ψ, β)`-integral of a trigonometric polynomial.
pub fn psi_integral(spec: &KernelSpec, phi: &TrigPoly) -> TrigPoly {
    let (s, c) = spec.phase().sin_cos();
    let mut out = TrigPoly::zero(phi.order());
    out.a0 = phi.a0;
    for k in 1..=phi.order() {
        let (a, b) = phi.coeff(k);
        let p = spec.psi.eval(k as u64);
        out.cos[k - 1] = p * (a * c - b * s);
        out.sin[k - 1] = p * (a * s + b * c);
    }
    out
}

/// The `(ψ, β)`-derivative; inverse of [`psi_integral`] on zero-mean polynomials.
pub fn psi_derivative(f: &TrigPoly, spec: &KernelSpec) -> Result<TrigPoly> {
    let (s, c) = spec.phase().sin_cos();
    let mut out = TrigPoly::zero(f.order());
    for k in 1..=f.order() {
        let (a, b) = f.coeff(k);
        if a == 0.0 && b == 0.0 {
            continue;
        }
        let p = spec.psi.eval(k as u64);
        if !(p > 0.0) {
            return Err(Error::ZeroMultiplier { k });
        }
        out.cos[k - 1] = (a * c + b * s) / p;
        out.sin[k - 1] = (b * c - a * s) / p;
    }
    Ok(out)
}

/// Result of the trapezoid-rule convolution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureValue {
    pub value: f64,
    pub grid: usize,
    pub truncation: u64,
}

/// `mean(φ) + (1/π) ∫ Ψ_β(x − t) φ(t) dt` by the `M`-point trapezoid rule.
pub fn convolve_quadrature(
    spec: &KernelSpec,
    phi: &dyn PeriodicFn,
    x: f64,
    m: usize,
    rel_tol: f64,
) -> Result<QuadratureValue> {
    let tr = spec.truncation(rel_tol)?;
    Ok(convolve_with(&tr, phi, x, m))
}

/// Same as [`convolve_quadrature`] with a prepared truncation.
pub fn convolve_with(tr: &KernelTruncation, phi: &dyn PeriodicFn, x: f64, m: usize) -> QuadratureValue {
    let h = 2.0 * PI / m as f64;
    let mut mean = Neumaier::new();
    let mut conv = Neumaier::new();
    for i in 0..m {
        let t = i as f64 * h;
        let v = phi.eval(t);
        mean.add(v);
        conv.add(tr.eval(x - t) * v);
    }
    let value = mean.value() / m as f64 + 2.0 * conv.value() / m as f64;
    QuadratureValue { value, grid: m, truncation: tr.order }
}
