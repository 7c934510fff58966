#[allow(unused_imports)]
use num_traits::Float;
use serde::{Deserialize, Serialize};

use super::{PsiFamily, PsiKind};
use crate::error::{Error, Result};

/// Scalar characteristics of a continuous ψ at a point `t ≥ 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Characteristics {
    /// `ψ(t) / (t |ψ'(t)|)`
    pub alpha_t: f64,
    /// `ψ(t) / |ψ'(t)|`
    pub lambda_t: f64,
    /// `ψ^{-1}(ψ(t)/2)`
    pub eta_t: f64,
    /// `t / (η(t) - t)`
    pub mu_t: f64,
}

/// `λ(t)` from closed-form logarithmic derivatives, immune to underflow of ψ.
pub(crate) fn lambda_analytic(psi: &PsiFamily, t: f64) -> Option<f64> {
    Some(match psi.kind() {
        PsiKind::Power { r } => t / r,
        PsiKind::GenPoisson { alpha, r } => t.powf(1.0 - r) / (alpha * r),
        PsiKind::LogLogPower => {
            let u = t + 2.0;
            u / (1.0 + u.ln().ln())
        }
        PsiKind::ExpLogSquared => (t + 1.0) / (2.0 * (t + 1.0).ln()),
        PsiKind::ExpTOverLog => {
            let l = (t + 2.0).ln();
            l * l / (l - 1.0)
        }
        PsiKind::Geometric { q } => -1.0 / q.ln(),
        PsiKind::Neumann { q } => 1.0 / (-q.ln() + 1.0 / t),
        PsiKind::AnalyticSech { q } => {
            let c = -q.ln();
            1.0 / (c * (c * t).tanh())
        }
        PsiKind::PolyharmonicPoisson { .. } | PsiKind::EvenOdd { .. } | PsiKind::Tabulated { .. } => return None,
    })
}

pub(crate) fn alpha_analytic(psi: &PsiFamily, t: f64) -> Option<f64> {
    lambda_analytic(psi, t).map(|l| l / t)
}

/// `λ(t)` by central differences with `h = 1e-5 t`.
pub fn lambda_fd(psi: &PsiFamily, t: f64) -> Result<f64> {
    let h = 1e-5 * t;
    let v = psi.eval_at(t)?;
    let d = (psi.eval_at(t + h)? - psi.eval_at(t - h)?) / (2.0 * h);
    if !(d < 0.0) {
        return Err(Error::NonMonotone { t });
    }
    Ok(v / -d)
}

/// Solves `ln ψ(η) = ln ψ(t) − ln 2`, so deep tails do not underflow.
fn eta(psi: &PsiFamily, t: f64, scale: f64) -> Result<f64> {
    let target = psi.ln_continuous(t) - core::f64::consts::LN_2;
    if !target.is_finite() {
        return Err(Error::NonMonotone { t });
    }
    let mut lo = t;
    let mut prev = target + core::f64::consts::LN_2;
    let mut step = scale.max(1e-6 * t);
    let mut hi = t + step;
    loop {
        let v = psi.ln_continuous(hi);
        if !(v < prev) {
            return Err(Error::NonMonotone { t: hi });
        }
        if v <= target {
            break;
        }
        prev = v;
        lo = hi;
        step *= 2.0;
        hi = t + step;
        if !hi.is_finite() {
            return Err(Error::NonMonotone { t: hi });
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if psi.ln_continuous(mid) > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

fn assemble(psi: &PsiFamily, t: f64, lambda: f64) -> Result<Characteristics> {
    let alpha_t = lambda / t;
    let lambda_t = t * alpha_t;
    let eta_t = eta(psi, t, 0.25 * lambda_t)?;
    Ok(Characteristics { alpha_t, lambda_t, eta_t, mu_t: t / (eta_t - t) })
}

/// Characteristics at `t`, analytic where available.
pub fn characteristics(psi: &PsiFamily, t: f64) -> Result<Characteristics> {
    if !psi.has_continuous_extension() {
        return Err(Error::NoContinuousExtension);
    }
    if !(t >= 1.0) {
        return Err(crate::error::invalid("characteristics need t >= 1"));
    }
    let lambda = match lambda_analytic(psi, t) {
        Some(l) => l,
        None => lambda_fd(psi, t)?,
    };
    assemble(psi, t, lambda)
}

/// Characteristics computed purely by finite differences.
pub fn characteristics_fd(psi: &PsiFamily, t: f64) -> Result<Characteristics> {
    if !psi.has_continuous_extension() {
        return Err(Error::NoContinuousExtension);
    }
    let lambda = lambda_fd(psi, t)?;
    assemble(psi, t, lambda)
}
