//! Membership checks for the classes `D_q`, `D_0` and `𝔐^α`.
use alloc::vec::Vec;
use core::ops::RangeInclusive;

#[allow(unused_imports)]
use num_traits::Float;
use serde::{Deserialize, Serialize};

use super::characteristics::{lambda_analytic, lambda_fd};
use super::{Majorant, PsiFamily, PsiKind};
use crate::error::{invalid, Error, Result};

/// Asymptotic behaviour of `ψ(k+1)/ψ(k)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum RatioLaw {
    /// Converges to `q`, monotonically from index `from` when known.
    Limit { q: f64, from: Option<u64> },
    Oscillating,
}

pub(crate) fn ratio_law(psi: &PsiFamily) -> Result<RatioLaw> {
    Ok(match psi.kind() {
        PsiKind::Geometric { q } | PsiKind::Neumann { q } | PsiKind::AnalyticSech { q } => {
            RatioLaw::Limit { q: *q, from: Some(1) }
        }
        PsiKind::GenPoisson { alpha, r } => {
            let q = if *r == 1.0 {
                (-alpha).exp()
            } else if *r > 1.0 {
                0.0
            } else {
                1.0
            };
            RatioLaw::Limit { q, from: Some(1) }
        }
        PsiKind::Power { .. } | PsiKind::LogLogPower | PsiKind::ExpLogSquared | PsiKind::ExpTOverLog => {
            RatioLaw::Limit { q: 1.0, from: Some(1) }
        }
        PsiKind::PolyharmonicPoisson { q, .. } => RatioLaw::Limit { q: *q, from: None },
        PsiKind::EvenOdd { .. } => RatioLaw::Oscillating,
        PsiKind::Tabulated { values, majorant } => match majorant {
            Some(Majorant::Geometric { .. }) => RatioLaw::Limit { q: 0.0, from: Some(values.len() as u64) },
            None => return Err(Error::UnknownRatioMonotonicity),
        },
    })
}

/// `D_q` data: the limit and `ε_n = sup_{k≥n} |ψ(k+1)/ψ(k) − q|`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DqInfo {
    pub q: f64,
    pub eps: Vec<(u64, f64)>,
    /// The ratio was shown monotone from the start of the inspected prefix.
    pub ratio_monotone: bool,
}

impl DqInfo {
    pub fn eps_at(&self, n: u64) -> Option<f64> {
        self.eps.iter().find(|(m, _)| *m == n).map(|(_, e)| *e)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassFlags {
    pub is_dq: Option<DqInfo>,
    pub is_d0: bool,
    /// `α(t) ↓ 0`, declared by the family and confirmed on samples over the range.
    pub alpha_decreasing: bool,
    /// `λ(t) ↑ ∞`, declared by the family and confirmed on samples over the range.
    pub lambda_increasing: bool,
    /// `1/n + ε_n < (1 − q)/2` per `n`.
    pub n_condition_dq: Vec<(u64, bool)>,
    /// `α(n) ≤ 1/4` per `n`.
    pub n_condition_alpha: Vec<(u64, bool)>,
    /// Sampled midpoint convexity; diagnostic only.
    pub midpoint_convex: Option<bool>,
}

/// Families whose `α(t)` decreases to zero.
pub(crate) fn declares_alpha_to_zero(psi: &PsiFamily) -> bool {
    !matches!(psi.kind(), PsiKind::Power { .. } | PsiKind::EvenOdd { .. } | PsiKind::Tabulated { .. })
}

fn declares_lambda_to_infinity(psi: &PsiFamily) -> bool {
    match psi.kind() {
        PsiKind::GenPoisson { r, .. } => *r < 1.0,
        PsiKind::Power { .. } | PsiKind::LogLogPower | PsiKind::ExpLogSquared | PsiKind::ExpTOverLog => true,
        _ => false,
    }
}

pub(crate) fn lambda_at(psi: &PsiFamily, t: f64) -> Option<f64> {
    lambda_analytic(psi, t).or_else(|| lambda_fd(psi, t).ok())
}

fn sample_points(lo: u64, hi: u64) -> Vec<f64> {
    let lo = lo.max(1) as f64;
    let hi = (hi as f64).max(lo + 1.0);
    let m = 64;
    (0..=m).map(|i| lo * (hi / lo).powf(i as f64 / m as f64)).collect()
}

fn eps_values(psi: &PsiFamily, q: f64, from: Option<u64>, ns: &[u64]) -> (Vec<(u64, f64)>, bool) {
    let n_max = *ns.iter().max().unwrap_or(&1);
    match from {
        Some(k0) => {
            let eps = ns
                .iter()
                .map(|&n| {
                    let top = n.max(k0);
                    let e = (n..=top).map(|k| (psi.ratio(k) - q).abs()).fold(0.0, f64::max);
                    (n, e)
                })
                .collect();
            (eps, true)
        }
        None => {
            let n_min = *ns.iter().min().unwrap_or(&1);
            let end = (n_max + 1000).max(10_000);
            let r: Vec<f64> = (n_min..=end).map(|k| psi.ratio(k)).collect();
            let inc = r.windows(2).all(|w| w[1] >= w[0]);
            let dec = r.windows(2).all(|w| w[1] <= w[0]);
            // suffix maxima of |r_k - q|
            let mut sup = alloc::vec![0.0; r.len() + 1];
            for i in (0..r.len()).rev() {
                sup[i] = sup[i + 1].max((r[i] - q).abs());
            }
            let eps = ns.iter().map(|&n| (n, sup[(n - n_min) as usize])).collect();
            (eps, inc || dec)
        }
    }
}

fn midpoint_convex(psi: &PsiFamily, lo: u64, hi: u64) -> Option<bool> {
    if !psi.has_continuous_extension() {
        return None;
    }
    let pts = sample_points(lo, hi.max(lo + 8));
    let mut ok = true;
    for (i, &a) in pts.iter().enumerate() {
        for &b in pts.iter().skip(i + 1).step_by(7) {
            let f = |t: f64| psi.eval_at(t).unwrap_or(f64::NAN);
            let m = f(a) - 2.0 * f(0.5 * (a + b)) + f(b);
            if m < -1e-14 * f(a) {
                ok = false;
            }
        }
    }
    Some(ok)
}

/// Classifies `psi` over the given `n` range.
pub fn class_check(psi: &PsiFamily, n_range: RangeInclusive<u64>) -> Result<ClassFlags> {
    let (lo, hi) = (*n_range.start(), *n_range.end());
    if lo == 0 || hi < lo {
        return Err(invalid("n range must satisfy 1 <= lo <= hi"));
    }
    let ns: Vec<u64> = n_range.collect();
    let law = ratio_law(psi)?;

    let (is_dq, is_d0) = match law {
        RatioLaw::Limit { q, from } if q > 0.0 && q < 1.0 => {
            let (eps, ratio_monotone) = eps_values(psi, q, from, &ns);
            (Some(DqInfo { q, eps, ratio_monotone }), false)
        }
        RatioLaw::Limit { q, .. } => (None, q == 0.0),
        RatioLaw::Oscillating => (None, false),
    };

    let n_condition_dq = match &is_dq {
        Some(info) => info.eps.iter().map(|&(n, e)| (n, 1.0 / n as f64 + e < 0.5 * (1.0 - info.q))).collect(),
        None => ns.iter().map(|&n| (n, false)).collect(),
    };

    let has_lambda = psi.has_continuous_extension();
    let alpha = |t: f64| lambda_at(psi, t).map(|l| l / t);
    let n_condition_alpha = ns
        .iter()
        .map(|&n| {
            let ok = has_lambda && declares_alpha_to_zero(psi) && alpha(n as f64).is_some_and(|a| a <= 0.25);
            (n, ok)
        })
        .collect();

    let samples = sample_points(lo, hi);
    let sampled_monotone = |f: &dyn Fn(f64) -> Option<f64>, decreasing: bool| {
        let v: Option<Vec<f64>> = samples.iter().map(|&t| f(t)).collect();
        v.is_some_and(|v| v.windows(2).all(|w| if decreasing { w[1] <= w[0] } else { w[1] >= w[0] }))
    };
    let alpha_decreasing = has_lambda && declares_alpha_to_zero(psi) && sampled_monotone(&alpha, true);
    let lambda_increasing =
        has_lambda && declares_lambda_to_infinity(psi) && sampled_monotone(&|t| lambda_at(psi, t), false);

    Ok(ClassFlags {
        is_dq,
        is_d0,
        alpha_decreasing,
        lambda_increasing,
        n_condition_dq,
        n_condition_alpha,
        midpoint_convex: midpoint_convex(psi, lo, hi),
    })
}
