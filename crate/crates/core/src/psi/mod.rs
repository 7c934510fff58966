//! Multiplier sequences ψ and their scalar characteristics.
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

#[allow(unused_imports)]
use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

pub mod characteristics;
pub mod class;
pub mod closed;
pub mod tails;

pub use characteristics::{characteristics, Characteristics};
pub use class::{class_check, ClassFlags, DqInfo};
pub use tails::{double_tail, lemma1_check, lemma1_from_table, limit_ratio, tail_sum, weighted_tail, Lemma1, TailNeeds, TailTable};

/// Declared geometric decay `ψ(k+1) ≤ ρ ψ(k)` for `k ≥ k0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Majorant {
    Geometric {
        #[serde(rename = "K")]
        k0: u64,
        rho: f64,
    },
}

/// The concrete ψ families understood by the library.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PsiKind {
    /// `k^{-r}`
    Power { r: f64 },
    /// `exp(-α k^r)`
    GenPoisson { alpha: f64, r: f64 },
    /// `(k+2)^{-ln ln(k+2)}`
    LogLogPower,
    /// `exp(-ln²(k+1))`
    ExpLogSquared,
    /// `exp(-(k+2)/ln(k+2))`
    ExpTOverLog,
    /// `q^k (1 + Σ_{j=1}^{l-1} (1-q²)^j/(j! 2^j) Π_{ν<j}(k+2ν))`
    PolyharmonicPoisson { q: f64, l: u32 },
    /// `2 q^k / (1 + q^{2k})`
    AnalyticSech { q: f64 },
    /// `q^k / k`
    Neumann { q: f64 },
    /// `q^k`
    Geometric { q: f64 },
    /// `q1^k` for odd `k`, `q2^k` for even `k`, with `1 > q1 > q2 > 0`.
    EvenOdd { q1: f64, q2: f64 },
    /// Finitely supported `ψ(k) = values[k-1]`, zero beyond the table.
    Tabulated {
        values: Vec<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        majorant: Option<Majorant>,
    },
}

/// A validated ψ-sequence: `ψ(k) ≥ 0`, `ψ(k) → 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PsiKind", into = "PsiKind")]
pub struct PsiFamily {
    kind: PsiKind,
}

impl TryFrom<PsiKind> for PsiFamily {
    type Error = Error;
    fn try_from(kind: PsiKind) -> Result<Self> {
        PsiFamily::new(kind)
    }
}

impl From<PsiFamily> for PsiKind {
    fn from(p: PsiFamily) -> PsiKind {
        p.kind
    }
}

fn check_q(q: f64) -> Result<()> {
    if q > 0.0 && q < 1.0 {
        Ok(())
    } else {
        Err(invalid(format!("q must lie in (0, 1), got {q}")))
    }
}

impl PsiFamily {
    pub fn new(kind: PsiKind) -> Result<Self> {
        match &kind {
            PsiKind::Power { r } => {
                if !(*r > 0.0) || !r.is_finite() {
                    return Err(invalid(format!("power exponent must be positive, got {r}")));
                }
            }
            PsiKind::GenPoisson { alpha, r } => {
                if !(*alpha > 0.0 && *r > 0.0) || !alpha.is_finite() || !r.is_finite() {
                    return Err(invalid(format!("gen_poisson needs alpha > 0 and r > 0, got alpha={alpha}, r={r}")));
                }
            }
            PsiKind::LogLogPower | PsiKind::ExpLogSquared | PsiKind::ExpTOverLog => {}
            PsiKind::PolyharmonicPoisson { q, l } => {
                check_q(*q)?;
                if *l == 0 {
                    return Err(invalid("polyharmonic order l must be at least 1"));
                }
            }
            PsiKind::AnalyticSech { q } | PsiKind::Neumann { q } | PsiKind::Geometric { q } => check_q(*q)?,
            PsiKind::EvenOdd { q1, q2 } => {
                check_q(*q1)?;
                check_q(*q2)?;
                if !(q2 < q1) {
                    return Err(invalid(format!("even_odd needs q2 < q1, got q1={q1}, q2={q2}")));
                }
            }
            PsiKind::Tabulated { values, majorant } => {
                if values.is_empty() {
                    return Err(invalid("tabulated sequence is empty"));
                }
                for (i, v) in values.iter().enumerate() {
                    if !(*v >= 0.0) || !v.is_finite() {
                        return Err(invalid(format!("tabulated value {} at k={} is negative or not finite", v, i + 1)));
                    }
                }
                if let Some(Majorant::Geometric { rho, .. }) = majorant {
                    if !(*rho > 0.0 && *rho < 1.0) {
                        return Err(invalid(format!("majorant rho must lie in (0, 1), got {rho}")));
                    }
                }
            }
        }
        Ok(PsiFamily { kind })
    }

    pub fn kind(&self) -> &PsiKind {
        &self.kind
    }

    pub fn power(r: f64) -> Result<Self> {
        Self::new(PsiKind::Power { r })
    }
    pub fn gen_poisson(alpha: f64, r: f64) -> Result<Self> {
        Self::new(PsiKind::GenPoisson { alpha, r })
    }
    pub fn geometric(q: f64) -> Result<Self> {
        Self::new(PsiKind::Geometric { q })
    }
    pub fn even_odd(q1: f64, q2: f64) -> Result<Self> {
        Self::new(PsiKind::EvenOdd { q1, q2 })
    }
    pub fn tabulated(values: Vec<f64>) -> Result<Self> {
        Self::new(PsiKind::Tabulated { values, majorant: None })
    }

    /// Sequences used throughout the test-suite and acceptance runs.
    pub fn builtin() -> Vec<PsiFamily> {
        let kinds = [
            PsiKind::Power { r: 3.0 },
            PsiKind::GenPoisson { alpha: 1.0, r: 0.5 },
            PsiKind::GenPoisson { alpha: 1.0, r: 1.0 },
            PsiKind::GenPoisson { alpha: 1.0, r: 2.0 },
            PsiKind::LogLogPower,
            PsiKind::ExpLogSquared,
            PsiKind::ExpTOverLog,
            PsiKind::PolyharmonicPoisson { q: 0.5, l: 3 },
            PsiKind::AnalyticSech { q: 0.5 },
            PsiKind::Neumann { q: 0.5 },
            PsiKind::Geometric { q: (-1.0f64).exp() },
            PsiKind::EvenOdd { q1: 0.9, q2: 0.5 },
        ];
        kinds.into_iter().map(|k| PsiFamily::new(k).expect("builtin family")).collect()
    }

    /// `ψ(k)` for `k ≥ 1`; `ψ(0)` is reported as 0 since the kernel has no constant term.
    pub fn eval(&self, k: u64) -> f64 {
        if k == 0 {
            return 0.0;
        }
        match &self.kind {
            PsiKind::EvenOdd { q1, q2 } => {
                let q = if k % 2 == 1 { *q1 } else { *q2 };
                q.powf(k as f64)
            }
            PsiKind::Tabulated { values, .. } => values.get((k - 1) as usize).copied().unwrap_or(0.0),
            _ => self.eval_continuous(k as f64),
        }
    }

    /// Continuous extension `ψ(t)`, `t ≥ 1`.
    pub fn eval_at(&self, t: f64) -> Result<f64> {
        match &self.kind {
            PsiKind::EvenOdd { .. } | PsiKind::Tabulated { .. } => Err(Error::NoContinuousExtension),
            _ => Ok(self.eval_continuous(t)),
        }
    }

    pub fn has_continuous_extension(&self) -> bool {
        !matches!(self.kind, PsiKind::EvenOdd { .. } | PsiKind::Tabulated { .. })
    }

    fn eval_continuous(&self, t: f64) -> f64 {
        match &self.kind {
            PsiKind::Power { r } => t.powf(-r),
            PsiKind::GenPoisson { alpha, r } => (-alpha * t.powf(*r)).exp(),
            PsiKind::LogLogPower => {
                let u = t + 2.0;
                (-u.ln().ln() * u.ln()).exp()
            }
            PsiKind::ExpLogSquared => {
                let l = (t + 1.0).ln();
                (-l * l).exp()
            }
            PsiKind::ExpTOverLog => {
                let u = t + 2.0;
                (-u / u.ln()).exp()
            }
            PsiKind::PolyharmonicPoisson { q, .. } => q.powf(t) * self.poly_at(t),
            PsiKind::AnalyticSech { q } => {
                let c = -q.ln();
                1.0 / (c * t).cosh()
            }
            PsiKind::Neumann { q } => q.powf(t) / t,
            PsiKind::Geometric { q } => q.powf(t),
            PsiKind::EvenOdd { .. } | PsiKind::Tabulated { .. } => f64::NAN,
        }
    }

    /// `1 + Σ_{j=1}^{l-1} h^j/j! · Π_{ν<j}(t+2ν)` with `h = (1-q²)/2`.
    fn poly_at(&self, t: f64) -> f64 {
        let PsiKind::PolyharmonicPoisson { q, l } = &self.kind else {
            return 1.0;
        };
        let h = 0.5 * (1.0 - q * q);
        let mut term = 1.0;
        let mut acc = 1.0;
        for j in 1..*l {
            term *= h * (t + 2.0 * (j - 1) as f64) / j as f64;
            acc += term;
        }
        acc
    }

    /// Analytic `ψ'(t)` where a closed form is convenient.
    pub fn derivative_at(&self, t: f64) -> Option<f64> {
        let p = self.eval_continuous(t);
        match &self.kind {
            PsiKind::Power { r } => Some(-r * t.powf(-r - 1.0)),
            PsiKind::GenPoisson { alpha, r } => Some(-alpha * r * t.powf(r - 1.0) * p),
            PsiKind::LogLogPower => {
                let u = t + 2.0;
                Some(-p * (1.0 + u.ln().ln()) / u)
            }
            PsiKind::ExpLogSquared => Some(-p * 2.0 * (t + 1.0).ln() / (t + 1.0)),
            PsiKind::ExpTOverLog => {
                let l = (t + 2.0).ln();
                Some(-p * (l - 1.0) / (l * l))
            }
            PsiKind::AnalyticSech { q } => {
                let c = -q.ln();
                Some(-p * c * (c * t).tanh())
            }
            PsiKind::Neumann { q } => Some(p * (q.ln() - 1.0 / t)),
            PsiKind::Geometric { q } => Some(p * q.ln()),
            PsiKind::PolyharmonicPoisson { .. } | PsiKind::EvenOdd { .. } | PsiKind::Tabulated { .. } => None,
        }
    }

    /// `ψ(k+1)/ψ(k)` computed without forming the (possibly underflowing) terms.
    pub fn ratio(&self, k: u64) -> f64 {
        let kf = k as f64;
        match &self.kind {
            PsiKind::Power { r } => (kf / (kf + 1.0)).powf(*r),
            PsiKind::GenPoisson { alpha, r } => (-alpha * ((kf + 1.0).powf(*r) - kf.powf(*r))).exp(),
            PsiKind::Geometric { q } => *q,
            PsiKind::Neumann { q } => q * kf / (kf + 1.0),
            PsiKind::AnalyticSech { q } => {
                let c = -q.ln();
                // cosh(ck)/cosh(c(k+1)) in a stable form
                let e = (-2.0 * c * kf).exp();
                q * (1.0 + e) / (1.0 + e * q * q)
            }
            PsiKind::PolyharmonicPoisson { q, .. } => q * self.poly_at(kf + 1.0) / self.poly_at(kf),
            PsiKind::EvenOdd { q1, q2 } => {
                if k % 2 == 1 {
                    q2 * (q2 / q1).powf(kf)
                } else {
                    q1 * (q1 / q2).powf(kf)
                }
            }
            PsiKind::Tabulated { values, .. } => {
                let a = self.eval(k);
                let b = values.get(k as usize).copied().unwrap_or(0.0);
                if a > 0.0 {
                    b / a
                } else {
                    0.0
                }
            }
            PsiKind::LogLogPower | PsiKind::ExpLogSquared | PsiKind::ExpTOverLog => {
                (self.ln_continuous(kf + 1.0) - self.ln_continuous(kf)).exp()
            }
        }
    }

    /// `ln ψ(t)` without forming `ψ(t)`.
    pub(crate) fn ln_continuous(&self, t: f64) -> f64 {
        match &self.kind {
            PsiKind::Power { r } => -r * t.ln(),
            PsiKind::GenPoisson { alpha, r } => -alpha * t.powf(*r),
            PsiKind::Geometric { q } => t * q.ln(),
            PsiKind::Neumann { q } => t * q.ln() - t.ln(),
            PsiKind::PolyharmonicPoisson { q, .. } => t * q.ln() + self.poly_at(t).ln(),
            PsiKind::AnalyticSech { q } => {
                let ct = -q.ln() * t;
                core::f64::consts::LN_2 - ct - (-2.0 * ct).exp().ln_1p()
            }
            PsiKind::LogLogPower => {
                let u = t + 2.0;
                -u.ln().ln() * u.ln()
            }
            PsiKind::ExpLogSquared => {
                let l = (t + 1.0).ln();
                -l * l
            }
            PsiKind::ExpTOverLog => {
                let u = t + 2.0;
                -u / u.ln()
            }
            _ => self.eval_continuous(t).ln(),
        }
    }

    /// Short human-readable identifier, stable across runs.
    pub fn label(&self) -> String {
        match &self.kind {
            PsiKind::Power { r } => format!("power(r={r})"),
            PsiKind::GenPoisson { alpha, r } => format!("gen_poisson(alpha={alpha},r={r})"),
            PsiKind::LogLogPower => "log_log_power".into(),
            PsiKind::ExpLogSquared => "exp_log_squared".into(),
            PsiKind::ExpTOverLog => "exp_t_over_log".into(),
            PsiKind::PolyharmonicPoisson { q, l } => format!("polyharmonic_poisson(q={q},l={l})"),
            PsiKind::AnalyticSech { q } => format!("analytic_sech(q={q})"),
            PsiKind::Neumann { q } => format!("neumann(q={q})"),
            PsiKind::Geometric { q } => format!("geometric(q={q})"),
            PsiKind::EvenOdd { q1, q2 } => format!("even_odd(q1={q1},q2={q2})"),
            PsiKind::Tabulated { values, .. } => format!("tabulated(len={})", values.len()),
        }
    }

    /// Whether `Σ ψ(k)` and `Σ k ψ(k)` converge.
    pub(crate) fn convergence(&self) -> (bool, bool) {
        match &self.kind {
            PsiKind::Power { r } => (*r > 1.0, *r > 2.0),
            _ => (true, true),
        }
    }
}

impl fmt::Display for PsiFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}
