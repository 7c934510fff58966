//! Certified tail sums.
//!
//! A [`TailTable`] sums `ψ(ν)` explicitly for `ν ∈ [a, K]` and brackets the rest
//! with a family-specific majorant, doubling `K` until every requested quantity is
//! pinned down to the configured relative tolerance.
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;
use serde::{Deserialize, Serialize};

use super::closed;
use super::{PsiFamily, PsiKind};
use crate::error::{invalid, Error, Result};
use crate::interval::Interval;
use crate::quad;
use crate::summation::{CertifiedSum, Neumaier, SumConfig};

/// Which quantities a table must certify.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TailNeeds {
    pub weighted: bool,
    pub double: bool,
}

impl TailNeeds {
    pub const TAIL: TailNeeds = TailNeeds { weighted: false, double: false };
    pub const ALL: TailNeeds = TailNeeds { weighted: true, double: true };
}

/// Brackets for `R0 = Σ_{ν>K} ψ(ν)` and `R1 = Σ_{ν>K} (ν-K) ψ(ν)`.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Remainder {
    r0: Interval,
    r1: Interval,
}

impl Remainder {
    const ZERO: Remainder = Remainder { r0: Interval { lo: 0.0, hi: 0.0 }, r1: Interval { lo: 0.0, hi: 0.0 } };

    fn ratio(psi_k: f64, rho: f64) -> Remainder {
        let g = 1.0 - rho;
        Remainder { r0: Interval::new(0.0, psi_k * rho / g), r1: Interval::new(0.0, psi_k * rho / (g * g)) }
    }
}

/// Integral-test bracket for `ψ` with `t ψ'(t)/ψ(t) ≤ -p` beyond `K`.
fn integral_remainder(psi: &PsiFamily, k: u64) -> Option<Remainder> {
    let kf = k as f64;
    if let PsiKind::Power { r } = psi.kind() {
        let r = *r;
        let i0 = |a: f64| a.powf(1.0 - r) / (r - 1.0);
        let i1 = |a: f64| if r > 2.0 { a.powf(2.0 - r) / ((r - 1.0) * (r - 2.0)) } else { f64::INFINITY };
        return Some(Remainder {
            r0: Interval::new(i0(kf + 1.0), i0(kf)),
            r1: Interval::new(i1(kf + 1.0), i0(kf) + i1(kf)),
        });
    }
    let alpha = super::characteristics::alpha_analytic(psi, kf)?;
    if !(alpha < 0.5) {
        return None;
    }
    let (i0a, i1a) = log_integrals(psi, kf)?;
    let (i0b, i1b) = log_integrals(psi, kf + 1.0)?;
    Some(Remainder { r0: Interval::new(i0b.lo, i0a.hi), r1: Interval::new(i1b.lo, i0a.hi + i1a.hi) })
}

/// Brackets for `∫_a^∞ ψ` and `∫_a^∞ (t-a) ψ`, integrating in `s = ln(t/a)`.
fn log_integrals(psi: &PsiFamily, a: f64) -> Option<(Interval, Interval)> {
    let f0 = |s: f64| {
        let t = a * s.exp();
        psi.eval_continuous(t) * t
    };
    let f1 = |s: f64| {
        let t = a * s.exp();
        psi.eval_continuous(t) * t * (t - a)
    };
    let cut = |s_max: f64| -> Option<(f64, f64)> {
        let t = a * s_max.exp();
        let p = 1.0 / super::characteristics::alpha_analytic(psi, t)?;
        if p <= 2.0 {
            return None;
        }
        let v = psi.eval_continuous(t);
        Some((v * t / (p - 1.0), v * t * t / (p - 2.0)))
    };
    let mut s_max = 1.0;
    loop {
        let q0 = quad::integrate(f0, 0.0, s_max, 0.0, 1e-13);
        let q1 = quad::integrate(f1, 0.0, s_max, 0.0, 1e-13);
        let (c0, c1) = cut(s_max)?;
        let small = |c: f64, v: f64| c <= 1e-17 * v.abs() || c == 0.0;
        if (small(c0, q0.value) && small(c1, q1.value)) || s_max > 64.0 {
            let i0 = Interval::new((q0.value - q0.error).max(0.0), q0.value + q0.error + c0);
            let i1 = Interval::new((q1.value - q1.error).max(0.0), q1.value + q1.error + c1);
            return Some((i0, i1));
        }
        s_max *= 2.0;
    }
}

/// Remainder beyond `K`, or `None` when the majorant is not yet valid at this `K`.
fn remainder(psi: &PsiFamily, k: u64, psi_k: f64) -> Option<Remainder> {
    let kf = k as f64;
    match psi.kind() {
        PsiKind::Geometric { q } | PsiKind::Neumann { q } => Some(Remainder::ratio(psi_k, *q)),
        PsiKind::GenPoisson { r, .. } if *r >= 1.0 => Some(Remainder::ratio(psi_k, psi.ratio(k))),
        PsiKind::AnalyticSech { .. } => Some(Remainder::ratio(psi_k, psi.ratio(k))),
        PsiKind::PolyharmonicPoisson { q, l } => {
            let rho = q * (1.0 + 1.0 / kf).powi(*l as i32 - 1);
            (rho < 1.0).then(|| Remainder::ratio(psi_k, rho))
        }
        PsiKind::EvenOdd { q1, .. } => {
            let top = q1.powf(kf + 1.0);
            let g = 1.0 - q1;
            Some(Remainder { r0: Interval::new(0.0, top / g), r1: Interval::new(0.0, top / (g * g)) })
        }
        PsiKind::Tabulated { values, .. } => (k as usize >= values.len()).then_some(Remainder::ZERO),
        PsiKind::Power { .. }
        | PsiKind::GenPoisson { .. }
        | PsiKind::LogLogPower
        | PsiKind::ExpLogSquared
        | PsiKind::ExpTOverLog => integral_remainder(psi, k),
    }
}

/// Explicit partial sums of `ψ` over `[start, end]` plus a certified remainder.
#[derive(Debug, Clone)]
pub struct TailTable {
    start: u64,
    end: u64,
    /// `s0[i] = Σ_{ν=start+i}^{end} ψ(ν)`, with a trailing zero.
    s0: Vec<f64>,
    /// `s1[i] = Σ_{j=start+i}^{end} s0(j)`, with a trailing zero.
    s1: Vec<f64>,
    rem: Remainder,
}

impl TailTable {
    /// Certifies tails for every `n ∈ [n_lo, n_hi]`.
    pub fn build(psi: &PsiFamily, n_lo: u64, n_hi: u64, cfg: &SumConfig, needs: TailNeeds) -> Result<Self> {
        if n_lo == 0 || n_hi < n_lo {
            return Err(invalid("tail range must satisfy 1 <= n_lo <= n_hi"));
        }
        let (c0, c1) = psi.convergence();
        if !c0 || ((needs.weighted || needs.double) && !c1) {
            return Err(Error::Divergent(psi.label()));
        }
        let mut end = (2 * n_hi).max(n_hi + 64);
        if let PsiKind::Tabulated { values, .. } = psi.kind() {
            end = end.max(values.len() as u64);
        }
        let budget = cfg.max_terms.max(1);
        end = end.min(n_lo + budget - 1);
        let mut vals: Vec<f64> = (n_lo..=end).map(|k| psi.eval(k)).collect();
        loop {
            if let Some(rem) = remainder(psi, end, *vals.last().unwrap()) {
                let table = Self::assemble(n_lo, end, &vals, rem);
                if (n_lo..=n_hi).all(|n| table.certified(n, cfg.rel_tol, needs)) {
                    return Ok(table);
                }
            }
            let used = end - n_lo + 1;
            if used >= budget {
                return Err(Error::SlowConvergence { terms: used, rel_tol: cfg.rel_tol });
            }
            let new_end = (2 * end).min(n_lo + budget - 1);
            vals.extend((end + 1..=new_end).map(|k| psi.eval(k)));
            end = new_end;
        }
    }

    fn assemble(start: u64, end: u64, vals: &[f64], rem: Remainder) -> Self {
        let len = vals.len();
        let mut s0 = alloc::vec![0.0; len + 1];
        let mut s1 = alloc::vec![0.0; len + 1];
        let mut a0 = Neumaier::new();
        let mut a1 = Neumaier::new();
        for i in (0..len).rev() {
            a0.add(vals[i]);
            s0[i] = a0.value();
            a1.add(s0[i]);
            s1[i] = a1.value();
        }
        TailTable { start, end, s0, s1, rem }
    }

    fn certified(&self, n: u64, tol: f64, needs: TailNeeds) -> bool {
        let ok = |i: Interval| i.hi.is_finite() && i.width() <= tol * i.lo;
        ok(self.tail_interval(n))
            && (!needs.weighted || ok(self.weighted_interval(n)))
            && (!needs.double || ok(self.double_interval(n, 0)))
    }

    /// Last explicitly summed index `K`.
    pub fn cutoff(&self) -> u64 {
        self.end
    }

    pub fn start(&self) -> u64 {
        self.start
    }

    /// `T(m) = Σ_{ν≥m} ψ(ν)`.
    fn t(&self, m: u64) -> Interval {
        debug_assert!(m >= self.start);
        if m <= self.end + 1 {
            self.rem.r0.shift(self.s0[(m - self.start) as usize])
        } else {
            Interval::new(0.0, self.rem.r0.hi)
        }
    }

    /// `S1(m) = Σ_{j≥m} T(j)`.
    fn s1(&self, m: u64) -> Interval {
        debug_assert!(m >= self.start);
        if m <= self.end + 1 {
            let c = (self.end + 1 - m) as f64;
            let base = self.s1[(m - self.start) as usize];
            self.rem.r1.add(self.rem.r0.scale(c)).shift(base)
        } else {
            let lo = (self.rem.r1.lo - (m - self.end - 1) as f64 * self.rem.r0.hi).max(0.0);
            Interval::new(lo, self.rem.r1.hi)
        }
    }

    pub fn tail_interval(&self, n: u64) -> Interval {
        self.t(n)
    }

    pub fn weighted_interval(&self, n: u64) -> Interval {
        self.s1(n + 1).scale(1.0 / n as f64)
    }

    /// `Σ_{k≥k0} T(n + k(2n-1))`.
    pub fn double_interval(&self, n: u64, k0: u64) -> Interval {
        let d = 2 * n - 1;
        let mut explicit = Neumaier::new();
        let mut count = 0u64;
        let mut k = k0;
        while n + k * d <= self.end + 1 {
            explicit.add(self.s0[(n + k * d - self.start) as usize]);
            count += 1;
            k += 1;
        }
        let inner = self.rem.r0.scale(count as f64).shift(explicit.value());
        let m = n + k * d;
        let lo = self.s1(m).lo / d as f64;
        let hi = self.s1(m + 1 - d).hi / d as f64;
        inner.add(Interval::new(lo, hi.max(lo)))
    }

    pub fn tail_sum(&self, n: u64) -> CertifiedSum {
        CertifiedSum::from_interval(self.tail_interval(n), self.end - n + 1)
    }

    pub fn weighted_tail(&self, n: u64) -> CertifiedSum {
        CertifiedSum::from_interval(self.weighted_interval(n), self.end - n)
    }

    pub fn double_tail(&self, n: u64) -> CertifiedSum {
        CertifiedSum::from_interval(self.double_interval(n, 0), self.end - n + 1)
    }

    /// Double tail with the outer index starting at `k0`.
    pub fn double_tail_from(&self, n: u64, k0: u64) -> CertifiedSum {
        CertifiedSum::from_interval(self.double_interval(n, k0), self.end - n + 1)
    }
}

fn check_n(n: u64) -> Result<()> {
    if n == 0 {
        Err(invalid("n must be at least 1"))
    } else {
        Ok(())
    }
}

/// `Σ_{k≥n} ψ(k)`.
pub fn tail_sum(psi: &PsiFamily, n: u64, cfg: &SumConfig) -> Result<CertifiedSum> {
    check_n(n)?;
    if cfg.closed_form {
        if let Some(v) = closed::tail(psi, n) {
            return Ok(CertifiedSum::exact(v));
        }
    }
    Ok(TailTable::build(psi, n, n, cfg, TailNeeds::TAIL)?.tail_sum(n))
}

/// `(1/n) Σ_{k≥1} k ψ(k+n)`.
pub fn weighted_tail(psi: &PsiFamily, n: u64, cfg: &SumConfig) -> Result<CertifiedSum> {
    check_n(n)?;
    if cfg.closed_form {
        if let Some(v) = closed::weighted(psi, n) {
            return Ok(CertifiedSum::exact(v));
        }
    }
    let needs = TailNeeds { weighted: true, double: false };
    Ok(TailTable::build(psi, n, n, cfg, needs)?.weighted_tail(n))
}

/// `Σ_{k≥0} Σ_{ν≥(2k+1)n-k} ψ(ν)`.
pub fn double_tail(psi: &PsiFamily, n: u64, cfg: &SumConfig) -> Result<CertifiedSum> {
    check_n(n)?;
    if cfg.closed_form {
        if let Some(v) = closed::double_from(psi, n, 0) {
            return Ok(CertifiedSum::exact(v));
        }
    }
    let needs = TailNeeds { weighted: false, double: true };
    Ok(TailTable::build(psi, n, n, cfg, needs)?.double_tail(n))
}

/// `weighted_tail / tail_sum`, both taken at their certified midpoints.
pub fn limit_ratio(psi: &PsiFamily, n: u64, cfg: &SumConfig) -> Result<f64> {
    let t = tail_sum(psi, n, cfg)?;
    if t.upper() <= 0.0 {
        return Err(Error::DivisionDomain);
    }
    let w = weighted_tail(psi, n, cfg)?;
    Ok(w.estimate() / t.estimate())
}

/// Both sides of the weighted-tail versus double-tail inequality at one `n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Lemma1 {
    /// `(1/n) Σ_{k≥1} k ψ(k+n)`
    pub lhs: CertifiedSum,
    /// `Σ_{k≥1} Σ_{ν≥(2k+1)n-k} ψ(ν)`
    pub rhs: CertifiedSum,
    /// `lhs ≥ rhs` up to the certified remainders.
    pub holds: bool,
    /// `lhs ≥ rhs` even in the worst case of both remainders.
    pub strict: bool,
}

impl Lemma1 {
    fn new(lhs: CertifiedSum, rhs: CertifiedSum) -> Self {
        Lemma1 { lhs, rhs, holds: lhs.upper() >= rhs.value, strict: lhs.value >= rhs.upper() }
    }
}

pub fn lemma1_check(psi: &PsiFamily, n: u64, cfg: &SumConfig) -> Result<Lemma1> {
    check_n(n)?;
    if cfg.closed_form {
        if let (Some(l), Some(r)) = (closed::weighted(psi, n), closed::double_from(psi, n, 1)) {
            return Ok(Lemma1::new(CertifiedSum::exact(l), CertifiedSum::exact(r)));
        }
    }
    let table = TailTable::build(psi, n, n, cfg, TailNeeds::ALL)?;
    Ok(lemma1_from_table(&table, n))
}

/// Same as [`lemma1_check`] against a prebuilt table covering `n`.
pub fn lemma1_from_table(table: &TailTable, n: u64) -> Lemma1 {
    Lemma1::new(table.weighted_tail(n), table.double_tail_from(n, 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::psi::PsiKind;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn geometric_examples() {
        let e = (1.0f64).exp();
        let psi = PsiFamily::geometric(1.0 / e).unwrap();
        let omq = 1.0 - 1.0 / e;
        for cfg in [SumConfig::default(), SumConfig::default().summed()] {
            let t = tail_sum(&psi, 3, &cfg).unwrap();
            assert!(rel(t.value, (-3.0f64).exp() / omq) < 1e-12);
            let w = weighted_tail(&psi, 3, &cfg).unwrap();
            assert!(rel(w.value, (-4.0f64).exp() / (3.0 * omq * omq)) < 1e-12);
            let d = double_tail(&psi, 3, &cfg).unwrap();
            assert!(rel(d.value, (-3.0f64).exp() / (omq * (1.0 - (-5.0f64).exp()))) < 1e-12);
            let lr = limit_ratio(&psi, 10, &cfg).unwrap();
            assert!(rel(lr, 1.0 / e / (10.0 * omq)) < 1e-12);
        }
    }

    #[test]
    fn summation_matches_closed_forms() {
        let fams = [
            PsiFamily::geometric(0.3).unwrap(),
            PsiFamily::gen_poisson(2.0, 1.0).unwrap(),
            PsiFamily::even_odd(0.9, 0.5).unwrap(),
        ];
        for psi in &fams {
            let t = TailTable::build(psi, 1, 200, &SumConfig::default(), TailNeeds::ALL).unwrap();
            for n in 1..=200 {
                let pairs = [
                    (t.tail_sum(n), closed::tail(psi, n).unwrap()),
                    (t.weighted_tail(n), closed::weighted(psi, n).unwrap()),
                    (t.double_tail(n), closed::double_from(psi, n, 0).unwrap()),
                ];
                for (c, v) in pairs {
                    assert!(c.remainder_bound <= 1e-12 * c.value.max(1e-300));
                    assert!(rel(c.estimate(), v) < 1e-12 || (v < 1e-290), "{psi} n={n} {c:?} {v}");
                }
            }
        }
    }

    #[test]
    fn neumann_weighted_dominates_double() {
        let psi = PsiFamily::new(PsiKind::Neumann { q: 0.5 }).unwrap();
        let l = lemma1_check(&psi, 5, &SumConfig::default()).unwrap();
        assert!(l.holds && l.strict);
    }

    #[test]
    fn finite_support_weighted_vs_double() {
        let psi = PsiFamily::tabulated(alloc::vec![1.0, 0.5, 0.25]).unwrap();
        let l = lemma1_check(&psi, 3, &SumConfig::default()).unwrap();
        assert_eq!(l.lhs.value, 0.0);
        assert_eq!(l.rhs.value, 0.0);
        assert!(l.holds);
        assert_eq!(limit_ratio(&psi, 4, &SumConfig::default()), Err(Error::DivisionDomain));
    }

    #[test]
    fn integral_bracket_encloses_power_sums() {
        let psi = PsiFamily::power(3.0).unwrap();
        let t = TailTable::build(&psi, 1, 1, &SumConfig::with_rel_tol(1e-10), TailNeeds::ALL).unwrap();
        let zeta3 = 1.202_056_903_159_594_3;
        assert!(t.tail_interval(1).contains_with(zeta3, 1e-15));
        // Σ k ψ(k+1) = ζ(2) - ζ(3)
        let z2 = core::f64::consts::PI * core::f64::consts::PI / 6.0;
        assert!(t.weighted_interval(1).contains_with(z2 - zeta3, 1e-15));
    }

    #[test]
    fn power_not_summable_is_rejected() {
        let psi = PsiFamily::power(1.5).unwrap();
        assert!(matches!(weighted_tail(&psi, 2, &SumConfig::default()), Err(Error::Divergent(_))));
        assert!(tail_sum(&psi, 2, &SumConfig::with_rel_tol(1e-6)).is_ok());
    }

    #[test]
    fn budget_exhaustion() {
        let psi = PsiFamily::power(2.5).unwrap();
        let cfg = SumConfig { max_terms: 1000, ..SumConfig::default() };
        assert!(matches!(double_tail(&psi, 10, &cfg), Err(Error::SlowConvergence { .. })));
    }
}
