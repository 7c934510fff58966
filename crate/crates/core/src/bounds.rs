//! Right-hand sides and brackets of the interpolation error estimates, and the
//! duality computation of the exact upper bound over the unit ball.
use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::bestapprox::golden_max;
use crate::error::{invalid, Error, Result};
use crate::interp::sine_factor;
use crate::interval::Interval;
use crate::psi::class::{declares_alpha_to_zero, lambda_at, ratio_law, RatioLaw};
use crate::psi::{class_check, closed, PsiFamily, PsiKind, TailNeeds, TailTable};
use crate::summation::SumConfig;

/// Default bounding constant for the `O(1)` terms of the `D_q` and `D_0` brackets.
pub const DEFAULT_O_CONSTANT: f64 = 8.0;

/// Cap on the number of explicit kernel terms; the rest goes into `rbound`.
pub const MAX_KERNEL_TERMS: u64 = 8192;

/// `γ_n = ((2n−1)x + π(β−1))/2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GammaPhase {
    pub gamma_n: f64,
}

impl GammaPhase {
    pub fn new(n: usize, beta: f64, x: f64) -> Self {
        GammaPhase { gamma_n: 0.5 * ((2 * n - 1) as f64 * x + PI * (beta - 1.0)) }
    }
}

fn check_e(e: f64) -> Result<()> {
    if e >= 0.0 {
        Ok(())
    } else {
        Err(invalid("best approximation E must be nonnegative"))
    }
}

/// `(2/π)|sin((2n−1)x/2)|`.
fn front(n: usize, x: f64) -> f64 {
    2.0 / PI * sine_factor(n, x)
}

/// `f·iv` for `f ≥ 0`, collapsing to an exact zero at nodes.
fn scaled(iv: Interval, f: f64) -> Interval {
    if f == 0.0 {
        Interval::point(0.0)
    } else {
        iv.scale(f)
    }
}

/// Certified tails for a range of `n`, from closed forms or a shared table.
#[derive(Debug, Clone)]
pub struct TailSource {
    psi: PsiFamily,
    table: Option<TailTable>,
}

impl TailSource {
    pub fn new(psi: &PsiFamily, n_lo: u64, n_hi: u64, cfg: &SumConfig) -> Result<Self> {
        let table = if cfg.closed_form && closed::has_closed_form(psi) {
            None
        } else {
            Some(TailTable::build(psi, n_lo, n_hi, cfg, TailNeeds::ALL)?)
        };
        Ok(TailSource { psi: psi.clone(), table })
    }

    pub fn psi(&self) -> &PsiFamily {
        &self.psi
    }

    pub fn tail(&self, m: u64) -> Interval {
        match &self.table {
            Some(t) => t.tail_interval(m),
            None => Interval::point(closed::tail(&self.psi, m).unwrap_or(0.0)),
        }
    }

    pub fn weighted(&self, n: u64) -> Interval {
        match &self.table {
            Some(t) => t.weighted_interval(n),
            None => Interval::point(closed::weighted(&self.psi, n).unwrap_or(0.0)),
        }
    }

    pub fn double_from(&self, n: u64, k0: u64) -> Interval {
        match &self.table {
            Some(t) => t.double_interval(n, k0),
            None => Interval::point(closed::double_from(&self.psi, n, k0).unwrap_or(0.0)),
        }
    }

    /// Largest index whose tail is resolved explicitly.
    fn horizon(&self, n: u64) -> u64 {
        match &self.table {
            Some(t) => t.cutoff(),
            None => n + 100_000,
        }
    }

    /// `(1/n) Σ_{k≥n} k ψ(k) = T(n) + W(n)`.
    pub fn modified_factor(&self, n: u64) -> Interval {
        self.tail(n).add(self.weighted(n))
    }
}

/// Bound evaluators sharing one [`TailSource`].
#[derive(Debug, Clone)]
pub struct BoundsContext {
    pub source: TailSource,
}

impl BoundsContext {
    pub fn new(psi: &PsiFamily, n_lo: usize, n_hi: usize, cfg: &SumConfig) -> Result<Self> {
        Ok(BoundsContext { source: TailSource::new(psi, n_lo as u64, n_hi as u64, cfg)? })
    }

    /// `(2/π)|sin((2n−1)x/2)|·(ΣΣψ)·E` with the certified upper end of the double tail.
    pub fn thm1_rhs(&self, n: usize, x: f64, e: f64) -> f64 {
        front(n, x) * self.source.double_from(n as u64, 0).hi * e
    }

    /// As [`Self::thm1_rhs`] with the factor `(1/n) Σ_{k≥n} k ψ(k)`.
    pub fn thm1_rhs_modified(&self, n: usize, x: f64, e: f64) -> f64 {
        front(n, x) * self.source.modified_factor(n as u64).hi * e
    }

    /// `(2/π)|sin((2n−1)x/2)|·[T − (1+π)W, T + W]`.
    pub fn thm2_sup_bracket(&self, n: usize, x: f64) -> Interval {
        let t = self.source.tail(n as u64);
        let w = self.source.weighted(n as u64);
        let f = front(n, x);
        scaled(Interval::new(t.lo - (1.0 + PI) * w.hi, t.hi + w.hi), f)
    }

    pub fn d0_bound(&self, n: usize, x: f64, e: f64, c: f64) -> Result<Interval> {
        check_e(e)?;
        let psi = self.source.psi();
        let finite = matches!(psi.kind(), PsiKind::Tabulated { .. });
        let d0 = finite || matches!(ratio_law(psi), Ok(RatioLaw::Limit { q, .. }) if q == 0.0);
        if !d0 {
            return Err(Error::HypothesisUnmet("ratio psi(k+1)/psi(k) does not tend to 0".into()));
        }
        let nn = n as u64;
        let r = self.source.tail(nn + 1).add(self.source.weighted(nn)).hi;
        let p = psi.eval(nn);
        let f = front(n, x) * e;
        Ok(scaled(Interval::new(p - c * r, p + c * r), f))
    }

    /// Precomputes the kernel tail on an `M`-point grid for [`DualityKernel::eval`].
    pub fn duality_kernel(&self, n: usize, m: usize) -> Result<DualityKernel> {
        DualityKernel::new(&self.source, n, m)
    }
}

pub fn thm1_rhs(psi: &PsiFamily, n: usize, x: f64, e: f64, cfg: &SumConfig) -> Result<f64> {
    check_e(e)?;
    Ok(BoundsContext::new(psi, n, n, cfg)?.thm1_rhs(n, x, e))
}

pub fn thm1_rhs_modified(psi: &PsiFamily, n: usize, x: f64, e: f64, cfg: &SumConfig) -> Result<f64> {
    check_e(e)?;
    Ok(BoundsContext::new(psi, n, n, cfg)?.thm1_rhs_modified(n, x, e))
}

/// The bracket does not depend on `β`; the parameter is kept for symmetry with
/// [`duality_sup`].
pub fn thm2_sup_bracket(psi: &PsiFamily, _beta: f64, n: usize, x: f64, cfg: &SumConfig) -> Result<Interval> {
    Ok(BoundsContext::new(psi, n, n, cfg)?.thm2_sup_bracket(n, x))
}

pub fn d0_bound(psi: &PsiFamily, n: usize, x: f64, e: f64, c: f64, cfg: &SumConfig) -> Result<Interval> {
    BoundsContext::new(psi, n, n, cfg)?.d0_bound(n, x, e, c)
}

/// Brackets for the `𝔐^α` families.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Thm3Brackets {
    pub alpha_n: f64,
    pub lambda_n: f64,
    /// `(2/π)|sin|ψ(n)λ(n)(1 + 4α + 1/λ)E`.
    pub inequality_rhs: f64,
    /// Attainable values `(2/π)|sin|ψλ(1 + ξ₃α + ξ₄/λ)E`.
    pub equality: Interval,
    /// Exact upper bound over the unit ball, `(2/π)|sin|ψλ(1 + ξ₁*α + ξ₂*/λ)`.
    pub sup: Interval,
}

pub fn thm3_bracket(psi: &PsiFamily, n: usize, x: f64, e: f64) -> Result<Thm3Brackets> {
    check_e(e)?;
    if !psi.has_continuous_extension() || !declares_alpha_to_zero(psi) || !declares_lambda(psi) {
        return Err(Error::HypothesisUnmet("family outside the alpha -> 0, lambda -> inf class".into()));
    }
    let nf = n as f64;
    let lambda = lambda_at(psi, nf).ok_or(Error::NoContinuousExtension)?;
    let alpha = lambda / nf;
    if alpha > 0.25 {
        return Err(Error::HypothesisUnmet(alloc::format!("alpha({n}) = {alpha} exceeds 1/4")));
    }
    let base = front(n, x) * psi.eval(n as u64) * lambda;
    let il = 1.0 / lambda;
    let pi2 = 2.0 * PI;
    let eq = Interval::new(
        1.0 - 4.0 * (1.0 + pi2) * alpha - (1.0 + pi2) * il,
        1.0 + 8.0 / 3.0 * (1.0 + PI) * alpha + 2.0 * (1.0 + PI) * il,
    );
    let sup = Interval::new(1.0 - 4.0 * (1.0 + PI) * alpha - (1.0 + PI) * il, 1.0 + 4.0 / 3.0 * (2.0 + PI) * alpha + (2.0 + PI) * il);
    Ok(Thm3Brackets {
        alpha_n: alpha,
        lambda_n: lambda,
        inequality_rhs: base * (1.0 + 4.0 * alpha + il) * e,
        equality: scaled(eq, base * e),
        sup: scaled(sup, base),
    })
}

fn declares_lambda(psi: &PsiFamily) -> bool {
    match psi.kind() {
        PsiKind::GenPoisson { r, .. } => *r < 1.0,
        PsiKind::LogLogPower | PsiKind::ExpLogSquared | PsiKind::ExpTOverLog => true,
        _ => false,
    }
}

/// Closed forms for `ψ(k) = e^{−αk}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PoissonBounds {
    pub rhs: f64,
    /// `(2/π)|sin| e^{−αn}(1/(1−e^{−α}) + (ξ/n) e^{−α}/(1−e^{−α})²)E`, `ξ ∈ [−(1+2π), 1]`.
    pub equality: Interval,
    /// Same form without `E`, `Θ ∈ [−(1+π), 1]`.
    pub sup: Interval,
}

pub fn poisson_bounds(alpha: f64, n: usize, x: f64, e: f64) -> Result<PoissonBounds> {
    if !(alpha > 0.0) {
        return Err(invalid("alpha must be positive"));
    }
    check_e(e)?;
    let nf = n as f64;
    let q = (-alpha).exp();
    let omq = -(-alpha).exp_m1();
    let head = (-alpha * nf).exp();
    let f = front(n, x);
    let rhs = f * head / (omq * -(-alpha * (2.0 * nf - 1.0)).exp_m1()) * e;
    let w = q / (nf * omq * omq);
    let t = 1.0 / omq;
    let eq = scaled(Interval::new(t - (1.0 + 2.0 * PI) * w, t + w), f * head * e);
    let sup = scaled(Interval::new(t - (1.0 + PI) * w, t + w), f * head);
    Ok(PoissonBounds { rhs, equality: eq, sup })
}

pub fn dq_bound(psi: &PsiFamily, n: usize, x: f64, e: f64, c: f64) -> Result<Interval> {
    check_e(e)?;
    let nn = n as u64;
    let flags = class_check(psi, nn..=nn)?;
    let info = flags.is_dq.ok_or_else(|| Error::HypothesisUnmet("family is not in D_q".into()))?;
    let eps = info.eps_at(nn).unwrap_or(f64::INFINITY);
    let q = info.q;
    if !(1.0 / n as f64 + eps < 0.5 * (1.0 - q)) {
        return Err(Error::HypothesisUnmet(alloc::format!("1/n + eps_n < (1-q)/2 fails at n = {n}")));
    }
    let s = sine_factor(n, x) * psi.eval(nn) * e;
    let center = s * 2.0 / (PI * (1.0 - q));
    let g = (1.0 - q) * (1.0 - q);
    let half = c * (q / (n as f64 * g) + eps / g) * s;
    Ok(Interval::new(center - half, center + half))
}

/// Exact upper bound over the unit ball, up to `rbound`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DualitySup {
    pub interval: Interval,
    /// `(max g − min g)/2`.
    pub main: f64,
    pub rbound: f64,
    pub order: u64,
}

/// `g(t) = Σ_{k=n}^{K} ψ(k) cos(kt + γ_n)` split as `cos γ·C(t) − sin γ·S(t)` on a grid.
#[derive(Debug, Clone)]
pub struct DualityKernel {
    n: usize,
    m: usize,
    coeffs: Vec<f64>,
    c: Vec<f64>,
    s: Vec<f64>,
    rbound: f64,
}

impl DualityKernel {
    pub fn new(source: &TailSource, n: usize, m: usize) -> Result<Self> {
        if n == 0 || m < 16 * n {
            return Err(invalid("duality grid needs M >= 16n"));
        }
        let nn = n as u64;
        let target = 1e-14 * source.tail(nn).lo;
        let horizon = source.horizon(nn).min(nn + MAX_KERNEL_TERMS);
        let (mut lo, mut hi) = (nn, horizon);
        if source.tail(hi + 1).hi > target {
            lo = hi;
        }
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            if source.tail(mid + 1).hi <= target {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        let order = hi;
        let coeffs: Vec<f64> = (nn..=order).map(|k| source.psi().eval(k)).collect();
        let slack = source.tail(order + 1).hi;
        let rbound = source.double_from(nn, 1).hi + slack;
        let mut c = alloc::vec![0.0; m];
        let mut s = alloc::vec![0.0; m];
        for i in 0..m {
            let t = 2.0 * PI * i as f64 / m as f64;
            let (s1, c1) = t.sin_cos();
            let (mut ac, mut as_) = (0.0, 0.0);
            let (mut sn, mut cs) = (0.0, 1.0);
            for (j, p) in coeffs.iter().enumerate() {
                if j % 64 == 0 {
                    (sn, cs) = ((nn + j as u64) as f64 * t).sin_cos();
                }
                ac += p * cs;
                as_ += p * sn;
                (sn, cs) = (sn * c1 + cs * s1, cs * c1 - sn * s1);
            }
            c[i] = ac;
            s[i] = as_;
        }
        Ok(DualityKernel { n, m, coeffs, c, s, rbound })
    }

    pub fn order(&self) -> u64 {
        self.n as u64 + self.coeffs.len() as u64 - 1
    }

    fn g(&self, gamma: f64, t: f64) -> f64 {
        let (s1, c1) = t.sin_cos();
        let (mut sn, mut cs) = (0.0, 1.0);
        let mut acc = 0.0;
        for (j, p) in self.coeffs.iter().enumerate() {
            if j % 64 == 0 {
                (sn, cs) = (((self.n + j) as f64) * t + gamma).sin_cos();
            }
            acc += p * cs;
            (sn, cs) = (sn * c1 + cs * s1, cs * c1 - sn * s1);
        }
        acc
    }

    /// Refined extremum of `sign·g`, starting from the best grid samples.
    fn extremum(&self, gamma: f64, vals: &[f64], sign: f64) -> f64 {
        let m = self.m;
        let h = 2.0 * PI / m as f64;
        let mut idx: Vec<usize> = (0..m)
            .filter(|&i| {
                let v = sign * vals[i];
                v >= sign * vals[(i + m - 1) % m] && v >= sign * vals[(i + 1) % m]
            })
            .collect();
        idx.sort_by(|a, b| (sign * vals[*b]).total_cmp(&(sign * vals[*a])));
        let mut best = idx.first().map_or(f64::NEG_INFINITY, |&i| sign * vals[i]);
        for &i in idx.iter().take(4) {
            let t0 = 2.0 * PI * i as f64 / m as f64;
            best = best.max(golden_max(&|t| sign * self.g(gamma, t), t0 - h, t0 + h, 1e-12));
        }
        sign * best
    }

    pub fn eval(&self, beta: f64, x: f64) -> DualitySup {
        let f = front(self.n, x);
        if f == 0.0 {
            return DualitySup { interval: Interval::point(0.0), main: 0.0, rbound: self.rbound, order: self.order() };
        }
        let gamma = GammaPhase::new(self.n, beta, x).gamma_n;
        let (sg, cg) = gamma.sin_cos();
        let vals: Vec<f64> = self.c.iter().zip(&self.s).map(|(c, s)| cg * c - sg * s).collect();
        let gmax = self.extremum(gamma, &vals, 1.0);
        let gmin = self.extremum(gamma, &vals, -1.0);
        let main = 0.5 * (gmax - gmin);
        DualitySup {
            interval: scaled(Interval::new(main - self.rbound, main + self.rbound), f),
            main,
            rbound: self.rbound,
            order: self.order(),
        }
    }
}

pub fn duality_sup(psi: &PsiFamily, beta: f64, n: usize, x: f64, m: usize, cfg: &SumConfig) -> Result<DualitySup> {
    let ctx = BoundsContext::new(psi, n, n, cfg)?;
    Ok(ctx.duality_kernel(n, m)?.eval(beta, x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::psi::PsiKind;

    fn e1() -> PsiFamily {
        PsiFamily::geometric((-1.0f64).exp()).unwrap()
    }

    #[test]
    fn gamma_phase() {
        let g = GammaPhase::new(3, 0.5, 0.2);
        assert!((g.gamma_n - (5.0 * 0.2 - 0.5 * PI) / 2.0).abs() < 1e-15);
    }

    #[test]
    fn lebesgue_rhs_examples() {
        let cfg = SumConfig::default();
        let x = PI / 5.0;
        let v = thm1_rhs(&e1(), 3, x, 1.0, &cfg).unwrap();
        let omq = 1.0 - (-1.0f64).exp();
        let expect = 2.0 / PI * (-3.0f64).exp() / (omq * (1.0 - (-5.0f64).exp()));
        assert!((v - expect).abs() < 1e-14 * expect);
        assert_eq!(thm1_rhs(&e1(), 3, 2.0 * PI / 5.0, 1.0, &cfg).unwrap(), 0.0);
        assert_eq!(thm1_rhs(&e1(), 3, x, 0.0, &cfg).unwrap(), 0.0);
        let m = thm1_rhs_modified(&e1(), 3, x, 1.0, &cfg).unwrap();
        let factor = (-3.0f64).exp() / omq + (-4.0f64).exp() / (3.0 * omq * omq);
        assert!((m - 2.0 / PI * factor).abs() < 1e-14);
        assert!(v <= m);
        assert!(thm1_rhs(&e1(), 3, x, -1.0, &cfg).is_err());
    }

    #[test]
    fn poisson_matches_general() {
        let cfg = SumConfig::default();
        for n in 1..12 {
            let x = 0.3 + 0.1 * n as f64;
            let pb = poisson_bounds(1.0, n, x, 1.0).unwrap();
            let g = thm1_rhs(&e1(), n, x, 1.0, &cfg).unwrap();
            assert!((pb.rhs - g).abs() <= 1e-12 * g);
            let b = thm2_sup_bracket(&e1(), 0.0, n, x, &cfg).unwrap();
            assert!((pb.sup.lo - b.lo).abs() <= 1e-12 * b.hi && (pb.sup.hi - b.hi).abs() <= 1e-12 * b.hi);
        }
        let one = poisson_bounds(1.0, 1, PI, 1.0).unwrap();
        let omq = 1.0 - (-1.0f64).exp();
        assert!((one.rhs - 2.0 / PI * (-1.0f64).exp() / (omq * omq)).abs() < 1e-15);
        assert_eq!(poisson_bounds(1.0, 4, 0.0, 1.0).unwrap().rhs, 0.0);
    }

    #[test]
    fn slowly_varying_examples() {
        let p = PsiFamily::gen_poisson(1.0, 0.5).unwrap();
        let x = PI / 199.0;
        let b = thm3_bracket(&p, 100, x, 1.0).unwrap();
        assert!((b.lambda_n - 20.0).abs() < 1e-12);
        let center = 2.0 / PI * (-10.0f64).exp() * 20.0;
        assert!(b.sup.contains(center) && b.equality.contains(center));
        assert!(matches!(thm3_bracket(&p, 10, x, 1.0), Err(Error::HypothesisUnmet(_))));
        assert!(thm3_bracket(&e1(), 10, x, 1.0).is_err());
    }

    #[test]
    fn dq_and_d0() {
        let x = 0.37;
        for n in [5usize, 10, 40] {
            let iv = dq_bound(&e1(), n, x, 1.0, DEFAULT_O_CONSTANT).unwrap();
            assert!(iv.lo <= iv.hi);
        }
        let neumann = PsiFamily::new(PsiKind::Neumann { q: 0.5 }).unwrap();
        assert!(dq_bound(&neumann, 20, x, 1.0, DEFAULT_O_CONSTANT).is_ok());
        assert!(matches!(dq_bound(&neumann, 3, x, 1.0, DEFAULT_O_CONSTANT), Err(Error::HypothesisUnmet(_))));
        let cfg = SumConfig::default();
        let sg = PsiFamily::gen_poisson(1.0, 2.0).unwrap();
        let iv = d0_bound(&sg, 6, x, 1.0, DEFAULT_O_CONSTANT, &cfg).unwrap();
        let point = 2.0 / PI * sine_factor(6, x) * sg.eval(6);
        assert!(iv.contains(point) && iv.width() < 1e-3 * point);
        let tab = PsiFamily::tabulated(alloc::vec![1.0, 0.5, 0.25]).unwrap();
        let iv = d0_bound(&tab, 3, x, 1.0, DEFAULT_O_CONSTANT, &cfg).unwrap();
        assert_eq!(iv.lo, iv.hi);
        let eo = PsiFamily::even_odd(0.9, 0.5).unwrap();
        assert!(matches!(d0_bound(&eo, 3, x, 1.0, DEFAULT_O_CONSTANT, &cfg), Err(Error::HypothesisUnmet(_))));
    }

    #[test]
    fn duality_examples() {
        let cfg = SumConfig::default();
        let single = PsiFamily::tabulated(alloc::vec![0.0, 0.0, 0.7]).unwrap();
        let d = duality_sup(&single, 0.3, 3, 0.4, 64, &cfg).unwrap();
        assert!((d.main - 0.7).abs() < 1e-12);
        assert_eq!(d.rbound, 0.0);
        let x = PI / 7.0;
        let d = duality_sup(&e1(), 0.0, 4, x, 512, &cfg).unwrap();
        let b = thm2_sup_bracket(&e1(), 0.0, 4, x, &cfg).unwrap();
        assert!(d.interval.subset_of(&b, 0.0), "{d:?} {b:?}");
        let node = duality_sup(&e1(), 0.0, 4, 2.0 * PI / 7.0, 512, &cfg).unwrap();
        assert_eq!(node.interval, Interval::point(0.0));
    }
}
