//! Closed-form tail sums for geometric-type families.
#[allow(unused_imports)]
use num_traits::Float;

use super::{PsiFamily, PsiKind};

/// `(ln q, 1 - q)` for families that are exactly geometric.
fn geometric_params(psi: &PsiFamily) -> Option<(f64, f64)> {
    match psi.kind() {
        PsiKind::Geometric { q } => Some((q.ln(), 1.0 - q)),
        PsiKind::GenPoisson { alpha, r } if *r == 1.0 => Some((-alpha, -(-alpha).exp_m1())),
        _ => None,
    }
}

fn pw(lnq: f64, m: f64) -> f64 {
    (lnq * m).exp()
}

/// `Σ_{j≥0} T(m0 + 2j·step)` for the even/odd family, `step` odd.
fn even_odd_strided(q1: f64, q2: f64, m0: f64, step: f64) -> f64 {
    let odd = (m0 as u64) % 2 == 1;
    let (a, b) = if odd { (q1, q2) } else { (q2, q1) };
    let s = 2.0 * step;
    let ga = -(s * a.ln()).exp_m1();
    let gb = -(s * b.ln()).exp_m1();
    a.powf(m0) / ((1.0 - a * a) * ga) + b.powf(m0 + 1.0) / ((1.0 - b * b) * gb)
}

/// `Σ_{k≥n} ψ(k)`.
pub fn tail(psi: &PsiFamily, n: u64) -> Option<f64> {
    let nf = n as f64;
    if let Some((lnq, omq)) = geometric_params(psi) {
        return Some(pw(lnq, nf) / omq);
    }
    if let PsiKind::EvenOdd { q1, q2 } = psi.kind() {
        let (a, b) = if n % 2 == 1 { (*q1, *q2) } else { (*q2, *q1) };
        return Some(a.powf(nf) / (1.0 - a * a) + b.powf(nf + 1.0) / (1.0 - b * b));
    }
    None
}

/// `(1/n) Σ_{k≥1} k ψ(k+n)`.
pub fn weighted(psi: &PsiFamily, n: u64) -> Option<f64> {
    let nf = n as f64;
    if let Some((lnq, omq)) = geometric_params(psi) {
        return Some(pw(lnq, nf + 1.0) / (nf * omq * omq));
    }
    if let PsiKind::EvenOdd { q1, q2 } = psi.kind() {
        // k even lands on the parity of n, k odd on the other one
        let (same, other) = if n % 2 == 1 { (*q1, *q2) } else { (*q2, *q1) };
        let s2 = 1.0 - same * same;
        let o2 = 1.0 - other * other;
        let v = 2.0 * same.powf(nf + 2.0) / (s2 * s2)
            + 2.0 * other.powf(nf + 3.0) / (o2 * o2)
            + other.powf(nf + 1.0) / o2;
        return Some(v / nf);
    }
    None
}

/// `Σ_{k≥k0} Σ_{ν≥(2k+1)n-k} ψ(ν)`.
pub fn double_from(psi: &PsiFamily, n: u64, k0: u64) -> Option<f64> {
    let nf = n as f64;
    let d = 2.0 * nf - 1.0;
    let m0 = nf + k0 as f64 * d;
    if let Some((lnq, omq)) = geometric_params(psi) {
        return Some(pw(lnq, m0) / (omq * -(lnq * d).exp_m1()));
    }
    if let PsiKind::EvenOdd { q1, q2 } = psi.kind() {
        return Some(even_odd_strided(*q1, *q2, m0, d) + even_odd_strided(*q1, *q2, m0 + d, d));
    }
    None
}

pub fn has_closed_form(psi: &PsiFamily) -> bool {
    geometric_params(psi).is_some() || matches!(psi.kind(), PsiKind::EvenOdd { .. })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(psi: &PsiFamily, n: u64) -> (f64, f64, f64) {
        let t = |m: u64| (m..m + 4000).map(|k| psi.eval(k)).sum::<f64>();
        let w = (1..4000u64).map(|k| k as f64 * psi.eval(k + n)).sum::<f64>() / n as f64;
        let d = (0..3000u64).map(|k| t(n + k * (2 * n - 1))).sum::<f64>();
        (t(n), w, d)
    }

    #[test]
    fn matches_brute_force() {
        for psi in [
            PsiFamily::geometric(0.7).unwrap(),
            PsiFamily::gen_poisson(0.5, 1.0).unwrap(),
            PsiFamily::even_odd(0.9, 0.5).unwrap(),
        ] {
            for n in 1..12u64 {
                let (t, w, d) = brute(&psi, n);
                let ct = tail(&psi, n).unwrap();
                let cw = weighted(&psi, n).unwrap();
                let cd = double_from(&psi, n, 0).unwrap();
                assert!((ct - t).abs() < 1e-13 * t, "{psi} n={n} tail {ct} {t}");
                assert!((cw - w).abs() < 1e-13 * w, "{psi} n={n} weighted {cw} {w}");
                assert!((cd - d).abs() < 1e-13 * d, "{psi} n={n} double {cd} {d}");
                let d1 = double_from(&psi, n, 1).unwrap();
                assert!((cd - ct - d1).abs() < 1e-13 * cd);
            }
        }
    }
}
