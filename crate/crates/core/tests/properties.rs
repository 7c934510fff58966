use std::f64::consts::PI;

use proptest::prelude::*;
use trigapprox_core::bestapprox::{best_l1, best_uniform};
use trigapprox_core::bounds::{self, BoundsContext};
use trigapprox_core::interp::{interpolant_at, interpolate, lebesgue_fn, Interpolant, NodeSet};
use trigapprox_core::psi::{characteristics, closed, tail_sum, weighted_tail, TailNeeds, TailTable};
use trigapprox_core::trig::{convolve_quadrature, dirichlet, psi_integral, FnPeriodic, KernelSpec};
use trigapprox_core::{PsiFamily, PsiKind, SumConfig, TrigPoly};

fn poly(order: usize) -> impl Strategy<Value = TrigPoly> {
    (
        -1.0..1.0f64,
        prop::collection::vec(-1.0..1.0f64, order),
        prop::collection::vec(-1.0..1.0f64, order),
    )
        .prop_map(|(a0, c, s)| TrigPoly::new(a0, c, s))
}

fn family() -> impl Strategy<Value = PsiFamily> {
    prop_oneof![
        (0.1..0.9f64).prop_map(|q| PsiFamily::geometric(q).unwrap()),
        (0.3..2.0f64, 0.3..1.5f64).prop_map(|(a, r)| PsiFamily::gen_poisson(a, r).unwrap()),
        (0.2..0.8f64).prop_map(|q| PsiFamily::new(PsiKind::Neumann { q }).unwrap()),
        (0.5..0.95f64, 0.05..0.45f64).prop_map(|(a, b)| PsiFamily::even_odd(a, b).unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn tails_nonnegative_and_monotone(psi in family(), n in 1u64..120) {
        let cfg = SumConfig::default();
        let a = tail_sum(&psi, n, &cfg).unwrap();
        let b = tail_sum(&psi, n + 1, &cfg).unwrap();
        prop_assert!(a.value >= 0.0 && a.remainder_bound >= 0.0);
        prop_assert!(b.value <= a.upper());
        let w = weighted_tail(&psi, n, &cfg).unwrap();
        prop_assert!(w.value >= 0.0 && w.remainder_bound >= 0.0);
    }

    #[test]
    fn closed_forms_match_summation(q in 0.05..0.95f64, n in 1u64..200) {
        let psi = PsiFamily::geometric(q).unwrap();
        let table = TailTable::build(&psi, n, n, &SumConfig::default().summed(), TailNeeds::ALL).unwrap();
        let t = closed::tail(&psi, n).unwrap();
        let w = closed::weighted(&psi, n).unwrap();
        let d = closed::double_from(&psi, n, 0).unwrap();
        prop_assert!((table.tail_interval(n).mid() - t).abs() <= 1e-12 * t);
        prop_assert!((table.weighted_interval(n).mid() - w).abs() <= 1e-12 * w);
        prop_assert!((table.double_interval(n, 0).mid() - d).abs() <= 1e-12 * d);
    }

    #[test]
    fn characteristics_consistent(t in 2.0..500.0f64, alpha in 0.2..3.0f64, r in 0.2..1.0f64) {
        let psi = PsiFamily::gen_poisson(alpha, r).unwrap();
        let c = characteristics(&psi, t).unwrap();
        prop_assert_eq!(c.lambda_t, t * c.alpha_t);
        prop_assert!(c.eta_t > t);
        prop_assert!((c.mu_t - t / (c.eta_t - t)).abs() <= 1e-12 * c.mu_t);
    }

    #[test]
    fn multiplier_matches_quadrature(phi in poly(16), beta in -2.0..2.0f64, x in 0.0..6.3f64, q in 0.2..0.7f64) {
        let spec = KernelSpec::new(PsiFamily::geometric(q).unwrap(), beta);
        let f = psi_integral(&spec, &phi);
        let quad = convolve_quadrature(&spec, &phi, x, 256, 1e-13).unwrap();
        prop_assert!((quad.value - f.eval(x)).abs() <= 1e-9 * phi.coeff_norm().max(1.0));
    }

    #[test]
    fn multiplier_linear_and_zero_mean(p in poly(8), g in poly(8), a in -3.0..3.0f64, b in -3.0..3.0f64, beta in -2.0..2.0f64) {
        let spec = KernelSpec::new(PsiFamily::gen_poisson(1.0, 0.5).unwrap(), beta);
        let lhs = psi_integral(&spec, &p.combine(a, &g, b));
        let rhs = psi_integral(&spec, &p).combine(a, &psi_integral(&spec, &g), b);
        prop_assert!(lhs.max_coeff_diff(&rhs) <= 1e-13 * (1.0 + a.abs() + b.abs()));
        let zm = TrigPoly::new(0.0, p.cos.clone(), p.sin.clone());
        prop_assert_eq!(psi_integral(&spec, &zm).a0, 0.0);
    }

    #[test]
    fn dirichlet_reproduces_constants(n in 1usize..60, x in -10.0..10.0f64) {
        let nodes = NodeSet::new(n).unwrap();
        let s: f64 = nodes.nodes().iter().map(|xk| dirichlet(n, x - xk)).sum();
        prop_assert!((2.0 / (2 * n - 1) as f64 * s - 1.0).abs() < 1e-11);
    }

    #[test]
    fn interpolation_projects(n in 1usize..24, seed in poly(23)) {
        let p = seed.resized(n - 1);
        let samples = NodeSet::new(n).unwrap().sample(&p);
        let back = interpolate(&samples, n).unwrap();
        prop_assert!(back.max_coeff_diff(&p) <= 1e-11 * p.coeff_norm().max(1.0));
    }

    #[test]
    fn dirichlet_path_agrees(n in 1usize..30, f in poly(40), x in 0.0..6.3f64) {
        let it = Interpolant::new(&f, n).unwrap();
        let direct = interpolant_at(&it.samples, n, x).unwrap();
        let scale = it.samples.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        prop_assert!((direct - it.eval(x)).abs() <= 1e-10 * scale);
        for (k, xk) in NodeSet::new(n).unwrap().nodes().iter().enumerate() {
            prop_assert!((it.eval(*xk) - it.samples[k]).abs() <= 1e-11 * scale);
        }
    }

    #[test]
    fn lebesgue_at_least_one(n in 1usize..200, x in 0.0..6.3f64) {
        prop_assert!(lebesgue_fn(n, x) >= 1.0 - 1e-12);
    }

    #[test]
    fn bounds_zero_at_nodes(psi in family(), n in 2usize..40, k in 0usize..80) {
        let cfg = SumConfig::default();
        let x = 2.0 * PI * (k % (2 * n - 1)) as f64 / (2 * n - 1) as f64;
        let ctx = BoundsContext::new(&psi, n, n, &cfg).unwrap();
        prop_assert_eq!(ctx.thm1_rhs(n, x, 1.0), 0.0);
        prop_assert_eq!(ctx.thm1_rhs_modified(n, x, 1.0), 0.0);
        let b = ctx.thm2_sup_bracket(n, x);
        prop_assert!(b.lo.to_bits() == 0 && b.hi.to_bits() == 0);
    }

    #[test]
    fn ordering_chain(psi in family(), n in 2usize..40, x in 0.01..6.27f64, beta in -1.0..1.0f64) {
        let cfg = SumConfig::default();
        let ctx = BoundsContext::new(&psi, n, n, &cfg).unwrap();
        let d = ctx.duality_kernel(n, 32 * n).unwrap().eval(beta, x);
        let b = ctx.thm2_sup_bracket(n, x);
        let slack = 1e-12 * b.hi.abs();
        prop_assert!(d.interval.lo <= d.interval.hi && b.lo <= b.hi);
        prop_assert!(d.interval.subset_of(&b, slack), "{:?} {:?}", d.interval, b);
        let t1 = ctx.thm1_rhs(n, x, 1.0);
        prop_assert!(t1 <= ctx.thm1_rhs_modified(n, x, 1.0) * (1.0 + 1e-14));
        prop_assert!(d.interval.hi <= t1 * (1.0 + 1e-12) + 2.0 / PI * d.rbound);
    }

    #[test]
    fn poisson_specialisation(alpha in 0.2..3.0f64, n in 1usize..60, x in 0.0..6.3f64) {
        let cfg = SumConfig::default();
        let psi = PsiFamily::geometric((-alpha).exp()).unwrap();
        let pb = bounds::poisson_bounds(alpha, n, x, 1.0).unwrap();
        let r = bounds::thm1_rhs(&psi, n, x, 1.0, &cfg).unwrap();
        prop_assert!((pb.rhs - r).abs() <= 1e-12 * r.max(f64::MIN_POSITIVE));
        let b = bounds::thm2_sup_bracket(&psi, 0.0, n, x, &cfg).unwrap();
        prop_assert!((pb.sup.hi - b.hi).abs() <= 1e-12 * b.hi.abs().max(f64::MIN_POSITIVE));
        prop_assert!((pb.sup.lo - b.lo).abs() <= 1e-12 * b.hi.abs().max(f64::MIN_POSITIVE));
        prop_assert!(pb.equality.lo <= pb.equality.hi);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn metric_ordering_and_shift(n in 1usize..4, f in poly(6), h in 0.0..6.3f64) {
        let m = 64 * n;
        let l1 = best_l1(&f, n, m).unwrap();
        let sup = best_uniform(&f, n, m).unwrap();
        prop_assert!(l1.value <= 2.0 * PI * sup.value + 1e-9);
        let shifted = FnPeriodic(|x: f64| f.eval(x + h));
        let l1s = best_l1(&shifted, n, 4 * m).unwrap();
        let l1f = best_l1(&f, n, 4 * m).unwrap();
        prop_assert!((l1s.norm_estimate - l1f.norm_estimate).abs() <= 1e-3 * l1f.norm_estimate.max(1e-3));
    }
}

#[test]
fn bracket_property_slow_families() {
    let cfg = SumConfig::default();
    let psi = PsiFamily::gen_poisson(1.0, 0.5).unwrap();
    for n in (64..400u64).step_by(17) {
        let c = characteristics(&psi, n as f64).unwrap();
        let (a, l) = (c.alpha_t, c.lambda_t);
        let base = psi.eval(n) * l;
        let t = tail_sum(&psi, n, &cfg).unwrap();
        let w = weighted_tail(&psi, n, &cfg).unwrap();
        assert!(t.value >= base * (1.0 - 1e-12) && t.upper() <= base * (1.0 + 4.0 / 3.0 * a + 1.0 / l));
        assert!(w.upper() <= base * (4.0 * a + 1.0 / l));
    }
}

#[test]
fn grid_convergence_l1() {
    let n = 4;
    let f = TrigPoly::new(0.0, vec![0.3, -0.2, 0.1, 0.0, 0.0, 0.5], vec![0.1, 0.0, 0.2]);
    let a = best_l1(&f, n, 64 * n).unwrap().value;
    let b = best_l1(&f, n, 128 * n).unwrap().value;
    assert!((a - b).abs() < 0.005 * b);
}

#[test]
fn builtin_ordering_chain() {
    for psi in PsiFamily::builtin() {
        let heavy = matches!(psi.kind(), PsiKind::Power { .. } | PsiKind::LogLogPower);
        let cfg = if heavy { SumConfig::with_rel_tol(1e-9) } else { SumConfig::default() };
        let ctx = BoundsContext::new(&psi, 2, 64, &cfg).unwrap();
        for n in [2usize, 5, 16, 64] {
            let kernel = ctx.duality_kernel(n, 32 * n).unwrap();
            for x in [0.013, 0.4, 1.7, 3.1, 5.9] {
                let d = kernel.eval(0.5, x).interval;
                let b = ctx.thm2_sup_bracket(n, x);
                assert!(d.subset_of(&b, 1e-12 * b.hi), "{psi} n={n} x={x}: {d:?} {b:?}");
                assert!(ctx.thm1_rhs(n, x, 1.0) <= ctx.thm1_rhs_modified(n, x, 1.0) * (1.0 + 1e-14));
            }
        }
    }
}

#[test]
fn slowly_varying_bracket_contains_sup_midpoints() {
    let cfg = SumConfig::default();
    for (alpha, r) in [(1.0, 0.5), (0.5, 0.5), (1.0, 0.7), (2.0, 0.3)] {
        let psi = PsiFamily::gen_poisson(alpha, r).unwrap();
        let n0 = (1..5000usize).find(|&n| characteristics(&psi, n as f64).unwrap().alpha_t <= 0.25).unwrap();
        let ctx = BoundsContext::new(&psi, n0, n0 + 400, &cfg).unwrap();
        for n in (n0..n0 + 400).step_by(37) {
            let x = 1.0 / n as f64;
            let b3 = bounds::thm3_bracket(&psi, n, x, 1.0).unwrap();
            let mid = ctx.thm2_sup_bracket(n, x).mid();
            assert!(b3.sup.contains(mid), "alpha={alpha} r={r} n={n}");
            assert!(b3.equality.lo <= b3.equality.hi && b3.sup.lo <= b3.sup.hi);
        }
    }
}

#[test]
fn slowly_varying_rejects_inadmissible_log_log_power() {
    let psi = PsiFamily::new(PsiKind::LogLogPower).unwrap();
    let t = 1e4;
    let c = characteristics(&psi, t).unwrap();
    let expect = (t + 2.0) / (1.0 + (t + 2.0).ln().ln());
    assert!((c.lambda_t - expect).abs() < 1e-9 * expect);
    assert!(c.alpha_t > 0.25);
    assert!(matches!(
        bounds::thm3_bracket(&psi, 10_000, 0.3, 1.0),
        Err(trigapprox_core::Error::HypothesisUnmet(_))
    ));
}

#[test]
fn characteristics_survive_underflow() {
    let psi = PsiFamily::gen_poisson(3.0, 0.99).unwrap();
    let t = 375.0;
    assert_eq!(psi.eval_at(t).unwrap(), 0.0);
    let c = characteristics(&psi, t).unwrap();
    assert!(c.eta_t > t && c.eta_t < t + 1.0);
    assert!((c.mu_t - t / (c.eta_t - t)).abs() <= 1e-12 * c.mu_t);
}
