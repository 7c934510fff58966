use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use trigapprox_core::TrigPoly;

use crate::config::GeneratorConfig;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestFunction {
    pub id: usize,
    pub phi: TrigPoly,
    pub harmonic: Option<usize>,
}

/// Deterministic in `(seed, n, id)` and independent of generation order.
pub fn generate(seed: u64, n: usize, id: usize, gen: &GeneratorConfig) -> TestFunction {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((n as u64) << 32) | id as u64);
    let deg = gen.degree_factor * n;
    let mut cos = vec![0.0; deg];
    let mut sin = vec![0.0; deg];
    for k in 0..deg {
        let w = 1.0 / (k + 1) as f64;
        cos[k] = w * rng.random_range(-1.0..1.0);
        sin[k] = w * rng.random_range(-1.0..1.0);
    }
    let mut phi = TrigPoly::new(0.0, cos, sin);
    let mut harmonic = None;
    if gen.high_harmonic {
        let top = (gen.harmonic_factor * n).max(n);
        let big = rng.random_range(n..=top);
        let amp = rng.random_range(0.5..1.5);
        let phase: f64 = rng.random_range(0.0..std::f64::consts::TAU);
        let h = TrigPoly::cosine(big, amp * phase.cos()).add(&TrigPoly::sine(big, amp * phase.sin()));
        phi = phi.add(&h);
        harmonic = Some(big);
    }
    TestFunction { id, phi, harmonic }
}

pub fn batch(seed: u64, n: usize, gen: &GeneratorConfig) -> Vec<TestFunction> {
    (0..gen.count).map(|id| generate(seed, n, id, gen)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_zero_mean() {
        let gen = GeneratorConfig::default();
        let a = generate(7, 8, 3, &gen);
        assert_eq!(a, generate(7, 8, 3, &gen));
        assert_ne!(a.phi, generate(7, 8, 4, &gen).phi);
        assert_eq!(a.phi.a0, 0.0);
        let h = a.harmonic.unwrap();
        assert!((8..=32).contains(&h));
        assert!(a.phi.order() <= 32);
    }
}
