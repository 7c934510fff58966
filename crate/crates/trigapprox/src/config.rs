use std::path::Path;

use serde::{Deserialize, Serialize};
use trigapprox_core::bestapprox::DEFAULT_GRID_FACTOR;
use trigapprox_core::PsiFamily;

use crate::error::{HarnessError, Result};

/// Random test functions: zero-mean polynomial of degree `≤ degree_factor·n` plus an
/// optional harmonic at `N ∈ [n, harmonic_factor·n]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GeneratorConfig {
    pub count: usize,
    pub degree_factor: usize,
    pub high_harmonic: bool,
    pub harmonic_factor: usize,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        GeneratorConfig { count: 200, degree_factor: 2, high_harmonic: true, harmonic_factor: 4 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExperimentConfig {
    pub psi: Vec<PsiFamily>,
    pub beta: f64,
    pub n: Vec<usize>,
    pub x_grid: usize,
    pub seed: u64,
    pub generator: GeneratorConfig,
    /// Solver grid is `solver_grid_factor · n` points.
    pub solver_grid_factor: usize,
    /// Duality grid is `duality_grid_factor · n` points.
    pub duality_grid_factor: usize,
    pub rel_tol: f64,
    /// Inequalities are asserted as `lhs ≤ rhs + slack·(1 + |lhs| + |rhs|)`.
    pub slack: f64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            psi: vec![PsiFamily::geometric(0.5).expect("valid q")],
            beta: 0.0,
            n: vec![4, 8, 16],
            x_grid: 512,
            seed: 0x5eed,
            generator: GeneratorConfig::default(),
            solver_grid_factor: DEFAULT_GRID_FACTOR,
            duality_grid_factor: 32,
            rel_tol: 1e-12,
            slack: 1e-9,
        }
    }
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let cfg: ExperimentConfig = serde_json::from_str(&text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(HarnessError::Config(m.to_string()));
        if self.psi.is_empty() {
            return bad("at least one psi family is required");
        }
        if self.n.is_empty() || self.n.contains(&0) {
            return bad("n list must be non-empty and positive");
        }
        if self.x_grid == 0 {
            return bad("x_grid must be positive");
        }
        if self.solver_grid_factor < 8 {
            return bad("solver_grid_factor must be at least 8");
        }
        if self.duality_grid_factor < 16 {
            return bad("duality_grid_factor must be at least 16");
        }
        if !(self.rel_tol > 0.0 && self.rel_tol < 1e-3) {
            return bad("rel_tol must lie in (0, 1e-3)");
        }
        if !(self.slack >= 0.0) || !self.beta.is_finite() {
            return bad("slack must be nonnegative and beta finite");
        }
        Ok(())
    }

    /// `x_i = 2πi / x_grid`.
    pub fn x_points(&self) -> Vec<f64> {
        (0..self.x_grid).map(|i| 2.0 * std::f64::consts::PI * i as f64 / self.x_grid as f64).collect()
    }

    pub fn holds(&self, lhs: f64, rhs: f64) -> bool {
        lhs <= rhs + self.slack * (1.0 + lhs.abs() + rhs.abs())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_round_trip() {
        let cfg = ExperimentConfig::default();
        let text = serde_json::to_string(&cfg).unwrap();
        assert_eq!(serde_json::from_str::<ExperimentConfig>(&text).unwrap(), cfg);
        let partial: ExperimentConfig = serde_json::from_str(r#"{"n":[3],"beta":1.5}"#).unwrap();
        assert_eq!(partial.n, vec![3]);
        assert_eq!(partial.x_grid, 512);
    }

    #[test]
    fn rejects_bad() {
        let cfg = ExperimentConfig { n: vec![0], ..Default::default() };
        assert!(cfg.validate().is_err());
        let cfg = ExperimentConfig { solver_grid_factor: 4, ..Default::default() };
        assert!(cfg.validate().is_err());
    }
}
