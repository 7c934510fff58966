//! Compensated summation and certified series values.
use serde::{Deserialize, Serialize};

use crate::interval::Interval;

/// Neumaier-compensated accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

pub fn neumaier_sum<I: IntoIterator<Item = f64>>(it: I) -> f64 {
    let mut acc = Neumaier::new();
    for x in it {
        acc.add(x);
    }
    acc.value()
}

/// A series value with a certified bound on what is left out.
///
/// The true sum lies in `[value, value + remainder_bound]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CertifiedSum {
    pub value: f64,
    pub remainder_bound: f64,
    pub terms_used: u64,
}

impl CertifiedSum {
    pub fn exact(value: f64) -> Self {
        CertifiedSum { value, remainder_bound: 0.0, terms_used: 0 }
    }

    pub(crate) fn from_interval(i: Interval, terms_used: u64) -> Self {
        CertifiedSum { value: i.lo, remainder_bound: (i.hi - i.lo).max(0.0), terms_used }
    }

    pub fn upper(&self) -> f64 {
        self.value + self.remainder_bound
    }

    pub fn interval(&self) -> Interval {
        Interval::new(self.value, self.upper())
    }

    pub fn estimate(&self) -> f64 {
        self.value + 0.5 * self.remainder_bound
    }
}

/// Controls series truncation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SumConfig {
    /// Target for `remainder_bound / value`.
    pub rel_tol: f64,
    /// Hard cap on the number of explicitly summed terms.
    pub max_terms: u64,
    /// Use closed forms when the family has one.
    pub closed_form: bool,
}

impl Default for SumConfig {
    fn default() -> Self {
        SumConfig { rel_tol: 1e-12, max_terms: 10_000_000, closed_form: true }
    }
}

impl SumConfig {
    pub fn with_rel_tol(rel_tol: f64) -> Self {
        SumConfig { rel_tol, ..Self::default() }
    }

    /// Same configuration, forcing explicit summation.
    pub fn summed(self) -> Self {
        SumConfig { closed_form: false, ..self }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn neumaier_recovers_cancellation() {
        let v = neumaier_sum([1.0, 1e100, 1.0, -1e100]);
        assert_eq!(v, 2.0);
    }
}
