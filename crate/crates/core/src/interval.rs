use serde::{Deserialize, Serialize};

/// Closed real interval `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        debug_assert!(lo <= hi || lo.is_nan() || hi.is_nan(), "[{lo}, {hi}]");
        Interval { lo, hi }
    }

    pub fn point(v: f64) -> Self {
        Interval { lo: v, hi: v }
    }

    /// Interval spanned by two endpoints in either order.
    pub fn hull(a: f64, b: f64) -> Self {
        if a <= b {
            Interval { lo: a, hi: b }
        } else {
            Interval { lo: b, hi: a }
        }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn contains(&self, v: f64) -> bool {
        self.lo <= v && v <= self.hi
    }

    pub fn contains_with(&self, v: f64, slack: f64) -> bool {
        self.lo - slack <= v && v <= self.hi + slack
    }

    /// `self ⊆ other` up to an absolute slack.
    pub fn subset_of(&self, other: &Interval, slack: f64) -> bool {
        other.lo - slack <= self.lo && self.hi <= other.hi + slack
    }

    pub fn add(self, o: Interval) -> Interval {
        Interval { lo: self.lo + o.lo, hi: self.hi + o.hi }
    }

    /// Multiplication by a scalar, flipping the endpoints for negative factors.
    pub fn scale(self, c: f64) -> Interval {
        Interval::hull(self.lo * c, self.hi * c)
    }

    pub fn shift(self, c: f64) -> Interval {
        Interval { lo: self.lo + c, hi: self.hi + c }
    }

    pub fn intersects(&self, o: &Interval) -> bool {
        self.lo <= o.hi && o.lo <= self.hi
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scale_flips() {
        let i = Interval::new(-1.0, 2.0).scale(-3.0);
        assert_eq!(i, Interval::new(-6.0, 3.0));
    }

    #[test]
    fn subset() {
        let a = Interval::new(0.0, 1.0);
        assert!(a.subset_of(&Interval::new(-1.0, 1.0), 0.0));
        assert!(!a.subset_of(&Interval::new(0.1, 1.0), 0.0));
        assert!(a.subset_of(&Interval::new(0.1, 1.0), 0.1));
    }
}
