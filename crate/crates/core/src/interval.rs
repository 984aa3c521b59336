//! Closed integer intervals with optional infinite endpoints.

use std::fmt;

use serde::{Deserialize, Serialize};

/// A closed interval of integers. `None` on `lo` means −∞, on `hi` means +∞.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Interval {
    pub lo: Option<i64>,
    pub hi: Option<i64>,
}

impl Interval {
    pub const ALL: Interval = Interval { lo: None, hi: None };

    pub fn new(lo: Option<i64>, hi: Option<i64>) -> Self {
        Interval { lo, hi }
    }

    pub fn bounded(lo: i64, hi: i64) -> Self {
        Interval {
            lo: Some(lo),
            hi: Some(hi),
        }
    }

    pub fn point(n: i64) -> Self {
        Interval::bounded(n, n)
    }

    pub fn at_least(lo: i64) -> Self {
        Interval {
            lo: Some(lo),
            hi: None,
        }
    }

    pub fn at_most(hi: i64) -> Self {
        Interval {
            lo: None,
            hi: Some(hi),
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!((self.lo, self.hi), (Some(a), Some(b)) if a > b)
    }

    pub fn is_bounded(&self) -> bool {
        self.lo.is_some() && self.hi.is_some()
    }

    pub fn contains(&self, n: i64) -> bool {
        self.lo.is_none_or(|a| a <= n) && self.hi.is_none_or(|b| n <= b)
    }

    /// Number of points, `None` when unbounded.
    pub fn len(&self) -> Option<u128> {
        match (self.lo, self.hi) {
            (Some(a), Some(b)) if a > b => Some(0),
            (Some(a), Some(b)) => Some((b as i128 - a as i128 + 1) as u128),
            _ => None,
        }
    }

    pub fn intersect(&self, other: &Interval) -> Interval {
        let lo = match (self.lo, other.lo) {
            (Some(a), Some(b)) => Some(a.max(b)),
            (a, b) => a.or(b),
        };
        let hi = match (self.hi, other.hi) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        Interval { lo, hi }
    }

    /// Iterates a bounded interval. Panics on an unbounded one.
    pub fn iter(&self) -> impl Iterator<Item = i64> {
        let (a, b) = (
            self.lo.expect("unbounded interval"),
            self.hi.expect("unbounded interval"),
        );
        a..=b
    }

    /// True when `self` ends exactly one before `next` begins.
    pub fn adjacent_to(&self, next: &Interval) -> bool {
        matches!((self.hi, next.lo), (Some(h), Some(l)) if h.checked_add(1) == Some(l))
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.lo {
            Some(a) => write!(f, "[{a}")?,
            None => write!(f, "(-inf")?,
        }
        match self.hi {
            Some(b) => write!(f, ", {b}]"),
            None => write!(f, ", +inf)"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn intersection_and_membership() {
        let a = Interval::at_least(-3);
        let b = Interval::at_most(5);
        let c = a.intersect(&b);
        assert_eq!(c, Interval::bounded(-3, 5));
        assert!(c.contains(0) && !c.contains(6));
        assert_eq!(c.len(), Some(9));
        assert!(Interval::bounded(4, 3).is_empty());
        assert_eq!(
            Interval::ALL.intersect(&Interval::point(2)),
            Interval::point(2)
        );
        assert!(Interval::at_most(0).adjacent_to(&Interval::at_least(1)));
    }
}
