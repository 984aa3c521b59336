//! Integer-coefficient polynomials in one variable `n`, with exact sign
//! analysis on integer intervals.
//!
//! Sign changes are located with a root bound (Cauchy's
//! `1 + max|a_i| / |a_d|`, or Fujiwara's when smaller): outside that radius
//! the sign is the sign of the leading term and only the integers strictly
//! inside need to be evaluated one by one.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::MapError;
use crate::interval::Interval;

/// Coordinates with magnitude at or beyond this value are outside the
/// supported range; unbounded searches treat it as the horizon.
pub const COORD_LIMIT: i64 = 1 << 62;

/// Largest root bound the integer scan will walk.
pub const MAX_SCAN: i128 = 1 << 20;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Poly {
    // low degree first, no trailing zeros; the zero polynomial is empty
    coeffs: Vec<i128>,
}

/// Monotonicity of a polynomial on a run of consecutive integers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Trend {
    Constant,
    NonDecreasing,
    NonIncreasing,
}

/// A maximal run on which a polynomial is monotone.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Segment {
    pub domain: Interval,
    pub trend: Trend,
}

/// A run of points sharing one sign of a polynomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct SignRun {
    domain: Interval,
    sign: i32,
}

impl Poly {
    pub fn from_coeffs(mut coeffs: Vec<i128>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: i128) -> Self {
        Poly::from_coeffs(vec![c])
    }

    /// The polynomial `n`.
    pub fn var() -> Self {
        Poly { coeffs: vec![0, 1] }
    }

    /// `a*n + b`.
    pub fn affine(a: i128, b: i128) -> Self {
        Poly::from_coeffs(vec![b, a])
    }

    pub fn coeffs(&self) -> &[i128] {
        &self.coeffs
    }

    /// Degree, with the zero polynomial reported as degree 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn constant_term(&self) -> i128 {
        self.coeffs.first().copied().unwrap_or(0)
    }

    pub fn leading(&self) -> i128 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    /// Slope when the polynomial is `±n + c`.
    pub fn unit_slope(&self) -> Option<i128> {
        match self.coeffs.as_slice() {
            [_, s] if s.abs() == 1 => Some(*s),
            _ => None,
        }
    }

    pub fn eval(&self, n: i64) -> Option<i128> {
        let n = n as i128;
        let mut acc: i128 = 0;
        for &c in self.coeffs.iter().rev() {
            acc = acc.checked_mul(n)?.checked_add(c)?;
        }
        Some(acc)
    }

    pub fn eval_big(&self, n: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for &c in self.coeffs.iter().rev() {
            acc = acc * n + BigInt::from(c);
        }
        acc
    }

    /// Compares `p(n)` with `t` exactly, falling back to big integers when
    /// the machine evaluation overflows.
    pub fn cmp_at(&self, n: i64, t: i64) -> Ordering {
        match self.eval(n) {
            Some(v) => v.cmp(&(t as i128)),
            None => self.eval_big(&BigInt::from(n)).cmp(&BigInt::from(t)),
        }
    }

    pub fn sign_at(&self, n: i64) -> i32 {
        match self.eval(n) {
            Some(v) => v.signum() as i32,
            None => {
                let v = self.eval_big(&BigInt::from(n));
                if v.is_positive() {
                    1
                } else if v.is_negative() {
                    -1
                } else {
                    0
                }
            }
        }
    }

    pub fn checked_add(&self, other: &Poly) -> Result<Poly, MapError> {
        let len = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(len);
        for i in 0..len {
            let a = self.coeffs.get(i).copied().unwrap_or(0);
            let b = other.coeffs.get(i).copied().unwrap_or(0);
            out.push(a.checked_add(b).ok_or(MapError::CoefficientOverflow)?);
        }
        Ok(Poly::from_coeffs(out))
    }

    pub fn checked_sub(&self, other: &Poly) -> Result<Poly, MapError> {
        self.checked_add(&other.checked_scale(-1)?)
    }

    pub fn checked_scale(&self, k: i128) -> Result<Poly, MapError> {
        let out = self
            .coeffs
            .iter()
            .map(|&c| c.checked_mul(k).ok_or(MapError::CoefficientOverflow))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Poly::from_coeffs(out))
    }

    pub fn checked_mul(&self, other: &Poly) -> Result<Poly, MapError> {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Ok(Poly::zero());
        }
        let mut out = vec![0i128; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                let term = a.checked_mul(b).ok_or(MapError::CoefficientOverflow)?;
                out[i + j] = out[i + j]
                    .checked_add(term)
                    .ok_or(MapError::CoefficientOverflow)?;
            }
        }
        Ok(Poly::from_coeffs(out))
    }

    pub fn checked_pow(&self, e: u32) -> Result<Poly, MapError> {
        let mut acc = Poly::constant(1);
        for _ in 0..e {
            acc = acc.checked_mul(self)?;
        }
        Ok(acc)
    }

    /// `self(inner(n))`.
    pub fn compose(&self, inner: &Poly) -> Result<Poly, MapError> {
        let mut acc = Poly::zero();
        for &c in self.coeffs.iter().rev() {
            acc = acc.checked_mul(inner)?.checked_add(&Poly::constant(c))?;
        }
        Ok(acc)
    }

    /// Forward difference `p(n+1) − p(n)`.
    pub fn forward_difference(&self) -> Result<Poly, MapError> {
        self.compose(&Poly::affine(1, 1))?.checked_sub(self)
    }

    /// Sign of `p(n)` for all sufficiently large `n`.
    pub fn sign_at_pos_inf(&self) -> i32 {
        self.leading().signum() as i32
    }

    /// Sign of `p(n)` for all sufficiently negative `n`.
    pub fn sign_at_neg_inf(&self) -> i32 {
        let s = self.leading().signum() as i32;
        if self.degree().is_multiple_of(2) {
            s
        } else {
            -s
        }
    }

    /// `R` such that no root of a nonconstant polynomial has modulus `≥ R`:
    /// the smaller of the Cauchy and Fujiwara bounds.
    pub fn root_bound(&self) -> i128 {
        if self.is_constant() {
            return 0;
        }
        let lead = self.leading().unsigned_abs();
        let d = self.degree();
        let max = self.coeffs[..d]
            .iter()
            .map(|c| c.unsigned_abs())
            .max()
            .unwrap_or(0);
        let cauchy = 1 + max.div_ceil(lead).min(u128::MAX / 4);
        // Fujiwara: every root satisfies |z| ≤ 2·max_i |a_{d−i}/a_d|^{1/i}
        let mut q_max: u128 = 0;
        for i in 1..=d {
            let a = self.coeffs[d - i].unsigned_abs();
            if a == 0 {
                continue;
            }
            q_max = q_max.max(ceil_root(a.div_ceil(lead), i as u32));
        }
        let fujiwara = q_max.saturating_mul(2).saturating_add(1);
        cauchy.min(fujiwara).min(i128::MAX as u128 / 2) as i128
    }

    fn scan_radius(&self) -> Result<i64, MapError> {
        let r = self.root_bound();
        if r > MAX_SCAN {
            return Err(MapError::ScanLimit { bound: r });
        }
        Ok(r as i64)
    }

    /// Partitions `iv` into runs of constant sign, tails collapsed.
    fn sign_runs(&self, iv: Interval) -> Result<Vec<SignRun>, MapError> {
        if iv.is_empty() {
            return Ok(Vec::new());
        }
        if self.is_constant() {
            return Ok(vec![SignRun {
                domain: iv,
                sign: self.constant_term().signum() as i32,
            }]);
        }
        let r = self.scan_radius()?;
        let mut runs = Vec::new();
        let left = iv.intersect(&Interval::at_most(-r));
        if !left.is_empty() {
            runs.push(SignRun {
                domain: left,
                sign: self.sign_at_neg_inf(),
            });
        }
        let mid = iv.intersect(&Interval::bounded(-r + 1, r - 1));
        if !mid.is_empty() {
            for n in mid.iter() {
                runs.push(SignRun {
                    domain: Interval::point(n),
                    sign: self.sign_at(n),
                });
            }
        }
        let right = iv.intersect(&Interval::at_least(r));
        if !right.is_empty() {
            runs.push(SignRun {
                domain: right,
                sign: self.sign_at_pos_inf(),
            });
        }
        Ok(runs)
    }

    /// Finds a point of `iv` whose sign fails `ok`, if any.
    pub fn sign_counterexample(
        &self,
        iv: Interval,
        ok: impl Fn(i32) -> bool,
    ) -> Result<Option<i64>, MapError> {
        for run in self.sign_runs(iv)? {
            if !ok(run.sign) {
                let d = run.domain;
                let at = d.lo.or(d.hi).unwrap_or(0);
                return Ok(Some(at));
            }
        }
        Ok(None)
    }

    /// Splits `iv` into maximal monotone segments, using the sign of the
    /// forward difference on every step `n → n+1` inside `iv`.
    pub fn monotone_segments(&self, iv: Interval) -> Result<Vec<Segment>, MapError> {
        if iv.is_empty() {
            return Ok(Vec::new());
        }
        if self.is_constant() {
            return Ok(vec![Segment {
                domain: iv,
                trend: Trend::Constant,
            }]);
        }
        let delta = self.forward_difference()?;
        // steps n -> n+1 with both ends inside iv
        let steps = Interval::new(iv.lo, iv.hi.map(|h| h - 1));
        let runs = delta.sign_runs(steps)?;

        let mut segments = Vec::new();
        let mut start = iv.lo;
        let mut dir = 0i32;
        for run in runs {
            if run.sign == 0 || run.sign == dir {
                continue;
            }
            if dir == 0 {
                dir = run.sign;
                continue;
            }
            // the first step of this run leaves the current segment
            let cut = run.domain.lo.expect("conflicting run has a finite start");
            segments.push(Segment {
                domain: Interval::new(start, Some(cut)),
                trend: trend_of(dir),
            });
            start = Some(cut + 1);
            dir = if run.domain.hi == Some(cut) {
                0
            } else {
                run.sign
            };
        }
        segments.push(Segment {
            domain: Interval::new(start, iv.hi),
            trend: trend_of(dir),
        });
        Ok(segments)
    }

    /// `{n ∈ seg : p(n) ∈ target}`, which is an interval because `p` is
    /// monotone on the segment.
    pub fn preimage_on_segment(&self, seg: &Segment, target: &Interval) -> Option<Interval> {
        let d = seg.domain;
        if d.is_empty() || target.is_empty() {
            return None;
        }
        let lo = d.lo.unwrap_or(-COORD_LIMIT).max(-COORD_LIMIT);
        let hi = d.hi.unwrap_or(COORD_LIMIT).min(COORD_LIMIT);
        if lo > hi {
            return None;
        }
        let above_lo = |n: i64| {
            target
                .lo
                .is_none_or(|t| self.cmp_at(n, t) != Ordering::Less)
        };
        let below_hi = |n: i64| {
            target
                .hi
                .is_none_or(|t| self.cmp_at(n, t) != Ordering::Greater)
        };
        let (a, b) = match seg.trend {
            Trend::Constant => {
                if above_lo(lo) && below_hi(lo) {
                    (lo, hi)
                } else {
                    return None;
                }
            }
            Trend::NonDecreasing => {
                let a = first_true(lo, hi, above_lo)?;
                let b = match first_true(lo, hi, |n| !below_hi(n)) {
                    Some(c) => c - 1,
                    None => hi,
                };
                (a, b)
            }
            Trend::NonIncreasing => {
                let a = first_true(lo, hi, below_hi)?;
                let b = match first_true(lo, hi, |n| !above_lo(n)) {
                    Some(c) => c - 1,
                    None => hi,
                };
                (a, b)
            }
        };
        if a > b {
            return None;
        }
        let out_lo = if a == lo && d.lo.is_none() {
            None
        } else {
            Some(a)
        };
        let out_hi = if b == hi && d.hi.is_none() {
            None
        } else {
            Some(b)
        };
        Some(Interval::new(out_lo, out_hi))
    }
}

fn trend_of(dir: i32) -> Trend {
    match dir.cmp(&0) {
        Ordering::Greater => Trend::NonDecreasing,
        Ordering::Less => Trend::NonIncreasing,
        Ordering::Equal => Trend::Constant,
    }
}

/// Least `n ∈ [lo, hi]` with `pred(n)`, for `pred` monotone false → true.
fn first_true(lo: i64, hi: i64, pred: impl Fn(i64) -> bool) -> Option<i64> {
    if lo > hi || !pred(hi) {
        return None;
    }
    let (mut a, mut b) = (lo as i128, hi as i128);
    while a < b {
        let mid = a + (b - a) / 2;
        if pred(mid as i64) {
            b = mid;
        } else {
            a = mid + 1;
        }
    }
    Some(a as i64)
}

/// Least `q` with `q^k ≥ x`.
fn ceil_root(x: u128, k: u32) -> u128 {
    if x <= 1 || k == 1 {
        return x;
    }
    let reaches = |q: u128| q.checked_pow(k).is_none_or(|v| v >= x);
    let (mut lo, mut hi) = (1u128, 2u128);
    while !reaches(hi) {
        lo = hi;
        hi *= 2;
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if reaches(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (deg, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let mag = c.unsigned_abs();
            if first {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else if c < 0 {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            first = false;
            match (deg, mag) {
                (0, m) => write!(f, "{m}")?,
                (1, 1) => write!(f, "n")?,
                (1, m) => write!(f, "{m}*n")?,
                (d, 1) => write!(f, "n^{d}")?,
                (d, m) => write!(f, "{m}*n^{d}")?,
            }
        }
        Ok(())
    }
}
