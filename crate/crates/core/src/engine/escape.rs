//! Escape certificates: a single map `ψ ∈ T` that strictly moves every
//! point of a ray further out, seeded inside the orbit. The iterates
//! `ψ^k(v)` are then pairwise distinct, so the orbit is infinite.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::presentation::{Presentation, Word};
use crate::error::MapError;
use crate::index_map::IndexMap;
use crate::interval::Interval;
use crate::poly::{Poly, MAX_SCAN};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    /// `ψ(n) > n` and `ψ` nondecreasing on `[bound, ∞)`.
    Up,
    /// `ψ(n) < n` and `ψ` nondecreasing on `(−∞, bound]`.
    Down,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EscapeCertificate {
    /// Word denoting `ψ`.
    pub word: Word,
    /// Orbit base point the seed was reached from.
    pub base: i64,
    pub seed: i64,
    /// `seed_word(base) = seed`.
    pub seed_word: Word,
    pub bound: i64,
    pub direction: Direction,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EscapeFailure {
    #[error("seed {seed} is not reached from {base} by the stated word")]
    SeedUnreachable { base: i64, seed: i64 },
    #[error("seed {seed} lies outside the ray bounded at {bound}")]
    SeedOutsideRay { seed: i64, bound: i64 },
    #[error("psi does not move {at} outward")]
    NotEscaping { at: i64 },
    #[error("psi is not nondecreasing at the step {at} -> {}", at + 1)]
    NotMonotone { at: i64 },
    #[error("arithmetic failure: {0}")]
    Arithmetic(#[from] MapError),
}

impl EscapeCertificate {
    pub fn ray(&self) -> Interval {
        match self.direction {
            Direction::Up => Interval::at_least(self.bound),
            Direction::Down => Interval::at_most(self.bound),
        }
    }

    /// The first `count` iterates `ψ^k(seed)`, computed exactly.
    pub fn iterates(&self, p: &Presentation, count: usize) -> Vec<BigInt> {
        let mut out = Vec::with_capacity(count);
        let mut x = BigInt::from(self.seed);
        for _ in 0..count {
            out.push(x.clone());
            x = p.eval_word_big(&self.word, &x);
        }
        out
    }
}

/// Iterates are compared exactly up to this magnitude in bits.
const EXACT_BITS: u64 = 4096;

/// Whether `ψ^0(seed), …, ψ^(count−1)(seed)` are pairwise distinct.
///
/// Iterates are computed exactly while below `2^EXACT_BITS` in absolute
/// value. Beyond that every breakpoint and every root of `q(n) − n` for the
/// ray polynomial `q` lies far inside, so each further step moves strictly
/// outward by the sign of the leading term: the remaining iterates are
/// monotone and larger than all earlier ones, hence distinct.
pub fn iterates_distinct(
    cert: &EscapeCertificate,
    p: &Presentation,
    count: usize,
) -> Result<bool, MapError> {
    let psi = p.word_map(&cert.word)?;
    let mut seen = std::collections::BTreeSet::new();
    let mut x = BigInt::from(cert.seed);
    for _ in 0..count {
        if x.bits() > EXACT_BITS {
            let up = x.sign() == num_bigint::Sign::Plus;
            let outward = if up {
                psi.right_ray_poly()
                    .checked_sub(&Poly::var())?
                    .sign_at_pos_inf()
                    > 0
            } else {
                psi.left_ray_poly()
                    .checked_sub(&Poly::var())?
                    .sign_at_neg_inf()
                    < 0
            };
            return Ok(outward);
        }
        if !seen.insert(x.clone()) {
            return Ok(false);
        }
        x = psi.eval_big(&x);
    }
    Ok(true)
}

/// Re-validates a certificate from its fields alone.
pub fn check_escape(cert: &EscapeCertificate, p: &Presentation) -> Result<(), EscapeFailure> {
    if p.eval_word(&cert.seed_word, cert.base)? != cert.seed {
        return Err(EscapeFailure::SeedUnreachable {
            base: cert.base,
            seed: cert.seed,
        });
    }
    if !cert.ray().contains(cert.seed) {
        return Err(EscapeFailure::SeedOutsideRay {
            seed: cert.seed,
            bound: cert.bound,
        });
    }
    let psi = p.word_map(&cert.word)?;
    check_ray(&psi, cert.ray(), cert.direction)
}

/// Verifies the escape conditions of `psi` on `ray` by sign analysis of
/// each piece, with steps across piece boundaries checked pointwise.
fn check_ray(psi: &IndexMap, ray: Interval, direction: Direction) -> Result<(), EscapeFailure> {
    let cells: Vec<(Interval, Poly)> = psi
        .pure_pieces()
        .into_iter()
        .filter_map(|pc| {
            let cell = pc.domain.intersect(&ray);
            (!cell.is_empty()).then_some((cell, pc.poly))
        })
        .collect();
    for (cell, poly) in &cells {
        let displacement = poly.checked_sub(&Poly::var())?;
        let outward = |s: i32| match direction {
            Direction::Up => s > 0,
            Direction::Down => s < 0,
        };
        if let Some(at) = displacement.sign_counterexample(*cell, outward)? {
            return Err(EscapeFailure::NotEscaping { at });
        }
        let steps = Interval::new(cell.lo, cell.hi.map(|h| h - 1));
        let delta = poly.forward_difference()?;
        if let Some(at) = delta.sign_counterexample(steps, |s| s >= 0)? {
            return Err(EscapeFailure::NotMonotone { at });
        }
    }
    for pair in cells.windows(2) {
        let at = pair[0].0.hi.expect("inner cell is bounded above");
        let here = psi.eval_big(&BigInt::from(at));
        let next = psi.eval_big(&BigInt::from(at + 1));
        if here > next {
            return Err(EscapeFailure::NotMonotone { at });
        }
    }
    Ok(())
}

fn fails_up(psi: &IndexMap, n: i64) -> bool {
    let here = psi.eval_big(&BigInt::from(n));
    here <= BigInt::from(n) || here > psi.eval_big(&BigInt::from(n + 1))
}

fn fails_down(psi: &IndexMap, n: i64) -> bool {
    let here = psi.eval_big(&BigInt::from(n));
    here >= BigInt::from(n) || psi.eval_big(&BigInt::from(n - 1)) > here
}

/// Least `B` (within the analysed range) such that `psi` passes the upward
/// escape conditions on `[B, ∞)`, or `None` when it fails on every ray.
pub fn up_threshold(psi: &IndexMap) -> Result<Option<i64>, MapError> {
    let p = psi.right_ray_poly();
    let displacement = p.checked_sub(&Poly::var())?;
    let delta = p.forward_difference()?;
    if displacement.sign_at_pos_inf() <= 0 || delta.sign_at_pos_inf() < 0 {
        return Ok(None);
    }
    let (top, floor) = scan_range(psi, &displacement, &delta)?;
    let mut n = top;
    while n >= floor {
        if fails_up(psi, n) {
            return Ok(Some(n + 1));
        }
        n -= 1;
    }
    Ok(Some(floor))
}

/// Greatest `B` such that `psi` passes the downward escape conditions on
/// `(−∞, B]`, or `None`.
pub fn down_threshold(psi: &IndexMap) -> Result<Option<i64>, MapError> {
    let p = psi.left_ray_poly();
    let displacement = p.checked_sub(&Poly::var())?;
    let delta = p.forward_difference()?;
    if displacement.sign_at_neg_inf() >= 0 || delta.sign_at_neg_inf() < 0 {
        return Ok(None);
    }
    let (top, floor) = scan_range(psi, &displacement, &delta)?;
    let mut n = -top;
    while n <= -floor {
        if fails_down(psi, n) {
            return Ok(Some(n - 1));
        }
        n += 1;
    }
    Ok(Some(-floor))
}

/// Symmetric scan range `[floor, top]`. Past `top` the ray conditions are
/// decided by leading terms alone. Below the outermost breakpoint the scan
/// stops, so a threshold there is sound but may not be least.
fn scan_range(psi: &IndexMap, displacement: &Poly, delta: &Poly) -> Result<(i64, i64), MapError> {
    let mut radius: i128 = displacement.root_bound().max(delta.root_bound());
    for b in psi.breakpoints() {
        radius = radius.max((b as i128).abs() + 1);
    }
    if radius > MAX_SCAN {
        return Err(MapError::ScanLimit { bound: radius });
    }
    let r = radius as i64 + 1;
    Ok((r, -r))
}
