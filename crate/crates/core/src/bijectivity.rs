//! Bijectivity of index maps, with certificates either way.
//!
//! A map whose unbounded pieces are all `±n + c` has images that are
//! intervals, so injectivity and surjectivity reduce to checking that the
//! image atoms tile ℤ. Anything else falls back to a windowed witness search.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::index_map::IndexMap;
use crate::interval::Interval;

pub const DEFAULT_WITNESS_WINDOW: i64 = 64;

/// Bounded non-affine pieces up to this length are expanded point by point.
const POINTWISE_LIMIT: u128 = 4096;

/// Image atoms that tile ℤ exactly once.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BijectionCertificate {
    pub images: Vec<Interval>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum BijectivityWitness {
    /// Two distinct points with the same image.
    Collision { a: i64, b: i64, value: i64 },
    /// A value with empty preimage.
    Missing { value: i64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Bijectivity {
    Yes(BijectionCertificate),
    No(BijectivityWitness),
    Unknown(String),
}

impl BijectivityWitness {
    /// Re-checks the witness by evaluation and exact preimages.
    pub fn holds_for(&self, map: &IndexMap) -> bool {
        match *self {
            BijectivityWitness::Collision { a, b, value } => {
                a != b && map.eval(a) == Ok(value) && map.eval(b) == Ok(value)
            }
            BijectivityWitness::Missing { value } => {
                map.preimages(value).is_ok_and(|p| p.is_empty())
            }
        }
    }
}

pub fn bijectivity(map: &IndexMap) -> Bijectivity {
    bijectivity_with_window(map, DEFAULT_WITNESS_WINDOW)
}

pub fn bijectivity_with_window(map: &IndexMap, window: i64) -> Bijectivity {
    match image_atoms(map) {
        Some(atoms) => from_atoms(map, atoms, window),
        None => window_search(map, window),
    }
}

/// Image of every piece as intervals, or `None` when some unbounded piece
/// is not `±n + c`.
fn image_atoms(map: &IndexMap) -> Option<Vec<Interval>> {
    let mut atoms = Vec::new();
    for piece in map.pieces() {
        let d = piece.domain;
        let holes: Vec<i64> = map
            .exceptions()
            .keys()
            .filter(|k| d.contains(**k))
            .map(|&k| map.backbone(k).ok())
            .collect::<Option<_>>()?;
        if let Some(slope) = piece.poly.unit_slope() {
            let c = i64::try_from(piece.poly.constant_term()).ok()?;
            let shift = |x: Option<i64>| -> Option<Option<i64>> {
                match x {
                    None => Some(None),
                    Some(v) => {
                        let v = if slope == 1 { v } else { v.checked_neg()? };
                        Some(Some(v.checked_add(c)?))
                    }
                }
            };
            let image = if slope == 1 {
                Interval::new(shift(d.lo)?, shift(d.hi)?)
            } else {
                Interval::new(shift(d.hi)?, shift(d.lo)?)
            };
            atoms.extend(punch(image, holes));
        } else if d.len().is_some_and(|len| len <= POINTWISE_LIMIT) {
            for n in d.iter().filter(|n| !map.exceptions().contains_key(n)) {
                atoms.push(Interval::point(map.backbone(n).ok()?));
            }
        } else {
            return None;
        }
    }
    atoms.extend(map.exceptions().values().map(|&v| Interval::point(v)));
    atoms.sort_by_key(|iv| (iv.lo.is_some(), iv.lo));
    Some(atoms)
}

/// Removes the given points from an interval.
fn punch(iv: Interval, mut holes: Vec<i64>) -> Vec<Interval> {
    holes.sort_unstable();
    let mut out = Vec::new();
    let mut start = iv.lo;
    for h in holes {
        let before = Interval::new(start, Some(h - 1));
        if !before.is_empty() {
            out.push(before);
        }
        start = Some(h + 1);
    }
    let rest = Interval::new(start, iv.hi);
    if !rest.is_empty() {
        out.push(rest);
    }
    out
}

fn from_atoms(map: &IndexMap, atoms: Vec<Interval>, window: i64) -> Bijectivity {
    let mut gaps: Vec<Interval> = Vec::new();
    let mut overlap: Option<i64> = None;
    // None before the first atom; Some(None) once the sweep reaches +inf
    let mut reach: Option<Option<i64>> = None;
    for a in &atoms {
        match reach {
            None => {
                if let Some(l) = a.lo {
                    gaps.push(Interval::at_most(l - 1));
                }
            }
            Some(None) => {
                overlap.get_or_insert(a.lo.or(a.hi).unwrap_or(0));
            }
            Some(Some(r)) => match a.lo {
                None => {
                    overlap.get_or_insert(r);
                }
                Some(l) if l <= r => {
                    overlap.get_or_insert(l);
                }
                Some(l) if l > r + 1 => gaps.push(Interval::bounded(r + 1, l - 1)),
                _ => {}
            },
        }
        reach = Some(match (reach, a.hi) {
            (Some(None), _) | (_, None) => None,
            (Some(Some(r)), Some(h)) => Some(r.max(h)),
            (None, Some(h)) => Some(h),
        });
    }
    if let Some(Some(r)) = reach {
        gaps.push(Interval::at_least(r + 1));
    }

    if let Some(value) = gaps
        .iter()
        .map(closest_to_zero)
        .min_by_key(|v| (v.abs(), *v))
    {
        let w = BijectivityWitness::Missing { value };
        if w.holds_for(map) {
            return Bijectivity::No(w);
        }
    }
    if let Some(value) = overlap {
        if let Some(w) = collision_at(map, value) {
            return Bijectivity::No(w);
        }
    }
    if gaps.is_empty() && overlap.is_none() {
        return Bijectivity::Yes(BijectionCertificate { images: atoms });
    }
    window_search(map, window)
}

fn closest_to_zero(iv: &Interval) -> i64 {
    match (iv.lo, iv.hi) {
        (Some(a), _) if a > 0 => a,
        (_, Some(b)) if b < 0 => b,
        _ => 0,
    }
}

fn collision_at(map: &IndexMap, value: i64) -> Option<BijectivityWitness> {
    let pre = map.preimages(value).ok()?;
    let mut pts = pre.intervals.iter().flat_map(|iv| {
        let first = iv.lo.or(iv.hi).unwrap_or(0);
        let second = if iv.len().is_some_and(|l| l == 1) {
            None
        } else if iv.lo.is_some() {
            Some(first + 1)
        } else {
            Some(first - 1)
        };
        std::iter::once(first).chain(second)
    });
    let a = pts.next()?;
    let b = pts.next()?;
    Some(BijectivityWitness::Collision {
        a: a.min(b),
        b: a.max(b),
        value,
    })
}

/// 0, −1, 1, −2, 2, … out to ±window.
fn spiral(window: i64) -> impl Iterator<Item = i64> {
    std::iter::once(0).chain((1..=window).flat_map(|k| [-k, k]))
}

fn window_search(map: &IndexMap, window: i64) -> Bijectivity {
    let mut seen: HashMap<i64, i64> = HashMap::new();
    for n in spiral(window) {
        let Ok(v) = map.eval(n) else { continue };
        if let Some(&m) = seen.get(&v) {
            return Bijectivity::No(BijectivityWitness::Collision {
                a: m.min(n),
                b: m.max(n),
                value: v,
            });
        }
        seen.insert(v, n);
    }
    for v in spiral(window) {
        if map.preimages(v).is_ok_and(|p| p.is_empty()) {
            return Bijectivity::No(BijectivityWitness::Missing { value: v });
        }
    }
    Bijectivity::Unknown(format!(
        "no collision or missing value within [-{window}, {window}] and no tiling certificate"
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_map;

    fn map(src: &str) -> IndexMap {
        parse_map(src).unwrap()
    }

    #[test]
    fn negation_is_bijective() {
        let Bijectivity::Yes(cert) = bijectivity(&map("piece all: -n")) else {
            panic!("expected a certificate");
        };
        assert_eq!(cert.images, vec![Interval::ALL]);
    }

    #[test]
    fn absolute_value_misses_minus_one() {
        let m = map("piece n>=0: n; piece n<0: -n");
        assert_eq!(
            bijectivity(&m),
            Bijectivity::No(BijectivityWitness::Missing { value: -1 })
        );
    }

    #[test]
    fn square_collides() {
        let m = map("piece all: n^2");
        let Bijectivity::No(w @ BijectivityWitness::Collision { .. }) = bijectivity(&m) else {
            panic!("expected a collision");
        };
        assert!(w.holds_for(&m));
        // the pair (-2, 2) is a collision as well
        assert!(BijectivityWitness::Collision {
            a: -2,
            b: 2,
            value: 4
        }
        .holds_for(&m));
    }

    #[test]
    fn finite_support_permutation() {
        let m = map("piece all: n; except 1 -> 2; except 2 -> 3; except 3 -> 1");
        assert!(matches!(bijectivity(&m), Bijectivity::Yes(_)));
    }

    #[test]
    fn collapsing_exception_is_caught() {
        let m = map("piece all: n; except 1 -> 2");
        match bijectivity(&m) {
            Bijectivity::No(w) => assert!(w.holds_for(&m), "{w:?}"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn shifted_rays_tile() {
        // n -> n+1 on n>=0, n -> n on n<=-1 leaves 0 uncovered
        let m = map("piece n>=0: n+1; piece n<0: n");
        assert_eq!(
            bijectivity(&m),
            Bijectivity::No(BijectivityWitness::Missing { value: 0 })
        );
        // a reflection glued to a shift
        let m = map("piece n>=0: -n-1; piece n<0: -n-1");
        assert!(matches!(bijectivity(&m), Bijectivity::Yes(_)));
    }

    #[test]
    fn doubling_is_not_surjective() {
        let m = map("piece all: 2n");
        assert_eq!(
            bijectivity(&m),
            Bijectivity::No(BijectivityWitness::Missing { value: -1 })
        );
    }

    #[test]
    fn bounded_nonaffine_piece_is_expanded() {
        // n^2 on [0,1] agrees with the identity there
        let m = map("piece n<0: n; piece 0<=n<=1: n^2; piece n>1: n");
        assert!(matches!(bijectivity(&m), Bijectivity::Yes(_)));
    }
}
