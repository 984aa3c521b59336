//! Random maps, presentations and patterns shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;

use gshift::classifier::Pattern;
use gshift::engine::Presentation;
use gshift::{IndexMap, Interval, Piece, Poly};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn from_src(src: &str) -> Presentation {
    Presentation::new(vec![("phi".into(), gshift::dsl::parse_map(src).unwrap())]).unwrap()
}

pub const ABS: &str = "piece n>=0: n; piece n<0: -n";
pub const NEG: &str = "piece all: -n";
pub const SQUARE: &str = "piece all: n^2";
pub const MARCH: &str = "piece n>=1: n+1; piece n==0: 0; piece n<=-1: n-1";
pub const IDENTITY: &str = "piece all: n";

pub const CORPUS: [&str; 5] = [ABS, NEG, SQUARE, MARCH, IDENTITY];

#[derive(Clone, Copy, Debug)]
pub struct MapShape {
    /// Degree cap for every piece.
    pub degree: usize,
    /// Whether unbounded pieces may be constant (infinite fibers).
    pub constant_rays: bool,
    pub max_exceptions: usize,
}

impl Default for MapShape {
    fn default() -> Self {
        MapShape {
            degree: 2,
            constant_rays: true,
            max_exceptions: 2,
        }
    }
}

fn random_poly(rng: &mut StdRng, degree: usize, nonconstant: bool) -> Poly {
    loop {
        let d = rng.gen_range(0..=degree);
        let mut coeffs: Vec<i128> = (0..=d).map(|_| rng.gen_range(-3..=3)).collect();
        if d >= 2 {
            // keep higher terms small so compositions stay in range
            coeffs[d] = rng.gen_range(1..=2) * if rng.gen_bool(0.5) { 1 } else { -1 };
        }
        let p = Poly::from_coeffs(coeffs);
        if !nonconstant || !p.is_constant() {
            return p;
        }
    }
}

pub fn random_map(rng: &mut StdRng, shape: MapShape) -> IndexMap {
    let cuts = rng.gen_range(0..=2);
    let mut points: Vec<i64> = (0..cuts).map(|_| rng.gen_range(-10..=10)).collect();
    points.sort_unstable();
    points.dedup();
    let mut bounds: Vec<Option<i64>> = vec![None];
    bounds.extend(points.iter().map(|&c| Some(c)));
    let mut pieces = Vec::new();
    for i in 0..bounds.len() {
        let lo = bounds[i];
        let hi = bounds.get(i + 1).map(|b| b.map(|c| c - 1)).unwrap_or(None);
        let domain = Interval::new(lo, hi);
        let unbounded = !domain.is_bounded();
        let poly = random_poly(rng, shape.degree, unbounded && !shape.constant_rays);
        pieces.push(Piece::new(domain, poly));
    }
    let mut exceptions = BTreeMap::new();
    for _ in 0..rng.gen_range(0..=shape.max_exceptions) {
        exceptions.insert(rng.gen_range(-12..=12), rng.gen_range(-20..=20));
    }
    IndexMap::new(pieces, exceptions).expect("pieces partition the integers")
}

/// A permutation of ℤ moving only points of `[-radius, radius]`.
pub fn random_permutation(rng: &mut StdRng, radius: i64) -> IndexMap {
    let domain: Vec<i64> = (-radius..=radius).collect();
    let mut image = domain.clone();
    image.shuffle(rng);
    IndexMap::from_table(domain.into_iter().zip(image))
}

pub fn random_presentation(rng: &mut StdRng, shape: MapShape) -> Presentation {
    let g = rng.gen_range(1..=2);
    let maps = (0..g).map(|_| random_map(rng, shape)).collect();
    Presentation::unnamed(maps)
}

/// Single-generator presentations whose orbits escape: `a·n + b` with
/// `a ≥ 2`, `n + b` with `b ≥ 1`, or `n^2 + b`.
pub fn random_escape_presentation(rng: &mut StdRng) -> Presentation {
    let b: i128 = rng.gen_range(0..=3);
    let poly = match rng.gen_range(0..3) {
        0 => Poly::affine(rng.gen_range(2..=3), b),
        1 => Poly::affine(1, b + 1),
        _ => Poly::from_coeffs(vec![b, 0, 1]),
    };
    Presentation::unnamed(vec![IndexMap::from_poly(poly)])
}

/// Pattern with random symbols on a random subset of `[-radius, radius]`.
pub fn random_pattern(rng: &mut StdRng, k: u32, radius: i64) -> Pattern {
    let default = rng.gen_range(0..k);
    let mut table = Vec::new();
    for c in -radius..=radius {
        if rng.gen_bool(0.4) {
            table.push((c, rng.gen_range(0..k)));
        }
    }
    Pattern::from_table(k, default, table).unwrap()
}
