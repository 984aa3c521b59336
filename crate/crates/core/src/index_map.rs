//! Index maps `φ: ℤ → ℤ`: a piecewise integer-polynomial backbone with a
//! finite table of exceptions on top.

use std::collections::BTreeMap;
use std::fmt;
use std::hash::{Hash, Hasher};

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::error::{MapError, PartitionError};
use crate::interval::Interval;
use crate::poly::{Poly, Segment};

pub const DEFAULT_MAX_DEGREE: usize = 4;

/// Bounded pieces at most this long are expanded point by point when their
/// composed polynomial would exceed the degree limit.
const POINTWISE_LIMIT: u128 = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Piece {
    pub domain: Interval,
    pub poly: Poly,
}

impl Piece {
    pub fn new(domain: Interval, poly: Poly) -> Self {
        Piece { domain, poly }
    }
}

/// A total map on ℤ. Values are kept in canonical form: pieces ordered and
/// maximal, singleton pieces folded into exceptions, no exception equal to
/// the backbone value.
///
/// Equality is semantic (agreement at every integer), so two maps built
/// from different piece lists compare equal whenever they denote the same
/// function.
#[derive(Clone, Debug)]
pub struct IndexMap {
    pieces: Vec<Piece>,
    exceptions: BTreeMap<i64, i64>,
}

/// Exact preimage of a value: sorted, disjoint, non-adjacent intervals.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct PreimageSet {
    pub intervals: Vec<Interval>,
}

impl PreimageSet {
    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.intervals.iter().all(Interval::is_bounded)
    }

    pub fn contains(&self, n: i64) -> bool {
        self.intervals.iter().any(|iv| iv.contains(n))
    }

    /// Number of points, `None` when infinite.
    pub fn count(&self) -> Option<u128> {
        self.intervals.iter().map(Interval::len).sum()
    }

    /// Every point, when the set is finite.
    pub fn points(&self) -> Option<Vec<i64>> {
        if !self.is_finite() {
            return None;
        }
        Some(self.intervals.iter().flat_map(|iv| iv.iter()).collect())
    }

    fn from_unsorted(mut ivs: Vec<Interval>) -> Self {
        ivs.sort_by_key(|iv| (iv.lo.is_some(), iv.lo));
        let mut out: Vec<Interval> = Vec::new();
        for iv in ivs {
            match out.last_mut() {
                Some(last)
                    if last.hi.is_none()
                        || iv.lo.is_none()
                        || last.hi.unwrap() >= iv.lo.unwrap() - 1 =>
                {
                    last.hi = match (last.hi, iv.hi) {
                        (Some(a), Some(b)) => Some(a.max(b)),
                        _ => None,
                    };
                }
                _ => out.push(iv),
            }
        }
        PreimageSet { intervals: out }
    }
}

impl IndexMap {
    /// Builds a map from pieces that must partition ℤ, plus exceptions.
    pub fn new(
        mut pieces: Vec<Piece>,
        exceptions: BTreeMap<i64, i64>,
    ) -> Result<Self, PartitionError> {
        if pieces.is_empty() {
            return Err(PartitionError::NoPieces);
        }
        for p in &pieces {
            if p.domain.is_empty() {
                return Err(PartitionError::EmptyPiece(p.domain.to_string()));
            }
        }
        pieces.sort_by_key(|p| (p.domain.lo.is_some(), p.domain.lo));
        if pieces[0].domain.lo.is_some() {
            return Err(PartitionError::MissingNegativeRay);
        }
        for w in pieces.windows(2) {
            let (a, b) = (&w[0].domain, &w[1].domain);
            let (Some(end), Some(start)) = (a.hi, b.lo) else {
                // an earlier piece reaching +inf, or a second piece from -inf
                return Err(PartitionError::Overlap(b.lo.or(a.lo).unwrap_or(0)));
            };
            if start <= end {
                return Err(PartitionError::Overlap(start));
            }
            if start > end + 1 {
                return Err(PartitionError::Gap(end + 1));
            }
        }
        if pieces.last().unwrap().domain.hi.is_some() {
            return Err(PartitionError::MissingPositiveRay);
        }
        Ok(IndexMap { pieces, exceptions }.normalized())
    }

    pub fn identity() -> Self {
        IndexMap::from_poly(Poly::var())
    }

    pub fn from_poly(poly: Poly) -> Self {
        IndexMap {
            pieces: vec![Piece::new(Interval::ALL, poly)],
            exceptions: BTreeMap::new(),
        }
    }

    /// The identity backbone overridden on a finite table.
    pub fn from_table(table: impl IntoIterator<Item = (i64, i64)>) -> Self {
        IndexMap {
            pieces: vec![Piece::new(Interval::ALL, Poly::var())],
            exceptions: table.into_iter().collect(),
        }
        .normalized()
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn exceptions(&self) -> &BTreeMap<i64, i64> {
        &self.exceptions
    }

    pub fn max_degree(&self) -> usize {
        self.pieces
            .iter()
            .map(|p| p.poly.degree())
            .max()
            .unwrap_or(0)
    }

    /// Finite piece endpoints and exception keys: the points where the
    /// definition of the map changes.
    pub fn breakpoints(&self) -> Vec<i64> {
        let mut pts: Vec<i64> = self
            .pieces
            .iter()
            .flat_map(|p| [p.domain.lo, p.domain.hi])
            .flatten()
            .chain(self.exceptions.keys().copied())
            .collect();
        pts.sort_unstable();
        pts.dedup();
        pts
    }

    fn piece_index(&self, n: i64) -> usize {
        // first piece whose hi is >= n
        self.pieces
            .partition_point(|p| p.domain.hi.is_some_and(|h| h < n))
    }

    pub fn piece_at(&self, n: i64) -> &Piece {
        &self.pieces[self.piece_index(n)]
    }

    /// Value of the piecewise backbone, ignoring exceptions.
    pub fn backbone(&self, n: i64) -> Result<i64, MapError> {
        let poly = &self.piece_at(n).poly;
        let v = match poly.eval(n) {
            Some(v) => v,
            None => poly
                .eval_big(&BigInt::from(n))
                .to_i128()
                .ok_or(MapError::Overflow { at: n })?,
        };
        i64::try_from(v).map_err(|_| MapError::Overflow { at: n })
    }

    pub fn eval(&self, n: i64) -> Result<i64, MapError> {
        match self.exceptions.get(&n) {
            Some(&v) => Ok(v),
            None => self.backbone(n),
        }
    }

    /// Exact evaluation at an arbitrary integer.
    pub fn eval_big(&self, n: &BigInt) -> BigInt {
        if let Some(small) = n.to_i64() {
            if let Some(&v) = self.exceptions.get(&small) {
                return BigInt::from(v);
            }
        }
        let idx = self
            .pieces
            .partition_point(|p| p.domain.hi.is_some_and(|h| BigInt::from(h) < *n));
        self.pieces[idx].poly.eval_big(n)
    }

    /// Pieces split at exception keys, with every exception turned into a
    /// constant singleton piece. Together they partition ℤ.
    pub fn pure_pieces(&self) -> Vec<Piece> {
        let mut out = Vec::with_capacity(self.pieces.len() + 2 * self.exceptions.len());
        for piece in &self.pieces {
            let mut start = piece.domain.lo;
            let inside = self.exceptions.range((
                piece
                    .domain
                    .lo
                    .map_or(std::ops::Bound::Unbounded, std::ops::Bound::Included),
                piece
                    .domain
                    .hi
                    .map_or(std::ops::Bound::Unbounded, std::ops::Bound::Included),
            ));
            for (&key, &value) in inside {
                let before = Interval::new(start, Some(key - 1));
                if !before.is_empty() {
                    out.push(Piece::new(before, piece.poly.clone()));
                }
                out.push(Piece::new(
                    Interval::point(key),
                    Poly::constant(value as i128),
                ));
                start = Some(key + 1);
            }
            let rest = Interval::new(start, piece.domain.hi);
            if !rest.is_empty() {
                out.push(Piece::new(rest, piece.poly.clone()));
            }
        }
        out
    }

    /// `self ∘ inner`: apply `inner` first.
    pub fn compose(&self, inner: &IndexMap, max_degree: usize) -> Result<IndexMap, MapError> {
        let outer = self.pure_pieces();
        let mut pieces = Vec::new();
        for gp in &inner.pieces {
            for seg in gp.poly.monotone_segments(gp.domain)? {
                self.compose_segment(&outer, &gp.poly, &seg, max_degree, &mut pieces)?;
            }
        }
        let mut exceptions = BTreeMap::new();
        for (&key, &mid) in &inner.exceptions {
            exceptions.insert(key, self.eval(mid)?);
        }
        pieces.sort_by_key(|p: &Piece| (p.domain.lo.is_some(), p.domain.lo));
        Ok(IndexMap { pieces, exceptions }.normalized())
    }

    fn compose_segment(
        &self,
        outer: &[Piece],
        inner: &Poly,
        seg: &Segment,
        max_degree: usize,
        out: &mut Vec<Piece>,
    ) -> Result<(), MapError> {
        for fp in outer {
            let Some(cell) = inner.preimage_on_segment(seg, &fp.domain) else {
                continue;
            };
            let degree = fp.poly.degree() * inner.degree();
            if degree <= max_degree {
                out.push(Piece::new(cell, fp.poly.compose(inner)?));
                continue;
            }
            match cell.len() {
                Some(len) if len <= POINTWISE_LIMIT => {
                    for n in cell.iter() {
                        let v = self.eval(inner_value(inner, n)?)?;
                        out.push(Piece::new(Interval::point(n), Poly::constant(v as i128)));
                    }
                }
                _ => {
                    return Err(MapError::DegreeExceeded {
                        degree,
                        max: max_degree,
                    })
                }
            }
        }
        Ok(())
    }

    /// Decides whether the two maps agree on all of ℤ. On disagreement the
    /// error carries a point where they differ.
    pub fn equal(&self, other: &IndexMap) -> Result<(), i64> {
        let a = self.pure_pieces();
        let b = other.pure_pieces();
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            let cell = a[i].domain.intersect(&b[j].domain);
            if !cell.is_empty() && a[i].poly != b[j].poly {
                if let Some(n) = first_disagreement(&a[i].poly, &b[j].poly, &cell) {
                    return Err(n);
                }
            }
            // advance whichever piece ends first
            match (a[i].domain.hi, b[j].domain.hi) {
                (Some(x), Some(y)) if x < y => i += 1,
                (Some(x), Some(y)) if y < x => j += 1,
                (Some(_), None) => i += 1,
                (None, Some(_)) => j += 1,
                _ => {
                    i += 1;
                    j += 1;
                }
            }
        }
        Ok(())
    }

    /// Exact set `{n : self(n) = v}`.
    pub fn preimages(&self, v: i64) -> Result<PreimageSet, MapError> {
        let target = Interval::point(v);
        let mut found = Vec::new();
        for piece in self.pure_pieces() {
            for seg in piece.poly.monotone_segments(piece.domain)? {
                if let Some(iv) = piece.poly.preimage_on_segment(&seg, &target) {
                    found.push(iv);
                }
            }
        }
        Ok(PreimageSet::from_unsorted(found))
    }

    /// Polynomial in force on `(−∞, a]` for all sufficiently negative `a`.
    pub fn left_ray_poly(&self) -> &Poly {
        &self.pieces[0].poly
    }

    /// Polynomial in force on `[a, ∞)` for all sufficiently large `a`.
    pub fn right_ray_poly(&self) -> &Poly {
        &self.pieces.last().unwrap().poly
    }

    /// Least `b` such that the map agrees with its right-ray polynomial on
    /// `[b, ∞)` with no exceptions there.
    pub fn right_ray_start(&self) -> i64 {
        let piece_start = self.pieces.last().unwrap().domain.lo.unwrap_or(i64::MIN);
        let exc = self.exceptions.keys().next_back().map(|k| k + 1);
        exc.map_or(piece_start, |e| e.max(piece_start))
    }

    /// Greatest `b` such that the map agrees with its left-ray polynomial on
    /// `(−∞, b]` with no exceptions there.
    pub fn left_ray_end(&self) -> i64 {
        let piece_end = self.pieces[0].domain.hi.unwrap_or(i64::MAX);
        let exc = self.exceptions.keys().next().map(|k| k - 1);
        exc.map_or(piece_end, |e| e.min(piece_end))
    }

    /// Canonical form, iterated to a fixed point.
    fn normalized(mut self) -> Self {
        loop {
            let before = (self.pieces.len(), self.exceptions.len());
            self.merge_equal_neighbours();
            self.absorb_agreeing_pieces();
            self.demote_singletons();
            self.drop_vacuous_exceptions();
            if (self.pieces.len(), self.exceptions.len()) == before {
                return self;
            }
        }
    }

    fn merge_equal_neighbours(&mut self) {
        let mut out: Vec<Piece> = Vec::with_capacity(self.pieces.len());
        for p in self.pieces.drain(..) {
            match out.last_mut() {
                Some(last) if last.poly == p.poly => last.domain.hi = p.domain.hi,
                _ => out.push(p),
            }
        }
        self.pieces = out;
    }

    /// Folds a bounded piece into a neighbour whose polynomial already takes
    /// the same values on it.
    fn absorb_agreeing_pieces(&mut self) {
        let mut i = 0;
        while i < self.pieces.len() {
            let p = &self.pieces[i];
            if !p.domain.is_bounded() || self.pieces.len() == 1 {
                i += 1;
                continue;
            }
            let agrees = |q: &Poly| first_disagreement(&p.poly, q, &p.domain).is_none();
            if i > 0 && agrees(&self.pieces[i - 1].poly) {
                let hi = p.domain.hi;
                self.pieces[i - 1].domain.hi = hi;
                self.pieces.remove(i);
                continue;
            }
            if i + 1 < self.pieces.len() && agrees(&self.pieces[i + 1].poly) {
                let lo = p.domain.lo;
                self.pieces[i + 1].domain.lo = lo;
                self.pieces.remove(i);
                continue;
            }
            i += 1;
        }
    }

    /// A single-point piece becomes an exception over its left neighbour
    /// (right neighbour for the first piece).
    fn demote_singletons(&mut self) {
        let mut i = 0;
        while i < self.pieces.len() && self.pieces.len() > 1 {
            let d = self.pieces[i].domain;
            let (Some(a), Some(b)) = (d.lo, d.hi) else {
                i += 1;
                continue;
            };
            if a != b {
                i += 1;
                continue;
            }
            if let Some(v) = self.pieces[i]
                .poly
                .eval(a)
                .and_then(|v| i64::try_from(v).ok())
            {
                self.exceptions.entry(a).or_insert(v);
            } else {
                i += 1;
                continue;
            }
            if i > 0 {
                self.pieces[i - 1].domain.hi = Some(a);
            } else {
                self.pieces[i + 1].domain.lo = Some(a);
            }
            self.pieces.remove(i);
        }
    }

    fn drop_vacuous_exceptions(&mut self) {
        let keys: Vec<i64> = self.exceptions.keys().copied().collect();
        for k in keys {
            if self.backbone(k).ok() == self.exceptions.get(&k).copied() {
                self.exceptions.remove(&k);
            }
        }
    }

    /// Multi-line DSL rendering; parses back to an equal map.
    pub fn to_dsl(&self) -> String {
        self.dsl_lines().join("\n")
    }

    /// Single-line DSL rendering with `;` separators.
    pub fn to_dsl_inline(&self) -> String {
        self.dsl_lines().join("; ")
    }

    fn dsl_lines(&self) -> Vec<String> {
        let mut lines: Vec<String> = self
            .pieces
            .iter()
            .map(|p| format!("piece {}: {}", condition(&p.domain), p.poly))
            .collect();
        lines.extend(
            self.exceptions
                .iter()
                .map(|(k, v)| format!("except {k} -> {v}")),
        );
        lines
    }
}

fn inner_value(poly: &Poly, n: i64) -> Result<i64, MapError> {
    poly.eval(n)
        .and_then(|v| i64::try_from(v).ok())
        .ok_or(MapError::Overflow { at: n })
}

fn condition(d: &Interval) -> String {
    match (d.lo, d.hi) {
        (None, None) => "all".into(),
        (Some(a), None) => format!("n>={a}"),
        (None, Some(b)) => format!("n<={b}"),
        (Some(a), Some(b)) if a == b => format!("n=={a}"),
        (Some(a), Some(b)) => format!("{a}<=n<={b}"),
    }
}

/// A point of `cell` where `p` and `q` differ. Distinct polynomials of degree
/// at most `d` agree on at most `d` points, so scanning `d + 1` points of the
/// cell (or all of a shorter cell) decides agreement.
fn first_disagreement(p: &Poly, q: &Poly, cell: &Interval) -> Option<i64> {
    if p == q {
        return None;
    }
    let needed = p.degree().max(q.degree()) as i64 + 1;
    let candidates: Vec<i64> = match (cell.lo, cell.hi) {
        (Some(a), Some(b)) => (a..=b.min(a.saturating_add(needed - 1))).collect(),
        (Some(a), None) => (a..a + needed).collect(),
        (None, Some(b)) => ((b - needed + 1)..=b).rev().collect(),
        (None, None) => (0..needed).collect(),
    };
    candidates.into_iter().find(|&n| p.cmp_at_poly(q, n))
}

impl Poly {
    /// True when the two polynomials take different values at `n`.
    fn cmp_at_poly(&self, other: &Poly, n: i64) -> bool {
        match (self.eval(n), other.eval(n)) {
            (Some(a), Some(b)) => a != b,
            _ => {
                let x = BigInt::from(n);
                self.eval_big(&x) != other.eval_big(&x)
            }
        }
    }
}

impl PartialEq for IndexMap {
    fn eq(&self, other: &Self) -> bool {
        self.equal(other).is_ok()
    }
}

impl Eq for IndexMap {}

impl Hash for IndexMap {
    // Only semantic invariants: the two ray polynomials and a few values.
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.left_ray_poly().hash(state);
        self.right_ray_poly().hash(state);
        for n in -16..=16 {
            self.eval(n).ok().hash(state);
        }
    }
}

impl fmt::Display for IndexMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_dsl_inline())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn abs() -> IndexMap {
        IndexMap::new(
            vec![
                Piece::new(Interval::at_least(0), Poly::var()),
                Piece::new(Interval::at_most(-1), Poly::affine(-1, 0)),
            ],
            BTreeMap::new(),
        )
        .unwrap()
    }

    fn square() -> IndexMap {
        IndexMap::from_poly(Poly::from_coeffs(vec![0, 0, 1]))
    }

    fn march() -> IndexMap {
        IndexMap::new(
            vec![
                Piece::new(Interval::at_least(1), Poly::affine(1, 1)),
                Piece::new(Interval::point(0), Poly::zero()),
                Piece::new(Interval::at_most(-1), Poly::affine(1, -1)),
            ],
            BTreeMap::new(),
        )
        .unwrap()
    }

    #[test]
    fn eval_examples() {
        assert_eq!(abs().eval(-3), Ok(3));
        assert_eq!(square().eval(3), Ok(9));
        assert_eq!(IndexMap::identity().eval(7), Ok(7));
        assert_eq!(march().eval(0), Ok(0));
        assert_eq!(march().eval(-4), Ok(-5));
    }

    #[test]
    fn exceptions_take_priority() {
        let m = IndexMap::from_table([(2, 9)]);
        assert_eq!(m.eval(2), Ok(9));
        assert_eq!(m.eval(3), Ok(3));
    }

    #[test]
    fn partition_errors() {
        let gap = IndexMap::new(
            vec![
                Piece::new(Interval::at_most(0), Poly::var()),
                Piece::new(Interval::at_least(2), Poly::var()),
            ],
            BTreeMap::new(),
        );
        assert_eq!(gap.unwrap_err(), PartitionError::Gap(1));
        let overlap = IndexMap::new(
            vec![
                Piece::new(Interval::at_most(1), Poly::var()),
                Piece::new(Interval::at_least(1), Poly::var()),
            ],
            BTreeMap::new(),
        );
        assert_eq!(overlap.unwrap_err(), PartitionError::Overlap(1));
        let no_right = IndexMap::new(
            vec![Piece::new(Interval::at_most(1), Poly::var())],
            BTreeMap::new(),
        );
        assert_eq!(no_right.unwrap_err(), PartitionError::MissingPositiveRay);
    }

    #[test]
    fn compose_examples() {
        let d = DEFAULT_MAX_DEGREE;
        assert_eq!(abs().compose(&abs(), d).unwrap(), abs());
        let neg = IndexMap::from_poly(Poly::affine(-1, 0));
        let id = neg.compose(&neg, d).unwrap();
        assert_eq!(id, IndexMap::identity());
        assert_eq!(id.pieces().len(), 1);
        assert!(id.exceptions().is_empty());
        let q = square().compose(&square(), d).unwrap();
        assert_eq!(q.pieces().len(), 1);
        for n in -10..=10 {
            assert_eq!(q.eval(n).unwrap(), n.pow(4));
        }
    }

    #[test]
    fn compose_rejects_degree_overflow() {
        let q = square().compose(&square(), 4).unwrap();
        let err = q.compose(&square(), 4).unwrap_err();
        assert_eq!(err, MapError::DegreeExceeded { degree: 8, max: 4 });
    }

    #[test]
    fn compose_handles_exceptions_on_both_sides() {
        let f = IndexMap::from_table([(4, -7), (0, 1)]);
        let g = IndexMap::new(
            vec![Piece::new(Interval::ALL, Poly::from_coeffs(vec![0, 0, 1]))],
            [(5, 4)].into_iter().collect(),
        )
        .unwrap();
        let h = f.compose(&g, 4).unwrap();
        for n in -30..=30 {
            assert_eq!(
                h.eval(n).unwrap(),
                f.eval(g.eval(n).unwrap()).unwrap(),
                "n={n}"
            );
        }
    }

    #[test]
    fn equality_examples() {
        assert!(abs().compose(&abs(), 4).unwrap().equal(&abs()).is_ok());
        let n = square().equal(&abs()).unwrap_err();
        assert_ne!(square().eval(n), abs().eval(n));
        // the distinguishing point 3 also separates them
        assert_ne!(square().eval(3), abs().eval(3));

        let vacuous = IndexMap::new(
            vec![Piece::new(Interval::ALL, Poly::var())],
            [(5, 5)].into_iter().collect(),
        )
        .unwrap();
        assert!(vacuous.exceptions().is_empty());
        assert_eq!(vacuous, IndexMap::identity());
    }

    #[test]
    fn equality_across_representations() {
        // the same map written with a singleton piece and with an exception
        let other = IndexMap::new(
            vec![
                Piece::new(Interval::at_least(0), Poly::affine(1, 1)),
                Piece::new(Interval::at_most(-1), Poly::affine(1, -1)),
            ],
            [(0, 0)].into_iter().collect(),
        )
        .unwrap();
        assert_eq!(other, march());
    }

    #[test]
    fn preimage_examples() {
        assert_eq!(abs().preimages(3).unwrap().points().unwrap(), vec![-3, 3]);
        assert!(square().preimages(3).unwrap().is_empty());
        assert_eq!(march().preimages(0).unwrap().points().unwrap(), vec![0]);
        // brute force over a window for the piecewise map
        for v in -20..=20 {
            let pre = march().preimages(v).unwrap();
            for n in -50..=50 {
                assert_eq!(pre.contains(n), march().eval(n).unwrap() == v);
            }
        }
    }

    #[test]
    fn constant_piece_gives_unbounded_preimage() {
        let m = IndexMap::new(
            vec![
                Piece::new(Interval::at_most(-1), Poly::var()),
                Piece::new(Interval::at_least(0), Poly::constant(3)),
            ],
            BTreeMap::new(),
        )
        .unwrap();
        let pre = m.preimages(3).unwrap();
        assert!(!pre.is_finite());
        assert_eq!(pre.intervals, vec![Interval::at_least(0)]);
    }

    #[test]
    fn canonical_form_demotes_singleton_piece() {
        let m = march();
        assert_eq!(m.pieces().len(), 2);
        assert_eq!(m.exceptions().get(&0), Some(&0));
        assert_eq!(m.right_ray_start(), 1);
        assert_eq!(m.left_ray_end(), -1);
    }

    #[test]
    fn dsl_rendering() {
        assert_eq!(abs().to_dsl_inline(), "piece n<=-1: -n; piece n>=0: n");
        assert_eq!(IndexMap::identity().to_dsl(), "piece all: n");
    }
}
