use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::engine::{Presentation, Word};
use crate::error::MapError;
use crate::index_map::IndexMap;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PatternError {
    #[error("alphabet size must be at least 2, got {0}")]
    Alphabet(u32),
    #[error("symbol {symbol} is outside the alphabet of size {k}")]
    Symbol { symbol: u32, k: u32 },
    #[error("coordinate {coord} has infinitely many preimages; the shifted pattern is not finite")]
    InfiniteFiber { coord: i64 },
    #[error(transparent)]
    Map(#[from] MapError),
}

/// A point of `X^ℤ` with `X = {0, …, k−1}` that takes the `default` symbol
/// at every coordinate off a finite table. Entries equal to the default are
/// never stored, so derived equality is equality of points.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Pattern {
    k: u32,
    default: u32,
    #[serde(with = "pairs")]
    assignments: BTreeMap<i64, u32>,
}

// Integer map keys do not survive buffering inside tagged enums, so the
// table travels as a list of pairs.
mod pairs {
    use std::collections::BTreeMap;

    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(map: &BTreeMap<i64, u32>, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(map.iter())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<i64, u32>, D::Error> {
        Ok(Vec::<(i64, u32)>::deserialize(d)?.into_iter().collect())
    }
}

impl Pattern {
    pub fn constant(k: u32, default: u32) -> Result<Self, PatternError> {
        if k < 2 {
            return Err(PatternError::Alphabet(k));
        }
        if default >= k {
            return Err(PatternError::Symbol { symbol: default, k });
        }
        Ok(Pattern {
            k,
            default,
            assignments: BTreeMap::new(),
        })
    }

    pub fn from_table(
        k: u32,
        default: u32,
        table: impl IntoIterator<Item = (i64, u32)>,
    ) -> Result<Self, PatternError> {
        let mut p = Pattern::constant(k, default)?;
        for (coord, symbol) in table {
            p = p.with(coord, symbol)?;
        }
        Ok(p)
    }

    pub fn with(mut self, coord: i64, symbol: u32) -> Result<Self, PatternError> {
        if symbol >= self.k {
            return Err(PatternError::Symbol { symbol, k: self.k });
        }
        if symbol == self.default {
            self.assignments.remove(&coord);
        } else {
            self.assignments.insert(coord, symbol);
        }
        Ok(self)
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn default_symbol(&self) -> u32 {
        self.default
    }

    pub fn assignments(&self) -> &BTreeMap<i64, u32> {
        &self.assignments
    }

    pub fn get(&self, coord: i64) -> u32 {
        self.assignments
            .get(&coord)
            .copied()
            .unwrap_or(self.default)
    }

    /// The pattern with coordinate `coord` changed to `(x + 1) mod k`.
    pub fn flipped(&self, coord: i64) -> Pattern {
        let symbol = (self.get(coord) + 1) % self.k;
        self.clone().with(coord, symbol).expect("symbol in range")
    }

    pub fn agrees_on(&self, other: &Pattern, coords: &[i64]) -> bool {
        coords.iter().all(|&c| self.get(c) == other.get(c))
    }

    /// A coordinate where the two points differ, least in absolute value
    /// (negative first on ties), or `None` when they are equal.
    pub fn first_difference(&self, other: &Pattern) -> Option<i64> {
        let keys: BTreeSet<i64> = self
            .assignments
            .keys()
            .chain(other.assignments.keys())
            .copied()
            .collect();
        let mut best = keys
            .iter()
            .copied()
            .filter(|&c| self.get(c) != other.get(c))
            .min_by_key(|&c| (c.unsigned_abs(), c));
        if self.default != other.default {
            let off = std::iter::once(0i64)
                .chain((1..).flat_map(|j| [-j, j]))
                .find(|c| !keys.contains(c))
                .expect("finitely many keys");
            best = Some(match best {
                Some(b) if (b.unsigned_abs(), b) < (off.unsigned_abs(), off) => b,
                _ => off,
            });
        }
        best
    }

    /// `(σ_φ x)_α = x_{φ(α)}` where `φ` is the map of `word`.
    pub fn shifted_value(
        &self,
        p: &Presentation,
        word: &Word,
        coord: i64,
    ) -> Result<u32, MapError> {
        Ok(self.get(p.eval_word(word, coord)?))
    }

    /// `σ_φ x` as a pattern. Its support is the preimage of the support of
    /// `x`, so every assigned coordinate must have finitely many preimages.
    pub fn shift(&self, map: &IndexMap) -> Result<Pattern, PatternError> {
        let mut out = Pattern::constant(self.k, self.default)?;
        for (&coord, &symbol) in &self.assignments {
            let pre = map.preimages(coord)?;
            let points = pre.points().ok_or(PatternError::InfiniteFiber { coord })?;
            for a in points {
                out = out.with(a, symbol)?;
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_map;

    #[test]
    fn defaults_are_not_stored() {
        let a = Pattern::from_table(2, 0, [(3, 1), (4, 0)]).unwrap();
        let b = Pattern::constant(2, 0).unwrap().with(3, 1).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.flipped(3), Pattern::constant(2, 0).unwrap());
        assert!(Pattern::constant(1, 0).is_err());
        assert!(Pattern::constant(2, 2).is_err());
    }

    #[test]
    fn differences() {
        let x = Pattern::from_table(3, 0, [(5, 1), (-2, 2)]).unwrap();
        let y = Pattern::from_table(3, 0, [(5, 2), (-2, 2)]).unwrap();
        assert_eq!(x.first_difference(&y), Some(5));
        assert_eq!(x.first_difference(&x), None);
        let z = Pattern::from_table(3, 1, [(0, 0)]).unwrap();
        let zero = Pattern::constant(3, 0).unwrap();
        assert_eq!(z.first_difference(&zero), Some(-1));
    }

    #[test]
    fn shift_is_pullback() {
        let square = parse_map("piece all: n^2").unwrap();
        let x = Pattern::from_table(2, 0, [(4, 1), (3, 1)]).unwrap();
        let y = x.shift(&square).unwrap();
        assert_eq!(y, Pattern::from_table(2, 0, [(-2, 1), (2, 1)]).unwrap());
        let constant = parse_map("piece all: 4").unwrap();
        assert!(matches!(
            x.shift(&constant),
            Err(PatternError::InfiniteFiber { coord: 4 })
        ));
    }
}
