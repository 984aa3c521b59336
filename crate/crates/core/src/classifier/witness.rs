//! Constructive witnesses: a sensitivity flip inside any neighborhood, and
//! the separating word behind an expansivity certificate.

use std::collections::{BTreeMap, VecDeque};

use thiserror::Error;

use super::pattern::Pattern;
use crate::engine::{coverage, Presentation, Word};
use crate::interval::Interval;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WitnessError {
    #[error("the orbit of {v} stays inside the protected set")]
    OrbitExhausted { v: i64 },
    #[error("budget of {budget} points exhausted before leaving the protected set")]
    Budget { budget: usize },
    #[error("the two patterns are equal")]
    EqualPatterns,
    #[error("coordinate {w} is not reached from H within the budget")]
    Unreached { w: i64 },
}

/// `y` agrees with `x` off `beta` (in particular on `protected`), yet
/// `σ_φ x` and `σ_φ y` differ at `v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SensitivityWitness {
    pub v: i64,
    pub word: Word,
    pub beta: i64,
    pub protected: Vec<i64>,
    pub x: Pattern,
    pub y: Pattern,
}

/// `word(h) = w`, and `x`, `y` differ at `w`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpansivityWitness {
    pub word: Word,
    pub h: i64,
    pub w: i64,
    pub x: Pattern,
    pub y: Pattern,
}

/// Breadth-first over nonempty words from `v`, stopping at the first image
/// outside `protected`; the flipped symbol is `(x_β + 1) mod k`.
pub fn sensitivity_witness(
    p: &Presentation,
    v: i64,
    x: &Pattern,
    protected: &[i64],
    budget: usize,
) -> Result<SensitivityWitness, WitnessError> {
    let mut seen: BTreeMap<i64, Word> = BTreeMap::new();
    let mut queue: VecDeque<(i64, Word)> = VecDeque::from([(v, Word::identity())]);
    while let Some((t, word)) = queue.pop_front() {
        for g in 0..p.len() {
            let Ok(s) = p.map(g).eval(t) else { continue };
            if seen.contains_key(&s) {
                continue;
            }
            let next = word.then(g);
            if !protected.contains(&s) {
                return Ok(SensitivityWitness {
                    v,
                    word: next,
                    beta: s,
                    protected: protected.to_vec(),
                    x: x.clone(),
                    y: x.flipped(s),
                });
            }
            if seen.len() >= budget {
                return Err(WitnessError::Budget { budget });
            }
            seen.insert(s, next.clone());
            queue.push_back((s, next));
        }
    }
    Err(WitnessError::OrbitExhausted { v })
}

/// Finds `h ∈ H` and a shortest word sending it to the first coordinate
/// where `x` and `y` differ. `H` is searched in ascending order.
pub fn expansivity_witness(
    p: &Presentation,
    h: &[i64],
    x: &Pattern,
    y: &Pattern,
    budget: usize,
) -> Result<ExpansivityWitness, WitnessError> {
    let w = x.first_difference(y).ok_or(WitnessError::EqualPatterns)?;
    let mut seeds = h.to_vec();
    seeds.sort_unstable();
    seeds.dedup();
    let rep = coverage(p, &seeds, Interval::point(w), budget);
    let (word, h) = rep
        .reach_words
        .get(&w)
        .cloned()
        .ok_or(WitnessError::Unreached { w })?;
    Ok(ExpansivityWitness {
        word,
        h,
        w,
        x: x.clone(),
        y: y.clone(),
    })
}

impl SensitivityWitness {
    /// Re-checks the witness by evaluation only.
    pub fn check(&self, p: &Presentation) -> Result<(), String> {
        let beta = p.eval_word(&self.word, self.v).map_err(|e| e.to_string())?;
        if beta != self.beta {
            return Err(format!(
                "word sends {} to {beta}, not {}",
                self.v, self.beta
            ));
        }
        if self.word.is_empty() {
            return Err("the word must be nonempty".into());
        }
        if self.protected.contains(&self.beta) {
            return Err(format!("{} lies in the protected set", self.beta));
        }
        if self.x.first_difference(&self.y) != Some(self.beta)
            || self.y != self.x.flipped(self.beta)
        {
            return Err(format!("y is not x flipped at {}", self.beta));
        }
        if !self.x.agrees_on(&self.y, &self.protected) {
            return Err("y leaves the neighborhood of x".into());
        }
        let sx = self
            .x
            .shifted_value(p, &self.word, self.v)
            .map_err(|e| e.to_string())?;
        let sy = self
            .y
            .shifted_value(p, &self.word, self.v)
            .map_err(|e| e.to_string())?;
        if sx == sy {
            return Err(format!("shifted patterns agree at {}", self.v));
        }
        Ok(())
    }
}

impl ExpansivityWitness {
    pub fn check(&self, p: &Presentation, h: &[i64]) -> Result<(), String> {
        if !h.contains(&self.h) {
            return Err(format!("{} is not in H", self.h));
        }
        let w = p.eval_word(&self.word, self.h).map_err(|e| e.to_string())?;
        if w != self.w {
            return Err(format!("word sends {} to {w}, not {}", self.h, self.w));
        }
        let sx = self
            .x
            .shifted_value(p, &self.word, self.h)
            .map_err(|e| e.to_string())?;
        let sy = self
            .y
            .shifted_value(p, &self.word, self.h)
            .map_err(|e| e.to_string())?;
        if sx == sy {
            return Err(format!("shifted patterns agree at {}", self.h));
        }
        Ok(())
    }
}
