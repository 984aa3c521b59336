use std::fmt;

use num_bigint::BigInt;
use thiserror::Error;

use crate::error::MapError;
use crate::index_map::{IndexMap, DEFAULT_MAX_DEGREE};

/// A composition of generators. `letters[0]` is the outermost map, applied
/// last; the empty word is the identity.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    letters: Vec<usize>,
}

impl Word {
    pub fn identity() -> Self {
        Word::default()
    }

    pub fn from_letters(letters: Vec<usize>) -> Self {
        Word { letters }
    }

    pub fn letter(g: usize) -> Self {
        Word { letters: vec![g] }
    }

    /// `g^k`.
    pub fn power(g: usize, k: usize) -> Self {
        Word {
            letters: vec![g; k],
        }
    }

    pub fn letters(&self) -> &[usize] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// `g ∘ self`.
    pub fn then(&self, g: usize) -> Word {
        let mut letters = Vec::with_capacity(self.letters.len() + 1);
        letters.push(g);
        letters.extend_from_slice(&self.letters);
        Word { letters }
    }

    /// `self ∘ g`.
    pub fn after(&self, g: usize) -> Word {
        let mut letters = self.letters.clone();
        letters.push(g);
        Word { letters }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Word) -> Word {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Word { letters }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PresentationError {
    #[error("generator name `{0}` is used twice")]
    DuplicateName(String),
    #[error("`{0}` is not a valid generator name")]
    InvalidName(String),
    #[error("unknown generator `{0}` in word")]
    UnknownLetter(String),
    #[error("malformed word `{0}`")]
    MalformedWord(String),
}

/// Named generators of the index semigroup `T`; the identity is implicit.
#[derive(Clone, Debug)]
pub struct Presentation {
    names: Vec<String>,
    maps: Vec<IndexMap>,
    max_degree: usize,
}

impl Presentation {
    pub fn new(generators: Vec<(String, IndexMap)>) -> Result<Self, PresentationError> {
        let mut names = Vec::with_capacity(generators.len());
        let mut maps = Vec::with_capacity(generators.len());
        for (name, map) in generators {
            if !valid_name(&name) {
                return Err(PresentationError::InvalidName(name));
            }
            if names.contains(&name) {
                return Err(PresentationError::DuplicateName(name));
            }
            names.push(name);
            maps.push(map);
        }
        Ok(Presentation {
            names,
            maps,
            max_degree: DEFAULT_MAX_DEGREE,
        })
    }

    /// Generators named `g0, g1, …`.
    pub fn unnamed(maps: Vec<IndexMap>) -> Self {
        let names = (0..maps.len()).map(|i| format!("g{i}")).collect();
        Presentation {
            names,
            maps,
            max_degree: DEFAULT_MAX_DEGREE,
        }
    }

    pub fn with_max_degree(mut self, max_degree: usize) -> Self {
        self.max_degree = max_degree;
        self
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    pub fn name(&self, g: usize) -> &str {
        &self.names[g]
    }

    pub fn map(&self, g: usize) -> &IndexMap {
        &self.maps[g]
    }

    pub fn maps(&self) -> &[IndexMap] {
        &self.maps
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Same generators in a different presentation prefix, for monotonicity
    /// comparisons.
    pub fn extended(&self, extra: Vec<(String, IndexMap)>) -> Result<Self, PresentationError> {
        let mut all: Vec<(String, IndexMap)> = self
            .names
            .iter()
            .cloned()
            .zip(self.maps.iter().cloned())
            .collect();
        all.extend(extra);
        Ok(Presentation::new(all)?.with_max_degree(self.max_degree))
    }

    pub fn eval_word(&self, word: &Word, n: i64) -> Result<i64, MapError> {
        word.letters
            .iter()
            .rev()
            .try_fold(n, |acc, &g| self.maps[g].eval(acc))
    }

    pub fn eval_word_big(&self, word: &Word, n: &BigInt) -> BigInt {
        word.letters
            .iter()
            .rev()
            .fold(n.clone(), |acc, &g| self.maps[g].eval_big(&acc))
    }

    /// The index map a word denotes.
    pub fn word_map(&self, word: &Word) -> Result<IndexMap, MapError> {
        word.letters
            .iter()
            .rev()
            .try_fold(IndexMap::identity(), |acc, &g| {
                self.maps[g].compose(&acc, self.max_degree)
            })
    }

    /// `id`, `phi^4`, `phi.psi^2`.
    pub fn render_word(&self, word: &Word) -> String {
        if word.is_empty() {
            return "id".into();
        }
        let mut parts = Vec::new();
        let mut i = 0;
        while i < word.letters.len() {
            let g = word.letters[i];
            let run = word.letters[i..].iter().take_while(|&&x| x == g).count();
            if run == 1 {
                parts.push(self.names[g].clone());
            } else {
                parts.push(format!("{}^{run}", self.names[g]));
            }
            i += run;
        }
        parts.join(".")
    }

    pub fn parse_word(&self, text: &str) -> Result<Word, PresentationError> {
        let text = text.trim();
        if text == "id" || text.is_empty() {
            return Ok(Word::identity());
        }
        let mut letters = Vec::new();
        for part in text.split('.') {
            let (name, count) = match part.split_once('^') {
                Some((name, k)) => (
                    name,
                    k.parse::<usize>()
                        .map_err(|_| PresentationError::MalformedWord(text.into()))?,
                ),
                None => (part, 1),
            };
            let g = self
                .index_of(name)
                .ok_or_else(|| PresentationError::UnknownLetter(name.into()))?;
            letters.extend(std::iter::repeat_n(g, count));
        }
        Ok(Word { letters })
    }
}

fn valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
        && name != "id"
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "id");
        }
        let parts: Vec<String> = self.letters.iter().map(|g| format!("g{g}")).collect();
        write!(f, "{}", parts.join("."))
    }
}
