//! Verdicts on equicontinuity, sensitivity, distality and expansivity of
//! `(S, X^ℤ)`, decided on the index semigroup `T`.
//!
//! Equicontinuity holds iff every orbit `Tw` is finite, and fails iff the
//! system is sensitive. Distality is equicontinuity plus bijectivity of
//! every map in `T`. Expansivity holds iff `ℤ = TH` for a finite `H`.

pub mod pattern;
pub mod witness;

use std::cell::OnceCell;
use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::bijectivity::{bijectivity, BijectionCertificate, Bijectivity, BijectivityWitness};
use crate::engine::{
    closure, coverage, orbit_set, orbit_set_with, Budgets, ClosureCause, ClosureOutcome, Direction,
    EscapeCertificate, InfinityCertificate, OrbitResult, Presentation, Word,
};
use crate::index_map::IndexMap;
use crate::interval::Interval;
use crate::poly::Poly;

pub use pattern::{Pattern, PatternError};
pub use witness::{
    expansivity_witness, sensitivity_witness, ExpansivityWitness, SensitivityWitness, WitnessError,
};

pub const DEFAULT_PROBE_RANGE: (i64, i64) = (-8, 8);
pub const DEFAULT_MAX_H: i64 = 4;
pub const DEFAULT_WINDOW: (i64, i64) = (-20, 20);

/// Closure elements offered to orbit searches as extra escape candidates.
const ESCAPE_CANDIDATES: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Property {
    Equicontinuous,
    Sensitive,
    Distal,
    Expansive,
}

impl Property {
    pub const ALL: [Property; 4] = [
        Property::Equicontinuous,
        Property::Distal,
        Property::Sensitive,
        Property::Expansive,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Property::Equicontinuous => "equicontinuous",
            Property::Sensitive => "sensitive",
            Property::Distal => "distal",
            Property::Expansive => "expansive",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Yes,
    No,
    Unknown,
}

impl Outcome {
    pub fn negate(self) -> Outcome {
        match self {
            Outcome::Yes => Outcome::No,
            Outcome::No => Outcome::Yes,
            Outcome::Unknown => Outcome::Unknown,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::Yes => "yes",
            Outcome::No => "no",
            Outcome::Unknown => "unknown",
        }
    }
}

/// Linear unbounded pieces whose images run off towards `direction`; the
/// union of all images then has density at most `Σ 1/|slope|` there. When
/// that sum is below one, infinitely many coordinates on that side lie
/// outside every image and no finite `H` gives `ℤ = TH`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DensityCertificate {
    pub direction: Direction,
    /// `(generator, slope)`.
    pub contributions: Vec<(usize, i128)>,
}

impl DensityCertificate {
    /// `Σ 1/|slope|` as a reduced-free fraction `(numerator, denominator)`.
    pub fn density(&self) -> (BigInt, BigInt) {
        let mut num = BigInt::from(0);
        let mut den = BigInt::from(1);
        for &(_, slope) in &self.contributions {
            let s = BigInt::from(slope.unsigned_abs());
            num = num * &s + &den;
            den *= s;
        }
        (num, den)
    }

    pub fn below_one(&self) -> bool {
        let (num, den) = self.density();
        num < den
    }
}

/// `ℤ = TH`: `up_word` acts as `n ↦ n+1` on `[bound, ∞)`, `down_word` as
/// `n ↦ n−1` on `(−∞, −bound]`, and every point of `window ⊇ [−bound, bound]`
/// is reached from `H` by the recorded word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarchCertificate {
    pub h: Vec<i64>,
    pub bound: i64,
    pub up_word: Word,
    pub down_word: Word,
    pub window: Interval,
    pub reach: BTreeMap<i64, (Word, i64)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Evidence {
    /// Every element of `T`; each orbit has at most this many points.
    FiniteClosure {
        words: Vec<Word>,
    },
    /// The orbit of `probe` is infinite.
    Escape {
        probe: i64,
        certificate: EscapeCertificate,
    },
    NotBijective {
        generator: usize,
        witness: BijectivityWitness,
    },
    /// Finite closure and a bijection certificate per generator.
    Distal {
        words: Vec<Word>,
        bijections: Vec<BijectionCertificate>,
    },
    ImageDensity(DensityCertificate),
    March(MarchCertificate),
    Inconclusive {
        reason: String,
        probes: Vec<i64>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub property: Property,
    pub outcome: Outcome,
    pub evidence: Evidence,
    pub budgets: Budgets,
}

/// `[lo, hi]` plus every breakpoint and exception key of every generator.
pub fn default_probes(p: &Presentation, range: (i64, i64)) -> Vec<i64> {
    let mut set: BTreeSet<i64> = (range.0..=range.1).collect();
    for map in p.maps() {
        set.extend(map.breakpoints());
        set.extend(map.exceptions().keys().copied());
    }
    set.into_iter().collect()
}

/// Runs the checks on one presentation, sharing the closure computation.
pub struct Classifier<'a> {
    p: &'a Presentation,
    budgets: Budgets,
    closure: OnceCell<ClosureOutcome>,
}

impl<'a> Classifier<'a> {
    pub fn new(p: &'a Presentation, budgets: Budgets) -> Self {
        Classifier {
            p,
            budgets,
            closure: OnceCell::new(),
        }
    }

    pub fn presentation(&self) -> &Presentation {
        self.p
    }

    pub fn closure(&self) -> &ClosureOutcome {
        self.closure
            .get_or_init(|| closure(self.p, self.budgets.closure))
    }

    fn verdict(&self, property: Property, outcome: Outcome, evidence: Evidence) -> Verdict {
        Verdict {
            property,
            outcome,
            evidence,
            budgets: self.budgets,
        }
    }

    fn closure_words(&self) -> Option<Vec<Word>> {
        self.closure()
            .finite()
            .map(|e| e.iter().map(|e| e.word.clone()).collect())
    }

    fn closure_failure(&self) -> String {
        match self.closure() {
            ClosureOutcome::Finite(_) => String::new(),
            ClosureOutcome::Exceeded {
                partial,
                cause: ClosureCause::Budget,
                ..
            } => format!("closure exceeded {} maps", partial.len()),
            ClosureOutcome::Exceeded {
                cause: ClosureCause::Arithmetic(e),
                partial,
                ..
            } => format!("closure stopped after {} maps: {e}", partial.len()),
        }
    }

    pub fn check_equicontinuous(&self, probes: &[i64]) -> Verdict {
        let prop = Property::Equicontinuous;
        if let Some(words) = self.closure_words() {
            return self.verdict(prop, Outcome::Yes, Evidence::FiniteClosure { words });
        }
        let extra: Vec<_> = self
            .closure()
            .elements()
            .iter()
            .take(ESCAPE_CANDIDATES)
            .cloned()
            .collect();
        let mut inconclusive = Vec::new();
        for &probe in probes {
            match orbit_set_with(self.p, &[probe], self.budgets.orbit, &extra) {
                OrbitResult::Infinite(InfinityCertificate::Escape(certificate)) => {
                    return self.verdict(
                        prop,
                        Outcome::No,
                        Evidence::Escape { probe, certificate },
                    );
                }
                OrbitResult::Finite(_) => {}
                _ => inconclusive.push(probe),
            }
        }
        let reason = format!(
            "{}; no probe orbit certified infinite",
            self.closure_failure()
        );
        self.verdict(
            prop,
            Outcome::Unknown,
            Evidence::Inconclusive {
                reason,
                probes: inconclusive,
            },
        )
    }

    /// Logical negation of [`Self::check_equicontinuous`], same evidence.
    pub fn check_sensitive(&self, probes: &[i64]) -> Verdict {
        let eq = self.check_equicontinuous(probes);
        Verdict {
            property: Property::Sensitive,
            outcome: eq.outcome.negate(),
            ..eq
        }
    }

    pub fn check_distal(&self, probes: &[i64]) -> Verdict {
        let prop = Property::Distal;
        let eq = self.check_equicontinuous(probes);
        if eq.outcome == Outcome::No {
            return Verdict {
                property: prop,
                ..eq
            };
        }
        let mut bijections = Vec::new();
        let mut undecided = None;
        for g in 0..self.p.len() {
            match bijectivity(self.p.map(g)) {
                Bijectivity::Yes(cert) => bijections.push(cert),
                Bijectivity::No(witness) => {
                    return self.verdict(
                        prop,
                        Outcome::No,
                        Evidence::NotBijective {
                            generator: g,
                            witness,
                        },
                    )
                }
                Bijectivity::Unknown(reason) => {
                    undecided.get_or_insert(format!("{}: {reason}", self.p.name(g)));
                }
            }
        }
        match (eq.outcome, undecided, eq.evidence) {
            (Outcome::Yes, None, Evidence::FiniteClosure { words }) => {
                self.verdict(prop, Outcome::Yes, Evidence::Distal { words, bijections })
            }
            (_, Some(reason), _) => self.verdict(
                prop,
                Outcome::Unknown,
                Evidence::Inconclusive {
                    reason: format!("bijectivity undecided for {reason}"),
                    probes: Vec::new(),
                },
            ),
            (_, None, evidence) => Verdict {
                property: prop,
                outcome: Outcome::Unknown,
                evidence,
                budgets: self.budgets,
            },
        }
    }

    pub fn check_expansive(&self, max_h: i64, window: Interval) -> Verdict {
        let prop = Property::Expansive;
        if let Some(words) = self.closure_words() {
            return self.verdict(prop, Outcome::No, Evidence::FiniteClosure { words });
        }
        for direction in [Direction::Up, Direction::Down] {
            let cert = density_certificate(self.p, direction);
            if cert.below_one() {
                return self.verdict(prop, Outcome::No, Evidence::ImageDensity(cert));
            }
        }
        match self.march(max_h, window) {
            Ok(cert) => self.verdict(prop, Outcome::Yes, Evidence::March(cert)),
            Err(reason) => self.verdict(
                prop,
                Outcome::Unknown,
                Evidence::Inconclusive {
                    reason,
                    probes: Vec::new(),
                },
            ),
        }
    }

    fn march(&self, max_h: i64, window: Interval) -> Result<MarchCertificate, String> {
        let elements = self.closure().elements();
        let succ = Poly::affine(1, 1);
        let pred = Poly::affine(1, -1);
        let up = elements
            .iter()
            .find(|e| *e.map.right_ray_poly() == succ)
            .ok_or("no explored element of T is n+1 on a right ray")?;
        let down = elements
            .iter()
            .find(|e| *e.map.left_ray_poly() == pred)
            .ok_or("no explored element of T is n-1 on a left ray")?;
        let bound = up
            .map
            .right_ray_start()
            .max(-down.map.left_ray_end())
            .max(0);
        let (lo, hi) = (window.lo.unwrap_or(0), window.hi.unwrap_or(0));
        let window = Interval::bounded(lo.min(-bound), hi.max(bound));
        let budget = self.budgets.orbit;
        let covers = |h: &[i64]| coverage(self.p, h, window, budget);
        let mut h: Vec<i64> = (-max_h..=max_h).collect();
        let full = covers(&h);
        if !full.covered {
            return Err(format!(
                "H = [-{max_h}, {max_h}] misses {} points of {window}",
                full.missing.len()
            ));
        }
        let mut order = h.clone();
        order.sort_by_key(|&x| (std::cmp::Reverse(x.unsigned_abs()), std::cmp::Reverse(x)));
        let mut report = full;
        for x in order {
            let trial: Vec<i64> = h.iter().copied().filter(|&y| y != x).collect();
            if trial.is_empty() {
                continue;
            }
            let r = covers(&trial);
            if r.covered {
                h = trial;
                report = r;
            }
        }
        Ok(MarchCertificate {
            h,
            bound,
            up_word: up.word.clone(),
            down_word: down.word.clone(),
            window,
            reach: report.reach_words,
        })
    }
}

/// Density bound for the union of generator images towards `direction`.
pub fn density_certificate(p: &Presentation, direction: Direction) -> DensityCertificate {
    let mut contributions = Vec::new();
    for (g, map) in p.maps().iter().enumerate() {
        for piece in map.pieces() {
            if piece.poly.degree() != 1 {
                continue;
            }
            let slope = piece.poly.leading();
            let towards_up = |from_right: bool| (slope > 0) == from_right;
            let mut hits = 0;
            if piece.domain.hi.is_none() && towards_up(true) == (direction == Direction::Up) {
                hits += 1;
            }
            if piece.domain.lo.is_none() && towards_up(false) == (direction == Direction::Up) {
                hits += 1;
            }
            for _ in 0..hits {
                contributions.push((g, slope));
            }
        }
    }
    DensityCertificate {
        direction,
        contributions,
    }
}

/// `H = T·H₀` when the orbit of `H₀` is finite: configurations agreeing on
/// `H` have images agreeing on `H₀` under every element of `S`.
pub fn equicontinuity_modulus(
    p: &Presentation,
    h0: &[i64],
    budget: usize,
) -> Result<Vec<i64>, String> {
    match orbit_set(p, h0, budget) {
        OrbitResult::Finite(o) => Ok(o.points.keys().copied().collect()),
        OrbitResult::Infinite(_) => Err("the orbit of H0 is infinite".into()),
        OrbitResult::Unknown { reason, .. } => Err(reason),
    }
}

/// Whether every element of `T` listed by `words` is a distinct map and the
/// list is closed under left composition with each generator.
pub fn closure_is_closed(p: &Presentation, words: &[Word]) -> Result<(), String> {
    let maps: Vec<IndexMap> = words
        .iter()
        .map(|w| p.word_map(w))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    if !maps.iter().any(|m| *m == IndexMap::identity()) {
        return Err("identity missing".into());
    }
    for (i, m) in maps.iter().enumerate() {
        for g in 0..p.len() {
            let next = p
                .map(g)
                .compose(m, p.max_degree())
                .map_err(|e| e.to_string())?;
            if !maps.contains(&next) {
                return Err(format!(
                    "{} composed with {} is not listed",
                    p.name(g),
                    p.render_word(&words[i])
                ));
            }
        }
    }
    Ok(())
}
