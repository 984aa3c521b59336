use std::collections::{BTreeMap, BTreeSet, VecDeque};

use super::closure::Element;
use super::escape::{down_threshold, up_threshold, Direction, EscapeCertificate};
use super::presentation::{Presentation, Word};
use crate::interval::Interval;

/// How a point of an orbit was reached. For forward orbits
/// `word(origin) = point`; for inverse orbits `word(point) = origin`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reach {
    pub word: Word,
    pub origin: i64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FiniteOrbit {
    pub points: BTreeMap<i64, Reach>,
}

impl FiniteOrbit {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, n: i64) -> bool {
        self.points.contains_key(&n)
    }

    pub fn point_set(&self) -> BTreeSet<i64> {
        self.points.keys().copied().collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InfinityCertificate {
    Escape(EscapeCertificate),
    /// `generator` is constant `target` on the unbounded `interval`, and
    /// `target_word(target) = base`: the whole interval lies in `T⁻¹ base`.
    ConstantFiber {
        generator: usize,
        interval: Interval,
        target: i64,
        target_word: Word,
        base: i64,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OrbitResult {
    Finite(FiniteOrbit),
    Infinite(InfinityCertificate),
    Unknown {
        explored: usize,
        frontier: usize,
        reason: String,
    },
}

impl OrbitResult {
    pub fn finite(&self) -> Option<&FiniteOrbit> {
        match self {
            OrbitResult::Finite(o) => Some(o),
            _ => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, OrbitResult::Infinite(_))
    }
}

/// `Tw`.
pub fn orbit(p: &Presentation, w: i64, budget: usize) -> OrbitResult {
    orbit_set(p, &[w], budget)
}

struct Escapes {
    up: Vec<(Word, i64)>,
    down: Vec<(Word, i64)>,
}

impl Escapes {
    fn new(p: &Presentation, extra: &[Element]) -> Self {
        let mut up = Vec::new();
        let mut down = Vec::new();
        let generators = (0..p.len()).map(|g| (Word::letter(g), p.map(g)));
        let candidates = generators.chain(
            extra
                .iter()
                .filter(|e| e.word.len() > 1)
                .map(|e| (e.word.clone(), &e.map)),
        );
        for (word, map) in candidates {
            if let Ok(Some(b)) = up_threshold(map) {
                up.push((word.clone(), b));
            }
            if let Ok(Some(b)) = down_threshold(map) {
                down.push((word, b));
            }
        }
        Escapes { up, down }
    }

    fn find(&self, t: i64, reach: &Reach) -> Option<EscapeCertificate> {
        let cert = |word: &Word, bound: i64, direction| EscapeCertificate {
            word: word.clone(),
            base: reach.origin,
            seed: t,
            seed_word: reach.word.clone(),
            bound,
            direction,
        };
        if let Some((w, b)) = self.up.iter().find(|(_, b)| t >= *b) {
            return Some(cert(w, *b, Direction::Up));
        }
        self.down
            .iter()
            .find(|(_, b)| t <= *b)
            .map(|(w, b)| cert(w, *b, Direction::Down))
    }
}

/// `T·H` under one shared budget. Stops with an escape certificate as soon
/// as a discovered point lies on a generator's escape ray.
pub fn orbit_set(p: &Presentation, h: &[i64], budget: usize) -> OrbitResult {
    orbit_set_with(p, h, budget, &[])
}

/// As [`orbit_set`], also trying the maps of `extra` (typically a prefix of
/// the closure) as escape candidates.
pub fn orbit_set_with(
    p: &Presentation,
    h: &[i64],
    budget: usize,
    extra: &[Element],
) -> OrbitResult {
    let escapes = Escapes::new(p, extra);
    let mut points: BTreeMap<i64, Reach> = BTreeMap::new();
    let mut queue = VecDeque::new();
    for &w in h {
        if let std::collections::btree_map::Entry::Vacant(e) = points.entry(w) {
            e.insert(Reach {
                    word: Word::identity(),
                    origin: w,
                });
            queue.push_back(w);
        }
    }
    while let Some(t) = queue.pop_front() {
        let reach = points[&t].clone();
        if let Some(cert) = escapes.find(t, &reach) {
            return OrbitResult::Infinite(InfinityCertificate::Escape(cert));
        }
        for g in 0..p.len() {
            let s = match p.map(g).eval(t) {
                Ok(s) => s,
                Err(e) => {
                    return OrbitResult::Unknown {
                        explored: points.len(),
                        frontier: queue.len() + 1,
                        reason: format!("{e} while applying {} to {t}", p.name(g)),
                    }
                }
            };
            if points.contains_key(&s) {
                continue;
            }
            if points.len() >= budget {
                return OrbitResult::Unknown {
                    explored: points.len(),
                    frontier: queue.len() + 1,
                    reason: format!("orbit budget of {budget} points exhausted"),
                };
            }
            points.insert(
                s,
                Reach {
                    word: reach.word.then(g),
                    origin: reach.origin,
                },
            );
            queue.push_back(s);
        }
    }
    OrbitResult::Finite(FiniteOrbit { points })
}

/// `T⁻¹w`: closure of `{w}` under generator preimages.
pub fn inverse_orbit(p: &Presentation, w: i64, budget: usize) -> OrbitResult {
    let mut points: BTreeMap<i64, Reach> = BTreeMap::new();
    points.insert(
        w,
        Reach {
            word: Word::identity(),
            origin: w,
        },
    );
    let mut queue = VecDeque::from([w]);
    while let Some(t) = queue.pop_front() {
        let word = points[&t].word.clone();
        for g in 0..p.len() {
            let pre = match p.map(g).preimages(t) {
                Ok(pre) => pre,
                Err(e) => {
                    return OrbitResult::Unknown {
                        explored: points.len(),
                        frontier: queue.len() + 1,
                        reason: format!("{e} while inverting {} at {t}", p.name(g)),
                    }
                }
            };
            if let Some(iv) = pre.intervals.iter().find(|iv| !iv.is_bounded()) {
                return OrbitResult::Infinite(InfinityCertificate::ConstantFiber {
                    generator: g,
                    interval: *iv,
                    target: t,
                    target_word: word,
                    base: w,
                });
            }
            if pre.count().is_some_and(|c| c > budget as u128) {
                return OrbitResult::Unknown {
                    explored: points.len(),
                    frontier: queue.len() + 1,
                    reason: format!("preimage of {t} under {} exceeds the budget", p.name(g)),
                };
            }
            for s in pre.points().unwrap_or_default() {
                if points.contains_key(&s) {
                    continue;
                }
                if points.len() >= budget {
                    return OrbitResult::Unknown {
                        explored: points.len(),
                        frontier: queue.len() + 1,
                        reason: format!("orbit budget of {budget} points exhausted"),
                    };
                }
                points.insert(
                    s,
                    Reach {
                        word: word.after(g),
                        origin: w,
                    },
                );
                queue.push_back(s);
            }
        }
    }
    OrbitResult::Finite(FiniteOrbit { points })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverageReport {
    pub h: Vec<i64>,
    pub window: Interval,
    pub covered: bool,
    pub missing: Vec<i64>,
    /// Window point ↦ `(φ, h)` with `φ(h)` equal to the point.
    pub reach_words: BTreeMap<i64, (Word, i64)>,
}

/// Forward reachability from `h`, checked against a bounded window. Points
/// outside the window are explored too, up to `budget` points in total.
pub fn coverage(p: &Presentation, h: &[i64], window: Interval, budget: usize) -> CoverageReport {
    assert!(window.is_bounded(), "coverage window must be bounded");
    // point ↦ (parent and letter, origin); words are rebuilt only for the
    // window so a long march stays linear
    let mut seen: BTreeMap<i64, (Option<(i64, usize)>, i64)> = BTreeMap::new();
    let mut queue = VecDeque::new();
    let mut hits = 0;
    for &w in h {
        if seen.insert(w, (None, w)).is_none() {
            hits += usize::from(window.contains(w));
            queue.push_back(w);
        }
    }
    let target = window.len().unwrap_or(0) as usize;
    'bfs: while let Some(t) = queue.pop_front() {
        let origin = seen[&t].1;
        for g in 0..p.len() {
            if hits >= target || seen.len() >= budget {
                break 'bfs;
            }
            let Ok(s) = p.map(g).eval(t) else { continue };
            if seen.contains_key(&s) {
                continue;
            }
            seen.insert(s, (Some((t, g)), origin));
            hits += usize::from(window.contains(s));
            queue.push_back(s);
        }
    }
    let mut reach_words = BTreeMap::new();
    let mut missing = Vec::new();
    for n in window.iter() {
        let Some(&(_, origin)) = seen.get(&n) else {
            missing.push(n);
            continue;
        };
        let mut letters = Vec::new();
        let mut at = n;
        while let Some((parent, g)) = seen[&at].0 {
            letters.push(g);
            at = parent;
        }
        reach_words.insert(n, (Word::from_letters(letters), origin));
    }
    CoverageReport {
        h: h.to_vec(),
        window,
        covered: missing.is_empty(),
        missing,
        reach_words,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_map;
    use crate::engine::escape::check_escape;

    fn single(src: &str) -> Presentation {
        Presentation::new(vec![("phi".into(), parse_map(src).unwrap())]).unwrap()
    }

    const ABS: &str = "piece n>=0: n; piece n<0: -n";
    const NEG: &str = "piece all: -n";
    const SQUARE: &str = "piece all: n^2";
    const MARCH: &str = "piece n>=1: n+1; piece n==0: 0; piece n<=-1: n-1";

    fn points(r: &OrbitResult) -> Vec<i64> {
        r.finite()
            .expect("finite orbit")
            .points
            .keys()
            .copied()
            .collect()
    }

    #[test]
    fn square_orbits() {
        let p = single(SQUARE);
        let OrbitResult::Infinite(InfinityCertificate::Escape(cert)) = orbit(&p, 2, 100) else {
            panic!("expected an escape certificate");
        };
        assert_eq!(check_escape(&cert, &p), Ok(()));
        let it = cert.iterates(&p, 4);
        assert_eq!(it, [2, 4, 16, 256].map(num_bigint::BigInt::from));
        assert_eq!(points(&orbit(&p, 1, 100)), vec![1]);
    }

    #[test]
    fn absolute_value_orbit() {
        let p = single(ABS);
        let r = orbit(&p, -5, 100);
        assert_eq!(points(&r), vec![-5, 5]);
        let reach = &r.finite().unwrap().points[&5];
        assert_eq!(p.eval_word(&reach.word, reach.origin).unwrap(), 5);
        assert_eq!(points(&inverse_orbit(&p, -1, 100)), vec![-1]);
    }

    #[test]
    fn inverse_orbits() {
        assert_eq!(points(&inverse_orbit(&single(NEG), 3, 100)), vec![-3, 3]);
        assert_eq!(
            points(&inverse_orbit(&single("piece all: n"), 9, 100)),
            vec![9]
        );
        let r = inverse_orbit(&single("piece n>=0: 7; piece n<0: n"), 7, 100);
        assert!(matches!(
            r,
            OrbitResult::Infinite(InfinityCertificate::ConstantFiber { .. })
        ));
    }

    #[test]
    fn march_orbit_sets() {
        let p = single(MARCH);
        assert_eq!(points(&orbit_set(&p, &[0], 100)), vec![0]);
        let OrbitResult::Infinite(InfinityCertificate::Escape(cert)) = orbit_set(&p, &[1], 100)
        else {
            panic!("expected escape");
        };
        assert_eq!((cert.seed, cert.bound), (1, 1));
        assert_eq!(check_escape(&cert, &p), Ok(()));
    }

    #[test]
    fn two_step_escape_needs_extra_candidates() {
        let p = single("piece all: -2n");
        assert!(matches!(orbit(&p, 1, 20), OrbitResult::Unknown { .. }));
        let extra = crate::engine::closure(&p, 4).elements().to_vec();
        let OrbitResult::Infinite(InfinityCertificate::Escape(cert)) =
            orbit_set_with(&p, &[1], 20, &extra)
        else {
            panic!("expected escape");
        };
        assert_eq!(cert.word.len(), 2);
        assert_eq!(check_escape(&cert, &p), Ok(()));
    }

    #[test]
    fn march_coverage() {
        let p = single(MARCH);
        let rep = coverage(&p, &[-1, 0, 1], Interval::bounded(-20, 20), 1000);
        assert!(rep.covered);
        let (word, h) = &rep.reach_words[&5];
        assert_eq!((p.render_word(word).as_str(), *h), ("phi^4", 1));
        for (&n, (word, h)) in &rep.reach_words {
            assert_eq!(p.eval_word(word, *h).unwrap(), n);
        }
    }

    #[test]
    fn square_coverage_misses_three() {
        let p = single(SQUARE);
        let rep = coverage(&p, &[1, 2], Interval::bounded(-5, 5), 1000);
        assert!(!rep.covered);
        assert!(rep.missing.contains(&3));
        let rep = coverage(&p, &[-1, 0, 1], Interval::bounded(-1, 1), 1000);
        assert!(rep.covered);
        assert!(rep.reach_words.values().all(|(w, _)| w.is_empty()));
    }
}
