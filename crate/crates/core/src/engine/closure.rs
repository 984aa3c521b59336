use std::collections::{HashMap, VecDeque};

use super::presentation::{Presentation, Word};
use crate::error::MapError;
use crate::index_map::IndexMap;

#[derive(Clone, Debug)]
pub struct Element {
    pub word: Word,
    pub map: IndexMap,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClosureCause {
    Budget,
    /// A composition left the representable map class.
    Arithmetic(MapError),
}

#[derive(Clone, Debug)]
pub enum ClosureOutcome {
    /// Every element of `T`, identity first, each with a shortest word.
    Finite(Vec<Element>),
    Exceeded {
        partial: Vec<Element>,
        frontier: usize,
        cause: ClosureCause,
    },
}

impl ClosureOutcome {
    pub fn finite(&self) -> Option<&[Element]> {
        match self {
            ClosureOutcome::Finite(e) => Some(e),
            ClosureOutcome::Exceeded { .. } => None,
        }
    }

    pub fn elements(&self) -> &[Element] {
        match self {
            ClosureOutcome::Finite(e) => e,
            ClosureOutcome::Exceeded { partial, .. } => partial,
        }
    }
}

/// Breadth-first enumeration of `T` by left multiplication with the
/// generators in declaration order. Every word is reached this way, so a
/// finite result is closed under composition on either side.
pub fn closure(p: &Presentation, budget: usize) -> ClosureOutcome {
    let mut elements = vec![Element {
        word: Word::identity(),
        map: IndexMap::identity(),
    }];
    let mut seen: HashMap<IndexMap, usize> = HashMap::new();
    seen.insert(IndexMap::identity(), 0);
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        for g in 0..p.len() {
            let map = match p.map(g).compose(&elements[i].map, p.max_degree()) {
                Ok(m) => m,
                Err(e) => {
                    return ClosureOutcome::Exceeded {
                        frontier: queue.len() + 1,
                        partial: elements,
                        cause: ClosureCause::Arithmetic(e),
                    }
                }
            };
            if seen.contains_key(&map) {
                continue;
            }
            if elements.len() >= budget {
                return ClosureOutcome::Exceeded {
                    frontier: queue.len() + 1,
                    partial: elements,
                    cause: ClosureCause::Budget,
                };
            }
            seen.insert(map.clone(), elements.len());
            queue.push_back(elements.len());
            elements.push(Element {
                word: elements[i].word.then(g),
                map,
            });
        }
    }
    ClosureOutcome::Finite(elements)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_map;

    fn single(src: &str) -> Presentation {
        Presentation::new(vec![("phi".into(), parse_map(src).unwrap())]).unwrap()
    }

    #[test]
    fn idempotent_and_involution() {
        for src in ["piece n>=0: n; piece n<0: -n", "piece all: -n"] {
            let c = closure(&single(src), 1000);
            let elems = c.finite().expect("finite");
            assert_eq!(elems.len(), 2);
            assert!(elems[0].word.is_empty());
        }
    }

    #[test]
    fn square_powers_never_close() {
        let p = single("piece all: n^2").with_max_degree(64);
        match closure(&p, 6) {
            ClosureOutcome::Exceeded { partial, cause, .. } => {
                assert_eq!(cause, ClosureCause::Budget);
                assert_eq!(partial.len(), 6);
                for (k, e) in partial.iter().enumerate().skip(1).take(5) {
                    assert_eq!(e.map.eval(2).unwrap(), 1i64 << (1u32 << k));
                }
            }
            other => panic!("unexpected {other:?}"),
        }
        // default degree cap stops at n^8
        assert!(matches!(
            closure(&single("piece all: n^2"), 10),
            ClosureOutcome::Exceeded {
                cause: ClosureCause::Arithmetic(_),
                ..
            }
        ));
    }

    #[test]
    fn two_generators_form_a_group() {
        let p = Presentation::new(vec![
            (
                "a".into(),
                parse_map("piece all: n; except 0 -> 1; except 1 -> 0").unwrap(),
            ),
            (
                "b".into(),
                parse_map("piece all: n; except 1 -> 2; except 2 -> 1").unwrap(),
            ),
        ])
        .unwrap();
        assert_eq!(closure(&p, 100).finite().unwrap().len(), 6);
    }
}
