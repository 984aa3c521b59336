//! Iteration of a single map from a point: periodic and quasi-periodic
//! points, and the inverse of a periodic point inside its own orbit.

use std::collections::HashMap;

use crate::index_map::IndexMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PointKind {
    /// `h^period(a) = a`.
    Periodic { period: usize },
    /// `h^(tail+period)(a) = h^tail(a)` with `tail ≥ 1`.
    QuasiPeriodic { tail: usize, period: usize },
    /// No repetition within the budget, or arithmetic overflow.
    Undetermined,
}

pub fn classify_point(map: &IndexMap, a: i64, budget: usize) -> PointKind {
    let mut first_seen: HashMap<i64, usize> = HashMap::new();
    let mut x = a;
    for step in 0..=budget {
        if let Some(&m) = first_seen.get(&x) {
            return if m == 0 {
                PointKind::Periodic { period: step }
            } else {
                PointKind::QuasiPeriodic {
                    tail: m,
                    period: step - m,
                }
            };
        }
        first_seen.insert(x, step);
        match map.eval(x) {
            Ok(y) => x = y,
            Err(_) => return PointKind::Undetermined,
        }
    }
    PointKind::Undetermined
}

/// For a periodic point `w` of period `p`, the point `h^(p−1)(w)`, which
/// lies in the forward orbit of `w` and is sent to `w` by `h`.
pub fn periodic_inverse(map: &IndexMap, w: i64, budget: usize) -> Option<(usize, i64)> {
    let PointKind::Periodic { period } = classify_point(map, w, budget) else {
        return None;
    };
    let mut x = w;
    for _ in 0..period - 1 {
        x = map.eval(x).ok()?;
    }
    Some((period, x))
}
