//! Budgeted semigroup computations over a presentation: closures, forward
//! and inverse orbits, reachability with recovered words.

pub mod closure;
pub mod cycle;
pub mod escape;
pub mod orbit;
pub mod presentation;

pub use closure::{closure, ClosureCause, ClosureOutcome, Element};
pub use cycle::{classify_point, periodic_inverse, PointKind};
pub use escape::{
    check_escape, down_threshold, iterates_distinct, up_threshold, Direction, EscapeCertificate,
    EscapeFailure,
};
pub use orbit::{
    coverage, inverse_orbit, orbit, orbit_set, orbit_set_with, CoverageReport, FiniteOrbit,
    InfinityCertificate, OrbitResult, Reach,
};
pub use presentation::{Presentation, PresentationError, Word};

pub const DEFAULT_ORBIT_BUDGET: usize = 10_000;
pub const DEFAULT_CLOSURE_BUDGET: usize = 1_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Budgets {
    /// Points per orbit computation.
    pub orbit: usize,
    /// Maps per closure computation.
    pub closure: usize,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets {
            orbit: DEFAULT_ORBIT_BUDGET,
            closure: DEFAULT_CLOSURE_BUDGET,
        }
    }
}

impl Budgets {
    pub fn scaled(self, factor: f64) -> Budgets {
        let scale = |n: usize| ((n as f64) * factor).round().max(1.0) as usize;
        Budgets {
            orbit: scale(self.orbit),
            closure: scale(self.closure),
        }
    }
}
