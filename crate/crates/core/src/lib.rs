//! Decision procedures with certificates for dynamical properties of
//! generalized-shift transformation semigroups `(S, X^ℤ)`.
//!
//! A generalized shift `σ_φ` sends `(x_α)` to `(x_{φ(α)})` for an index map
//! `φ: ℤ → ℤ`. Since `σ_φ ∘ σ_η = σ_{η∘φ}`, every property of the phase
//! semigroup `S` is decided on the index semigroup `T = {φ : σ_φ ∈ S}`.

pub mod bijectivity;
pub mod classifier;
pub mod cli;
pub mod dsl;
pub mod engine;
pub mod error;
pub mod index_map;
pub mod interval;
pub mod oracle;
pub mod poly;
pub mod presentation_file;
pub mod report;
pub mod verify;

pub use error::{MapError, PartitionError};
pub use index_map::{IndexMap, Piece, PreimageSet, DEFAULT_MAX_DEGREE};
pub use interval::Interval;
pub use poly::Poly;
