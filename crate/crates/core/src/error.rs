use thiserror::Error;

/// Failures of exact map arithmetic.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MapError {
    #[error("polynomial degree {degree} exceeds the configured maximum {max}")]
    DegreeExceeded { degree: usize, max: usize },
    #[error("value at coordinate {at} does not fit in a 64-bit coordinate")]
    Overflow { at: i64 },
    #[error("polynomial coefficient overflow")]
    CoefficientOverflow,
    #[error("root bound {bound} exceeds the integer scan limit")]
    ScanLimit { bound: i128 },
}

/// A piece list that does not describe a total map on ℤ.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PartitionError {
    #[error("no pieces given")]
    NoPieces,
    #[error("piece {0} has an empty domain")]
    EmptyPiece(String),
    #[error("pieces overlap at {0}")]
    Overlap(i64),
    #[error("no piece covers {0}")]
    Gap(i64),
    #[error("no piece covers the negative ray")]
    MissingNegativeRay,
    #[error("no piece covers the positive ray")]
    MissingPositiveRay,
}
