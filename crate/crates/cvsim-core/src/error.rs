//! Error type shared by all modules.

use core::fmt;

/// Convenience alias for fallible operations in this crate.
pub type Result<T> = core::result::Result<T, Error>;

/// Everything that can go wrong when assembling or analyzing Gaussian states.
///
/// Mixing a covariance matrix with a transform in a direct sum is not listed
/// here: the operations are generic over one kind at a time, so that misuse
/// is unrepresentable.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A mode count of zero was requested (matrices would be empty).
    ZeroModes,
    /// Two operands disagree on mode count where they must match.
    ModeCountMismatch {
        /// Mode count of the left / first operand.
        left: usize,
        /// Mode count of the right / second operand.
        right: usize,
    },
    /// A mode selection referenced a mode outside the target matrix.
    ModeIndexOutOfRange {
        /// Offending 1-based mode index.
        index: usize,
        /// Number of modes actually present.
        n_modes: usize,
    },
    /// A mode selection listed the same mode twice.
    DuplicateModeIndex {
        /// The repeated 1-based mode index.
        index: usize,
    },
    /// A mode ordering did not name every mode exactly once.
    NotAPermutation,
    /// A matrix that must be symmetric is not, beyond tolerance.
    NotSymmetric {
        /// Largest `|m[a][b] - m[b][a]|` found.
        max_asymmetry: f64,
    },
    /// An entry list does not have the `2n x 2n` length implied by `n_modes`.
    BadEntryCount {
        /// Number of entries expected.
        expected: usize,
        /// Number of entries provided.
        got: usize,
    },
    /// A candidate symplectic transform fails `S J S^T = J` beyond tolerance.
    NotSymplectic {
        /// Largest entry of `S J S^T - J`.
        residual: f64,
    },
    /// An operation restricted to small mode counts was given a larger state.
    UnsupportedModeCount {
        /// Mode count of the offending state.
        n_modes: usize,
        /// Largest supported mode count.
        max_supported: usize,
    },
    /// A state required to satisfy the uncertainty bound does not.
    NonPhysical {
        /// The physicality margin of the rejected state (see
        /// [`is_physical`](crate::gaussian::is_physical)); negative here.
        margin: f64,
    },
    /// The symplectic-eigenvalue discriminant came out negative beyond the
    /// rounding allowance, which no physical covariance matrix can produce.
    IndefiniteSpectrum {
        /// The offending discriminant value.
        discriminant: f64,
        /// The clamping tolerance it exceeded.
        tolerance: f64,
    },
    /// A scalar parameter was outside its documented domain.
    InvalidParameter {
        /// Name of the parameter.
        name: &'static str,
        /// The rejected value.
        value: f64,
    },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::ZeroModes => write!(f, "mode count must be at least 1"),
            Error::ModeCountMismatch { left, right } => {
                write!(f, "mode counts differ: {left} vs {right}")
            }
            Error::ModeIndexOutOfRange { index, n_modes } => {
                write!(f, "mode index {index} out of range (state has {n_modes} modes)")
            }
            Error::DuplicateModeIndex { index } => {
                write!(f, "mode index {index} selected more than once")
            }
            Error::NotAPermutation => write!(f, "mode ordering is not a permutation"),
            Error::NotSymmetric { max_asymmetry } => {
                write!(f, "matrix is not symmetric (max asymmetry {max_asymmetry:e})")
            }
            Error::BadEntryCount { expected, got } => {
                write!(f, "expected {expected} entries, got {got}")
            }
            Error::NotSymplectic { residual } => {
                write!(f, "matrix is not symplectic (residual {residual:e})")
            }
            Error::UnsupportedModeCount { n_modes, max_supported } => {
                write!(f, "{n_modes}-mode input unsupported (at most {max_supported} modes)")
            }
            Error::NonPhysical { margin } => {
                write!(f, "state violates the uncertainty bound (margin {margin:e})")
            }
            Error::IndefiniteSpectrum { discriminant, tolerance } => write!(
                f,
                "negative symplectic-eigenvalue discriminant {discriminant:e} \
                 (tolerance {tolerance:e}); input is not a physical covariance matrix"
            ),
            Error::InvalidParameter { name, value } => {
                write!(f, "parameter {name} = {value} outside its domain")
            }
        }
    }
}

impl core::error::Error for Error {}
