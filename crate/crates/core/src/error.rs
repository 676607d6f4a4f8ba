//! Error type shared across the crate.

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong when validating inputs or running a
/// computation.
///
/// Numerical routines in this crate prefer returning infinities over erroring
/// when a quantity is merely unbounded (e.g. a reconstruction assigns zero
/// mass to a symbol the source can produce), so most variants here describe
/// malformed inputs rather than runtime surprises.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// A probability vector with no entries.
    #[error("probability vector is empty")]
    EmptyDistribution,

    /// An entry that cannot be a probability (negative, NaN, or infinite).
    #[error("invalid probability {value} at index {index}")]
    InvalidProbability { index: usize, value: f64 },

    /// Entries do not sum to 1 and renormalization was not requested.
    #[error("probabilities sum to {sum}, expected 1 (within 1e-9)")]
    NotNormalized { sum: f64 },

    /// All entries are zero, so the vector cannot be normalized.
    #[error("probability vector has zero total mass")]
    ZeroMassTotal,

    /// Two vectors that must share an alphabet have different lengths.
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    /// The weight distribution kills every symbol the source can produce.
    #[error("weight distribution has no overlap with the source support")]
    DisjointSupport,

    /// A scalar parameter is outside its documented domain.
    #[error("invalid parameter {name}: {value}")]
    InvalidParameter { name: &'static str, value: f64 },

    /// A message count or alphabet size that makes no sense (e.g. zero).
    #[error("invalid size for {name}: {value}")]
    InvalidSize { name: &'static str, value: usize },

    /// Exhaustive search refuses to run: the partition space is too large.
    #[error(
        "exhaustive search rejected: alphabet {alphabet} with {message_count} messages \
         exceeds the search budget (alphabet must be <= {max_alphabet}, \
         message_count^alphabet <= {max_assignments})"
    )]
    InstanceTooLarge {
        alphabet: usize,
        message_count: usize,
        max_alphabet: usize,
        max_assignments: u64,
    },

    /// An information-spectrum convolution grew past the safety cap.
    #[error("information spectrum too large: {atoms} atoms exceeds the cap of {cap}")]
    SpectrumTooLarge { atoms: usize, cap: usize },

    /// A symbol the source can produce has zero mass under the reference
    /// distribution, so its information value is infinite.
    #[error("symbol {symbol} has positive source mass but zero reference mass")]
    InfiniteInformation { symbol: usize },

    /// Text that should describe a probability vector could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),

    /// A computed result violated one of the crate's internal orderings.
    #[error("internal invariant violated: {0}")]
    InvariantViolation(String),
}
