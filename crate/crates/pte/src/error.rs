use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed textual input: bad characters, letters beyond the declared
    /// alphabet, alphabets outside 1..=26, or a square that does not parse.
    #[error("parse error: {0}")]
    Parse(String),

    /// Maximal regularity is meaningless on a one-letter alphabet: every
    /// degree column is trivially constant, so the answer would be infinite.
    #[error("maximal regularity is unbounded over a single-letter alphabet")]
    UnboundedRegularity,

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("affine map requires a nonzero scale")]
    ZeroScale,

    #[error("integer overflow: {0}")]
    Overflow(String),

    #[error("invalid latin square: {0}")]
    InvalidSquare(String),

    #[error("latin square is not normalized (first column must read A, B, C, ...)")]
    NotNormalized,

    #[error("alphabet mismatch: square of size {square}, word over {word} letters")]
    AlphabetMismatch { square: usize, word: usize },

    #[error("search budget must be positive")]
    EmptyBudget,

    #[error("swap precondition failed: {0}")]
    SwapPrecondition(String),

    #[error("piece {index} ({word}) is not {regularity}-regular")]
    SplitPiece {
        index: usize,
        word: String,
        regularity: i32,
    },

    #[error("invalid spans: {0}")]
    InvalidSpans(String),

    /// Inputs to a combining operation (concat, shuffle) disagree in
    /// alphabet or length.
    #[error("incompatible inputs: {0}")]
    Mismatch(String),

    #[error("construction out of range: {0}")]
    Construction(String),

    #[error("invalid search: {0}")]
    InvalidSearch(String),

    #[error("instance too large: {0}")]
    TooLarge(String),

    #[error("invalid density: {0}")]
    Density(String),

    #[error("pouring needs a nonempty word")]
    EmptyPour,

    #[error("sampled density needs an explicit derivative bound")]
    MissingDerivativeBound,

    #[error("disparity {disparity:.3e} exceeds the guaranteed bound {bound:.3e}")]
    BoundExceeded { disparity: f64, bound: f64 },
}
