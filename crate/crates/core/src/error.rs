use thiserror::Error;

use crate::latin::{Report, Triple};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("a partial latin square must contain at least one filled cell")]
    Empty,

    #[error("not a partial latin square: {0}")]
    NotPartialLatin(Report),

    #[error("not a latin square: {0}")]
    NotLatin(Report),

    #[error("order mismatch: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },

    #[error("value {value} out of range (must be < {bound})")]
    OutOfRange { value: u64, bound: u64 },

    #[error("group exponent {0} is not supported (must be <= 15)")]
    Exponent(u32),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("invalid map: {0}")]
    InvalidMap(String),

    #[error("triple {0} is not present in the square")]
    TripleNotInSquare(Triple),

    #[error("completion order {t} is below twice the order {n}")]
    CompletionOrder { n: usize, t: usize },

    #[error("invalid bipartite instance: {0}")]
    Bipartite(String),

    #[error("invariant violated during {stage}: {detail}")]
    Invariant { stage: &'static str, detail: String },

    #[error("symbol {symbol} occurs more than once")]
    RepeatedSymbol { symbol: u32 },

    #[error("fresh symbol pool exhausted (bound {bound})")]
    PoolExhausted { bound: u64 },

    #[error("condition {condition} fails for {detail}")]
    Condition {
        condition: &'static str,
        detail: String,
    },

    #[error("triples carry different symbols")]
    MixedSymbols,

    #[error("trade overlaps cell ({row}, {col}) already in the overlay")]
    OverlayCollision { row: u32, col: u32 },

    #[error("transversals are only defined for the untraded product square")]
    OverlayNotEmpty,

    #[error("cells do not form two intercalates: {0}")]
    NotIntercalate(String),

    #[error("input squares are not orthogonal: {0}")]
    NotOrthogonal(Report),

    #[error("order {order} exceeds the dense threshold {limit}; use lazy cell access")]
    DenseThreshold { order: usize, limit: usize },
}
