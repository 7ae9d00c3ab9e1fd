//! Embedding of pairs of orthogonal partial latin squares into pairs of
//! orthogonal latin squares.
//!
//! The construction works over the elementary abelian 2-group on `[2^M]`
//! (bitwise XOR). A partial latin square `P` with distinct symbols is placed
//! in a `2^M x 2^M` symbol array `A`, its orthogonal partner `Q` is completed
//! to a latin square `B` of order `2^M`, and the two are combined into a pair
//! of orthogonal latin squares of order `2^{2M}`. Repeated symbols of `P` are
//! restored afterwards by switching pairs of intercalates that leave the
//! orthogonality intact.
//!
//! Module map:
//!
//! * [`group`]: the XOR group and the pair encoding of product indices.
//! * [`latin`]: partial and full latin squares, permutations and every
//!   verification predicate.
//! * [`completion`]: bipartite matching and completion of a partial latin
//!   square of order `n` into a latin square of any order `t >= 2n`.
//! * [`product`]: the product squares and their transversals.
//! * [`trades`]: the double-intercalate trades and the overlay that records
//!   them.
//! * [`pipeline`]: the end-to-end embedding.

pub mod completion;
pub mod error;
pub mod group;
pub mod latin;
pub mod pipeline;
pub mod product;
pub mod trades;

pub use error::{Error, Result};
pub use group::{xor_mul, Group, GroupElement, PairIndex};
pub use latin::{Cell, LatinSquare, PartialLatinSquare, Permutation, Report, Triple, Violation};
pub use pipeline::{embed_pair, embed_pair_basic, Embedding, EmbeddingReport};
pub use product::{ProductPair, SymbolArray};
pub use trades::{TradeOverlay, TradeSpec};
