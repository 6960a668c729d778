//! Exact symbolic dynamics for shifts of finite type and sofic shifts.
//!
//! Shifts are given by adjacency matrices, forbidden words or labeled
//! graphs; entropies are exact algebraic numbers; sliding block codes are
//! finite tables. On top of that sit the decompositions of factor codes
//! and the entropy-set oracles for embeddings.

pub mod algebra;
pub mod codes;
pub mod embed;
pub mod error;
pub mod factor;
pub mod graph;
pub mod json;
pub mod shift;
pub mod symbols;

pub use algebra::{AlgebraicReal, EntropyValue, IntPoly, PeriodicCensus};
pub use error::{Error, ErrorClass, Result};
pub use shift::{ShiftKind, ShiftSpace, StructureFacts};
pub use symbols::{word, Alphabet, Symbol, Word};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/intro.md")]
    mod intro {}
    #[doc = include_str!("../../../book/src/shifts.md")]
    mod shifts {}
    #[doc = include_str!("../../../book/src/entropy.md")]
    mod entropy {}
    #[doc = include_str!("../../../book/src/codes.md")]
    mod codes {}
    #[doc = include_str!("../../../book/src/factor.md")]
    mod factor {}
    #[doc = include_str!("../../../book/src/embed.md")]
    mod embed {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
