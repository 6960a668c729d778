//! Embeddings: blowing up periodic orbits, block-cyclic period-n
//! matrices, Krieger's embedding conditions, membership in the entropy
//! sets and searches for intermediate subshifts.

mod between;
mod blowup;
mod bn;
mod oracle;
mod precond;

pub use between::{subshift_between_search, Require};
pub use blowup::{blow_up, periodic_orbits, predicted_census, BlowupSpec, MAX_SPLIT_VERTICES};
pub use bn::{build_bn, build_bn_matrix, is_irreducible_matrix};
pub use oracle::{membership, EntropySet, EntropySetQuery, Membership};
pub use precond::{
    census_sandwich, dominant_companion, embedding_preconditions, EmbedPreconditionReport, SandwichReport, MAX_BLOWUPS,
};
