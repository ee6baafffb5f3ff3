//! A laboratory for pair-encoding compression.
//!
//! The crate implements greedy byte-pair-encoding training, the even/odd
//! partial-merge encoder, packing-based upper bounds with checkable
//! certificates, exact branch-and-bound solvers for full and partial merge
//! sequences, adversarial instance families, and a max-cut-based hardness
//! reduction, all over one immutable [`Text`] representation.

pub mod bounds;
pub mod bpe;
pub mod error;
pub mod evenodd;
pub mod exact;
pub mod families;
pub mod model;
pub mod reduction;
pub mod text;

pub use error::{Error, Result};
pub use text::{
    decode, Alphabet, AlphabetEntry, MergeRule, MergeSequence, Pair, PartialSequence,
    PartialStep, Symbol, SymbolOrigin, Text,
};
