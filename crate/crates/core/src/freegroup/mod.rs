//! Words and automorphisms of the free group `F_n`.
//!
//! Composition is right-to-left throughout: `f.compose(&g)` applies `g`
//! first. Under this convention θ∘η has order 3, θ∘τ has order 4 and
//! `(a_2 a_3) ∘ τ = ε_1`, all checked by the test suite.

mod aut;
mod parse;
mod word;

pub use aut::{compose_named, Basis, FreeAut, NamedGenerator, Order, Permutation, DEFAULT_IMAGE_LIMIT};
pub use parse::{parse_generator_word, parse_generators};
pub use word::{Letter, Word};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FreeGroupError {
    #[error("generator index {index} out of range for rank {rank}")]
    IndexOutOfRange { index: usize, rank: usize },
    #[error("rank mismatch: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },
    #[error("{generator} requires rank >= {required}, got {rank}")]
    RankTooSmall { generator: &'static str, rank: usize, required: usize },
    #[error("invalid generator: {0}")]
    InvalidGenerator(String),
    #[error("image word of length {length} exceeds limit {limit}")]
    ImageOverflow { length: usize, limit: usize },
    #[error("parse error at token {position} ({token:?}): {message}")]
    Parse { position: usize, token: String, message: String },
}
