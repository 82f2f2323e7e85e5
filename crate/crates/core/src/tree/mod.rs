//! Finite simplicial trees, their barycentric subdivisions, and the fixed
//! point machinery: fixed sets, Helly checks, circumcentres, the triangle
//! and product criteria, and finite balls of Bass–Serre trees.

mod bass_serre;
mod circumcentre;
mod criterion;
mod graph;
mod isom;
pub mod random;
mod subtree;
mod symmetry;

use thiserror::Error;

use crate::closure::ClosureError;

pub use bass_serre::{
    bass_serre_ball, min_displacement, BallMap, BassSerreBall, Coset, Factor, FreeProductWord, DEFAULT_BALL_CAP,
};
pub use circumcentre::{circumcentre, circumcentre_ids};
pub use criterion::{
    group_fixed_points, product_criterion_check, triangle_criterion_check, triangle_criterion_check_with_cap,
    PairReport, ProductReport, ProductWitness, TriangleReport, DEFAULT_GROUP_CAP,
};
pub use graph::{Tree, TreePoint};
pub use isom::{fixed_points, fixed_set, fixed_set_group, Composed, PointMap, TreeIsom};
pub use subtree::{helly_check, HellyVerdict, Subtree};
pub use symmetry::SymmetryStructure;

#[derive(Debug, Error)]
pub enum TreeError {
    #[error("a tree needs at least one vertex")]
    Empty,
    #[error("not a tree: {0}")]
    NotATree(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("point {0} does not belong to this tree")]
    ForeignPoint(TreePoint),
    #[error("not an isometry: {0}")]
    NotAnIsometry(String),
    #[error("empty subtree")]
    EmptySubtree,
    #[error("not a subtree: {0}")]
    NotASubtree(String),
    #[error("empty point set")]
    EmptyPointSet,
    #[error("circumcentre lies inside a half-edge (diameter {diameter} half-edges is odd)")]
    OffGridCircumcentre { diameter: u32 },
    #[error("circumcentre mismatch: diametral midpoint {midpoint}, brute-force minimisers {minimisers:?}")]
    CircumcentreMismatch { midpoint: TreePoint, minimisers: Vec<TreePoint> },
    #[error("Fix(A{set}) is empty")]
    EmptyFixedSet { set: usize },
    #[error("generated group exceeds {cap} elements")]
    GroupTooLarge { cap: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("ball exceeds {cap} vertices")]
    BallTooLarge { cap: usize },
    #[error("image of ball vertex {vertex} leaves the ball; inner radius too large")]
    WindowTooLarge { vertex: usize },
    #[error("word position {position}: {message}")]
    WordParse { position: usize, message: String },
    #[error(transparent)]
    Closure(#[from] ClosureError),
}
