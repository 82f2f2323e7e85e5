//! Mechanical certification of the triangle criterion for fixed points on
//! trees, applied to `Aut(F_n)` and `SL(n,Z)`.
//!
//! - [`freegroup`]: words, automorphisms and the named generators.
//! - [`intmat`]: exact integer matrices and the determinant twist.
//! - [`closure`]: finite subgroup enumeration and structure certificates.
//! - [`tree`]: fixed sets, Helly checks and circumcentres on simplicial trees.
//! - [`verify`]: the generating sets, witness tables and report assembly.

pub mod closure;
pub mod freegroup;
pub mod intmat;
pub mod tree;
pub mod verify;
