use std::fmt::Debug;
use std::hash::Hash;

use thiserror::Error;

use crate::freegroup::{FreeAut, FreeGroupError};
use crate::intmat::{IntMatrix, MatrixError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CarrierError {
    #[error(transparent)]
    FreeGroup(#[from] FreeGroupError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error("incompatible elements: {0}")]
    Incompatible(String),
}

/// Element type that closure enumeration can work over.
///
/// `compose` must be associative with `identity_like` as a two-sided
/// identity. Generators passed to the enumerator must have finite order so
/// that closure under multiplication alone yields a group.
pub trait GroupCarrier: Clone + Eq + Hash + Ord + Debug + Send + Sync {
    /// The identity of the group containing `self`.
    fn identity_like(&self) -> Self;

    /// `self ∘ rhs`, with `rhs` acting first.
    fn compose(&self, rhs: &Self) -> Result<Self, CarrierError>;

    fn is_identity(&self) -> bool {
        *self == self.identity_like()
    }
}

impl GroupCarrier for FreeAut {
    fn identity_like(&self) -> Self {
        FreeAut::identity(self.basis())
    }

    fn compose(&self, rhs: &Self) -> Result<Self, CarrierError> {
        Ok(FreeAut::compose(self, rhs)?)
    }

    fn is_identity(&self) -> bool {
        FreeAut::is_identity(self)
    }
}

impl GroupCarrier for IntMatrix {
    fn identity_like(&self) -> Self {
        IntMatrix::identity(self.dim())
    }

    fn compose(&self, rhs: &Self) -> Result<Self, CarrierError> {
        Ok(self.mul(rhs)?)
    }
}

/// Least `k <= cap` with `g^k = id`, or `None`.
pub fn element_order<T: GroupCarrier>(g: &T, cap: u64) -> Result<Option<u64>, CarrierError> {
    let mut power = g.clone();
    for k in 1..=cap {
        if power.is_identity() {
            return Ok(Some(k));
        }
        if k < cap {
            power = power.compose(g)?;
        }
    }
    Ok(None)
}

/// `g^k` for `k >= 0`.
pub fn power<T: GroupCarrier>(g: &T, k: u64) -> Result<T, CarrierError> {
    let mut acc = g.identity_like();
    for _ in 0..k {
        acc = acc.compose(g)?;
    }
    Ok(acc)
}

/// Inverse of a finite-order element as `g^(ord-1)`.
pub fn finite_inverse<T: GroupCarrier>(g: &T, cap: u64) -> Result<Option<T>, CarrierError> {
    match element_order(g, cap)? {
        Some(k) => Ok(Some(power(g, k - 1)?)),
        None => Ok(None),
    }
}
