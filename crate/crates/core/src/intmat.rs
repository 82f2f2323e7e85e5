//! Exact integer matrices for GL(n,Z) and SL(n,Z) images.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::{Serialize, SerializeSeq, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("expected {expected} entries, got {got}")]
    EntryCount { expected: usize, got: usize },
    #[error("determinant {0} is not +1 or -1")]
    NotUnimodular(BigInt),
    #[error("elementary matrix needs distinct indices, got ({0}, {0})")]
    DiagonalElementary(usize),
    #[error("index {index} out of range for dimension {n}")]
    IndexOutOfRange { index: usize, n: usize },
}

/// A square matrix with arbitrary-precision integer entries, row-major.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntMatrix {
    n: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn from_entries(n: usize, entries: Vec<BigInt>) -> Result<Self, MatrixError> {
        if entries.len() != n * n {
            return Err(MatrixError::EntryCount { expected: n * n, got: entries.len() });
        }
        Ok(IntMatrix { n, entries })
    }

    pub fn from_i64(n: usize, entries: &[i64]) -> Result<Self, MatrixError> {
        IntMatrix::from_entries(n, entries.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn zero(n: usize) -> Self {
        IntMatrix { n, entries: vec![BigInt::zero(); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zero(n);
        for i in 0..n {
            m.entries[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn diag(d: &[i64]) -> Self {
        let n = d.len();
        let mut m = IntMatrix::zero(n);
        for (i, &x) in d.iter().enumerate() {
            m.entries[i * n + i] = BigInt::from(x);
        }
        m
    }

    /// `E_ij(k)`: identity plus `k` at row `i`, column `j` (1-based).
    pub fn elementary(n: usize, i: usize, j: usize, k: i64) -> Result<Self, MatrixError> {
        for index in [i, j] {
            if index == 0 || index > n {
                return Err(MatrixError::IndexOutOfRange { index, n });
            }
        }
        if i == j {
            return Err(MatrixError::DiagonalElementary(i));
        }
        let mut m = IntMatrix::identity(n);
        m.entries[(i - 1) * n + (j - 1)] = BigInt::from(k);
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Entry at 0-based `(row, col)`.
    pub fn get(&self, row: usize, col: usize) -> &BigInt {
        &self.entries[row * self.n + col]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[BigInt]> {
        self.entries.chunks(self.n.max(1))
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix, MatrixError> {
        if self.n != other.n {
            return Err(MatrixError::DimensionMismatch { left: self.n, right: other.n });
        }
        let n = self.n;
        let mut out = vec![BigInt::zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = &self.entries[i * n + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = &other.entries[k * n + j];
                    if !b.is_zero() {
                        out[i * n + j] += a * b;
                    }
                }
            }
        }
        Ok(IntMatrix { n, entries: out })
    }

    pub fn scale(&self, k: &BigInt) -> IntMatrix {
        IntMatrix { n: self.n, entries: self.entries.iter().map(|x| x * k).collect() }
    }

    pub fn transpose(&self) -> IntMatrix {
        let n = self.n;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(self.entries[j * n + i].clone());
            }
        }
        IntMatrix { n, entries }
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> BigInt {
        let n = self.n;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.entries.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n.saturating_sub(1) {
            if a[k * n + k].is_zero() {
                match (k + 1..n).find(|&r| !a[r * n + k].is_zero()) {
                    Some(r) => {
                        for c in 0..n {
                            a.swap(k * n + c, r * n + c);
                        }
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i * n + j] * &a[k * n + k] - &a[i * n + k] * &a[k * n + j];
                    // Exact: Sylvester's identity guarantees divisibility.
                    a[i * n + j] = v / &prev;
                }
            }
            prev = a[k * n + k].clone();
        }
        sign * &a[n * n - 1]
    }

    /// Every row and column has exactly one nonzero entry, and it is ±1.
    pub fn is_monomial(&self) -> bool {
        let n = self.n;
        let mut col_hits = vec![0usize; n];
        for i in 0..n {
            let mut row_hits = 0;
            for j in 0..n {
                let x = &self.entries[i * n + j];
                if x.is_zero() {
                    continue;
                }
                if x.abs() != BigInt::one() {
                    return false;
                }
                row_hits += 1;
                col_hits[j] += 1;
            }
            if row_hits != 1 {
                return false;
            }
        }
        col_hits.iter().all(|&c| c == 1)
    }

    /// `det(A)·A`. For odd `n` the result lies in SL(n,Z).
    pub fn det_twist(&self) -> Result<IntMatrix, MatrixError> {
        let d = self.det();
        if d.abs() != BigInt::one() {
            return Err(MatrixError::NotUnimodular(d));
        }
        Ok(self.scale(&d))
    }

    /// Block-diagonal embedding `diag(self, I)` into dimension `n`.
    pub fn embed(&self, n: usize) -> Result<IntMatrix, MatrixError> {
        if n < self.n {
            return Err(MatrixError::DimensionMismatch { left: self.n, right: n });
        }
        let mut m = IntMatrix::identity(n);
        for i in 0..self.n {
            for j in 0..self.n {
                m.entries[i * n + j] = self.entries[i * self.n + j].clone();
            }
        }
        Ok(m)
    }

    pub fn is_identity(&self) -> bool {
        *self == IntMatrix::identity(self.n)
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, row) in self.rows().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            let parts: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            f.write_str(&parts.join(" "))?;
        }
        f.write_str("]")
    }
}

struct Entry<'a>(&'a BigInt);

impl Serialize for Entry<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.0.to_i64() {
            Some(x) => s.serialize_i64(x),
            None => s.serialize_str(&self.0.to_string()),
        }
    }
}

struct Row<'a>(&'a [BigInt]);

impl Serialize for Row<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.0.len()))?;
        for x in self.0 {
            seq.serialize_element(&Entry(x))?;
        }
        seq.end()
    }
}

/// Row-major nested integer arrays. Entries outside `i64` become strings.
impl Serialize for IntMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.n))?;
        for row in self.rows() {
            seq.serialize_element(&Row(row))?;
        }
        seq.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(n: usize, e: &[i64]) -> IntMatrix {
        IntMatrix::from_i64(n, e).unwrap()
    }

    /// Laplace expansion along the first row.
    fn cofactor_det(a: &IntMatrix) -> BigInt {
        let n = a.dim();
        if n == 1 {
            return a.get(0, 0).clone();
        }
        let mut total = BigInt::zero();
        for c in 0..n {
            let mut minor = Vec::new();
            for i in 1..n {
                for j in 0..n {
                    if j != c {
                        minor.push(a.get(i, j).clone());
                    }
                }
            }
            let sub = cofactor_det(&IntMatrix::from_entries(n - 1, minor).unwrap());
            let term = a.get(0, c) * sub;
            if c % 2 == 0 {
                total += term;
            } else {
                total -= term;
            }
        }
        total
    }

    #[test]
    fn determinants() {
        assert_eq!(IntMatrix::identity(4).det(), BigInt::one());
        assert_eq!(IntMatrix::diag(&[1, 1, 1, -1]).det(), BigInt::from(-1));
        // transposition (2 3) composed with sign flip on 1
        let tau = m(3, &[-1, 0, 0, 0, 0, 1, 0, 1, 0]);
        assert_eq!(tau.det(), BigInt::one());
        assert_eq!(m(2, &[0, 1, 1, 0]).det(), BigInt::from(-1));
        assert_eq!(m(3, &[1, 2, 3, 4, 5, 6, 7, 8, 9]).det(), BigInt::zero());
        assert_eq!(m(3, &[0, 0, 2, 0, 3, 0, 5, 0, 0]).det(), BigInt::from(-30));
    }

    #[test]
    fn bareiss_matches_cofactor_expansion() {
        let cases: &[(usize, &[i64])] = &[
            (3, &[2, -1, 0, -1, 2, -1, 0, -1, 2]),
            (4, &[0, 3, 1, 4, 1, 0, 5, 9, 2, 6, 0, 5, 3, 5, 8, 0]),
            (4, &[1, 1, 1, 1, 1, 2, 4, 8, 1, 3, 9, 27, 1, 4, 16, 64]),
            (5, &[7, -3, 2, 0, 1, 4, 4, -4, 2, 0, 0, 1, 1, 1, 1, -9, 2, 3, 5, 8, 6, 0, -1, 2, 2]),
        ];
        for (n, e) in cases {
            let a = m(*n, e);
            assert_eq!(a.det(), cofactor_det(&a), "{a}");
        }
    }

    #[test]
    fn monomial_recognition() {
        assert!(IntMatrix::identity(3).is_monomial());
        assert!(m(3, &[0, -1, 0, -1, 0, 0, 0, 0, 1]).is_monomial());
        assert!(!m(3, &[1, 0, 0, 1, -1, 0, 0, 0, 1]).is_monomial());
        assert!(!IntMatrix::diag(&[1, 2, 1]).is_monomial());
        assert!(!m(2, &[1, 0, 1, 0]).is_monomial());
    }

    #[test]
    fn twist() {
        assert_eq!(IntMatrix::identity(3).det_twist().unwrap(), IntMatrix::identity(3));
        let t = IntMatrix::diag(&[1, 1, -1]).det_twist().unwrap();
        assert_eq!(t, IntMatrix::diag(&[-1, -1, 1]));
        assert_eq!(t.det(), BigInt::one());
        let e = IntMatrix::elementary(3, 2, 1, 1).unwrap();
        assert_eq!(e.det_twist().unwrap(), e);
        assert!(matches!(IntMatrix::diag(&[2, 1]).det_twist(), Err(MatrixError::NotUnimodular(_))));
    }

    #[test]
    fn elementary_matrices() {
        assert_eq!(IntMatrix::elementary(3, 1, 2, 0).unwrap(), IntMatrix::identity(3));
        let p = IntMatrix::elementary(3, 1, 2, 1).unwrap();
        let q = IntMatrix::elementary(3, 1, 2, -1).unwrap();
        assert!(p.mul(&q).unwrap().is_identity());
        assert_eq!(p.det(), BigInt::one());
        assert!(matches!(IntMatrix::elementary(3, 2, 2, 1), Err(MatrixError::DiagonalElementary(2))));
        assert!(IntMatrix::elementary(3, 4, 1, 1).is_err());
    }

    #[test]
    fn dimension_errors() {
        assert!(IntMatrix::identity(2).mul(&IntMatrix::identity(3)).is_err());
        assert!(IntMatrix::from_i64(2, &[1, 2, 3]).is_err());
    }

    #[test]
    fn embedding_and_json() {
        let a = m(2, &[0, 1, -1, 0]).embed(3).unwrap();
        assert_eq!(a, m(3, &[0, 1, 0, -1, 0, 0, 0, 0, 1]));
        assert_eq!(serde_json::to_string(&a).unwrap(), "[[0,1,0],[-1,0,0],[0,0,1]]");
        let big = IntMatrix::from_entries(1, vec![BigInt::from(i64::MAX) * 4]).unwrap();
        assert_eq!(serde_json::to_string(&big).unwrap(), "[[\"36893488147419103228\"]]");
    }
}
