use std::fmt;

use super::FreeGroupError;

/// A generator `a_i` or its inverse. Stored as a signed, 1-based index.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter(i16);

impl Letter {
    pub fn new(index: usize, inverse: bool) -> Self {
        assert!(index >= 1 && index <= i16::MAX as usize, "generator index {index} out of range");
        let i = index as i16;
        Letter(if inverse { -i } else { i })
    }

    pub fn gen(index: usize) -> Self {
        Letter::new(index, false)
    }

    pub fn gen_inv(index: usize) -> Self {
        Letter::new(index, true)
    }

    /// 1-based generator index.
    pub fn index(self) -> usize {
        self.0.unsigned_abs() as usize
    }

    pub fn is_inverse(self) -> bool {
        self.0 < 0
    }

    /// +1 or -1.
    pub fn sign(self) -> i64 {
        self.0.signum() as i64
    }

    pub fn inv(self) -> Self {
        Letter(-self.0)
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_inverse() {
            write!(f, "a{}^-1", self.index())
        } else {
            write!(f, "a{}", self.index())
        }
    }
}

/// A freely reduced word in the free group of the given rank.
///
/// The empty word is the identity. Construction always reduces, so two
/// words represent the same group element iff they compare equal.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    rank: usize,
    letters: Vec<Letter>,
}

/// Pushes `l` onto a reduced stack of letters, cancelling against the top.
#[inline]
pub(crate) fn push_reduced(stack: &mut Vec<Letter>, l: Letter) {
    if stack.last() == Some(&l.inv()) {
        stack.pop();
    } else {
        stack.push(l);
    }
}

impl Word {
    pub fn identity(rank: usize) -> Self {
        Word { rank, letters: Vec::new() }
    }

    /// Freely reduces `raw`. Fails if a letter references a generator
    /// outside `1..=rank`.
    pub fn reduce<I>(rank: usize, raw: I) -> Result<Self, FreeGroupError>
    where
        I: IntoIterator<Item = Letter>,
    {
        let mut letters = Vec::new();
        for l in raw {
            if l.index() > rank {
                return Err(FreeGroupError::IndexOutOfRange { index: l.index(), rank });
            }
            push_reduced(&mut letters, l);
        }
        Ok(Word { rank, letters })
    }

    /// Builds a word from signed indices: `3` is `a_3`, `-3` is `a_3^-1`.
    pub fn from_signed(rank: usize, raw: &[i32]) -> Result<Self, FreeGroupError> {
        let mut letters = Vec::with_capacity(raw.len());
        for &s in raw {
            if s == 0 {
                return Err(FreeGroupError::IndexOutOfRange { index: 0, rank });
            }
            let index = s.unsigned_abs() as usize;
            if index > rank {
                return Err(FreeGroupError::IndexOutOfRange { index, rank });
            }
            letters.push(Letter::new(index, s < 0));
        }
        Word::reduce(rank, letters)
    }

    pub fn generator(rank: usize, index: usize) -> Result<Self, FreeGroupError> {
        Word::reduce(rank, [Letter::gen(index)])
    }

    /// Caller guarantees `letters` is reduced and in range.
    pub(crate) fn from_reduced_unchecked(rank: usize, letters: Vec<Letter>) -> Self {
        debug_assert!(letters.windows(2).all(|w| w[0] != w[1].inv()));
        Word { rank, letters }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn mul(&self, other: &Word) -> Result<Word, FreeGroupError> {
        if self.rank != other.rank {
            return Err(FreeGroupError::RankMismatch { left: self.rank, right: other.rank });
        }
        let mut letters = self.letters.clone();
        for &l in &other.letters {
            push_reduced(&mut letters, l);
        }
        Ok(Word { rank: self.rank, letters })
    }

    pub fn inv(&self) -> Word {
        Word { rank: self.rank, letters: self.letters.iter().rev().map(|l| l.inv()).collect() }
    }

    /// Exponent sum of `a_index` in this word.
    pub fn exponent_sum(&self, index: usize) -> i64 {
        self.letters.iter().filter(|l| l.index() == index).map(|l| l.sign()).sum()
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("1");
        }
        for (k, l) in self.letters.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(raw: &[i32]) -> Word {
        Word::from_signed(3, raw).unwrap()
    }

    #[test]
    fn cancellation() {
        assert!(w(&[1, -1]).is_empty());
        assert_eq!(w(&[1, 2, -2, 1]).letters(), w(&[1, 1]).letters());
        assert_eq!(w(&[1, 2, -1]).len(), 3);
        assert!(w(&[1, 2, 3, -3, -2, -1]).is_empty());
    }

    #[test]
    fn reduction_is_idempotent() {
        let once = w(&[2, 1, -1, 3, -3, -2, 1, 2]);
        let twice = Word::reduce(3, once.letters().iter().copied()).unwrap();
        assert_eq!(once, twice);
    }

    #[test]
    fn out_of_range() {
        assert_eq!(Word::from_signed(2, &[1, 3]), Err(FreeGroupError::IndexOutOfRange { index: 3, rank: 2 }));
        assert!(Word::from_signed(2, &[0]).is_err());
    }

    #[test]
    fn mul_and_inv() {
        assert!(w(&[1]).mul(&w(&[-1])).unwrap().is_empty());
        assert_eq!(w(&[1, 2]).inv(), w(&[-2, -1]));
        assert_eq!(w(&[1, 2]).mul(&w(&[-2, 3])).unwrap(), w(&[1, 3]));
        let u = w(&[1, -3, 2]);
        assert!(u.mul(&u.inv()).unwrap().is_empty());
    }

    #[test]
    fn rank_mismatch() {
        let u = Word::from_signed(2, &[1]).unwrap();
        assert!(matches!(u.mul(&w(&[1])), Err(FreeGroupError::RankMismatch { .. })));
    }

    #[test]
    fn exponent_sums() {
        let u = w(&[1, 2, 1, -3, 1]);
        assert_eq!(u.exponent_sum(1), 3);
        assert_eq!(u.exponent_sum(3), -1);
        assert_eq!(u.exponent_sum(2), 1);
    }
}
