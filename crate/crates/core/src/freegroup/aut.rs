use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use super::word::{push_reduced, Letter, Word};
use super::FreeGroupError;
use crate::intmat::IntMatrix;

/// Default bound on the length of any image word produced by composition.
pub const DEFAULT_IMAGE_LIMIT: usize = 64;

/// A basis `{a_1, ..., a_n}` of the free group, plus the image-length guard
/// applied by every automorphism built over it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Basis {
    rank: usize,
    image_limit: usize,
}

impl Basis {
    pub fn new(rank: usize) -> Result<Self, FreeGroupError> {
        Basis::with_image_limit(rank, DEFAULT_IMAGE_LIMIT)
    }

    pub fn with_image_limit(rank: usize, image_limit: usize) -> Result<Self, FreeGroupError> {
        if rank == 0 {
            return Err(FreeGroupError::RankTooSmall { generator: "basis", rank, required: 1 });
        }
        Ok(Basis { rank, image_limit })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn image_limit(&self) -> usize {
        self.image_limit
    }
}

/// A bijection of `{1, ..., n}`, stored 0-based.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation { images: (0..n).collect() }
    }

    /// From 1-based images: `images[i-1] = σ(i)`.
    pub fn from_images(images: &[usize]) -> Result<Self, FreeGroupError> {
        let n = images.len();
        let mut seen = vec![false; n];
        let mut zero_based = Vec::with_capacity(n);
        for &x in images {
            if x == 0 || x > n || seen[x - 1] {
                return Err(FreeGroupError::InvalidGenerator(format!("{images:?} is not a permutation of 1..{n}")));
            }
            seen[x - 1] = true;
            zero_based.push(x - 1);
        }
        Ok(Permutation { images: zero_based })
    }

    /// From disjoint cycles in 1-based notation, e.g. `[[1, 2], [3, 4]]`.
    pub fn from_cycles(n: usize, cycles: &[Vec<usize>]) -> Result<Self, FreeGroupError> {
        let mut images: Vec<usize> = (0..n).collect();
        let mut touched = vec![false; n];
        for cycle in cycles {
            for &x in cycle {
                if x == 0 || x > n {
                    return Err(FreeGroupError::IndexOutOfRange { index: x, rank: n });
                }
                if touched[x - 1] {
                    return Err(FreeGroupError::InvalidGenerator(format!("point {x} appears twice in cycle notation")));
                }
                touched[x - 1] = true;
            }
            for (k, &x) in cycle.iter().enumerate() {
                let y = cycle[(k + 1) % cycle.len()];
                images[x - 1] = y - 1;
            }
        }
        Ok(Permutation { images })
    }

    /// The transposition `(i j)`, 1-based. `i == j` gives the identity.
    pub fn transposition(n: usize, i: usize, j: usize) -> Result<Self, FreeGroupError> {
        if i == j {
            Permutation::from_cycles(n, &[])
        } else {
            Permutation::from_cycles(n, &[vec![i, j]])
        }
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// σ(i), 1-based.
    pub fn apply(&self, i: usize) -> usize {
        self.images[i - 1] + 1
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.images.len()];
        for (i, &j) in self.images.iter().enumerate() {
            inv[j] = i;
        }
        Permutation { images: inv }
    }

    /// `(self ∘ other)(i) = self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation { images: other.images.iter().map(|&j| self.images[j]).collect() }
    }

    /// Order of σ: lcm of its cycle lengths.
    pub fn order(&self) -> u64 {
        let n = self.images.len();
        let mut seen = vec![false; n];
        let mut order = 1u64;
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0u64;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.images[x];
                len += 1;
            }
            order = lcm(order, len);
        }
        order
    }

    /// Disjoint non-trivial cycles, 1-based, each starting at its least point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.images.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] || self.images[start] == start {
                seen[start] = true;
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cycle.push(x + 1);
                x = self.images[x];
            }
            out.push(cycle);
        }
        out
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    fn gcd(a: u64, b: u64) -> u64 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    a / gcd(a, b) * b
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for c in cycles {
            let parts: Vec<String> = c.iter().map(|x| x.to_string()).collect();
            write!(f, "({})", parts.join(" "))?;
        }
        Ok(())
    }
}

/// The named automorphisms used to build the generating sets.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum NamedGenerator {
    /// Right Nielsen transformation `a_i ↦ a_i a_j`.
    Rho(usize, usize),
    /// Inversion of `a_i`.
    Eps(usize),
    /// `a_i ↦ a_σ(i)`.
    Perm(Permutation),
    /// `ρ_12 ∘ ε_2`
    Theta,
    /// `(a_2 a_3) ∘ ε_1`
    Tau,
    /// `(a_1 a_2) ∘ ε_1 ∘ ε_2`
    Eta,
    /// `ε_n ∘ (a_n a_{n-1})`
    Alpha,
}

impl fmt::Display for NamedGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NamedGenerator::Rho(i, j) => write!(f, "rho {i} {j}"),
            NamedGenerator::Eps(i) => write!(f, "eps {i}"),
            NamedGenerator::Perm(p) => write!(f, "perm {p}"),
            NamedGenerator::Theta => f.write_str("theta"),
            NamedGenerator::Tau => f.write_str("tau"),
            NamedGenerator::Eta => f.write_str("eta"),
            NamedGenerator::Alpha => f.write_str("alpha"),
        }
    }
}

/// Order of an element under repeated composition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
pub enum Order {
    Finite(u64),
    Unbounded,
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(k) => write!(f, "{k}"),
            Order::Unbounded => f.write_str("unbounded"),
        }
    }
}

/// An automorphism of `F_n`, recorded by the images of the basis.
///
/// Equality, hashing and ordering only look at the images.
#[derive(Clone)]
pub struct FreeAut {
    basis: Basis,
    images: Vec<Word>,
}

impl PartialEq for FreeAut {
    fn eq(&self, other: &Self) -> bool {
        self.images == other.images
    }
}

impl Eq for FreeAut {}

impl Hash for FreeAut {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.images.hash(state);
    }
}

impl PartialOrd for FreeAut {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FreeAut {
    fn cmp(&self, other: &Self) -> Ordering {
        self.images.cmp(&other.images)
    }
}

impl FreeAut {
    pub fn identity(basis: Basis) -> Self {
        let images = (1..=basis.rank).map(|i| Word::from_reduced_unchecked(basis.rank, vec![Letter::gen(i)])).collect();
        FreeAut { basis, images }
    }

    /// Wraps explicit images. The caller vouches that they define an
    /// automorphism; nothing here checks invertibility.
    pub fn from_images(basis: Basis, images: Vec<Word>) -> Result<Self, FreeGroupError> {
        if images.len() != basis.rank {
            return Err(FreeGroupError::RankMismatch { left: basis.rank, right: images.len() });
        }
        for w in &images {
            if w.rank() != basis.rank {
                return Err(FreeGroupError::RankMismatch { left: basis.rank, right: w.rank() });
            }
            if w.len() > basis.image_limit {
                return Err(FreeGroupError::ImageOverflow { length: w.len(), limit: basis.image_limit });
            }
        }
        Ok(FreeAut { basis, images })
    }

    pub fn from_generator(g: &NamedGenerator, basis: Basis) -> Result<Self, FreeGroupError> {
        let n = basis.rank;
        let check = |i: usize| {
            if i == 0 || i > n {
                Err(FreeGroupError::IndexOutOfRange { index: i, rank: n })
            } else {
                Ok(())
            }
        };
        let need = |name: &'static str, required: usize| {
            if n < required {
                Err(FreeGroupError::RankTooSmall { generator: name, rank: n, required })
            } else {
                Ok(())
            }
        };
        let mut images: Vec<Vec<Letter>> = (1..=n).map(|i| vec![Letter::gen(i)]).collect();
        match g {
            NamedGenerator::Rho(i, j) => {
                check(*i)?;
                check(*j)?;
                if i == j {
                    return Err(FreeGroupError::InvalidGenerator(format!("rho {i} {j} needs i != j")));
                }
                images[i - 1] = vec![Letter::gen(*i), Letter::gen(*j)];
            }
            NamedGenerator::Eps(i) => {
                check(*i)?;
                images[i - 1] = vec![Letter::gen_inv(*i)];
            }
            NamedGenerator::Perm(p) => {
                if p.degree() != n {
                    return Err(FreeGroupError::RankMismatch { left: n, right: p.degree() });
                }
                for i in 1..=n {
                    images[i - 1] = vec![Letter::gen(p.apply(i))];
                }
            }
            NamedGenerator::Theta => {
                need("theta", 3)?;
                return compose_named(basis, &[NamedGenerator::Rho(1, 2), NamedGenerator::Eps(2)]);
            }
            NamedGenerator::Tau => {
                need("tau", 3)?;
                let swap = Permutation::transposition(n, 2, 3)?;
                return compose_named(basis, &[NamedGenerator::Perm(swap), NamedGenerator::Eps(1)]);
            }
            NamedGenerator::Eta => {
                need("eta", 3)?;
                let swap = Permutation::transposition(n, 1, 2)?;
                return compose_named(
                    basis,
                    &[NamedGenerator::Perm(swap), NamedGenerator::Eps(1), NamedGenerator::Eps(2)],
                );
            }
            NamedGenerator::Alpha => {
                need("alpha", 2)?;
                let swap = Permutation::transposition(n, n, n - 1)?;
                return compose_named(basis, &[NamedGenerator::Eps(n), NamedGenerator::Perm(swap)]);
            }
        }
        let images = images.into_iter().map(|l| Word::from_reduced_unchecked(n, l)).collect();
        Ok(FreeAut { basis, images })
    }

    /// Inverse of a named generator. Only the finite-order generators and
    /// `ρ_ij` are supported; there is no general inversion.
    pub fn generator_inverse(g: &NamedGenerator, basis: Basis) -> Result<Self, FreeGroupError> {
        match g {
            NamedGenerator::Rho(i, j) => {
                let mut f = FreeAut::from_generator(g, basis)?;
                f.images[i - 1] = Word::from_reduced_unchecked(basis.rank, vec![Letter::gen(*i), Letter::gen_inv(*j)]);
                Ok(f)
            }
            NamedGenerator::Perm(p) => FreeAut::from_generator(&NamedGenerator::Perm(p.inverse()), basis),
            NamedGenerator::Alpha => {
                let a = FreeAut::from_generator(g, basis)?;
                a.compose(&a)?.compose(&a)
            }
            _ => FreeAut::from_generator(g, basis),
        }
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.rank
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    pub fn image(&self, i: usize) -> &Word {
        &self.images[i - 1]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(k, w)| w.letters() == [Letter::gen(k + 1)])
    }

    /// Applies this automorphism to a word, substituting images letter by letter.
    pub fn apply(&self, w: &Word) -> Result<Word, FreeGroupError> {
        if w.rank() != self.basis.rank {
            return Err(FreeGroupError::RankMismatch { left: self.basis.rank, right: w.rank() });
        }
        let limit = self.basis.image_limit;
        let mut out: Vec<Letter> = Vec::new();
        for &l in w.letters() {
            let img = self.images[l.index() - 1].letters();
            if l.is_inverse() {
                for &x in img.iter().rev() {
                    push_reduced(&mut out, x.inv());
                }
            } else {
                for &x in img {
                    push_reduced(&mut out, x);
                }
            }
        }
        if out.len() > limit {
            return Err(FreeGroupError::ImageOverflow { length: out.len(), limit });
        }
        Ok(Word::from_reduced_unchecked(self.basis.rank, out))
    }

    /// `(self ∘ other)(a_i) = self(other(a_i))`: `other` acts first.
    pub fn compose(&self, other: &FreeAut) -> Result<FreeAut, FreeGroupError> {
        if self.basis.rank != other.basis.rank {
            return Err(FreeGroupError::RankMismatch { left: self.basis.rank, right: other.basis.rank });
        }
        let images = other.images.iter().map(|w| self.apply(w)).collect::<Result<Vec<_>, _>>()?;
        Ok(FreeAut { basis: self.basis, images })
    }

    /// Least `k <= cap` with `self^k = id`. Powers whose images outgrow the
    /// basis image limit are treated as never returning to the identity.
    pub fn order(&self, cap: u64) -> Order {
        let mut power = self.clone();
        for k in 1..=cap {
            if power.is_identity() {
                return Order::Finite(k);
            }
            if k == cap {
                break;
            }
            power = match self.compose(&power) {
                Ok(p) => p,
                Err(_) => return Order::Unbounded,
            };
        }
        Order::Unbounded
    }

    /// Action on the abelianisation: column `j` holds the exponent sums of
    /// `self(a_j)`, so that `abelianize(f ∘ g) = abelianize(f) · abelianize(g)`.
    pub fn abelianize(&self) -> IntMatrix {
        let n = self.basis.rank;
        let mut entries = vec![0i64; n * n];
        for (j, w) in self.images.iter().enumerate() {
            for l in w.letters() {
                entries[(l.index() - 1) * n + j] += l.sign();
            }
        }
        IntMatrix::from_i64(n, &entries).expect("square by construction")
    }
}

/// Right-to-left product of named generators.
pub fn compose_named(basis: Basis, gens: &[NamedGenerator]) -> Result<FreeAut, FreeGroupError> {
    let mut acc = FreeAut::identity(basis);
    for g in gens {
        acc = acc.compose(&FreeAut::from_generator(g, basis)?)?;
    }
    Ok(acc)
}

impl fmt::Debug for FreeAut {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for FreeAut {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (k, w) in self.images.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "a{} -> {}", k + 1, w)?;
        }
        f.write_str("]")
    }
}
