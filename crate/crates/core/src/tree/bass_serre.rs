//! Finite balls in the Bass–Serre tree of `Z_m * Z_k = ⟨a⟩ * ⟨b⟩`.
//!
//! Vertices are the cosets `wA` and `wB` of the two factors, with `w` in
//! normal form; `wA` and `wB` are joined by an edge. The group acts by left
//! multiplication. Truncating to a ball makes the action partial.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use serde::Serialize;

use super::graph::Tree;
use super::isom::PointMap;
use super::TreeError;

pub const DEFAULT_BALL_CAP: usize = 200_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Factor {
    A,
    B,
}

/// An element of `Z_m * Z_k` in normal form: alternating syllables
/// `(factor, exponent)` with exponents in `1..order`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FreeProductWord {
    m: u32,
    k: u32,
    syllables: Vec<(Factor, u32)>,
}

impl FreeProductWord {
    pub fn identity(m: u32, k: u32) -> Self {
        FreeProductWord { m, k, syllables: Vec::new() }
    }

    fn order(&self, f: Factor) -> u32 {
        match f {
            Factor::A => self.m,
            Factor::B => self.k,
        }
    }

    pub fn syllable(m: u32, k: u32, f: Factor, exp: i64) -> Self {
        let mut w = FreeProductWord::identity(m, k);
        w.push(f, exp);
        w
    }

    fn push(&mut self, f: Factor, exp: i64) {
        let ord = self.order(f) as i64;
        let mut e = exp.rem_euclid(ord);
        if let Some(&(last, le)) = self.syllables.last() {
            if last == f {
                self.syllables.pop();
                e = (e + le as i64) % ord;
            }
        }
        if e != 0 {
            self.syllables.push((f, e as u32));
        }
    }

    pub fn mul(&self, rhs: &FreeProductWord) -> FreeProductWord {
        let mut out = self.clone();
        for &(f, e) in &rhs.syllables {
            out.push(f, e as i64);
        }
        out
    }

    pub fn inv(&self) -> FreeProductWord {
        let mut out = FreeProductWord::identity(self.m, self.k);
        for &(f, e) in self.syllables.iter().rev() {
            out.push(f, -(e as i64));
        }
        out
    }

    pub fn syllables(&self) -> &[(Factor, u32)] {
        &self.syllables
    }

    /// Parses letters `a`, `b` with optional integer exponents: `ab`,
    /// `b^-1 a`, `a^2 b`. Whitespace is ignored. Errors give the character
    /// position.
    pub fn parse(m: u32, k: u32, text: &str) -> Result<Self, TreeError> {
        let chars: Vec<char> = text.chars().collect();
        let mut w = FreeProductWord::identity(m, k);
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            if c.is_whitespace() {
                i += 1;
                continue;
            }
            let f = match c {
                'a' => Factor::A,
                'b' => Factor::B,
                _ => return Err(TreeError::WordParse { position: i, message: format!("unexpected {c:?}") }),
            };
            i += 1;
            let mut exp: i64 = 1;
            if i < chars.len() && chars[i] == '^' {
                let start = i + 1;
                let mut end = start;
                if end < chars.len() && chars[end] == '-' {
                    end += 1;
                }
                while end < chars.len() && chars[end].is_ascii_digit() {
                    end += 1;
                }
                let s: String = chars[start..end].iter().collect();
                exp = s.parse().map_err(|_| TreeError::WordParse {
                    position: start,
                    message: "expected an integer exponent".into(),
                })?;
                i = end;
            }
            w.push(f, exp);
        }
        Ok(w)
    }
}

impl fmt::Display for FreeProductWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.syllables.is_empty() {
            return write!(f, "1");
        }
        for &(fac, e) in &self.syllables {
            let c = if fac == Factor::A { 'a' } else { 'b' };
            if e == 1 {
                write!(f, "{c}")?;
            } else {
                write!(f, "{c}^{e}")?;
            }
        }
        Ok(())
    }
}

/// The coset `rep · factor`, with `rep` not ending in a syllable of `factor`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Coset {
    pub rep: FreeProductWord,
    pub factor: Factor,
}

impl Coset {
    pub fn new(g: &FreeProductWord, factor: Factor) -> Self {
        let mut rep = g.clone();
        if rep.syllables.last().is_some_and(|&(f, _)| f == factor) {
            rep.syllables.pop();
        }
        Coset { rep, factor }
    }

    fn neighbors(&self) -> Vec<Coset> {
        let other = match self.factor {
            Factor::A => Factor::B,
            Factor::B => Factor::A,
        };
        let ord = self.rep.order(self.factor);
        (0..ord)
            .map(|i| {
                let g = self.rep.mul(&FreeProductWord::syllable(self.rep.m, self.rep.k, self.factor, i as i64));
                Coset::new(&g, other)
            })
            .collect()
    }

    pub fn translate(&self, g: &FreeProductWord) -> Coset {
        Coset::new(&g.mul(&self.rep), self.factor)
    }
}

impl fmt::Display for Coset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let fac = if self.factor == Factor::A { "A" } else { "B" };
        if self.rep.syllables.is_empty() {
            write!(f, "{fac}")
        } else {
            write!(f, "{}{fac}", self.rep)
        }
    }
}

/// The ball of radius `radius` (in edges) about the base vertex `A`.
pub struct BassSerreBall {
    pub m: u32,
    pub k: u32,
    pub radius: usize,
    pub tree: Tree,
    pub cosets: Vec<Coset>,
    /// Distance in edges from the base vertex (id 0).
    pub depth: Vec<usize>,
    index: HashMap<Coset, usize>,
    /// Images of every ball vertex under `a` and `b`, where they stay in the ball.
    pub action: [Vec<Option<usize>>; 2],
}

pub fn bass_serre_ball(m: u32, k: u32, radius: usize, vertex_cap: usize) -> Result<BassSerreBall, TreeError> {
    if m < 2 || k < 2 {
        return Err(TreeError::InvalidArgument(format!("factor orders must be at least 2, got {m} and {k}")));
    }
    if radius < 1 {
        return Err(TreeError::InvalidArgument("radius must be at least 1".into()));
    }
    let base = Coset::new(&FreeProductWord::identity(m, k), Factor::A);
    let mut cosets = vec![base.clone()];
    let mut depth = vec![0];
    let mut index = HashMap::from([(base, 0)]);
    let mut edges = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    while let Some(x) = queue.pop_front() {
        if depth[x] == radius {
            continue;
        }
        for nb in cosets[x].neighbors() {
            if index.contains_key(&nb) {
                continue;
            }
            if cosets.len() == vertex_cap {
                return Err(TreeError::BallTooLarge { cap: vertex_cap });
            }
            let id = cosets.len();
            index.insert(nb.clone(), id);
            cosets.push(nb);
            depth.push(depth[x] + 1);
            edges.push((x, id));
            queue.push_back(id);
        }
    }
    let tree = Tree::new(cosets.len(), &edges)?;
    let mut ball = BassSerreBall { m, k, radius, tree, cosets, depth, index, action: [Vec::new(), Vec::new()] };
    let gens = [FreeProductWord::syllable(m, k, Factor::A, 1), FreeProductWord::syllable(m, k, Factor::B, 1)];
    for (slot, g) in gens.iter().enumerate() {
        ball.action[slot] = (0..ball.cosets.len()).map(|v| ball.image_vertex(g, v)).collect();
    }
    Ok(ball)
}

impl BassSerreBall {
    pub fn base(&self) -> usize {
        0
    }

    pub fn vertex_of(&self, c: &Coset) -> Option<usize> {
        self.index.get(c).copied()
    }

    pub fn image_vertex(&self, g: &FreeProductWord, v: usize) -> Option<usize> {
        self.vertex_of(&self.cosets[v].translate(g))
    }

    pub fn parse_word(&self, text: &str) -> Result<FreeProductWord, TreeError> {
        FreeProductWord::parse(self.m, self.k, text)
    }

    /// The partial map of `g` on subdivision points of the ball.
    pub fn map<'a>(&'a self, g: &'a FreeProductWord) -> BallMap<'a> {
        BallMap { ball: self, g }
    }
}

pub struct BallMap<'a> {
    ball: &'a BassSerreBall,
    g: &'a FreeProductWord,
}

impl PointMap for BallMap<'_> {
    fn image(&self, tree: &Tree, id: usize) -> Option<usize> {
        if tree.is_vertex_id(id) {
            self.ball.image_vertex(self.g, id)
        } else {
            let (u, v) = tree.midpoint_endpoints(id)?;
            let (gu, gv) = (self.ball.image_vertex(self.g, u)?, self.ball.image_vertex(self.g, v)?);
            tree.midpoint_id(gu, gv)
        }
    }
}

/// Minimum over ball vertices within `inner_radius` of the base of the
/// distance, in edges, between `v` and `g·v`.
pub fn min_displacement(ball: &BassSerreBall, g: &FreeProductWord, inner_radius: usize) -> Result<u32, TreeError> {
    let mut best = u32::MAX;
    for v in (0..ball.cosets.len()).filter(|&v| ball.depth[v] <= inner_radius) {
        let w = ball.image_vertex(g, v).ok_or(TreeError::WindowTooLarge { vertex: v })?;
        let d = if v == w { 0 } else { ball.tree.distances_from(v)[w] / 2 };
        best = best.min(d);
        if best == 0 {
            break;
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::{fixed_points, product_criterion_check};
    use proptest::prelude::*;

    #[test]
    fn word_arithmetic() {
        let w = FreeProductWord::parse(2, 3, "a b a^3 b^2").unwrap();
        assert_eq!(w.to_string(), "abab^2");
        assert_eq!(FreeProductWord::parse(2, 3, "ab b^2 a").unwrap().to_string(), "1");
        let w = FreeProductWord::parse(2, 3, "b^-1 b a").unwrap();
        assert_eq!(w.to_string(), "a");
        assert_eq!(w.mul(&w.inv()), FreeProductWord::identity(2, 3));
        assert!(matches!(FreeProductWord::parse(2, 3, "a c"), Err(TreeError::WordParse { position: 2, .. })));
        assert!(FreeProductWord::parse(2, 3, "a^").is_err());
    }

    #[test]
    fn z2_z2_ball_is_a_path() {
        let ball = bass_serre_ball(2, 2, 5, DEFAULT_BALL_CAP).unwrap();
        assert_eq!(ball.tree.num_vertices(), 11);
        for v in 0..11 {
            assert!(ball.tree.neighbors(v).len() <= 2);
        }
    }

    #[test]
    fn z2_z3_degrees_alternate() {
        let ball = bass_serre_ball(2, 3, 6, DEFAULT_BALL_CAP).unwrap();
        for (v, c) in ball.cosets.iter().enumerate() {
            if ball.depth[v] < 6 {
                let expected = if c.factor == Factor::A { 2 } else { 3 };
                assert_eq!(ball.tree.neighbors(v).len(), expected, "{c}");
            }
        }
        // 1 + 2 + 4 + 4 + 8 + 8 + 16
        assert_eq!(ball.tree.num_vertices(), 43);
    }

    #[test]
    fn base_fixed_by_a_moved_by_b() {
        let ball = bass_serre_ball(2, 3, 4, DEFAULT_BALL_CAP).unwrap();
        assert_eq!(ball.action[0][ball.base()], Some(ball.base()));
        assert_ne!(ball.action[1][ball.base()], Some(ball.base()));
    }

    #[test]
    fn displacements() {
        let ball = bass_serre_ball(2, 3, 8, DEFAULT_BALL_CAP).unwrap();
        let d = |s: &str| min_displacement(&ball, &ball.parse_word(s).unwrap(), 4).unwrap();
        assert_eq!(d("a"), 0);
        assert_eq!(d("b"), 0);
        assert_eq!(d(""), 0);
        assert_eq!(d("ab"), 2);
        assert_eq!(d("abab^2"), 4);
        let far = ball.parse_word("abababab").unwrap();
        assert!(matches!(min_displacement(&ball, &far, 8), Err(TreeError::WindowTooLarge { .. })));
    }

    #[test]
    fn product_witness_on_the_ball() {
        let ball = bass_serre_ball(2, 3, 6, DEFAULT_BALL_CAP).unwrap();
        let a = ball.parse_word("a").unwrap();
        let b = ball.parse_word("b").unwrap();
        let ab = a.mul(&b);
        assert!(fixed_points(&ball.tree, &ball.map(&ab)).is_empty());
        let r = product_criterion_check(&ball.tree, &[ball.map(&a)], &[ball.map(&b)]).unwrap();
        assert!(r.intersection.is_empty());
        assert!(!r.products_all_fixed && r.implication_holds);
        let w = r.witness.expect("empty intersection yields a witness");
        assert_eq!(w.closest, ball.tree.point(ball.base()));
        assert_ne!(w.image, Some(w.closest));
    }

    fn short_word() -> impl Strategy<Value = Vec<(bool, i64)>> {
        prop::collection::vec((any::<bool>(), 1i64..3), 0..3)
    }

    fn build(m: u32, k: u32, s: &[(bool, i64)]) -> FreeProductWord {
        let mut w = FreeProductWord::identity(m, k);
        for &(is_a, e) in s {
            w.push(if is_a { Factor::A } else { Factor::B }, e);
        }
        w
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn displacement_is_conjugation_invariant(g in short_word(), w in prop::collection::vec((any::<bool>(), 1i64..3), 0..2)) {
            let ball = bass_serre_ball(2, 3, 14, DEFAULT_BALL_CAP).unwrap();
            let g = build(2, 3, &g);
            let w = build(2, 3, &w);
            let conj = w.mul(&g).mul(&w.inv());
            let d0 = min_displacement(&ball, &g, 6).unwrap();
            let d1 = min_displacement(&ball, &conj, 6).unwrap();
            prop_assert_eq!(d0, d1);
        }
    }
}
