use std::collections::HashMap;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use super::aut::HEAVY_RANK_LIMIT;
use super::sets::{build_generating_sets, build_witness_table};
use super::{Verdict, VerifyError};
use crate::closure::{enumerate_closure, finite_inverse, witness_evaluate, ClosureSummary, Labeled};
use crate::freegroup::{Basis, FreeAut, NamedGenerator};
use crate::intmat::IntMatrix;

/// Default word-length budget for the even-rank search for the
/// elementary matrices.
pub const PINNED_SL_EVEN_DEPTH: usize = 14;

/// Budget used for rank `n` when none is given. Depth 14 finds all twelve
/// `E_ij(1)` in `SL(4,Z)` (longest word 11); `SL(6,Z)` needs 19.
pub fn pinned_sl_even_depth(n: usize) -> usize {
    match n {
        6 => 20,
        _ => PINNED_SL_EVEN_DEPTH,
    }
}

const ORDER_CAP: u64 = 64;

#[derive(Clone, Debug, Serialize)]
pub struct MatrixEntry {
    pub label: String,
    pub det: String,
    pub matrix: IntMatrix,
}

#[derive(Clone, Debug, Serialize)]
pub struct SlClosure {
    pub name: String,
    pub closure: ClosureSummary,
    pub all_det_one: Option<bool>,
}

/// A Nielsen witness word pushed through abelianization and the twist.
#[derive(Clone, Debug, Serialize)]
pub struct TransferCheck {
    pub target: String,
    pub via: String,
    pub word_length: usize,
    /// `∏ twist(g_i) = (∏ det g_i) · ∏ g_i`
    pub twist_law: bool,
    pub hit: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct BfsTarget {
    pub target: String,
    pub found: bool,
    pub length: Option<usize>,
    pub word: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct BfsReport {
    pub depth: usize,
    pub letters: Vec<String>,
    pub ball_radius: usize,
    pub ball_size: usize,
    pub targets: Vec<BfsTarget>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SlSection {
    pub verdict: Verdict,
    pub case: &'static str,
    pub dimension: usize,
    pub generators: Vec<MatrixEntry>,
    pub all_generators_det_one: bool,
    pub closures: Vec<SlClosure>,
    pub transfer: Option<Vec<TransferCheck>>,
    pub bfs: Option<BfsReport>,
    pub notes: Vec<String>,
}

pub fn elementary_label(i: usize, j: usize) -> String {
    if i < 10 && j < 10 {
        format!("E_{i}{j}(1)")
    } else {
        format!("E_{i},{j}(1)")
    }
}

fn twist(label: &str, f: &FreeAut) -> Result<Labeled<IntMatrix>, VerifyError> {
    Ok(Labeled::new(format!("{label}+"), f.abelianize().det_twist()?))
}

/// `A_i^+(n)`: abelianized and determinant-twisted copies of `A_i`.
pub fn twisted_sets(n: usize) -> Result<[Vec<Labeled<IntMatrix>>; 3], VerifyError> {
    let sets = build_generating_sets(n)?;
    let tw = |s: &[Labeled<FreeAut>]| s.iter().map(|g| twist(&g.label, &g.element)).collect::<Result<Vec<_>, _>>();
    Ok([tw(&sets.a1)?, tw(&sets.a2)?, tw(&sets.a3)?])
}

/// `ᾱ`: the abelianization of `α = ε_n ∘ (a_n a_{n-1})`, of determinant 1.
pub fn alpha_bar(n: usize) -> Result<Labeled<IntMatrix>, VerifyError> {
    let a = FreeAut::from_generator(&NamedGenerator::Alpha, Basis::new(n)?)?;
    Ok(Labeled::new("alpha-bar", a.abelianize()))
}

fn entry(g: &Labeled<IntMatrix>) -> MatrixEntry {
    MatrixEntry { label: g.label.clone(), det: g.element.det().to_string(), matrix: g.element.clone() }
}

fn closures(
    groups: &[(&str, Vec<Labeled<IntMatrix>>)],
    cap: usize,
    notes: &mut Vec<String>,
) -> Result<Vec<SlClosure>, VerifyError> {
    let one = BigInt::from(1);
    groups
        .iter()
        .map(|(name, gens)| {
            let r = enumerate_closure(gens, cap)?;
            if !r.complete {
                notes.push(format!("{name}: closure hit the cap of {cap} elements"));
            }
            let all_det_one = r.complete.then(|| r.elements().par_iter().all(|g| g.det() == one));
            Ok(SlClosure { name: name.to_string(), closure: r.summary(ORDER_CAP)?, all_det_one })
        })
        .collect()
}

fn joined(parts: &[&[Labeled<IntMatrix>]]) -> Vec<Labeled<IntMatrix>> {
    parts.iter().flat_map(|p| p.iter().cloned()).collect()
}

/// `SL(n,Z)` checks: the twisted construction for odd `n`, the embedded
/// construction with `ᾱ` for even `n`.
pub fn verify_sl(n: usize, cap: usize, bfs_depth: usize) -> Result<SlSection, VerifyError> {
    if n < 3 {
        return Err(VerifyError::RankTooSmall(n));
    }
    if n % 2 == 1 {
        verify_sl_odd(n, cap)
    } else {
        verify_sl_even(n, cap, bfs_depth)
    }
}

fn finish(verdict: &mut Verdict, notes: &[String]) {
    if *verdict == Verdict::Pass && notes.iter().any(|n| n.contains("hit the cap")) {
        *verdict = Verdict::Inconclusive;
    }
}

fn verify_sl_odd(n: usize, cap: usize) -> Result<SlSection, VerifyError> {
    let [a1, a2, a3] = twisted_sets(n)?;
    let one = BigInt::from(1);
    let mut notes = Vec::new();
    let mut verdict = Verdict::Pass;
    let gens: Vec<_> = a1.iter().chain(&a2).chain(&a3).cloned().collect();
    let all_generators_det_one = gens.iter().all(|g| g.element.det() == one);

    let mut groups = vec![("H12+", joined(&[&a1, &a2])), ("H23+", joined(&[&a2, &a3]))];
    if n <= HEAVY_RANK_LIMIT {
        groups.insert(1, ("H13+", joined(&[&a1, &a3])));
    } else {
        notes.push(format!("H13+ closure skipped above rank {HEAVY_RANK_LIMIT}"));
    }
    let closures = closures(&groups, cap, &mut notes)?;

    // transfer of the Nielsen witnesses: abelianize(ρ_ji) = E_ij(1)
    let sets = build_generating_sets(n)?;
    let table = build_witness_table(n)?;
    let plain: HashMap<String, IntMatrix> = sets.all().map(|g| (g.label.clone(), g.element.abelianize())).collect();
    let twisted: HashMap<String, IntMatrix> = sets
        .all()
        .map(|g| Ok((g.label.clone(), g.element.abelianize().det_twist()?)))
        .collect::<Result<_, VerifyError>>()?;
    let mut transfer = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            if i == j {
                continue;
            }
            let via = NamedGenerator::Rho(j, i).to_string();
            let word = &table.entries[&via].word;
            let tw = witness_evaluate(word, &twisted)?;
            let p = witness_evaluate(word, &plain)?;
            let sign: BigInt = word.labels().iter().map(|l| plain[l].det()).product();
            let target = IntMatrix::elementary(n, i, j, 1)?;
            transfer.push(TransferCheck {
                target: elementary_label(i, j),
                via,
                word_length: word.len(),
                twist_law: tw == p.scale(&sign),
                hit: tw == target,
            });
        }
    }
    let ok = all_generators_det_one
        && closures.iter().all(|c| c.all_det_one != Some(false))
        && transfer.iter().all(|t| t.twist_law && t.hit);
    if !ok {
        verdict = Verdict::Fail;
    }
    finish(&mut verdict, &notes);
    Ok(SlSection {
        verdict,
        case: "odd",
        dimension: n,
        generators: gens.iter().map(entry).collect(),
        all_generators_det_one,
        closures,
        transfer: Some(transfer),
        bfs: None,
        notes,
    })
}

fn verify_sl_even(n: usize, cap: usize, bfs_depth: usize) -> Result<SlSection, VerifyError> {
    let [a1, a2, a3] = twisted_sets(n - 1)?;
    let embed = |s: Vec<Labeled<IntMatrix>>| {
        s.into_iter().map(|g| Ok(Labeled::new(g.label, g.element.embed(n)?))).collect::<Result<Vec<_>, VerifyError>>()
    };
    let (mut a1, a2, a3) = (embed(a1)?, embed(a2)?, embed(a3)?);
    a1.push(alpha_bar(n)?);
    let one = BigInt::from(1);
    let mut notes = Vec::new();
    let mut verdict = Verdict::Pass;
    let gens: Vec<_> = a1.iter().chain(&a2).chain(&a3).cloned().collect();
    let all_generators_det_one = gens.iter().all(|g| g.element.det() == one);

    let mut groups = vec![("H12+", joined(&[&a1, &a2])), ("H23+", joined(&[&a2, &a3]))];
    if n <= HEAVY_RANK_LIMIT {
        groups.insert(1, ("H13+", joined(&[&a1, &a3])));
    } else {
        notes.push(format!("H13+ closure skipped above rank {HEAVY_RANK_LIMIT}"));
    }
    let closures = closures(&groups, cap, &mut notes)?;
    if !all_generators_det_one || closures.iter().any(|c| c.all_det_one == Some(false)) {
        verdict = Verdict::Fail;
    }

    let bfs = search_elementary(n, &gens, bfs_depth)?;
    if verdict == Verdict::Pass && !bfs.targets.iter().all(|t| t.found) {
        notes.push(format!("some E_ij(1) not reached within word length {bfs_depth}"));
        verdict = Verdict::Inconclusive;
    }
    finish(&mut verdict, &notes);
    Ok(SlSection {
        verdict,
        case: "even",
        dimension: n,
        generators: gens.iter().map(entry).collect(),
        all_generators_det_one,
        closures,
        transfer: None,
        bfs: Some(bfs),
        notes,
    })
}

/// Small dense matrix with checked `i64` entries, used only inside the
/// search; every word found is re-evaluated exactly with [`IntMatrix`].
#[derive(Clone, PartialEq, Eq, Hash)]
struct Small {
    n: usize,
    a: Vec<i64>,
}

impl Small {
    fn from_int(m: &IntMatrix) -> Result<Small, VerifyError> {
        use num_traits::ToPrimitive;
        let a = m
            .rows()
            .flatten()
            .map(|x| x.to_i64().ok_or_else(|| VerifyError::Internal("generator entry exceeds i64".into())))
            .collect::<Result<_, _>>()?;
        Ok(Small { n: m.dim(), a })
    }

    fn mul(&self, o: &Small) -> Option<Small> {
        let n = self.n;
        let mut a = vec![0i64; n * n];
        for i in 0..n {
            for k in 0..n {
                let x = self.a[i * n + k];
                if x == 0 {
                    continue;
                }
                for j in 0..n {
                    let y = o.a[k * n + j];
                    if y != 0 {
                        a[i * n + j] = a[i * n + j].checked_add(x.checked_mul(y)?)?;
                    }
                }
            }
        }
        Some(Small { n, a })
    }
}

/// Words of length at most `radius` over `letters`, breadth first, with
/// each element's inverse alongside. Words are stored as parent links.
struct Ball {
    elems: Vec<Small>,
    invs: Vec<Small>,
    parent: Vec<(usize, u16)>,
    len: Vec<u16>,
    index: HashMap<Small, usize>,
}

impl Ball {
    fn build(letters: &[(Small, Small)], radius: usize) -> Result<Ball, VerifyError> {
        let n = letters[0].0.n;
        let id = Small::from_int(&IntMatrix::identity(n))?;
        let mut ball = Ball {
            elems: vec![id.clone()],
            invs: vec![id.clone()],
            parent: vec![(0, u16::MAX)],
            len: vec![0],
            index: HashMap::from([(id, 0)]),
        };
        let mut frontier = vec![0usize];
        for depth in 1..=radius {
            let products: Vec<Option<(usize, u16, Small, Small)>> = frontier
                .par_iter()
                .flat_map_iter(|&x| {
                    let (e, inv) = (&ball.elems[x], &ball.invs[x]);
                    letters
                        .iter()
                        .enumerate()
                        .map(move |(k, (s, s_inv))| Some((x, k as u16, e.mul(s)?, s_inv.mul(inv)?)))
                })
                .collect();
            let mut next = Vec::new();
            for p in products {
                let (x, k, y, y_inv) = p.ok_or_else(|| VerifyError::Internal("search entries exceed i64".into()))?;
                if ball.index.contains_key(&y) {
                    continue;
                }
                ball.index.insert(y.clone(), ball.elems.len());
                next.push(ball.elems.len());
                ball.elems.push(y);
                ball.invs.push(y_inv);
                ball.parent.push((x, k));
                ball.len.push(depth as u16);
            }
            frontier = next;
        }
        Ok(ball)
    }

    fn word(&self, mut x: usize) -> Vec<u16> {
        let mut w = Vec::with_capacity(self.len[x] as usize);
        while x != 0 {
            let (p, k) = self.parent[x];
            w.push(k);
            x = p;
        }
        w.reverse();
        w
    }

    /// Shortest `x·y = t` with `x`, `y` in the ball, ties broken by position.
    fn split(&self, t: &Small) -> Option<(usize, usize)> {
        (0..self.elems.len())
            .into_par_iter()
            .filter_map(|x| {
                let y = self.invs[x].mul(t)?;
                let yi = *self.index.get(&y)?;
                Some((self.len[x] + self.len[yi], x, yi))
            })
            .min()
            .map(|(_, x, y)| (x, y))
    }
}

/// Meet-in-the-middle search for every `E_ij(1)` as a word of length at
/// most `depth` in `gens` and their inverses.
pub fn search_elementary(n: usize, gens: &[Labeled<IntMatrix>], depth: usize) -> Result<BfsReport, VerifyError> {
    let mut letters = Vec::new();
    let mut names = Vec::new();
    for g in gens {
        let inv = finite_inverse(&g.element, ORDER_CAP)?
            .ok_or_else(|| VerifyError::Unsupported(format!("{} has infinite order", g.label)))?;
        let involution = inv == g.element;
        letters.push((g.element.clone(), inv.clone()));
        names.push(g.label.clone());
        if !involution {
            letters.push((inv, g.element.clone()));
            names.push(format!("{}^-1", g.label));
        }
    }
    let small = letters
        .iter()
        .map(|(a, b)| Ok((Small::from_int(a)?, Small::from_int(b)?)))
        .collect::<Result<Vec<_>, VerifyError>>()?;
    let radius = depth.div_ceil(2);
    let ball = Ball::build(&small, radius)?;
    let mut targets = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            if i == j {
                continue;
            }
            let t = IntMatrix::elementary(n, i, j, 1)?;
            let found =
                ball.split(&Small::from_int(&t)?).filter(|&(x, y)| (ball.len[x] + ball.len[y]) as usize <= depth);
            let (length, word) = match found {
                Some((x, y)) => {
                    let w: Vec<u16> = ball.word(x).into_iter().chain(ball.word(y)).collect();
                    let mut check = IntMatrix::identity(n);
                    for &k in &w {
                        check = check.mul(&letters[k as usize].0)?;
                    }
                    if check != t {
                        return Err(VerifyError::Internal(format!(
                            "search word for {} does not evaluate",
                            elementary_label(i, j)
                        )));
                    }
                    let text: Vec<&str> = w.iter().map(|&k| names[k as usize].as_str()).collect();
                    (Some(w.len()), Some(text.join(" ∘ ")))
                }
                None => (None, None),
            };
            targets.push(BfsTarget { target: elementary_label(i, j), found: length.is_some(), length, word });
        }
    }
    Ok(BfsReport { depth, letters: names, ball_radius: radius, ball_size: ball.elems.len(), targets })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closure::DEFAULT_CAP;

    #[test]
    fn odd_rank_three() {
        let s = verify_sl(3, DEFAULT_CAP, PINNED_SL_EVEN_DEPTH).unwrap();
        assert_eq!(s.verdict, Verdict::Pass);
        assert!(s.all_generators_det_one);
        let t = s.transfer.unwrap();
        assert_eq!(t.len(), 6);
        let e21 = t.iter().find(|c| c.target == "E_21(1)").unwrap();
        assert_eq!(e21.via, "rho 1 2");
        assert!(e21.hit && e21.twist_law);
    }

    #[test]
    fn alpha_bar_is_a_rotation() {
        let a = alpha_bar(4).unwrap().element;
        assert_eq!(a.det(), BigInt::from(1));
        assert!(!a.mul(&a).unwrap().is_identity());
        assert!(a.mul(&a).unwrap().mul(&a).unwrap().mul(&a).unwrap().is_identity());
    }

    #[test]
    fn shallow_search_is_inconclusive() {
        let s = verify_sl(4, DEFAULT_CAP, 2).unwrap();
        assert_eq!(s.verdict, Verdict::Inconclusive);
        assert!(s.closures.iter().all(|c| c.closure.complete));
    }
}
