use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{Verdict, VerifyError};
use crate::tree::random::{
    random_pairwise_intersecting_family, random_same_kind_points, random_symmetric_tree, random_tree,
};
use crate::tree::{
    bass_serre_ball, circumcentre_ids, fixed_set_group, helly_check, min_displacement, product_criterion_check,
    triangle_criterion_check_with_cap, ProductWitness, SymmetryStructure, Tree, TreeError, TreeIsom, DEFAULT_BALL_CAP,
};

/// Largest automorphism group enumerated in the fixed-set trials.
const MAX_SUITE_GROUP: u128 = 5_000;
const COUNTEREXAMPLE_LIMIT: usize = 5;

#[derive(Clone, Debug, Default, Serialize)]
pub struct SuiteStats {
    pub trials: usize,
    pub passed: usize,
    pub violations: usize,
    pub counterexamples: Vec<String>,
}

impl SuiteStats {
    fn collect(results: Vec<Result<(), String>>) -> Self {
        let mut s = SuiteStats { trials: results.len(), ..Default::default() };
        for r in results {
            match r {
                Ok(()) => s.passed += 1,
                Err(e) => {
                    s.violations += 1;
                    if s.counterexamples.len() < COUNTEREXAMPLE_LIMIT {
                        s.counterexamples.push(e);
                    }
                }
            }
        }
        s
    }

    pub fn ok(&self) -> bool {
        self.violations == 0
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BassSerreReport {
    pub factors: (u32, u32),
    pub radius: usize,
    pub inner_radius: usize,
    pub ball_vertices: usize,
    pub displacement_a: u32,
    pub displacement_b: u32,
    pub displacement_ab: u32,
    pub product_witness: Option<ProductWitness>,
    pub conjugation_invariance: SuiteStats,
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct TreeSection {
    pub verdict: Verdict,
    pub seed: u64,
    pub iterations: usize,
    pub helly: SuiteStats,
    pub circumcentre_invariance: SuiteStats,
    pub fixed_set_identity: SuiteStats,
    pub triangle_criterion: SuiteStats,
    pub product_criterion: SuiteStats,
    pub bass_serre: BassSerreReport,
}

/// Independent stream per (suite, trial), so trials can run in parallel
/// and still reproduce exactly.
fn trial_rng(seed: u64, suite: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((suite << 32) | trial as u64);
    rng
}

fn describe(tree: &Tree) -> String {
    let edges: Vec<String> = tree.edges().iter().map(|(u, v)| format!("{u} {v}")).collect();
    format!("tree [{}]", edges.join(", "))
}

fn run_trials<F>(seed: u64, suite: u64, trials: usize, f: F) -> SuiteStats
where
    F: Fn(&mut ChaCha8Rng) -> Result<(), String> + Sync,
{
    let results: Vec<Result<(), String>> =
        (0..trials).into_par_iter().map(|t| f(&mut trial_rng(seed, suite, t))).collect();
    SuiteStats::collect(results)
}

fn helly_trial(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let n = rng.gen_range(2..=50);
    let tree = random_tree(rng, n);
    let size = rng.gen_range(3..=5);
    let family = random_pairwise_intersecting_family(rng, &tree, size).map_err(|e| e.to_string())?;
    let v = helly_check(&tree, &family);
    if v.pairwise_ok && v.total_nonempty {
        Ok(())
    } else {
        let sets: Vec<String> = family.iter().map(|s| format!("{:?}", s.ids())).collect();
        Err(format!("{}; family {}; verdict {v:?}", describe(&tree), sets.join(" ")))
    }
}

/// A symmetric tree whose automorphism group is small enough to enumerate.
fn small_symmetric_tree(rng: &mut ChaCha8Rng, max_vertices: usize) -> (Tree, SymmetryStructure) {
    loop {
        let t = random_symmetric_tree(rng, max_vertices);
        let s = SymmetryStructure::new(&t);
        if s.group_order() <= MAX_SUITE_GROUP {
            return (t, s);
        }
    }
}

fn circumcentre_trial(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let (tree, sym) = small_symmetric_tree(rng, 40);
    let g = sym.random_automorphism(&tree, rng);
    let h = sym.random_automorphism(&tree, rng);
    // union of ⟨g⟩-orbits of a few points of the same kind
    let mut orbit = BTreeSet::new();
    for p in random_same_kind_points(rng, &tree) {
        let mut x = p;
        while orbit.insert(x) {
            x = g.apply(&tree, x);
        }
    }
    let pts: Vec<usize> = orbit.iter().copied().collect();
    let fail = |what: &str| {
        format!("{}; g {:?}; h {:?}; orbit {pts:?}: {what}", describe(&tree), g.vertex_map(), h.vertex_map())
    };
    let c = circumcentre_ids(&tree, &pts).map_err(|e| fail(&e.to_string()))?;
    let moved: Vec<usize> = pts.iter().map(|&p| g.apply(&tree, p)).collect();
    let c_g = circumcentre_ids(&tree, &moved).map_err(|e| fail(&e.to_string()))?;
    let moved_h: Vec<usize> = pts.iter().map(|&p| h.apply(&tree, p)).collect();
    let c_h = circumcentre_ids(&tree, &moved_h).map_err(|e| fail(&e.to_string()))?;
    if c_g != c || g.apply(&tree, c) != c {
        return Err(fail("circumcentre of the orbit is not fixed"));
    }
    if c_h != h.apply(&tree, c) {
        return Err(fail("circumcentre is not equivariant"));
    }
    Ok(())
}

/// Random generator lists `A1, A2, A3` drawn from the symmetries of a
/// random symmetric tree.
fn random_triple(rng: &mut ChaCha8Rng, tree: &Tree, sym: &SymmetryStructure) -> [Vec<TreeIsom>; 3] {
    let mut pool = sym.generators(tree);
    pool.retain(|_| rng.gen_bool(0.7));
    for _ in 0..rng.gen_range(0..=2) {
        pool.push(sym.random_automorphism(tree, rng));
    }
    pool.shuffle(rng);
    let mut sets: [Vec<TreeIsom>; 3] = Default::default();
    for g in pool {
        sets[rng.gen_range(0..3)].push(g);
    }
    for s in &mut sets {
        if s.is_empty() {
            s.push(TreeIsom::identity(tree.num_vertices()));
        }
    }
    sets
}

/// One random action; returns (fixed-set identity, triangle criterion).
fn triangle_trial(rng: &mut ChaCha8Rng) -> (Result<(), String>, Result<(), String>) {
    let (tree, sym) = small_symmetric_tree(rng, 30);
    let [a1, a2, a3] = random_triple(rng, &tree, &sym);
    let fail = |what: String| {
        let show = |s: &[TreeIsom]| s.iter().map(|g| format!("{:?}", g.vertex_map())).collect::<Vec<_>>().join(" ");
        format!("{}; A1 {}; A2 {}; A3 {}: {what}", describe(&tree), show(&a1), show(&a2), show(&a3))
    };
    let r = match triangle_criterion_check_with_cap(&tree, &a1, &a2, &a3, MAX_SUITE_GROUP as usize) {
        Ok(r) => r,
        Err(e) => {
            let e = fail(e.to_string());
            return (Err(e.clone()), Err(e));
        }
    };
    let total_identity = {
        let all: Vec<TreeIsom> = a1.iter().chain(&a2).chain(&a3).cloned().collect();
        match fixed_set_group(&tree, &all) {
            Err(e) => Err(fail(format!("fixed set not a subtree: {e}"))),
            Ok(None) => Err(fail("empty fixed set on a finite tree".into())),
            Ok(Some(fix)) => {
                let from_gens: Vec<_> = fix.points(&tree);
                if from_gens == r.group_fix && r.group_fix == r.total_intersection {
                    Ok(())
                } else {
                    Err(fail(format!(
                        "Fix(<A1 u A2 u A3>) = {:?}, intersection = {:?}",
                        r.group_fix, r.total_intersection
                    )))
                }
            }
        }
    };
    let criterion = if r.passed() && r.pairwise_nonempty && r.conclusion_nonempty {
        Ok(())
    } else {
        Err(fail(format!("report {r:?}")))
    };
    (total_identity, criterion)
}

fn product_trial(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let (tree, sym) = small_symmetric_tree(rng, 40);
    let gens = sym.generators(&tree);
    let pick = |rng: &mut ChaCha8Rng| {
        let mut out = Vec::new();
        for _ in 0..rng.gen_range(1..=3) {
            if gens.is_empty() || rng.gen_bool(0.3) {
                out.push(sym.random_automorphism(&tree, rng));
            } else {
                let mut g = TreeIsom::identity(tree.num_vertices());
                for _ in 0..rng.gen_range(1..=3) {
                    g = g.compose(gens.choose(rng).expect("nonempty"));
                }
                out.push(g);
            }
        }
        out
    };
    let a1 = pick(rng);
    let a2 = pick(rng);
    let r = product_criterion_check(&tree, &a1, &a2).map_err(|e| format!("{}: {e}", describe(&tree)))?;
    let witness_ok = r.intersection.is_empty() == r.witness.is_some();
    if r.implication_holds && witness_ok {
        Ok(())
    } else {
        Err(format!("{}; report {r:?}", describe(&tree)))
    }
}

fn bass_serre_demo(seed: u64, trials: usize) -> Result<BassSerreReport, VerifyError> {
    let (radius, inner_radius) = (8, 4);
    let ball = bass_serre_ball(2, 3, radius, DEFAULT_BALL_CAP)?;
    let word = |s: &str| ball.parse_word(s);
    let (a, b) = (word("a")?, word("b")?);
    let ab = a.mul(&b);
    let displacement_a = min_displacement(&ball, &a, inner_radius)?;
    let displacement_b = min_displacement(&ball, &b, inner_radius)?;
    let displacement_ab = min_displacement(&ball, &ab, inner_radius)?;
    let product = product_criterion_check(&ball.tree, &[ball.map(&a)], &[ball.map(&b)])?;

    let big = bass_serre_ball(2, 3, 14, DEFAULT_BALL_CAP)?;
    let conjugation_invariance = run_trials(seed, 6, trials, |rng| {
        let mut random_word = |max: usize| {
            let mut w = crate::tree::FreeProductWord::identity(2, 3);
            for _ in 0..rng.gen_range(0..=max) {
                let s = if rng.gen_bool(0.5) { "a" } else { "b" };
                w = w.mul(&crate::tree::FreeProductWord::parse(2, 3, s).expect("letter"));
            }
            w
        };
        let g = random_word(3);
        let w = random_word(2);
        let conj = w.mul(&g).mul(&w.inv());
        let d = |x| min_displacement(&big, x, 6).map_err(|e: TreeError| e.to_string());
        let (d0, d1) = (d(&g)?, d(&conj)?);
        if d0 == d1 {
            Ok(())
        } else {
            Err(format!("g = {g}, w = {w}: displacement {d0} vs {d1}"))
        }
    });
    let ok = displacement_a == 0
        && displacement_b == 0
        && displacement_ab == 2
        && product.witness.is_some()
        && conjugation_invariance.ok();
    Ok(BassSerreReport {
        factors: (2, 3),
        radius,
        inner_radius,
        ball_vertices: ball.tree.num_vertices(),
        displacement_a,
        displacement_b,
        displacement_ab,
        product_witness: product.witness,
        conjugation_invariance,
        ok,
    })
}

/// Seeded randomized checks of the tree lemmas. The Helly suite runs
/// `iterations` trials; the others run `iterations / 2` (at least one).
pub fn run_tree_suite(seed: u64, iterations: usize) -> Result<TreeSection, VerifyError> {
    if iterations == 0 {
        return Err(VerifyError::Unsupported("iterations must be at least 1".into()));
    }
    let half = (iterations / 2).max(1);
    let helly = run_trials(seed, 1, iterations, helly_trial);
    let circumcentre_invariance = run_trials(seed, 2, half, circumcentre_trial);
    let pairs: Vec<(Result<(), String>, Result<(), String>)> =
        (0..half).into_par_iter().map(|t| triangle_trial(&mut trial_rng(seed, 3, t))).collect();
    let (ids, crits): (Vec<_>, Vec<_>) = pairs.into_iter().unzip();
    let fixed_set_identity = SuiteStats::collect(ids);
    let triangle_criterion = SuiteStats::collect(crits);
    let product_criterion = run_trials(seed, 4, half, product_trial);
    let bass_serre = bass_serre_demo(seed, half.min(200))?;
    let ok = helly.ok()
        && circumcentre_invariance.ok()
        && fixed_set_identity.ok()
        && triangle_criterion.ok()
        && product_criterion.ok()
        && bass_serre.ok;
    Ok(TreeSection {
        verdict: if ok { Verdict::Pass } else { Verdict::Fail },
        seed,
        iterations,
        helly,
        circumcentre_invariance,
        fixed_set_identity,
        triangle_criterion,
        product_criterion,
        bass_serre,
    })
}
