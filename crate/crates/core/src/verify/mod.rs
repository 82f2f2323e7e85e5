//! Builds the generating sets for each rank, runs every certificate and
//! assembles the report.

mod aut;
mod sets;
mod sl;
mod tree_suite;

use std::collections::BTreeMap;
use std::fmt;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

pub use aut::{expected_h12_order, verify_aut, wn_order, AutSection, HEAVY_RANK_LIMIT};
pub use sets::{
    anchor_checks, build_generating_sets, build_witness_table, AnchorCheck, GeneratingSets, WitnessCheck, WitnessEntry,
    WitnessTable,
};
pub use sl::{
    alpha_bar, elementary_label, pinned_sl_even_depth, search_elementary, twisted_sets, verify_sl, BfsReport,
    SlSection, PINNED_SL_EVEN_DEPTH,
};
pub use tree_suite::{run_tree_suite, SuiteStats, TreeSection};

use crate::closure::{CarrierError, ClosureError};
use crate::freegroup::FreeGroupError;
use crate::intmat::MatrixError;
use crate::tree::TreeError;

pub const ASSUMPTION: &str =
    "Nielsen: Aut(F_n) is generated by the rho_ij and eps_i; generation is certified by words for these";

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("rank {0} is too small; need n >= 3")]
    RankTooSmall(usize),
    #[error(transparent)]
    FreeGroup(#[from] FreeGroupError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Closure(#[from] ClosureError),
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error("{0}")]
    Unsupported(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl From<CarrierError> for VerifyError {
    fn from(e: CarrierError) -> Self {
        VerifyError::Closure(ClosureError::from(e))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Pass,
    Inconclusive,
    Fail,
}

impl Verdict {
    /// The worse of the two: `Fail` over `Inconclusive` over `Pass`.
    pub fn and(self, other: Verdict) -> Verdict {
        self.max(other)
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Pass => 0,
            Verdict::Fail => 1,
            Verdict::Inconclusive => 2,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Inconclusive => "INCONCLUSIVE",
            Verdict::Fail => "FAIL",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Check {
    Aut,
    Sl,
    Tree,
    All,
}

impl Check {
    fn aut(self) -> bool {
        matches!(self, Check::Aut | Check::All)
    }
    fn sl(self) -> bool {
        matches!(self, Check::Sl | Check::All)
    }
    fn tree(self) -> bool {
        matches!(self, Check::Tree | Check::All)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Config {
    pub ranks: (usize, usize),
    pub check: Check,
    pub cap: usize,
    /// Even-rank search budget; `None` uses the pinned depth for each rank.
    pub bfs_depth: Option<usize>,
    pub seed: u64,
    pub iters: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            ranks: (3, 6),
            check: Check::All,
            cap: crate::closure::DEFAULT_CAP,
            bfs_depth: None,
            seed: 42,
            iters: 1000,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RankReport {
    pub n: usize,
    pub verdict: Verdict,
    pub aut: Option<AutSection>,
    pub sl: Option<SlSection>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub assumption: &'static str,
    pub config: Config,
    pub verdict: Verdict,
    pub ranks: Vec<RankReport>,
    pub tree: Option<TreeSection>,
    /// Wall-clock milliseconds per section; the only nondeterministic field.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<BTreeMap<String, f64>>,
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, f64) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed().as_secs_f64() * 1e3)
}

/// Runs the selected sections. Ranks run in parallel; the report is
/// assembled in rank order.
pub fn run(config: &Config) -> Result<Report, VerifyError> {
    let (lo, hi) = config.ranks;
    if lo < 3 {
        return Err(VerifyError::RankTooSmall(lo));
    }
    let per_rank: Vec<(RankReport, Vec<(String, f64)>)> = (lo..=hi)
        .into_par_iter()
        .map(|n| {
            let mut times = Vec::new();
            let aut = if config.check.aut() {
                let (r, ms) = timed(|| verify_aut(n, config.cap));
                times.push((format!("n={n}/aut"), ms));
                Some(r?)
            } else {
                None
            };
            let sl = if config.check.sl() {
                let (r, ms) =
                    timed(|| verify_sl(n, config.cap, config.bfs_depth.unwrap_or_else(|| pinned_sl_even_depth(n))));
                times.push((format!("n={n}/sl"), ms));
                Some(r?)
            } else {
                None
            };
            let verdict =
                aut.iter().map(|a| a.verdict).chain(sl.iter().map(|s| s.verdict)).fold(Verdict::Pass, Verdict::and);
            Ok((RankReport { n, verdict, aut, sl }, times))
        })
        .collect::<Result<_, VerifyError>>()?;

    let mut timings = BTreeMap::new();
    let mut ranks = Vec::new();
    for (r, times) in per_rank {
        timings.extend(times);
        ranks.push(r);
    }
    let tree = if config.check.tree() {
        let (r, ms) = timed(|| run_tree_suite(config.seed, config.iters));
        timings.insert("tree".into(), ms);
        Some(r?)
    } else {
        None
    };
    let verdict =
        ranks.iter().map(|r| r.verdict).chain(tree.iter().map(|t| t.verdict)).fold(Verdict::Pass, Verdict::and);
    Ok(Report { assumption: ASSUMPTION, config: config.clone(), verdict, ranks, tree, timings: Some(timings) })
}

impl Report {
    /// JSON with sorted keys inside maps and struct fields in declaration order.
    pub fn to_json(&self, with_timings: bool) -> String {
        let mut r = self.clone();
        if !with_timings {
            r.timings = None;
        }
        serde_json::to_string_pretty(&r).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let mut line = |s: String| {
            out.push_str(&s);
            out.push('\n');
        };
        line(format!("assumption: {}", self.assumption));
        for r in &self.ranks {
            line(format!("n={}: {}", r.n, r.verdict));
            if let Some(a) = &r.aut {
                line(format!(
                    "  aut {}: order(theta eta)={} order(theta tau)={} |H23|={} |H12|={} (expected {}) |H13|={} witnesses {}/{}",
                    a.verdict,
                    a.orders.theta_eta,
                    a.orders.theta_tau,
                    a.h23.closure.order,
                    a.h12.closure.order,
                    a.h12.expected_order,
                    a.h13.closure.as_ref().map_or("skipped".to_string(), |c| c.order.to_string()),
                    a.witnesses.verified,
                    a.witnesses.entries,
                ));
                for note in &a.notes {
                    line(format!("    note: {note}"));
                }
            }
            if let Some(s) = &r.sl {
                let closures: Vec<String> =
                    s.closures.iter().map(|c| format!("|{}|={}", c.name, c.closure.order)).collect();
                let mut desc = format!("  sl {} ({} case): {}", s.verdict, s.case, closures.join(" "));
                if let Some(t) = &s.transfer {
                    let hits = t.iter().filter(|c| c.hit).count();
                    desc.push_str(&format!(" transferred witnesses {hits}/{}", t.len()));
                }
                if let Some(b) = &s.bfs {
                    let found = b.targets.iter().filter(|t| t.found).count();
                    let longest = b.targets.iter().filter_map(|t| t.length).max().unwrap_or(0);
                    desc.push_str(&format!(
                        " search depth {}: {found}/{} found, longest {longest}",
                        b.depth,
                        b.targets.len()
                    ));
                }
                line(desc);
                for note in &s.notes {
                    line(format!("    note: {note}"));
                }
            }
        }
        if let Some(t) = &self.tree {
            line(format!("tree {} (seed {}, {} iterations)", t.verdict, t.seed, t.iterations));
            let stat = |name: &str, s: &SuiteStats| format!("  {name}: {}/{} passed", s.passed, s.trials);
            line(stat("helly", &t.helly));
            line(stat("circumcentre invariance", &t.circumcentre_invariance));
            line(stat("fixed-set identity", &t.fixed_set_identity));
            line(stat("triangle criterion", &t.triangle_criterion));
            line(stat("product criterion", &t.product_criterion));
            let b = &t.bass_serre;
            line(format!(
                "  bass-serre Z{}*Z{} radius {} inner {}: displacement a={} b={} ab={}",
                b.factors.0,
                b.factors.1,
                b.radius,
                b.inner_radius,
                b.displacement_a,
                b.displacement_b,
                b.displacement_ab
            ));
            for s in [
                &t.helly,
                &t.circumcentre_invariance,
                &t.fixed_set_identity,
                &t.triangle_criterion,
                &t.product_criterion,
            ] {
                for c in &s.counterexamples {
                    line(format!("    counterexample: {c}"));
                }
            }
        }
        if let Some(times) = &self.timings {
            for (k, ms) in times {
                line(format!("time {k}: {ms:.1} ms"));
            }
        }
        line(format!("verdict: {}", self.verdict));
        out
    }
}
