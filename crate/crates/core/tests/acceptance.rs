//! Acceptance criteria 1-10. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use triangle_fa::closure::DEFAULT_CAP;
use triangle_fa::freegroup::{compose_named, Basis, NamedGenerator, Order};
use triangle_fa::tree::{bass_serre_ball, min_displacement, DEFAULT_BALL_CAP};
use triangle_fa::verify::{
    anchor_checks, build_generating_sets, build_witness_table, pinned_sl_even_depth, run, run_tree_suite, verify_aut,
    verify_sl, wn_order, Check, Config, TreeSection, Verdict,
};

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(elapsed: Duration, limit_s: f64, what: &str) -> Result<(), String> {
    ensure(elapsed.as_secs_f64() < limit_s, format!("{what} took {:.2} s, limit {limit_s} s", elapsed.as_secs_f64()))
}

fn c1_orders() -> Outcome {
    let start = Instant::now();
    for n in 3..=6 {
        let basis = Basis::new(n).map_err(|e| e.to_string())?;
        let te = compose_named(basis, &[NamedGenerator::Theta, NamedGenerator::Eta]).map_err(|e| e.to_string())?;
        let tt = compose_named(basis, &[NamedGenerator::Theta, NamedGenerator::Tau]).map_err(|e| e.to_string())?;
        ensure(te.order(64) == Order::Finite(3), format!("n={n}: order(theta eta) = {:?}", te.order(64)))?;
        ensure(tt.order(64) == Order::Finite(4), format!("n={n}: order(theta tau) = {:?}", tt.order(64)))?;
    }
    within(start.elapsed(), 1.0, "order checks")?;
    Ok("order(theta eta)=3, order(theta tau)=4 for n=3..6".into())
}

fn c2_structure() -> Outcome {
    let mut h13 = Vec::new();
    for n in 3..=6 {
        let start = Instant::now();
        let a = verify_aut(n, DEFAULT_CAP).map_err(|e| e.to_string())?;
        within(start.elapsed(), 30.0, &format!("n={n} aut section"))?;
        ensure(a.h23.closure.complete && a.h23.closure.order == 8, format!("n={n}: |H23| = {}", a.h23.closure.order))?;
        ensure(a.h23.dihedral.is_certified(), format!("n={n}: no dihedral certificate for H23"))?;
        let expected = 6 * (1u64 << (n - 2)) * (1..=(n as u64 - 2)).product::<u64>();
        let product = a.h12.direct_product.certificate().map(|c| c.product_order as u64);
        ensure(product == Some(expected), format!("n={n}: H12 direct product order {product:?}, expected {expected}"))?;
        ensure(a.h12.closure.complete && a.h12.closure.order as u64 == expected, format!("n={n}: |H12| mismatch"))?;
        let c = a.h13.closure.as_ref().ok_or(format!("n={n}: H13 skipped"))?;
        ensure(c.complete, format!("n={n}: H13 incomplete"))?;
        ensure(a.h13.all_monomial == Some(true), format!("n={n}: H13 has a non-monomial element"))?;
        ensure(c.order as u128 == wn_order(n), format!("n={n}: |H13| = {}", c.order))?;
        h13.push(c.order.to_string());
    }
    let frozen = ["48", "384", "3840", "46080"];
    ensure(h13 == frozen, format!("|H13| = {h13:?}"))?;
    Ok(format!("|H23|=8 dihedral, H12 direct products, |H13|={} all monomial", h13.join("/")))
}

fn c3_witnesses() -> Outcome {
    let mut total = 0;
    for n in 3..=6 {
        let start = Instant::now();
        let sets = build_generating_sets(n).map_err(|e| e.to_string())?;
        let table = build_witness_table(n).map_err(|e| e.to_string())?;
        let checks = table.verify(&sets).map_err(|e| e.to_string())?;
        ensure(checks.len() == n * (n - 1) + n + n * (n - 1) / 2, format!("n={n}: {} entries", checks.len()))?;
        if let Some(bad) = checks.iter().find(|c| !c.evaluates || !c.abelian_transfer) {
            return Err(format!("n={n}: witness for {} does not evaluate", bad.target));
        }
        let anchors = anchor_checks(n).map_err(|e| e.to_string())?;
        if let Some(bad) = anchors.iter().find(|a| !a.holds) {
            return Err(format!("n={n}: anchor {} fails", bad.identity));
        }
        within(start.elapsed(), 1.0, &format!("n={n} witnesses"))?;
        total += checks.len();
    }
    Ok(format!("{total} witness words and all anchors evaluate exactly for n=3..6"))
}

fn c4_sl_odd() -> Outcome {
    let start = Instant::now();
    let frozen = [(3, [12, 24, 8]), (5, [288, 1920, 8])];
    for (n, orders) in frozen {
        let s = verify_sl(n, DEFAULT_CAP, pinned_sl_even_depth(n)).map_err(|e| e.to_string())?;
        ensure(s.case == "odd", format!("n={n}: case {}", s.case))?;
        ensure(s.all_generators_det_one, format!("n={n}: a twisted generator has det != 1"))?;
        for (c, want) in s.closures.iter().zip(orders) {
            ensure(c.closure.complete && c.all_det_one == Some(true), format!("n={n}: {} not all det 1", c.name))?;
            ensure(c.closure.order == want, format!("n={n}: |{}| = {}, expected {want}", c.name, c.closure.order))?;
        }
        let transfer = s.transfer.as_ref().ok_or(format!("n={n}: no transferred witnesses"))?;
        ensure(transfer.len() == n * (n - 1), format!("n={n}: {} transfers", transfer.len()))?;
        if let Some(bad) = transfer.iter().find(|t| !t.hit || !t.twist_law) {
            return Err(format!("n={n}: transfer to {} misses", bad.target));
        }
        ensure(s.verdict == Verdict::Pass, format!("n={n}: {}", s.verdict))?;
    }
    within(start.elapsed(), 10.0, "odd SL checks")?;
    Ok("n=3,5: det 1 throughout, H12+/H13+/H23+ = 12/24/8 and 288/1920/8, all E_ij(1) hit".into())
}

fn c5_sl_even() -> Outcome {
    let depth = pinned_sl_even_depth(4);
    let s = verify_sl(4, DEFAULT_CAP, depth).map_err(|e| e.to_string())?;
    ensure(s.case == "even", format!("case {}", s.case))?;
    for (c, want) in s.closures.iter().zip([48, 192, 8]) {
        ensure(c.closure.complete && c.closure.order == want, format!("|{}| = {}", c.name, c.closure.order))?;
    }
    let bfs = s.bfs.as_ref().ok_or("no search report")?;
    let found = bfs.targets.iter().filter(|t| t.found).count();
    ensure(
        bfs.targets.len() == 12 && found == 12,
        format!("{found}/{} found, verdict {}", bfs.targets.len(), s.verdict),
    )?;
    ensure(s.verdict == Verdict::Pass, format!("verdict {}", s.verdict))?;
    let longest = bfs.targets.iter().filter_map(|t| t.length).max().unwrap_or(0);
    Ok(format!("n=4: closures 48/192/8 with alpha-bar, 12/12 E_ij(1) within depth {depth} (longest {longest})"))
}

fn c6_helly(t: &TreeSection, elapsed: Duration) -> Outcome {
    within(elapsed, 5.0, "tree suite")?;
    ensure(t.helly.trials == 1000 && t.helly.violations == 0, format!("{:?}", t.helly))?;
    Ok(format!("{}/{} pairwise-intersecting families meet", t.helly.passed, t.helly.trials))
}

fn c7_fixed_set(t: &TreeSection, elapsed: Duration) -> Outcome {
    within(elapsed, 10.0, "tree suite")?;
    let s = &t.fixed_set_identity;
    ensure(s.trials == 500 && s.violations == 0, format!("{s:?}"))?;
    Ok(format!("{}/{} actions satisfy Fix(<A1,A2,A3>) = Fix(A1)&Fix(A2)&Fix(A3)", s.passed, s.trials))
}

fn c8_circumcentre(t: &TreeSection) -> Outcome {
    let s = &t.circumcentre_invariance;
    ensure(s.trials == 500 && s.violations == 0, format!("{s:?}"))?;
    Ok(format!("{}/{} orbit circumcentres fixed", s.passed, s.trials))
}

fn c9_bass_serre(t: &TreeSection) -> Outcome {
    let ball = bass_serre_ball(2, 3, 8, DEFAULT_BALL_CAP).map_err(|e| e.to_string())?;
    let mut d = Vec::new();
    for w in ["a", "b", "ab"] {
        let g = ball.parse_word(w).map_err(|e| e.to_string())?;
        d.push(min_displacement(&ball, &g, 4).map_err(|e| e.to_string())?);
    }
    ensure(d == [0, 0, 2], format!("displacements a, b, ab = {d:?}"))?;
    let b = &t.bass_serre;
    ensure(
        (b.displacement_a, b.displacement_b, b.displacement_ab) == (0, 0, 2),
        format!("suite report disagrees: {} {} {}", b.displacement_a, b.displacement_b, b.displacement_ab),
    )?;
    Ok("Z2*Z3 radius 8: min displacement a=0, b=0, ab=2 over the radius-4 ball".into())
}

fn c10_determinism() -> Outcome {
    let config = Config { ranks: (3, 5), check: Check::All, ..Config::default() };
    let a = run(&config).map_err(|e| e.to_string())?.to_json(false);
    let b = run(&config).map_err(|e| e.to_string())?.to_json(false);
    ensure(a == b, "reports differ")?;
    ensure(!a.contains("timings"), "timings leaked into the report")?;
    Ok(format!("two runs, {} identical bytes", a.len()))
}

fn main() -> ExitCode {
    let mut results: Vec<(u32, &str, Outcome)> = vec![
        (1, "order facts", c1_orders()),
        (2, "finiteness and structure", c2_structure()),
        (3, "generation witnesses", c3_witnesses()),
        (4, "SL odd case", c4_sl_odd()),
        (5, "SL even case", c5_sl_even()),
    ];
    let start = Instant::now();
    let suite = run_tree_suite(42, 1000);
    let elapsed = start.elapsed();
    match &suite {
        Ok(t) => {
            results.push((6, "Helly property", c6_helly(t, elapsed)));
            results.push((7, "fixed-set identity", c7_fixed_set(t, elapsed)));
            results.push((8, "circumcentre invariance", c8_circumcentre(t)));
            results.push((9, "Bass-Serre necessity", c9_bass_serre(t)));
        }
        Err(e) => {
            for (k, name) in [
                (6, "Helly property"),
                (7, "fixed-set identity"),
                (8, "circumcentre invariance"),
                (9, "Bass-Serre necessity"),
            ] {
                results.push((k, name, Err(format!("tree suite failed: {e}"))));
            }
        }
    }
    results.push((10, "determinism", c10_determinism()));

    let mut failed = 0;
    for (k, name, r) in &results {
        match r {
            Ok(detail) => println!("criterion {k:>2} PASS  {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("criterion {k:>2} FAIL  {name}: {detail}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
