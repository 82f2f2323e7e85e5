use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use triangle_fa::freegroup::{parse_generator_word, Basis, Order};
use triangle_fa::tree::{fixed_set, fixed_set_group, Tree, TreeIsom};
use triangle_fa::verify::{self, Check, Config};

const EXIT_USAGE: u8 = 64;

#[derive(Clone, Copy, Debug, ValueEnum)]
enum CheckArg {
    Aut,
    Sl,
    Tree,
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

/// Certifies the triangle criterion for Aut(F_n) and SL(n,Z), and checks
/// the fixed-point lemmas on trees.
#[derive(Debug, Parser)]
#[command(name = "triangle-fa", version)]
struct Args {
    /// Rank `k` or inclusive range `lo..hi`.
    #[arg(long = "n", value_name = "k|lo..hi", default_value = "3..6", value_parser = parse_ranks)]
    ranks: (usize, usize),
    #[arg(long, value_enum, default_value = "all")]
    check: CheckArg,
    /// Element cap for closure enumeration.
    #[arg(long, default_value_t = triangle_fa::closure::DEFAULT_CAP)]
    cap: usize,
    /// Word-length budget for the even-rank SL search [default: pinned per
    /// rank, 14 for n=4 and 20 for n=6].
    #[arg(long = "bfs-depth")]
    bfs_depth: Option<usize>,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Trials for the tree suite (Helly runs this many, the others half).
    #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
    iters: u64,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Leave wall-clock timings out of the report.
    #[arg(long)]
    omit_timings: bool,
    /// Evaluate a generator word (e.g. "theta tau") at the single rank given by --n.
    #[arg(long, value_name = "WORD", conflicts_with = "tree_file")]
    eval: Option<String>,
    /// Edge-list file; prints fixed sets of the isometries given with --isom.
    #[arg(long, value_name = "PATH")]
    tree_file: Option<std::path::PathBuf>,
    /// Isometry as a permutation line of vertex images (repeatable).
    #[arg(long, value_name = "IMAGES", requires = "tree_file")]
    isom: Vec<String>,
}

fn parse_ranks(s: &str) -> Result<(usize, usize), String> {
    let num = |t: &str| t.trim().parse::<usize>().map_err(|_| format!("{t:?} is not a rank"));
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (num(a)?, num(b.trim_start_matches('='))?),
        None => {
            let k = num(s)?;
            (k, k)
        }
    };
    if lo < 3 {
        return Err(format!("ranks start at 3, got {lo}"));
    }
    if lo > hi {
        return Err(format!("empty range {lo}..{hi}"));
    }
    Ok((lo, hi))
}

fn usage_error(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(EXIT_USAGE)
}

fn eval_word(args: &Args, word: &str) -> ExitCode {
    let (lo, hi) = args.ranks;
    if lo != hi {
        return usage_error("--eval needs a single rank, e.g. --n 3");
    }
    let basis = match Basis::new(lo) {
        Ok(b) => b,
        Err(e) => return usage_error(e),
    };
    let f = match parse_generator_word(word, basis) {
        Ok(f) => f,
        Err(e) => return usage_error(e),
    };
    let order = match f.order(64) {
        Order::Finite(k) => k.to_string(),
        Order::Unbounded => "unbounded (> 64)".into(),
    };
    let m = f.abelianize();
    if args.format == Format::Json {
        let images: Vec<String> = f.images().iter().map(|w| w.to_string()).collect();
        let v = serde_json::json!({ "n": lo, "word": word, "images": images, "order": order, "abelianization": m });
        println!("{}", serde_json::to_string_pretty(&v).expect("serializes"));
    } else {
        println!("{f}");
        println!("order: {order}");
        println!("abelianization (det {}):\n{m}", m.det());
    }
    ExitCode::SUCCESS
}

fn tree_fixed_sets(args: &Args, path: &std::path::Path) -> ExitCode {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => return usage_error(format!("{}: {e}", path.display())),
    };
    let tree = match Tree::parse_edge_list(&text) {
        Ok(t) => t,
        Err(e) => return usage_error(format!("{}: {e}", path.display())),
    };
    let mut isoms = Vec::new();
    for line in &args.isom {
        match TreeIsom::parse(&tree, line) {
            Ok(g) => isoms.push(g),
            Err(e) => return usage_error(format!("--isom {line:?}: {e}")),
        }
    }
    let show = |s: Option<triangle_fa::tree::Subtree>| -> Vec<String> {
        s.map(|s| s.points(&tree).iter().map(|p| p.to_string()).collect()).unwrap_or_default()
    };
    let mut each = Vec::new();
    for g in &isoms {
        match fixed_set(&tree, g) {
            Ok(s) => each.push(show(s)),
            Err(e) => return usage_error(e),
        }
    }
    let common = match fixed_set_group(&tree, &isoms) {
        Ok(s) => show(s),
        Err(e) => return usage_error(e),
    };
    if args.format == Format::Json {
        let v = serde_json::json!({ "vertices": tree.num_vertices(), "fixed_sets": each, "common": common });
        println!("{}", serde_json::to_string_pretty(&v).expect("serializes"));
    } else {
        for (line, fix) in args.isom.iter().zip(&each) {
            println!("Fix({line}) = {{{}}}", fix.join(", "));
        }
        println!("common fixed set = {{{}}}", common.join(", "));
    }
    ExitCode::SUCCESS
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(word) = &args.eval {
        return eval_word(&args, word);
    }
    if let Some(path) = &args.tree_file {
        return tree_fixed_sets(&args, path);
    }
    let config = Config {
        ranks: args.ranks,
        check: match args.check {
            CheckArg::Aut => Check::Aut,
            CheckArg::Sl => Check::Sl,
            CheckArg::Tree => Check::Tree,
            CheckArg::All => Check::All,
        },
        cap: args.cap,
        bfs_depth: args.bfs_depth,
        seed: args.seed,
        iters: args.iters as usize,
    };
    let report = match verify::run(&config) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    match args.format {
        Format::Json => println!("{}", report.to_json(!args.omit_timings)),
        Format::Text => {
            let mut r = report.clone();
            if args.omit_timings {
                r.timings = None;
            }
            print!("{}", r.to_text());
        }
    }
    ExitCode::from(report.verdict.exit_code() as u8)
}
