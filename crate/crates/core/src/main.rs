//! Command-line surface: reproducible experiments over the library, each
//! emitting a report with a self-describing manifest.
//!
//! Exit codes: 0 success/verified; 1 mathematical failure (a verification
//! found a counterexample or a bound is not certified); 2 usage or
//! admissibility error; 3 resource exhaustion (budgets, timeouts, I/O).

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num_bigint::BigUint;
use num_traits::{Signed, ToPrimitive};

use intersquare::arith::FactorError;
use intersquare::certified::decimal::{parse_biguint, parse_decimal_rational};
use intersquare::certified::mertens::{partial_mertens_check, MertensOutcome};
use intersquare::manifest::RunManifest;
use intersquare::pipeline::{
    margin_sweep, optimize, r3_margin, render_trace, PipelineError, SearchSpace, SieveParams,
};
use intersquare::search::{
    max_gap_below, min_omega_in_interval, semiprime_witness, verify_range, RangeError,
    RangeReport, WitnessError,
};

const EXIT_OK: u8 = 0;
const EXIT_MATH: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_RESOURCE: u8 = 3;

/// Environment variable naming the default checkpoint directory for
/// `search --range` runs without an explicit `--checkpoint`.
const CHECKPOINT_DIR_ENV: &str = "INTERSQUARE_CHECKPOINT_DIR";

#[derive(Parser)]
#[command(
    name = "intersquare",
    version,
    about = "Exact searches and certified analytic bounds for almost-primes between consecutive squares"
)]
struct Cli {
    /// Worker threads (default: all available cores)
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Write the report to this file instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Find the least factor count strictly between n² and (n+1)², for
    /// one index or exhaustively over a range
    Search {
        /// Single index n
        #[arg(long, conflicts_with = "range")]
        n: Option<u64>,
        /// Half-open index range `lo:hi`
        #[arg(long)]
        range: Option<String>,
        /// Factor-count target (report failures where the minimum exceeds it)
        #[arg(long, default_value_t = 3)]
        k: u32,
        /// Checkpoint file for resumable range runs
        #[arg(long)]
        checkpoint: Option<PathBuf>,
    },
    /// Certified witness-count margin at N, or over a 10^e sweep
    Bound {
        /// N as digits, `1e31`, or `10^31`
        #[arg(long = "N", value_name = "N", default_value = "1e31")]
        n: String,
        /// Evaluate N = 10^e for e in `lo:hi` instead of a single N
        #[arg(long)]
        sweep: Option<String>,
        #[arg(long, default_value_t = 8.0)]
        k1: f64,
        #[arg(long, default_value_t = 3.17)]
        k2: f64,
        #[arg(long, default_value_t = 0.06)]
        alpha: f64,
        #[arg(long, default_value_t = 3.33)]
        s: f64,
    },
    /// Exhaustive comparison of partial Mertens products against the
    /// asymptotic form with relative error eps
    Mertens {
        #[arg(long)]
        zlo: u64,
        #[arg(long)]
        zhi: u64,
        /// Exact decimal tolerance, e.g. 1.13e-3
        #[arg(long, default_value = "1.13e-3")]
        eps: String,
        /// Smallest product start u to scan
        #[arg(long, default_value_t = 3)]
        umin: u64,
    },
    /// Largest gap between consecutive primes starting below the cutoff
    Gaps {
        #[arg(long)]
        below: u64,
    },
    /// Check (and optionally complete) a semiprime witness p·q inside
    /// (n², (n+1)²)
    Witness {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        p: u64,
        /// Prime-gap bound the interval length must beat
        #[arg(long, default_value_t = 1724)]
        gap_bound: u64,
        /// Upper limit below which the gap bound is known to hold
        #[arg(long, default_value = "6.8e19")]
        gap_limit: String,
        /// Search for the companion prime q instead of only checking sizes
        #[arg(long)]
        search: bool,
    },
    /// Maximize the certified margin over (k1, k2, alpha, s)
    Optimize {
        /// Reference N as digits, `1e31`, or `10^31`
        #[arg(long = "N", value_name = "N", default_value = "1e31")]
        n: String,
        /// k1 box `lo:hi`
        #[arg(long, default_value = "6:8")]
        k1_box: String,
        #[arg(long, default_value = "2.4:3.9")]
        k2_box: String,
        #[arg(long, default_value = "0.01:0.12")]
        alpha_box: String,
        #[arg(long, default_value = "3:4")]
        s_box: String,
        /// Grid points per axis in the coarse scan
        #[arg(long, default_value_t = 5)]
        grid: usize,
        /// Coordinate-descent rounds
        #[arg(long, default_value_t = 3)]
        depth: u32,
        /// Also write the full evaluation trace to this file
        #[arg(long)]
        trace_out: Option<PathBuf>,
    },
}

type CmdResult = Result<(RunManifest, String, u8), (String, u8)>;

fn usage<T: ToString>(msg: T) -> (String, u8) {
    (msg.to_string(), EXIT_USAGE)
}

fn parse_big(s: &str) -> Result<BigUint, String> {
    parse_biguint(s).map_err(|e| e.to_string())
}

fn parse_pair<T: std::str::FromStr>(s: &str, what: &str) -> Result<(T, T), String> {
    let (a, b) = s
        .split_once(':')
        .ok_or_else(|| format!("{what} must be `lo:hi`, got `{s}`"))?;
    let lo = a.trim().parse().map_err(|_| format!("bad {what} low endpoint `{a}`"))?;
    let hi = b.trim().parse().map_err(|_| format!("bad {what} high endpoint `{b}`"))?;
    Ok((lo, hi))
}

fn pipeline_exit(err: &PipelineError) -> u8 {
    // every pipeline error is a violated precondition, not a mathematical
    // refutation: admissibility, scale floor, or a validity hypothesis
    let _ = err;
    EXIT_USAGE
}

fn render_range_report(report: &RangeReport) -> String {
    let mut body = String::new();
    writeln!(body, "range {} {} k {}", report.n_lo, report.n_hi, report.k_max)
        .expect("string write");
    for (j, count) in report.counts.iter().enumerate() {
        writeln!(body, "count omega={} {}", j + 1, count).expect("string write");
    }
    writeln!(body, "failures {}", report.failures.len()).expect("string write");
    for n in &report.failures {
        writeln!(body, "failure {n}").expect("string write");
    }
    if let Some((n, omega, witness)) = report.worst_case {
        writeln!(body, "worst n {n} omega {omega} witness {witness}").expect("string write");
    }
    writeln!(body, "cursor {}", report.cursor).expect("string write");
    writeln!(body, "complete {}", report.is_complete()).expect("string write");
    body
}

fn cmd_search(
    n: Option<u64>,
    range: Option<&str>,
    k: u32,
    checkpoint: Option<PathBuf>,
) -> CmdResult {
    let mut manifest = RunManifest::new("search");
    manifest.parameter("k", k);
    match (n, range) {
        (Some(n), None) => {
            if n == 0 {
                return Err(usage("--n must be at least 1"));
            }
            manifest.parameter("n", n);
            let (witness, omega) = min_omega_in_interval(n).map_err(|e| match e {
                FactorError::Timeout { .. } => (e.to_string(), EXIT_RESOURCE),
            })?;
            let mut body = String::new();
            writeln!(body, "n {n} min_omega {omega} witness {witness}").expect("string write");
            writeln!(body, "satisfies_k {}", omega <= k).expect("string write");
            let exit = if omega <= k { EXIT_OK } else { EXIT_MATH };
            Ok((manifest, body, exit))
        }
        (None, Some(range)) => {
            let (lo, hi): (u64, u64) = parse_pair(range, "--range").map_err(usage)?;
            if !(1 <= lo && lo < hi) {
                return Err(usage("--range needs 1 <= lo < hi"));
            }
            manifest.parameter("range", format!("{lo}:{hi}"));
            let checkpoint = checkpoint.or_else(|| {
                std::env::var_os(CHECKPOINT_DIR_ENV)
                    .map(|dir| PathBuf::from(dir).join(format!("search_{lo}_{hi}_k{k}.ckpt")))
            });
            if let Some(path) = &checkpoint {
                manifest.parameter("checkpoint", path.display());
                if let Ok(bytes) = fs::read(path) {
                    manifest.input_bytes("checkpoint", &bytes);
                }
            }
            let report = verify_range(lo, hi, k, checkpoint.as_deref()).map_err(|e| match e {
                RangeError::Factor(_) | RangeError::Io(_) => (e.to_string(), EXIT_RESOURCE),
            })?;
            let exit = if report.failures.is_empty() { EXIT_OK } else { EXIT_MATH };
            Ok((manifest, render_range_report(&report), exit))
        }
        _ => Err(usage("search needs exactly one of --n or --range")),
    }
}

fn cmd_bound(n: &str, sweep: Option<&str>, k1: f64, k2: f64, alpha: f64, s: f64) -> CmdResult {
    let mut manifest = RunManifest::new("bound");
    let mut params = SieveParams::default();
    params.k1 = k1;
    params.k2 = k2;
    params.alpha = alpha;
    params.s = s;
    for (key, value) in [("k1", k1), ("k2", k2), ("alpha", alpha), ("s", s)] {
        manifest.parameter(key, value);
    }
    if let Some(sweep) = sweep {
        let (lo, hi): (u32, u32) = parse_pair(sweep, "--sweep").map_err(usage)?;
        if lo > hi {
            return Err(usage("--sweep needs lo <= hi"));
        }
        manifest.parameter("sweep", format!("{lo}:{hi}"));
        params.n_ref = BigUint::from(10u32).pow(lo);
        let report = margin_sweep(lo, hi, &params)
            .map_err(|e| (e.to_string(), pipeline_exit(&e)))?;
        let exit = if report.all_certified() { EXIT_OK } else { EXIT_MATH };
        Ok((manifest, report.render_text(), exit))
    } else {
        let n = parse_big(n).map_err(usage)?;
        manifest.parameter("N", &n);
        params.n_ref = n.clone();
        let report = r3_margin(&n, &params).map_err(|e| (e.to_string(), pipeline_exit(&e)))?;
        let mut body = report.render_text();
        writeln!(body, "certified {}", report.certified).expect("string write");
        writeln!(body, "used_hp {}", report.used_hp).expect("string write");
        let exit = if report.certified { EXIT_OK } else { EXIT_MATH };
        Ok((manifest, body, exit))
    }
}

fn cmd_mertens(zlo: u64, zhi: u64, eps: &str, umin: u64) -> CmdResult {
    let mut manifest = RunManifest::new("mertens");
    manifest
        .parameter("zlo", zlo)
        .parameter("zhi", zhi)
        .parameter("eps", eps)
        .parameter("umin", umin);
    if !(3 <= umin && umin <= zlo && zlo <= zhi) {
        return Err(usage("mertens needs 3 <= umin <= zlo <= zhi"));
    }
    let eps = parse_decimal_rational(eps).map_err(|e| usage(e))?;
    if !eps.is_positive() {
        return Err(usage("--eps must be positive"));
    }
    match partial_mertens_check(zlo, zhi, &eps, umin) {
        MertensOutcome::Verified(stats) => {
            let mut body = String::new();
            writeln!(body, "verified true").expect("string write");
            writeln!(body, "pairs_checked {}", stats.pairs_checked).expect("string write");
            writeln!(body, "hp_fallbacks {}", stats.hp_fallbacks).expect("string write");
            writeln!(
                body,
                "worst_margin {:e} at u {} z {}",
                stats.worst_margin, stats.worst_pair.0, stats.worst_pair.1
            )
            .expect("string write");
            Ok((manifest, body, EXIT_OK))
        }
        MertensOutcome::Counterexample { u, z } => {
            let body = format!("verified false\ncounterexample u {u} z {z}\n");
            Ok((manifest, body, EXIT_MATH))
        }
    }
}

fn cmd_gaps(below: u64) -> CmdResult {
    let mut manifest = RunManifest::new("gaps");
    manifest.parameter("below", below);
    if below < 3 {
        return Err(usage("--below must be at least 3"));
    }
    let (gap, start) = max_gap_below(below);
    let body = format!("below {below} max_gap {gap} start {start}\n");
    Ok((manifest, body, EXIT_OK))
}

fn cmd_witness(n: u64, p: u64, gap_bound: u64, gap_limit: &str, search: bool) -> CmdResult {
    let mut manifest = RunManifest::new("witness");
    let limit = parse_big(gap_limit)
        .and_then(|b| b.to_u128().ok_or_else(|| "gap limit too large".to_string()))
        .map_err(usage)?;
    manifest
        .parameter("n", n)
        .parameter("p", p)
        .parameter("gap_bound", gap_bound)
        .parameter("gap_limit", limit)
        .parameter("search", search);
    if n == 0 {
        return Err(usage("--n must be at least 1"));
    }
    match semiprime_witness(n, p, gap_bound, limit, search) {
        Ok(w) => {
            let mut body = String::new();
            writeln!(body, "n {} p {}", w.n, w.p).expect("string write");
            writeln!(
                body,
                "checks length_gt_gap_bound {} endpoint_lt_gap_limit {} product_in_window {}",
                w.checks.length_gt_gap_bound,
                w.checks.endpoint_lt_gap_limit,
                w.checks.product_in_window
            )
            .expect("string write");
            match (w.q, w.product) {
                (Some(q), Some(product)) => {
                    writeln!(body, "q {q} product {product}").expect("string write");
                }
                _ => {
                    writeln!(body, "q unsearched").expect("string write");
                }
            }
            Ok((manifest, body, EXIT_OK))
        }
        Err(err) => {
            let exit = match &err {
                WitnessError::CheckFailed { .. } | WitnessError::NoPrimeFound { .. } => EXIT_MATH,
                WitnessError::PNotPrime { .. } => EXIT_USAGE,
                WitnessError::SearchBudgetExceeded { .. } => EXIT_RESOURCE,
            };
            Err((err.to_string(), exit))
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_optimize(
    n: &str,
    k1_box: &str,
    k2_box: &str,
    alpha_box: &str,
    s_box: &str,
    grid: usize,
    depth: u32,
    trace_out: Option<&PathBuf>,
) -> CmdResult {
    let mut manifest = RunManifest::new("optimize");
    let n_ref = parse_big(n).map_err(usage)?;
    let space = SearchSpace {
        k1: parse_pair(k1_box, "--k1-box").map_err(usage)?,
        k2: parse_pair(k2_box, "--k2-box").map_err(usage)?,
        alpha: parse_pair(alpha_box, "--alpha-box").map_err(usage)?,
        s: parse_pair(s_box, "--s-box").map_err(usage)?,
        grid,
        depth,
    };
    manifest
        .parameter("N", &n_ref)
        .parameter("k1_box", format!("{}:{}", space.k1.0, space.k1.1))
        .parameter("k2_box", format!("{}:{}", space.k2.0, space.k2.1))
        .parameter("alpha_box", format!("{}:{}", space.alpha.0, space.alpha.1))
        .parameter("s_box", format!("{}:{}", space.s.0, space.s.1))
        .parameter("grid", grid)
        .parameter("depth", depth);
    let reference = SieveParams::default();
    manifest.seed(format!(
        "{},{},{},{}",
        reference.k1, reference.k2, reference.alpha, reference.s
    ));

    let outcome = optimize(&n_ref, &space).map_err(|e| (e.to_string(), EXIT_USAGE))?;
    if let Some(path) = trace_out {
        manifest.parameter("trace_out", path.display());
        fs::write(path, render_trace(&outcome.trace))
            .map_err(|e| (format!("writing trace: {e}"), EXIT_RESOURCE))?;
    }
    let mut body = String::new();
    writeln!(
        body,
        "best k1 {} k2 {} alpha {} s {}",
        outcome.best.k1, outcome.best.k2, outcome.best.alpha, outcome.best.s
    )
    .expect("string write");
    writeln!(body, "trace_entries {}", outcome.trace.len()).expect("string write");
    body.push_str(&outcome.report.render_text());
    writeln!(body, "certified {}", outcome.report.certified).expect("string write");
    let exit = if outcome.report.certified { EXIT_OK } else { EXIT_MATH };
    Ok((manifest, body, exit))
}

fn run(cli: &Cli) -> CmdResult {
    match &cli.command {
        Command::Search { n, range, k, checkpoint } => {
            cmd_search(*n, range.as_deref(), *k, checkpoint.clone())
        }
        Command::Bound { n, sweep, k1, k2, alpha, s } => {
            cmd_bound(n, sweep.as_deref(), *k1, *k2, *alpha, *s)
        }
        Command::Mertens { zlo, zhi, eps, umin } => cmd_mertens(*zlo, *zhi, eps, *umin),
        Command::Gaps { below } => cmd_gaps(*below),
        Command::Witness { n, p, gap_bound, gap_limit, search } => {
            cmd_witness(*n, *p, *gap_bound, gap_limit, *search)
        }
        Command::Optimize {
            n,
            k1_box,
            k2_box,
            alpha_box,
            s_box,
            grid,
            depth,
            trace_out,
        } => cmd_optimize(
            n,
            k1_box,
            k2_box,
            alpha_box,
            s_box,
            *grid,
            *depth,
            trace_out.as_ref(),
        ),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if threads == 0 {
            eprintln!("error: --threads must be at least 1");
            return ExitCode::from(EXIT_USAGE);
        }
        // ignore the error if a global pool already exists
        let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    }
    match run(&cli) {
        Ok((manifest, body, exit)) => {
            let document = manifest.render(&body);
            if let Some(path) = &cli.out {
                if let Err(e) = fs::write(path, &document) {
                    eprintln!("error: writing report to {}: {e}", path.display());
                    return ExitCode::from(EXIT_RESOURCE);
                }
            } else {
                print!("{document}");
            }
            ExitCode::from(exit)
        }
        Err((message, exit)) => {
            eprintln!("error: {message}");
            ExitCode::from(exit)
        }
    }
}
