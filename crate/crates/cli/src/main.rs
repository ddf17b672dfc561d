//! Command-line frontend: generation, checking, VC dimension, threshold
//! formulas, Monte Carlo scans, and the exhaustive oracles.
//!
//! Exit codes: 0 success (and "covering" for `check`), 1 checked-and-false,
//! 2 usage, IO, or parse errors.

mod arrayfile;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use shatterscan_core::experiments::{
    empirical_threshold, monotonicity_violations, threshold_scan, RecordFormat, ScanConfig,
};
use shatterscan_core::oracles::{
    mc_pair_correlation, mc_word_pair_correlation, one_overlap_rank_table, two_overlap_case_probs,
    OverlapGeometry,
};
use shatterscan_core::randgen::{gen_perm_array, gen_word_array, SeedSpec};
use shatterscan_core::shatter::{count_unshattered, vc_dimension, DEFAULT_WITNESS_CAP};
use shatterscan_core::theory::{
    check_correlation_below_threshold, check_dominance_inequality, check_overlap_ratio_increasing,
    correlation_constant, exact_prob_tuple_covered, lg, pair_correlation_bound,
    perm_analysis_constants, round2_nearest, threshold_coefficient_perms,
    threshold_coefficient_words, threshold_lower_perms, threshold_lower_words,
    threshold_upper_perms, threshold_upper_words, DominanceCheck,
};
use shatterscan_core::{Array, ArrayKind, Error, Result};

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Kind {
    Words,
    Perms,
}

impl From<Kind> for ArrayKind {
    fn from(k: Kind) -> ArrayKind {
        match k {
            Kind::Words => ArrayKind::Words,
            Kind::Perms => ArrayKind::Perms,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

impl From<Format> for RecordFormat {
    fn from(f: Format) -> RecordFormat {
        match f {
            Format::Csv => RecordFormat::Csv,
            Format::Json => RecordFormat::Json,
        }
    }
}

#[derive(Parser)]
#[command(
    name = "shatterscan",
    version,
    about = "Generate, check, and measure shattering of random word arrays and permutation families"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a random array and write it to a file
    Gen {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        /// Alphabet size (required for words)
        #[arg(long, required_if_eq("kind", "words"))]
        q: Option<u32>,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check whether an array file is t-covering; prints a JSON report
    Check {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        t: u32,
        /// Witness cap for the report
        #[arg(long, default_value_t = DEFAULT_WITNESS_CAP)]
        witnesses: usize,
    },
    /// Compute the VC dimension (smallest unshattered tuple size)
    Vc {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long = "t-max")]
        t_max: u32,
    },
    /// Closed-form thresholds and constants
    Theory {
        #[command(subcommand)]
        cmd: TheoryCmd,
    },
    /// Monte Carlo covering-probability scan over a range of row counts
    Scan {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        t: u32,
        #[arg(long, required_if_eq("kind", "words"))]
        q: Option<u32>,
        #[arg(long = "k-min")]
        k_min: u32,
        #[arg(long = "k-max")]
        k_max: u32,
        #[arg(long = "k-step", default_value_t = 1)]
        k_step: u32,
        #[arg(long)]
        trials: u32,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        /// Worker-count hint; never changes the output bytes
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Exhaustive and Monte Carlo verification oracles
    Oracle {
        #[command(subcommand)]
        cmd: OracleCmd,
    },
}

#[derive(Subcommand)]
enum TheoryCmd {
    /// Upper/lower threshold row counts for one parameter point
    Thresholds {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 3)]
        t: u32,
        #[arg(long, required_if_eq("kind", "words"))]
        q: Option<u32>,
        /// Slack constant A multiplying lg lg n (words lower threshold)
        #[arg(long, default_value_t = 1.0)]
        a: f64,
        /// Slack omega subtracted in the permutation lower threshold
        /// (default lg lg n)
        #[arg(long)]
        omega: Option<f64>,
    },
    /// Per-lg(n) constants and the numeric checks behind them
    Constants {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long, required_if_eq("kind", "words"))]
        q: Option<u32>,
        #[arg(long, default_value_t = 3)]
        t: u32,
    },
}

#[derive(Subcommand)]
enum OracleCmd {
    /// One-overlap rank-pair table from exhaustive 5-column enumeration
    Table1,
    /// Two-overlap case probabilities from exhaustive 4-column enumeration
    Overlap2,
    /// Exact probability a fixed tuple is covered by k uniform rows
    ExactExpect {
        #[arg(long)]
        k: u64,
        #[arg(long)]
        arity: u32,
    },
    /// Monte Carlo pair-correlation estimate vs. the closed-form bound
    PairCorr {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long, default_value_t = 2)]
        t: u32,
        #[arg(long, required_if_eq("kind", "words"))]
        q: Option<u32>,
        /// Overlap size between the two tuples
        #[arg(long)]
        r: u32,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        trials: u32,
        #[arg(long)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.cmd {
        Cmd::Gen {
            kind,
            n,
            k,
            q,
            seed,
            out,
        } => {
            let arr = match kind {
                Kind::Words => Array::Words(gen_word_array(
                    n,
                    k,
                    q.expect("clap enforces q for words"),
                    SeedSpec::new(seed),
                )?),
                Kind::Perms => Array::Perms(gen_perm_array(n, k, SeedSpec::new(seed))?),
            };
            std::fs::write(&out, arrayfile::serialize(&arr))?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Check {
            input,
            t,
            witnesses,
        } => cmd_check(&input, t, witnesses),
        Cmd::Vc { input, t_max } => {
            let arr = arrayfile::parse(&std::fs::read_to_string(&input)?)?;
            println!("{}", vc_dimension(&arr, t_max)?);
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Theory { cmd } => {
            match cmd {
                TheoryCmd::Thresholds {
                    kind,
                    n,
                    t,
                    q,
                    a,
                    omega,
                } => cmd_thresholds(kind, n, t, q, a, omega)?,
                TheoryCmd::Constants { kind, q, t } => cmd_constants(kind, q, t)?,
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Scan {
            kind,
            n,
            t,
            q,
            k_min,
            k_max,
            k_step,
            trials,
            seed,
            out,
            format,
            threads,
        } => {
            let cfg = ScanConfig {
                kind: kind.into(),
                n,
                q: if kind == Kind::Words { q } else { None },
                t,
                k_min,
                k_max,
                k_step,
                trials,
                seed,
                threads,
                out: Some(out.clone()),
                format: format.into(),
            };
            let records = threshold_scan(&cfg)?;
            for r in &records {
                println!(
                    "k={} p_hat={:.4} ci=[{:.4},{:.4}] successes={}/{}",
                    r.k, r.p_hat, r.ci_low, r.ci_high, r.successes, r.trials
                );
            }
            match empirical_threshold(&records) {
                Ok(k_star) => println!("empirical threshold ~ {k_star:.2}"),
                Err(_) => println!("empirical threshold: no 0.5 crossing in range"),
            }
            for (a, b) in monotonicity_violations(&records) {
                println!("warning: p_hat decreases significantly from k={a} to k={b}");
            }
            println!("wrote {} records to {}", records.len(), out.display());
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Oracle { cmd } => {
            match cmd {
                OracleCmd::Table1 => cmd_table1(),
                OracleCmd::Overlap2 => cmd_overlap2(),
                OracleCmd::ExactExpect { k, arity } => {
                    let p = exact_prob_tuple_covered(k, arity)?;
                    println!("P(fixed tuple covered, k={k}, arity={arity}) = {p}");
                    println!("P(fixed tuple missing a cell)          = {}", 1.0 - p);
                }
                OracleCmd::PairCorr {
                    kind,
                    t,
                    q,
                    r,
                    k,
                    trials,
                    seed,
                } => cmd_pair_corr(kind, t, q, r, k, trials, seed)?,
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn cmd_check(input: &PathBuf, t: u32, witnesses: usize) -> Result<ExitCode> {
    let arr = arrayfile::parse(&std::fs::read_to_string(input)?)?;
    let report = count_unshattered(&arr, t, witnesses)?;
    let witness_json: Vec<Vec<u32>> = report.witnesses.iter().map(|w| w.one_based()).collect();
    let json = serde_json::json!({
        "schema": 1,
        "kind": report.kind.as_str(),
        "n": arr.n(),
        "k": arr.k(),
        "t": report.t,
        "x_count": report.x_count,
        "y_greedy": report.y_greedy,
        "covering": report.is_covering(),
        "witnesses": witness_json,
    });
    println!("{json}");
    Ok(if report.is_covering() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_thresholds(
    kind: Kind,
    n: u64,
    t: u32,
    q: Option<u32>,
    a: f64,
    omega: Option<f64>,
) -> Result<()> {
    match kind {
        Kind::Words => {
            let q = q.expect("clap enforces q for words");
            let coef = threshold_coefficient_words(q, t)?;
            println!("kind: words  n: {n}  q: {q}  t: {t}");
            println!(
                "coefficient = {coef:.6}  (threshold ~ {} lg n)",
                round2_nearest(coef)
            );
            println!("k_upper = {:.6}", threshold_upper_words(n, q, t)?);
            if n >= 4 {
                println!(
                    "k_lower = {:.6}  (A = {a})",
                    threshold_lower_words(n, q, t, a)?
                );
            } else {
                println!("k_lower: needs n >= 4");
            }
        }
        Kind::Perms => {
            println!("kind: perms  n: {n}  t: {t}");
            let coef = threshold_coefficient_perms(t)?;
            println!(
                "coefficient = {coef:.6}  (threshold ~ {} lg n)",
                round2_nearest(coef)
            );
            println!("k_upper = {:.6}", threshold_upper_perms(n, t)?);
            if t == 3 {
                let omega = match omega {
                    Some(w) => w,
                    None if n >= 4 => lg(lg(n as f64)),
                    None => return Err(Error::Parameter("default omega needs n >= 4".into())),
                };
                println!(
                    "k_lower = {:.6}  (omega = {omega:.6})",
                    threshold_lower_perms(n, omega)?
                );
                let c = perm_analysis_constants();
                println!(
                    "effective lower constant = {:.6} lg n  (rounds up to {})",
                    c.c_one_overlap,
                    c.rounded_up_2dp().2
                );
            } else {
                println!("k_lower: the lower-threshold analysis covers t = 3 only");
            }
        }
    }
    Ok(())
}

fn cmd_constants(kind: Kind, q: Option<u32>, t: u32) -> Result<()> {
    match kind {
        Kind::Words => {
            let q = q.expect("clap enforces q for words");
            let coef = threshold_coefficient_words(q, t)?;
            println!("kind: words  q: {q}  t: {t}");
            println!(
                "threshold coefficient = {coef:.6}  (~ {} lg n)",
                round2_nearest(coef)
            );
            for r in 1..t {
                println!(
                    "correlation constant r={r} = {:.6}",
                    correlation_constant(t, q, r)?
                );
            }
            if t >= 2 {
                let argmax_ok = (1..t)
                    .map(|r| correlation_constant(t, q, r))
                    .collect::<Result<Vec<_>>>()?
                    .iter()
                    .all(|&c| c <= correlation_constant(t, q, 1).unwrap());
                println!("argmax over r at r=1: {}", pass(argmax_ok));
                println!(
                    "overlap ratio strictly increasing: {}",
                    pass(check_overlap_ratio_increasing(q, t)?)
                );
                println!(
                    "correlation constant below threshold coefficient: {}",
                    pass(check_correlation_below_threshold(t, q)?)
                );
            }
            if t >= 3 {
                let label = match check_dominance_inequality(t, q)? {
                    DominanceCheck::Holds => "holds",
                    DominanceCheck::DirectCaseOnly => "direct-case-only",
                    DominanceCheck::Fails => "FAILS",
                };
                println!("dominance inequality: {label}");
            }
        }
        Kind::Perms => {
            let c = perm_analysis_constants();
            let (r_tail, r_two, r_one) = c.rounded_up_2dp();
            let coef = threshold_coefficient_perms(3)?;
            println!("kind: perms  t: 3");
            println!(
                "threshold coefficient = {coef:.6}  (~ {} lg n)",
                round2_nearest(coef)
            );
            println!("c_tail        = {:.6}  (rounds up to {r_tail})", c.c_tail);
            println!(
                "c_two_overlap = {:.6}  (rounds up to {r_two})",
                c.c_two_overlap
            );
            println!(
                "c_one_overlap = {:.6}  (rounds up to {r_one})",
                c.c_one_overlap
            );
        }
    }
    Ok(())
}

fn pass(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "FAIL"
    }
}

fn cmd_table1() {
    println!("one-overlap rank-pair table (counts over 120 arrangements of 5 values)");
    println!("(g,d)  joint  complement");
    for e in one_overlap_rank_table() {
        println!(
            "({},{})  {:>5}  {:>10}",
            e.rank_pair.0, e.rank_pair.1, e.joint_count, e.complement_count
        );
    }
    println!("note: probabilities are complement/120; quoting these numerators over a");
    println!("note: denominator of 100 is inconsistent with the enumeration.");
}

fn cmd_overlap2() {
    let p = two_overlap_case_probs();
    println!("two-overlap joint pattern probabilities (over 24 arrangements of 4 values)");
    println!(
        "identical     {}/{}   ({} pattern pairs)",
        p.identical.0, p.identical.1, p.identical_pairs
    );
    println!(
        "consistent    {}/{}   ({} pattern pairs)",
        p.consistent.0, p.consistent.1, p.consistent_pairs
    );
    println!(
        "inconsistent  {}/{}   ({} pattern pairs)",
        p.inconsistent.0, p.inconsistent.1, p.inconsistent_pairs
    );
}

fn cmd_pair_corr(
    kind: Kind,
    t: u32,
    q: Option<u32>,
    r: u32,
    k: u32,
    trials: u32,
    seed: u64,
) -> Result<()> {
    match kind {
        Kind::Words => {
            let q = q.expect("clap enforces q for words");
            let est = mc_word_pair_correlation(t, q, r, k, trials, seed)?;
            let bound = pair_correlation_bound(t, q, r, k as u64)?;
            let sigma = (bound * (1.0 - bound) / trials as f64).sqrt();
            let threshold = 1.5 * bound + 4.0 * sigma;
            println!("kind: words  t: {t}  q: {q}  r: {r}  k: {k}  trials: {trials}");
            println!("estimate  = {est:e}");
            println!("bound     = {bound:e}  (x1.5 + 4 sigma = {threshold:e})");
            println!("check     = {}", pass(est <= threshold));
        }
        Kind::Perms => {
            let geometry = match r {
                1 => OverlapGeometry::one_overlap_canonical(),
                2 => OverlapGeometry::two_overlap_canonical(),
                _ => {
                    return Err(Error::Parameter(format!(
                        "overlap r must be 1 or 2, got {r}"
                    )))
                }
            };
            let est = mc_pair_correlation(&geometry, k, trials, seed)?;
            // 36 pattern pairs, each decaying at (5/6 * 0.86)^k for one
            // overlap and (3/4)^k for two.
            let base: f64 = if r == 1 { (5.0 / 6.0) * 0.86 } else { 0.75 };
            let bound = 36.0 * (k as f64 * base.ln()).exp();
            let sigma = (bound * (1.0 - bound) / trials as f64).sqrt();
            let threshold = 1.5 * bound + 4.0 * sigma;
            println!("kind: perms  r: {r}  k: {k}  trials: {trials}");
            println!("estimate  = {est:e}");
            println!("bound     = {bound:e}  (x1.5 + 4 sigma = {threshold:e})");
            println!("check     = {}", pass(est <= threshold));
        }
    }
    Ok(())
}
