//! Monte Carlo threshold measurement: covering-probability curves over a
//! range of row counts, empirical threshold location, second-moment
//! diagnostics, and CSV/JSON persistence of scan records.
//!
//! Determinism: each trial draws from its own substream derived from
//! `(seed, k, trial_index)`, and aggregation uses exact integer sums, so a
//! scan produces bit-identical records at any worker count.

use std::io::Write;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::randgen::{gen_perm_array, gen_word_array, SeedSpec};
use crate::shatter::{is_covering, x_statistic};
use crate::theory::{
    choose_f64, expected_unshattered_perms_bounds, expected_unshattered_words_lower,
    expected_unshattered_words_upper,
};
use crate::types::{Array, ArrayKind};

/// 95% two-sided normal quantile, for the Wilson score interval.
const Z95: f64 = 1.959963984540054;

/// One measured point of a covering-probability curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanRecord {
    pub kind: ArrayKind,
    pub n: u32,
    /// Alphabet size; words only.
    pub q: Option<u32>,
    pub t: u32,
    pub k: u32,
    pub trials: u32,
    /// Number of trials whose array was t-covering.
    pub successes: u32,
    pub p_hat: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub seed: u64,
}

/// Output format for persisted records.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RecordFormat {
    Csv,
    Json,
}

/// Parameters of a probability-vs-k scan.
#[derive(Debug, Clone)]
pub struct ScanConfig {
    pub kind: ArrayKind,
    pub n: u32,
    pub q: Option<u32>,
    pub t: u32,
    pub k_min: u32,
    pub k_max: u32,
    pub k_step: u32,
    pub trials: u32,
    pub seed: u64,
    /// Worker-count hint; never affects record values.
    pub threads: Option<usize>,
    pub out: Option<PathBuf>,
    pub format: RecordFormat,
}

/// Substream index for one trial: record parameter `k` in the high half,
/// trial index in the low half.
fn trial_stream(k: u32, trial: u32) -> u64 {
    ((k as u64) << 32) | trial as u64
}

fn generate(kind: ArrayKind, n: u32, q: Option<u32>, k: u32, seed: SeedSpec) -> Result<Array> {
    match kind {
        ArrayKind::Words => {
            let q = q.ok_or_else(|| Error::Parameter("word scans require q".into()))?;
            Ok(Array::Words(gen_word_array(
                n as usize, k as usize, q, seed,
            )?))
        }
        ArrayKind::Perms => Ok(Array::Perms(gen_perm_array(n as usize, k as usize, seed)?)),
    }
}

/// Wilson score interval at 95%; well behaved at p_hat near 0 and 1.
pub fn wilson_interval(successes: u32, trials: u32) -> (f64, f64) {
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = Z95 * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    // Clamp so rounding can never push p_hat outside its own interval.
    (
        (center - half).max(0.0).min(p),
        (center + half).min(1.0).max(p),
    )
}

/// Estimates P(random array is t-covering) at one row count `k` from
/// `trials` independent arrays. Trials run in parallel; the outcome is a
/// pure function of the arguments.
pub fn mc_covering_probability(
    kind: ArrayKind,
    n: u32,
    q: Option<u32>,
    t: u32,
    k: u32,
    trials: u32,
    seed: u64,
) -> Result<ScanRecord> {
    if trials == 0 {
        return Err(Error::Parameter("trials must be >= 1".into()));
    }
    // Validate parameters once up front so worker errors cannot differ.
    generate(kind, n, q, 0, SeedSpec::new(seed))?;
    let successes = (0..trials)
        .into_par_iter()
        .map(|trial| -> Result<u32> {
            let spec = SeedSpec::with_stream(seed, trial_stream(k, trial));
            let arr = generate(kind, n, q, k, spec).expect("parameters validated");
            Ok(is_covering(&arr, t)? as u32)
        })
        .try_reduce(|| 0u32, |a, b| Ok(a + b))?;
    let p_hat = successes as f64 / trials as f64;
    let (ci_low, ci_high) = wilson_interval(successes, trials);
    Ok(ScanRecord {
        kind,
        n,
        q: if kind == ArrayKind::Words { q } else { None },
        t,
        k,
        trials,
        successes,
        p_hat,
        ci_low,
        ci_high,
        seed,
    })
}

/// Runs [`mc_covering_probability`] for each k in the configured range and
/// optionally persists the records. Records come back sorted by k.
pub fn threshold_scan(cfg: &ScanConfig) -> Result<Vec<ScanRecord>> {
    if cfg.k_min > cfg.k_max {
        return Err(Error::Parameter(format!(
            "k_min={} exceeds k_max={}",
            cfg.k_min, cfg.k_max
        )));
    }
    if cfg.k_step == 0 {
        return Err(Error::Parameter("k_step must be >= 1".into()));
    }
    let run = || -> Result<Vec<ScanRecord>> {
        (cfg.k_min..=cfg.k_max)
            .step_by(cfg.k_step as usize)
            .map(|k| {
                mc_covering_probability(cfg.kind, cfg.n, cfg.q, cfg.t, k, cfg.trials, cfg.seed)
            })
            .collect()
    };
    let records = match cfg.threads {
        Some(threads) => rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::Parameter(format!("thread pool: {e}")))?
            .install(run),
        None => run(),
    }?;
    if let Some(path) = &cfg.out {
        write_records(path, &records, cfg.format)?;
    }
    Ok(records)
}

/// Locates the p_hat = 0.5 crossing by linear interpolation between the
/// first bracketing pair of records (which must be sorted by k). A record
/// sitting exactly at 0.5 is returned as-is.
pub fn empirical_threshold(records: &[ScanRecord]) -> Result<f64> {
    for (i, a) in records.iter().enumerate() {
        if a.p_hat == 0.5 {
            return Ok(a.k as f64);
        }
        if let Some(b) = records.get(i + 1) {
            if a.p_hat < 0.5 && b.p_hat > 0.5 {
                let frac = (0.5 - a.p_hat) / (b.p_hat - a.p_hat);
                return Ok(a.k as f64 + frac * (b.k - a.k) as f64);
            }
        }
    }
    Err(Error::NotFound(
        "no 0.5 crossing bracketed by the records".into(),
    ))
}

/// Consecutive record pairs whose confidence intervals show a significant
/// *decrease* of p_hat in k (ci_high of the later record below ci_low of the
/// earlier). Covering probability is monotone in rows, so any such pair
/// deserves a flag.
pub fn monotonicity_violations(records: &[ScanRecord]) -> Vec<(u32, u32)> {
    records
        .windows(2)
        .filter(|w| w[1].ci_high < w[0].ci_low)
        .map(|w| (w[0].k, w[1].k))
        .collect()
}

/// Sample mean/variance of the X statistic (number of unshattered t-tuples)
/// with the matching closed-form expectation bounds where available.
#[derive(Debug, Clone, PartialEq)]
pub struct SecondMomentReport {
    pub mean_x: f64,
    pub var_x: f64,
    /// var / mean^2; the second-moment method needs this to vanish.
    pub ratio: f64,
    pub expected_lower: Option<f64>,
    pub expected_upper: Option<f64>,
}

/// Estimates mean and variance of X over `trials` independent arrays.
/// Aggregation is exact (integer sums), so results are independent of worker
/// count and scheduling.
pub fn mc_second_moment(
    kind: ArrayKind,
    n: u32,
    q: Option<u32>,
    t: u32,
    k: u32,
    trials: u32,
    seed: u64,
) -> Result<SecondMomentReport> {
    if trials == 0 {
        return Err(Error::Parameter("trials must be >= 1".into()));
    }
    generate(kind, n, q, 0, SeedSpec::new(seed))?;
    let (sum, sum_sq) = (0..trials)
        .into_par_iter()
        .map(|trial| -> Result<(u128, u128)> {
            let spec = SeedSpec::with_stream(seed, trial_stream(k, trial));
            let arr = generate(kind, n, q, k, spec).expect("parameters validated");
            let x = x_statistic(&arr, t)? as u128;
            Ok((x, x * x))
        })
        .try_reduce(|| (0u128, 0u128), |a, b| Ok((a.0 + b.0, a.1 + b.1)))?;
    let tf = trials as f64;
    let mean_x = sum as f64 / tf;
    let var_x = if trials > 1 {
        // Unbiased: (trials * sum_sq - sum^2) / (trials * (trials - 1)).
        let num = (trials as u128 * sum_sq) as f64 - (sum as f64) * (sum as f64);
        (num / (tf * (tf - 1.0))).max(0.0)
    } else {
        0.0
    };
    let ratio = if mean_x > 0.0 {
        var_x / (mean_x * mean_x)
    } else {
        0.0
    };
    let (expected_lower, expected_upper) = match kind {
        ArrayKind::Words => {
            let q = q.expect("validated above");
            (
                Some(expected_unshattered_words_lower(n as u64, k as u64, q, t)?),
                Some(expected_unshattered_words_upper(n as u64, k as u64, q, t)?),
            )
        }
        ArrayKind::Perms if t == 3 && n >= 3 => {
            let (lo, hi) = expected_unshattered_perms_bounds(n as u64, k as u64)?;
            (Some(lo), Some(hi))
        }
        ArrayKind::Perms => (None, None),
    };
    Ok(SecondMomentReport {
        mean_x,
        var_x,
        ratio,
        expected_lower,
        expected_upper,
    })
}

pub const CSV_HEADER: &str = "kind,n,q,t,k,trials,successes,p_hat,ci_low,ci_high,seed";

/// Floats carry 17 significant digits so the textual form round-trips.
fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Fixed-schema CSV rendering of scan records.
pub fn records_to_csv(records: &[ScanRecord]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in records {
        let q = r.q.map(|q| q.to_string()).unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{}\n",
            r.kind,
            r.n,
            q,
            r.t,
            r.k,
            r.trials,
            r.successes,
            fmt_f64(r.p_hat),
            fmt_f64(r.ci_low),
            fmt_f64(r.ci_high),
            r.seed
        ));
    }
    out
}

fn parse_field<T: std::str::FromStr>(field: &str, name: &str, line: usize) -> Result<T> {
    field.parse().map_err(|_| Error::Parse {
        line,
        msg: format!("bad {name} field {field:?}"),
    })
}

/// Parses the fixed-schema CSV produced by [`records_to_csv`]; errors carry
/// 1-based line numbers.
pub fn records_from_csv(text: &str) -> Result<Vec<ScanRecord>> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header == CSV_HEADER => {}
        Some((_, header)) => {
            return Err(Error::Parse {
                line: 1,
                msg: format!("unexpected header {header:?}"),
            })
        }
        None => {
            return Err(Error::Parse {
                line: 1,
                msg: "empty file".into(),
            })
        }
    }
    let mut records = Vec::new();
    for (idx, raw) in lines {
        let line = idx + 1;
        if raw.is_empty() {
            continue;
        }
        let fields: Vec<&str> = raw.split(',').collect();
        if fields.len() != 11 {
            return Err(Error::Parse {
                line,
                msg: format!("expected 11 fields, got {}", fields.len()),
            });
        }
        let kind: ArrayKind = parse_field(fields[0], "kind", line)?;
        let q = if fields[2].is_empty() {
            None
        } else {
            Some(parse_field(fields[2], "q", line)?)
        };
        let record = ScanRecord {
            kind,
            n: parse_field(fields[1], "n", line)?,
            q,
            t: parse_field(fields[3], "t", line)?,
            k: parse_field(fields[4], "k", line)?,
            trials: parse_field(fields[5], "trials", line)?,
            successes: parse_field(fields[6], "successes", line)?,
            p_hat: parse_field(fields[7], "p_hat", line)?,
            ci_low: parse_field(fields[8], "ci_low", line)?,
            ci_high: parse_field(fields[9], "ci_high", line)?,
            seed: parse_field(fields[10], "seed", line)?,
        };
        if record.successes > record.trials {
            return Err(Error::Parse {
                line,
                msg: "successes exceed trials".into(),
            });
        }
        records.push(record);
    }
    Ok(records)
}

/// Writes records in the given format.
pub fn write_records(path: &Path, records: &[ScanRecord], format: RecordFormat) -> Result<()> {
    let mut file = std::fs::File::create(path)?;
    match format {
        RecordFormat::Csv => file.write_all(records_to_csv(records).as_bytes())?,
        RecordFormat::Json => {
            let json = serde_json::to_string_pretty(records).map_err(|e| Error::Parse {
                line: 0,
                msg: e.to_string(),
            })?;
            file.write_all(json.as_bytes())?;
            file.write_all(b"\n")?;
        }
    }
    Ok(())
}

/// Reads records back; inverse of [`write_records`].
pub fn read_records(path: &Path, format: RecordFormat) -> Result<Vec<ScanRecord>> {
    let text = std::fs::read_to_string(path)?;
    match format {
        RecordFormat::Csv => records_from_csv(&text),
        RecordFormat::Json => serde_json::from_str(&text).map_err(|e| Error::Parse {
            line: e.line(),
            msg: e.to_string(),
        }),
    }
}

/// Deterministic X expectation at k = 0 is the full tuple count.
pub fn tuple_count(n: u32, t: u32) -> f64 {
    choose_f64(n as u64, t)
}
