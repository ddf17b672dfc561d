//! Acceptance suite: one test per criterion. Each test prints a PASS line
//! with the measured values (visible with `--nocapture`); the harness line
//! per test is the per-criterion pass/fail record.

use std::process::Command;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use shatterscan_core::experiments::{
    empirical_threshold, mc_covering_probability, monotonicity_violations, records_to_csv,
    threshold_scan, RecordFormat, ScanConfig,
};
use shatterscan_core::oracles::{
    mc_pair_correlation, mc_word_pair_correlation, naive_shatter_check, OverlapGeometry,
};
use shatterscan_core::randgen::{gen_perm_array, gen_word_array, SeedSpec};
use shatterscan_core::shatter::{
    find_unshattered_tuple, is_covering, patterns_present, vc_dimension, words_present, VcBound,
};
use shatterscan_core::theory::{
    check_correlation_below_threshold, check_dominance_inequality, check_overlap_ratio_increasing,
    choose_f64, correlation_constant, exact_prob_tuple_covered, expected_unshattered_perms_bounds,
    expected_unshattered_words_lower, expected_unshattered_words_upper, pair_correlation_bound,
    perm_analysis_constants, round2_nearest, threshold_coefficient_words, DominanceCheck,
};
use shatterscan_core::types::{Array, ArrayKind, ColumnTuple};

fn run_bin(args: &[&str]) -> (String, Duration) {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_shatterscan"))
        .args(args)
        .output()
        .expect("binary runs");
    let elapsed = start.elapsed();
    assert!(
        out.status.success(),
        "{:?} failed: {}",
        args,
        String::from_utf8_lossy(&out.stderr)
    );
    (String::from_utf8(out.stdout).unwrap(), elapsed)
}

#[test]
fn acceptance_01_one_overlap_table_reproduction() {
    let (stdout, elapsed) = run_bin(&["oracle", "table1"]);
    // Complement numerators over 120 for rank pairs
    // (1,1),(1,2),(1,3),(2,2),(2,3),(3,3), bit-exact.
    let expected = [
        ("(1,1)", 14u32),
        ("(1,2)", 17),
        ("(1,3)", 19),
        ("(2,2)", 16),
        ("(2,3)", 17),
        ("(3,3)", 14),
    ];
    let mut complements = Vec::new();
    for (pair, want) in expected {
        let line = stdout
            .lines()
            .find(|l| l.starts_with(pair))
            .unwrap_or_else(|| panic!("missing row {pair}"));
        let got: u32 = line.split_whitespace().last().unwrap().parse().unwrap();
        assert_eq!(got, want, "row {pair}");
        complements.push(got);
    }
    assert_eq!(complements, vec![14, 17, 19, 16, 17, 14]);
    // The denominator discrepancy (100 vs 120) must be flagged in a note.
    assert!(
        stdout.contains("120") && stdout.contains("100"),
        "denominator note missing"
    );
    assert!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    println!("ACCEPTANCE 1 one-overlap table: PASS ({elapsed:?}, complements {complements:?})");
}

#[test]
fn acceptance_02_two_overlap_reproduction() {
    let (stdout, elapsed) = run_bin(&["oracle", "overlap2"]);
    assert!(stdout.contains("identical") && stdout.contains("2/24"));
    assert!(stdout.contains("consistent") && stdout.contains("1/24"));
    assert!(stdout.contains("inconsistent") && stdout.contains("0/24"));
    assert!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    println!("ACCEPTANCE 2 two-overlap cases: PASS ({elapsed:?})");
}

/// Exact fraction for the rational identities of criterion 3.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Frac(i64, i64);

impl Frac {
    fn new(num: i64, den: i64) -> Frac {
        fn gcd(a: i64, b: i64) -> i64 {
            if b == 0 {
                a.abs()
            } else {
                gcd(b, a % b)
            }
        }
        let g = gcd(num, den);
        let sign = if den < 0 { -1 } else { 1 };
        Frac(sign * num / g, sign * den / g)
    }
    fn mul(self, o: Frac) -> Frac {
        Frac::new(self.0 * o.0, self.1 * o.1)
    }
    fn sub(self, o: Frac) -> Frac {
        Frac::new(self.0 * o.1 - o.0 * self.1, self.1 * o.1)
    }
}

#[test]
fn acceptance_03_reported_constants() {
    // Word-model window coefficients, rounded to nearest 2 decimals.
    assert_eq!(
        round2_nearest(threshold_coefficient_words(2, 3).unwrap()),
        15.57
    );
    assert_eq!(
        round2_nearest(threshold_coefficient_words(2, 4).unwrap()),
        42.96
    );

    // Permutation-model sufficiency constants, rounded up at 2 decimals.
    let c = perm_analysis_constants();
    assert_eq!(c.rounded_up_2dp(), (8.55, 9.64, 10.41));

    // Per-row bases as exact rationals:
    // (6/5)(5/6 - 14/120) = 86/100
    let one_overlap_base = Frac::new(6, 5).mul(Frac::new(5, 6).sub(Frac::new(14, 120)));
    assert_eq!(one_overlap_base, Frac::new(86, 100));
    // prefactored two-overlap base: (5/6)(6/5)(5/6 - 2/24) = 3/4
    let two_overlap_base = Frac::new(5, 6)
        .mul(Frac::new(6, 5))
        .mul(Frac::new(5, 6).sub(Frac::new(2, 24)));
    assert_eq!(two_overlap_base, Frac::new(3, 4));
    println!(
        "ACCEPTANCE 3 reported constants: PASS (15.57, 42.96, {:?}, 86/100, 3/4)",
        c.rounded_up_2dp()
    );
}

#[test]
fn acceptance_04_lemma_grid_checks() {
    let start = Instant::now();
    for t in 3..=8u32 {
        for q in 2..=5u32 {
            assert!(
                check_overlap_ratio_increasing(q, t).unwrap(),
                "ratio t={t} q={q}"
            );
            assert!(
                check_correlation_below_threshold(t, q).unwrap(),
                "below t={t} q={q}"
            );
            let dom = check_dominance_inequality(t, q).unwrap();
            if (t, q) == (3, 2) {
                assert_eq!(dom, DominanceCheck::DirectCaseOnly);
            } else {
                assert_eq!(dom, DominanceCheck::Holds, "dominance t={t} q={q}");
            }
            // Argmax of the correlation constant over r is r=1.
            let c1 = correlation_constant(t, q, 1).unwrap();
            for r in 2..t {
                assert!(
                    correlation_constant(t, q, r).unwrap() <= c1,
                    "argmax t={t} q={q} r={r}"
                );
            }
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    println!("ACCEPTANCE 4 lemma grid t in 3..=8, q in 2..=5: PASS ({elapsed:?})");
}

#[test]
fn acceptance_05_exact_vs_mc_single_tuple() {
    let start = Instant::now();
    let trials = 100_000u32;
    let record =
        mc_covering_probability(ArrayKind::Words, 2, Some(2), 2, 4, trials, 20260805).unwrap();
    let exact = 0.09375; // 24/256, the k=4 arity-4 surjection probability
    let sigma = (exact * (1.0 - exact) / trials as f64).sqrt();
    let delta = (record.p_hat - exact).abs();
    assert!(
        delta < 4.0 * sigma,
        "p_hat={} exact={exact} 4sigma={}",
        record.p_hat,
        4.0 * sigma
    );
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(5), "took {elapsed:?}");
    println!(
        "ACCEPTANCE 5 exact-vs-MC single tuple: PASS (p_hat={} vs {exact}, {elapsed:?})",
        record.p_hat
    );
}

#[test]
fn acceptance_06_word_threshold_curve() {
    let start = Instant::now();
    let cfg = ScanConfig {
        kind: ArrayKind::Words,
        n: 32,
        q: Some(2),
        t: 2,
        k_min: 10,
        k_max: 40,
        k_step: 2,
        trials: 500,
        seed: 42,
        threads: None,
        out: None,
        format: RecordFormat::Csv,
    };
    let records = threshold_scan(&cfg).unwrap();
    let at = |k: u32| records.iter().find(|r| r.k == k).unwrap().p_hat;
    assert!(at(14) < 0.10, "p_hat(14) = {}", at(14));
    assert!(at(34) > 0.90, "p_hat(34) = {}", at(34));
    let violations = monotonicity_violations(&records);
    assert!(violations.is_empty(), "ci-significant p_hat decreases: {violations:?}");
    let k_star = empirical_threshold(&records).unwrap();
    assert!(
        (20.0..=29.0).contains(&k_star),
        "threshold {k_star} outside [20, 29] (formula level 2 lg 32 / lg(4/3) ~ 24.1)"
    );
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(60), "took {elapsed:?}");
    println!(
        "ACCEPTANCE 6 word threshold curve: PASS (p(14)={}, p(34)={}, k*={k_star:.2}, {elapsed:?})",
        at(14),
        at(34)
    );
}

#[test]
fn acceptance_07_perm_threshold_curve() {
    let start = Instant::now();
    let cfg = ScanConfig {
        kind: ArrayKind::Perms,
        n: 16,
        q: None,
        t: 3,
        k_min: 25,
        k_max: 70,
        k_step: 5,
        trials: 300,
        seed: 42,
        threads: None,
        out: None,
        format: RecordFormat::Csv,
    };
    let records = threshold_scan(&cfg).unwrap();
    let at = |k: u32| records.iter().find(|r| r.k == k).unwrap().p_hat;
    assert!(at(30) < 0.10, "p_hat(30) = {}", at(30));
    assert!(at(65) > 0.90, "p_hat(65) = {}", at(65));
    let violations = monotonicity_violations(&records);
    assert!(violations.is_empty(), "ci-significant p_hat decreases: {violations:?}");
    let k_star = empirical_threshold(&records).unwrap();
    assert!(
        (35.0..=60.0).contains(&k_star),
        "threshold {k_star} outside [35, 60] (formula anchor 3 lg 16 / lg 1.2 ~ 45.7)"
    );
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(120), "took {elapsed:?}");
    println!(
        "ACCEPTANCE 7 perm threshold curve: PASS (p(30)={}, p(65)={}, k*={k_star:.2}, {elapsed:?})",
        at(30),
        at(65)
    );
}

#[test]
fn acceptance_08_vc_window_statistical() {
    // q=2, n=128, k=180 sits inside the dimension-4 window
    // (15.57 * 7 ~ 109 < 180 < 42.96 * 7 ~ 301).
    let start = Instant::now();
    let trials = 30u64;
    let hits: u32 = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let arr = Array::Words(
                gen_word_array(128, 180, 2, SeedSpec::with_stream(10_000, trial)).unwrap(),
            );
            // Full check: every tuple size up to 3 shattered.
            let lower_ok = vc_dimension(&arr, 3).unwrap() == VcBound::AtLeast(4);
            // Randomized search with early exit for an unshattered 4-tuple.
            let witness =
                find_unshattered_tuple(&arr, 4, SeedSpec::with_stream(77, trial), 2_000_000)
                    .unwrap();
            (lower_ok && witness.is_some()) as u32
        })
        .sum();
    let fraction = hits as f64 / trials as f64;
    assert!(fraction >= 0.80, "vc = 4 in only {hits}/{trials} trials");
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(600), "took {elapsed:?}");
    println!("ACCEPTANCE 8 VC window: PASS (vc=4 in {hits}/{trials} trials, {elapsed:?})");
}

#[test]
fn acceptance_09_correlation_bound_sanity() {
    let start = Instant::now();
    let trials = 100_000u32;

    let est_w = mc_word_pair_correlation(2, 2, 1, 30, trials, 901).unwrap();
    let bound_w = pair_correlation_bound(2, 2, 1, 30).unwrap();
    let sigma_w = (bound_w * (1.0 - bound_w) / trials as f64).sqrt();
    assert!(
        est_w <= 1.5 * bound_w + 4.0 * sigma_w,
        "words: est={est_w} bound={bound_w} sigma={sigma_w}"
    );

    let geometry = OverlapGeometry::one_overlap_canonical();
    let est_p = mc_pair_correlation(&geometry, 40, trials, 902).unwrap();
    let bound_p = 36.0 * ((5.0 / 6.0) * 0.86f64).powi(40);
    let sigma_p = (bound_p * (1.0 - bound_p) / trials as f64).sqrt();
    assert!(
        est_p <= 1.5 * bound_p + 4.0 * sigma_p,
        "perms: est={est_p} bound={bound_p} sigma={sigma_p}"
    );

    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(60), "took {elapsed:?}");
    println!(
        "ACCEPTANCE 9 correlation bounds: PASS (words {est_w:e} <= {:e}, perms {est_p:e} <= {:e}, {elapsed:?})",
        1.5 * bound_w + 4.0 * sigma_w,
        1.5 * bound_p + 4.0 * sigma_p
    );
}

fn all_tuples(n: usize, t: usize) -> Vec<ColumnTuple> {
    fn rec(start: u32, n: u32, left: usize, cur: &mut Vec<u32>, out: &mut Vec<ColumnTuple>) {
        if left == 0 {
            out.push(ColumnTuple::from_zero_based(cur.clone()).unwrap());
            return;
        }
        for c in start..=(n - left as u32) {
            cur.push(c);
            rec(c + 1, n, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n as u32, t, &mut Vec::new(), &mut out);
    out
}

#[test]
fn acceptance_10_property_suites() {
    // (a) Engine vs naive reference on over 1000 random small instances.
    let mut instances = 0u32;
    let mut seed = 50_000u64;
    while instances < 1000 {
        for n in 2..=6usize {
            for k in [0usize, 2, 5, 8] {
                for q in 2..=3u32 {
                    for t in 1..=3u32 {
                        if t as usize > n {
                            continue;
                        }
                        seed += 1;
                        instances += 1;
                        let words = gen_word_array(n, k, q, SeedSpec::new(seed)).unwrap();
                        let perms = gen_perm_array(n, k, SeedSpec::new(seed)).unwrap();
                        let wa = Array::Words(words.clone());
                        let pa = Array::Perms(perms.clone());
                        for cols in all_tuples(n, t as usize) {
                            assert_eq!(
                                words_present(&words, &cols).unwrap().is_full(),
                                naive_shatter_check(&wa, &cols).unwrap()
                            );
                            assert_eq!(
                                patterns_present(&perms, &cols).unwrap().is_full(),
                                naive_shatter_check(&pa, &cols).unwrap()
                            );
                        }
                    }
                }
            }
        }
    }

    // (b) Monotonicity in rows: a covering prefix never un-covers.
    for s in 0..20u64 {
        let full = gen_word_array(6, 10, 2, SeedSpec::new(s)).unwrap();
        let mut prev_covering = false;
        for k in 0..=10usize {
            let rows: Vec<Vec<u32>> = (0..k).map(|i| full.row(i).to_vec()).collect();
            let arr = Array::Words(shatterscan_core::WordArray::new(2, 6, rows).unwrap());
            let covering = is_covering(&arr, 2).unwrap();
            assert!(!prev_covering || covering, "seed={s} k={k}");
            prev_covering = covering;
        }
    }

    // (c) Determinism: bit-identical CSV at 1, 2, and 8 workers.
    let cfg = |threads| ScanConfig {
        kind: ArrayKind::Words,
        n: 16,
        q: Some(2),
        t: 2,
        k_min: 10,
        k_max: 25,
        k_step: 5,
        trials: 300,
        seed: 314,
        threads: Some(threads),
        out: None,
        format: RecordFormat::Csv,
    };
    let csv1 = records_to_csv(&threshold_scan(&cfg(1)).unwrap());
    for threads in [2usize, 8] {
        assert_eq!(
            records_to_csv(&threshold_scan(&cfg(threads)).unwrap()),
            csv1
        );
    }

    // (d) Expectation sandwich lower <= exact <= upper on the n <= 8 grid.
    for n in 2..=8u64 {
        for q in 2..=3u32 {
            for t in 1..=3u32 {
                if t as u64 > n {
                    continue;
                }
                let arity = (q as u64).pow(t) as u32;
                for k in [0u64, 1, 3, 7, 15, 40] {
                    let exact =
                        choose_f64(n, t) * (1.0 - exact_prob_tuple_covered(k, arity).unwrap());
                    let lo = expected_unshattered_words_lower(n, k, q, t).unwrap();
                    let hi = expected_unshattered_words_upper(n, k, q, t).unwrap();
                    assert!(
                        lo <= exact + 1e-9 && exact <= hi + 1e-9,
                        "n={n} q={q} t={t} k={k}"
                    );
                }
            }
        }
        if n >= 3 {
            for k in [0u64, 5, 20, 60] {
                let exact = choose_f64(n, 3) * (1.0 - exact_prob_tuple_covered(k, 6).unwrap());
                let (lo, hi) = expected_unshattered_perms_bounds(n, k).unwrap();
                assert!(
                    lo <= exact + 1e-9 && exact <= hi + 1e-9,
                    "perms n={n} k={k}"
                );
            }
        }
    }

    println!("ACCEPTANCE 10 property suites: PASS (engine-vs-naive on {instances} instances, monotonicity, 1/2/8-worker determinism, expectation sandwich)");
}
