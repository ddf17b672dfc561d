//! Independent brute-force verifiers: exhaustive enumeration of the
//! one-overlap rank-pair table and the two-overlap case probabilities, a
//! naive shattering reference built on plain collections, and Monte Carlo
//! estimation of pair correlations.
//!
//! Everything here deliberately avoids the bitset engine in `shatter` so the
//! two paths can check each other. Exhaustive results are exact integer
//! counts over 120 (five columns) or 24 (four columns) arrangements.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::pattern::PatternId;
use crate::randgen::{fisher_yates, SeedSpec};
use crate::types::{Array, ColumnTuple};
use rand::Rng;

/// How two column triples overlap: `r` shared columns (1 or 2), with each
/// triple's positions placed among the `6 - r` distinct columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OverlapGeometry {
    r: u8,
    gamma: [usize; 3],
    delta: [usize; 3],
}

impl OverlapGeometry {
    /// Positions are 1-based and strictly increasing; the union must cover
    /// all `6 - r` columns and the overlap must have size 1 or 2.
    pub fn new(gamma: [u32; 3], delta: [u32; 3]) -> Result<Self> {
        for cols in [&gamma, &delta] {
            if !(cols[0] >= 1 && cols[0] < cols[1] && cols[1] < cols[2]) {
                return Err(Error::Input(format!(
                    "positions must be strictly increasing and 1-based, got {cols:?}"
                )));
            }
        }
        let shared = gamma.iter().filter(|c| delta.contains(c)).count();
        if shared != 1 && shared != 2 {
            return Err(Error::Input(format!(
                "overlap size must be 1 or 2, got {shared}"
            )));
        }
        let r = shared as u8;
        let m = 6 - shared;
        let mut union: Vec<u32> = gamma.iter().chain(delta.iter()).copied().collect();
        union.sort_unstable();
        union.dedup();
        if union.len() != m || *union.last().unwrap() as usize > m {
            return Err(Error::Input(format!(
                "positions of a {shared}-overlap pair must cover exactly columns 1..={m}"
            )));
        }
        Ok(OverlapGeometry {
            r,
            gamma: gamma.map(|c| c as usize - 1),
            delta: delta.map(|c| c as usize - 1),
        })
    }

    pub fn one_overlap_canonical() -> Self {
        Self::new([1, 2, 3], [3, 4, 5]).expect("canonical geometry is valid")
    }

    pub fn two_overlap_canonical() -> Self {
        Self::new([1, 2, 3], [2, 3, 4]).expect("canonical geometry is valid")
    }

    pub fn r(&self) -> u8 {
        self.r
    }

    /// Number of distinct columns, `6 - r`.
    pub fn columns(&self) -> usize {
        6 - self.r as usize
    }

    pub fn gamma_positions(&self) -> [u32; 3] {
        self.gamma.map(|c| c as u32 + 1)
    }

    pub fn delta_positions(&self) -> [u32; 3] {
        self.delta.map(|c| c as u32 + 1)
    }

    /// 0-based shared columns, increasing.
    fn shared_columns(&self) -> Vec<usize> {
        self.gamma
            .iter()
            .filter(|c| self.delta.contains(c))
            .copied()
            .collect()
    }
}

fn slot_of(cols: &[usize; 3], col: usize) -> usize {
    cols.iter()
        .position(|&c| c == col)
        .expect("shared column present")
}

/// Lehmer id of the length-3 pattern realized by three distinct values.
#[inline]
fn pattern3_id(a: u32, b: u32, c: u32) -> usize {
    let l1 = (b < a) as usize + (c < a) as usize;
    let l2 = (c < b) as usize;
    l1 * 2 + l2
}

fn for_each_permutation(m: usize, f: &mut impl FnMut(&[u32])) {
    fn recurse(vals: &mut Vec<u32>, k: usize, f: &mut impl FnMut(&[u32])) {
        if k == vals.len() {
            f(vals);
            return;
        }
        for i in k..vals.len() {
            vals.swap(k, i);
            recurse(vals, k + 1, f);
            vals.swap(k, i);
        }
    }
    let mut vals: Vec<u32> = (1..=m as u32).collect();
    recurse(&mut vals, 0, f);
}

/// One row of the one-overlap table: the number of 5-column arrangements
/// (out of 120) realizing a fixed pattern pair whose shared value has rank
/// `g` in the first pattern and `d` in the second, plus the complement
/// `20 - joint` (the numerator over 120 of "first pattern present, second
/// pattern absent").
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RankPairEntry {
    pub rank_pair: (u8, u8),
    pub joint_count: u32,
    pub complement_count: u32,
}

/// Closed form for the joint count: `C(g+d-2, g-1) * C(6-g-d, 3-g)` — the
/// shared value has `g+d-2` smaller elements to distribute and `6-g-d`
/// larger ones.
pub fn rank_pair_joint_count_closed_form(g: u8, d: u8) -> u32 {
    fn c(n: i32, k: i32) -> u32 {
        if k < 0 || k > n {
            return 0;
        }
        let (n, k) = (n as u64, k as u64);
        ((0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))) as u32
    }
    c(g as i32 + d as i32 - 2, g as i32 - 1) * c(6 - g as i32 - d as i32, 3 - g as i32)
}

/// Exhaustive one-overlap table over all 120 arrangements of 5 values, for
/// an arbitrary one-overlap geometry. Rows are keyed by the unordered rank
/// pair and sorted; the relative placement of the non-shared columns does
/// not affect the counts.
pub fn one_overlap_rank_table_for(geo: &OverlapGeometry) -> Result<Vec<RankPairEntry>> {
    if geo.r() != 1 {
        return Err(Error::Parameter(
            "rank table requires a one-overlap geometry".into(),
        ));
    }
    let shared = geo.shared_columns()[0];
    let gs = slot_of(&geo.gamma, shared);
    let ds = slot_of(&geo.delta, shared);

    // Count arrangements per ordered (gamma pattern, delta pattern) pair.
    let mut pair_counts: HashMap<(usize, usize), u32> = HashMap::new();
    for_each_permutation(5, &mut |vals| {
        let g = geo.gamma.map(|c| vals[c]);
        let d = geo.delta.map(|c| vals[c]);
        let gid = pattern3_id(g[0], g[1], g[2]);
        let did = pattern3_id(d[0], d[1], d[2]);
        *pair_counts.entry((gid, did)).or_insert(0) += 1;
    });

    // Group the 36 pattern pairs by unordered rank pair; counts within a
    // group must agree.
    let mut grouped: HashMap<(u8, u8), u32> = HashMap::new();
    for gid in 0..6 {
        for did in 0..6 {
            let count = pair_counts.get(&(gid, did)).copied().unwrap_or(0);
            let g = PatternId::new(3, gid as u64).unwrap().decode()[gs] as u8;
            let d = PatternId::new(3, did as u64).unwrap().decode()[ds] as u8;
            let key = (g.min(d), g.max(d));
            match grouped.get(&key) {
                None => {
                    grouped.insert(key, count);
                }
                Some(&prev) => assert_eq!(
                    prev, count,
                    "rank pair {key:?} has inconsistent counts {prev} vs {count}"
                ),
            }
        }
    }

    let mut table: Vec<RankPairEntry> = grouped
        .into_iter()
        .map(|(rank_pair, joint_count)| RankPairEntry {
            rank_pair,
            joint_count,
            complement_count: 20 - joint_count,
        })
        .collect();
    table.sort_by_key(|e| e.rank_pair);
    Ok(table)
}

/// The canonical one-overlap table (first triple on columns 1-3, second on
/// columns 3-5).
pub fn one_overlap_rank_table() -> Vec<RankPairEntry> {
    one_overlap_rank_table_for(&OverlapGeometry::one_overlap_canonical())
        .expect("canonical geometry is one-overlap")
}

/// Joint probabilities for the two-overlap case, by the relation between the
/// two patterns' values on the shared column pair: identical value pairs,
/// order-consistent but different, or order-inconsistent.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TwoOverlapProbs {
    /// P(both patterns in one row), as (numerator, 24).
    pub identical: (u32, u32),
    pub consistent: (u32, u32),
    pub inconsistent: (u32, u32),
    /// How the 36 pattern pairs split across the three cases.
    pub identical_pairs: usize,
    pub consistent_pairs: usize,
    pub inconsistent_pairs: usize,
}

/// Exhaustive two-overlap case analysis over all 24 arrangements of 4
/// values.
pub fn two_overlap_case_probs_for(geo: &OverlapGeometry) -> Result<TwoOverlapProbs> {
    if geo.r() != 2 {
        return Err(Error::Parameter(
            "case analysis requires a two-overlap geometry".into(),
        ));
    }
    let shared = geo.shared_columns();
    let (s0, s1) = (shared[0], shared[1]);
    let (g0, g1) = (slot_of(&geo.gamma, s0), slot_of(&geo.gamma, s1));
    let (d0, d1) = (slot_of(&geo.delta, s0), slot_of(&geo.delta, s1));

    let mut pair_counts: HashMap<(usize, usize), u32> = HashMap::new();
    for_each_permutation(4, &mut |vals| {
        let g = geo.gamma.map(|c| vals[c]);
        let d = geo.delta.map(|c| vals[c]);
        *pair_counts
            .entry((pattern3_id(g[0], g[1], g[2]), pattern3_id(d[0], d[1], d[2])))
            .or_insert(0) += 1;
    });

    let mut case_counts = [None::<u32>; 3];
    let mut case_pairs = [0usize; 3];
    for gid in 0..6 {
        let gpat = PatternId::new(3, gid as u64).unwrap().decode();
        for did in 0..6 {
            let dpat = PatternId::new(3, did as u64).unwrap().decode();
            let a = (gpat[g0], gpat[g1]);
            let b = (dpat[d0], dpat[d1]);
            let case = if (a.0 < a.1) != (b.0 < b.1) {
                2 // inconsistent
            } else if a == b {
                0 // identical
            } else {
                1 // consistent
            };
            case_pairs[case] += 1;
            let count = pair_counts.get(&(gid, did)).copied().unwrap_or(0);
            match case_counts[case] {
                None => case_counts[case] = Some(count),
                Some(prev) => assert_eq!(
                    prev, count,
                    "two-overlap case {case} has inconsistent counts {prev} vs {count}"
                ),
            }
        }
    }

    Ok(TwoOverlapProbs {
        identical: (case_counts[0].unwrap_or(0), 24),
        consistent: (case_counts[1].unwrap_or(0), 24),
        inconsistent: (case_counts[2].unwrap_or(0), 24),
        identical_pairs: case_pairs[0],
        consistent_pairs: case_pairs[1],
        inconsistent_pairs: case_pairs[2],
    })
}

/// The canonical two-overlap case probabilities.
pub fn two_overlap_case_probs() -> TwoOverlapProbs {
    two_overlap_case_probs_for(&OverlapGeometry::two_overlap_canonical())
        .expect("canonical geometry is two-overlap")
}

/// Naive shattering reference: materializes the projected rows as plain
/// collections and compares the number of distinct projections to the full
/// count. Independent of the bitset engine.
pub fn naive_shatter_check(arr: &Array, cols: &ColumnTuple) -> Result<bool> {
    let n = arr.n();
    let max = *cols.zero_based().last().unwrap();
    if max as usize >= n {
        return Err(Error::Input(format!(
            "column index {} out of range for n={n}",
            max + 1
        )));
    }
    let t = cols.t();
    match arr {
        Array::Words(a) => {
            let mut seen: std::collections::HashSet<Vec<u32>> = std::collections::HashSet::new();
            for row in 0..a.k() {
                seen.insert(
                    cols.zero_based()
                        .iter()
                        .map(|&c| a.cell(row, c as usize))
                        .collect(),
                );
            }
            Ok(seen.len() as u128 == (a.q() as u128).pow(t as u32))
        }
        Array::Perms(a) => {
            let mut seen: std::collections::HashSet<Vec<usize>> = std::collections::HashSet::new();
            for row in 0..a.k() {
                let vals: Vec<u32> = cols
                    .zero_based()
                    .iter()
                    .map(|&c| a.value(row, c as usize))
                    .collect();
                // Normalize by argsort-of-argsort ranking.
                let mut order: Vec<usize> = (0..t).collect();
                order.sort_by_key(|&i| vals[i]);
                let mut rank = vec![0usize; t];
                for (r, &i) in order.iter().enumerate() {
                    rank[i] = r;
                }
                seen.insert(rank);
            }
            Ok(seen.len() as u128 == (1..=t as u128).product())
        }
    }
}

/// Monte Carlo estimate of the probability that both triples of a one- or
/// two-overlap geometry miss at least one pattern, over `trials` independent
/// k-row restrictions. Deterministic given the seed. Only upper-bound
/// comparisons against the closed-form constants are meaningful; the sign of
/// the correlation is not asserted anywhere.
pub fn mc_pair_correlation(
    geometry: &OverlapGeometry,
    k: u32,
    trials: u32,
    seed: u64,
) -> Result<f64> {
    if k == 0 || trials == 0 {
        return Err(Error::Parameter("k and trials must be >= 1".into()));
    }
    let m = geometry.columns();
    let g = geometry.gamma;
    let d = geometry.delta;
    let mut both = 0u64;
    for trial in 0..trials {
        let mut rng = SeedSpec::with_stream(seed, trial as u64).rng();
        let mut gseen = [false; 6];
        let mut dseen = [false; 6];
        let (mut gcount, mut dcount) = (0u32, 0u32);
        for _ in 0..k {
            let row = fisher_yates(m, &mut rng);
            let gid = pattern3_id(row[g[0]], row[g[1]], row[g[2]]);
            if !gseen[gid] {
                gseen[gid] = true;
                gcount += 1;
            }
            let did = pattern3_id(row[d[0]], row[d[1]], row[d[2]]);
            if !dseen[did] {
                dseen[did] = true;
                dcount += 1;
            }
            if gcount == 6 && dcount == 6 {
                break;
            }
        }
        if gcount < 6 && dcount < 6 {
            both += 1;
        }
    }
    Ok(both as f64 / trials as f64)
}

/// Monte Carlo estimate of the probability that two word t-tuples sharing
/// `r` columns are both missing at least one word, over `trials` independent
/// k-row restrictions to the `2t - r` relevant columns.
pub fn mc_word_pair_correlation(
    t: u32,
    q: u32,
    r: u32,
    k: u32,
    trials: u32,
    seed: u64,
) -> Result<f64> {
    if q < 2 || t < 2 {
        return Err(Error::Parameter(format!(
            "need q >= 2, t >= 2; got q={q}, t={t}"
        )));
    }
    if r == 0 || r >= t {
        return Err(Error::Parameter(format!(
            "overlap r must satisfy 1 <= r <= t-1, got {r}"
        )));
    }
    if k == 0 || trials == 0 {
        return Err(Error::Parameter("k and trials must be >= 1".into()));
    }
    let arity = (q as u64)
        .checked_pow(t)
        .filter(|&a| a <= 1 << 20)
        .ok_or_else(|| Error::Parameter(format!("q^t too large for q={q}, t={t}")))?
        as usize;
    let m = (2 * t - r) as usize;
    let t = t as usize;
    let r = r as usize;
    let mut gseen = vec![false; arity];
    let mut dseen = vec![false; arity];
    let mut row = vec![0u32; m];
    let mut both = 0u64;
    for trial in 0..trials {
        let mut rng = SeedSpec::with_stream(seed, trial as u64).rng();
        gseen.fill(false);
        dseen.fill(false);
        let (mut gcount, mut dcount) = (0usize, 0usize);
        for _ in 0..k {
            for cell in row.iter_mut() {
                *cell = rng.random_range(0..q);
            }
            let mut gw = 0usize;
            for &c in &row[0..t] {
                gw = gw * q as usize + c as usize;
            }
            let mut dw = 0usize;
            for &c in &row[t - r..m] {
                dw = dw * q as usize + c as usize;
            }
            if !gseen[gw] {
                gseen[gw] = true;
                gcount += 1;
            }
            if !dseen[dw] {
                dseen[dw] = true;
                dcount += 1;
            }
            if gcount == arity && dcount == arity {
                break;
            }
        }
        if gcount < arity && dcount < arity {
            both += 1;
        }
    }
    Ok(both as f64 / trials as f64)
}
