//! The checking engine: which column tuples are shattered, the X and Y
//! statistics, the covering decision, and VC dimension.
//!
//! A t-tuple of word-array columns is shattered when all `q^t` projected
//! words occur among the rows; a t-tuple of permutation-array columns is
//! shattered when all `t!` order-isomorphism patterns occur. The VC
//! dimension used throughout is the smallest unshattered tuple size, so an
//! array is t-covering exactly when its VC dimension is at least `t + 1`.
//! (The alternative "largest shattered set" notion is deliberately not
//! computed: at `Theta(lg n)` rows some large tuple is shattered almost
//! surely, so that notion degenerates while small unshattered tuples carry
//! all the structure.)
//!
//! Tuples are enumerated in colexicographic order; witness lists are
//! re-sorted lexicographically before capping so reports do not depend on
//! how the tuple space was traversed.

use crate::error::{Error, Result};
use crate::pattern::MAX_PATTERN_LEN;
use crate::randgen::SeedSpec;
use crate::types::{Array, ColumnTuple, CoverageReport, PermArray, WordArray};
use rand::Rng;

/// Default cap on the number of witness tuples retained in a report.
pub const DEFAULT_WITNESS_CAP: usize = 10_000;

/// Largest presence bitset we are willing to allocate (in bits).
const MAX_ARITY: u64 = 1 << 30;

const FACT: [u64; 13] = [
    1, 1, 2, 6, 24, 120, 720, 5040, 40320, 362880, 3628800, 39916800, 479001600,
];

/// Per-tuple coverage state: one bit per possible word (arity `q^t`) or
/// pattern (arity `t!`). The tuple is shattered exactly when the set is full.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PresenceSet {
    arity: u64,
    bits: Vec<u64>,
    count: u64,
}

impl PresenceSet {
    pub fn new(arity: u64) -> Result<Self> {
        if arity == 0 {
            return Err(Error::Parameter("presence arity must be >= 1".into()));
        }
        if arity > MAX_ARITY {
            return Err(Error::Parameter(format!(
                "presence arity {arity} exceeds supported maximum {MAX_ARITY}"
            )));
        }
        let words = (arity as usize).div_ceil(64);
        Ok(PresenceSet {
            arity,
            bits: vec![0; words],
            count: 0,
        })
    }

    /// Sets the bit; returns true if it was newly set.
    pub fn insert(&mut self, id: u64) -> bool {
        debug_assert!(id < self.arity);
        let (w, b) = ((id / 64) as usize, id % 64);
        let mask = 1u64 << b;
        if self.bits[w] & mask == 0 {
            self.bits[w] |= mask;
            self.count += 1;
            true
        } else {
            false
        }
    }

    pub fn contains(&self, id: u64) -> bool {
        let (w, b) = ((id / 64) as usize, id % 64);
        self.bits[w] & (1u64 << b) != 0
    }

    pub fn popcount(&self) -> u64 {
        self.count
    }

    pub fn arity(&self) -> u64 {
        self.arity
    }

    pub fn is_full(&self) -> bool {
        self.count == self.arity
    }

    /// Ids not yet present, in increasing order.
    pub fn missing_ids(&self) -> Vec<u64> {
        (0..self.arity).filter(|&id| !self.contains(id)).collect()
    }
}

/// Reusable presence set with O(set bits) reset, for the hot tuple loop.
struct Scratch {
    arity: u64,
    bits: Vec<u64>,
    touched: Vec<u32>,
    count: u64,
}

impl Scratch {
    fn new(arity: u64) -> Self {
        Scratch {
            arity,
            bits: vec![0; (arity as usize).div_ceil(64)],
            touched: Vec::new(),
            count: 0,
        }
    }

    fn reset(&mut self) {
        for &w in &self.touched {
            self.bits[w as usize] = 0;
        }
        self.touched.clear();
        self.count = 0;
    }

    #[inline]
    fn insert(&mut self, id: u64) -> bool {
        let (w, b) = ((id / 64) as usize, id % 64);
        let mask = 1u64 << b;
        if self.bits[w] == 0 {
            self.touched.push(w as u32);
        }
        if self.bits[w] & mask == 0 {
            self.bits[w] |= mask;
            self.count += 1;
            true
        } else {
            false
        }
    }

    #[inline]
    fn is_full(&self) -> bool {
        self.count == self.arity
    }
}

fn word_arity(q: u32, t: u32) -> Result<u64> {
    let mut arity: u64 = 1;
    for _ in 0..t {
        arity = arity
            .checked_mul(q as u64)
            .filter(|&a| a <= MAX_ARITY)
            .ok_or_else(|| Error::Parameter(format!("q^t too large for q={q}, t={t}")))?;
    }
    Ok(arity)
}

fn perm_arity(t: u32) -> Result<u64> {
    if t as usize > MAX_PATTERN_LEN {
        return Err(Error::Parameter(format!(
            "pattern length t must be <= {MAX_PATTERN_LEN}, got {t}"
        )));
    }
    Ok(FACT[t as usize])
}

fn check_tuple_params(arr: &Array, t: u32) -> Result<u64> {
    if t == 0 {
        return Err(Error::Parameter("t must be >= 1".into()));
    }
    if t as usize > arr.n() {
        return Err(Error::Parameter(format!(
            "t={t} exceeds column count n={}",
            arr.n()
        )));
    }
    match arr {
        Array::Words(a) => word_arity(a.q(), t),
        Array::Perms(_) => perm_arity(t),
    }
}

#[inline]
fn word_of_row(arr: &WordArray, row: usize, cols: &[u32]) -> u64 {
    let q = arr.q() as u64;
    let mut w = 0u64;
    for &c in cols {
        w = w * q + arr.cell(row, c as usize) as u64;
    }
    w
}

/// Lehmer rank of the pattern realized by distinct values; order-isomorphism
/// invariant, so ranking the raw values directly is enough.
#[inline]
fn pattern_of_row(arr: &PermArray, row: usize, cols: &[u32]) -> u64 {
    let t = cols.len();
    let mut vals = [0u32; MAX_PATTERN_LEN];
    for (i, &c) in cols.iter().enumerate() {
        vals[i] = arr.value(row, c as usize);
    }
    let mut id = 0u64;
    for i in 0..t {
        let mut smaller_after = 0u64;
        for j in i + 1..t {
            if vals[j] < vals[i] {
                smaller_after += 1;
            }
        }
        id += smaller_after * FACT[t - 1 - i];
    }
    id
}

fn validate_cols(n: usize, cols: &ColumnTuple) -> Result<()> {
    let max = *cols.zero_based().last().expect("tuples are nonempty");
    if max as usize >= n {
        return Err(Error::Input(format!(
            "column index {} out of range for n={n}",
            max + 1
        )));
    }
    Ok(())
}

/// Which projected t-words occur among the rows of the selected columns.
pub fn words_present(arr: &WordArray, cols: &ColumnTuple) -> Result<PresenceSet> {
    validate_cols(arr.n(), cols)?;
    let arity = word_arity(arr.q(), cols.t() as u32)?;
    let mut ps = PresenceSet::new(arity)?;
    for row in 0..arr.k() {
        ps.insert(word_of_row(arr, row, cols.zero_based()));
        if ps.is_full() {
            break;
        }
    }
    Ok(ps)
}

/// Which order-isomorphism patterns occur among the rows of the selected
/// columns.
pub fn patterns_present(arr: &PermArray, cols: &ColumnTuple) -> Result<PresenceSet> {
    validate_cols(arr.n(), cols)?;
    let arity = perm_arity(cols.t() as u32)?;
    let mut ps = PresenceSet::new(arity)?;
    for row in 0..arr.k() {
        ps.insert(pattern_of_row(arr, row, cols.zero_based()));
        if ps.is_full() {
            break;
        }
    }
    Ok(ps)
}

/// Visits all t-subsets of `0..n` in colexicographic order until the visitor
/// returns false.
fn for_each_tuple_colex(n: usize, t: usize, mut f: impl FnMut(&[u32]) -> bool) {
    let mut idx: Vec<u32> = (0..t as u32).collect();
    loop {
        if !f(&idx) {
            return;
        }
        let mut i = 0;
        loop {
            if i == t {
                return;
            }
            let limit = if i + 1 < t { idx[i + 1] } else { n as u32 };
            if idx[i] + 1 < limit {
                break;
            }
            i += 1;
        }
        idx[i] += 1;
        for (j, v) in idx[..i].iter_mut().enumerate() {
            *v = j as u32;
        }
    }
}

#[inline]
fn tuple_shattered(arr: &Array, cols: &[u32], scratch: &mut Scratch) -> bool {
    scratch.reset();
    match arr {
        Array::Words(a) => {
            for row in 0..a.k() {
                if scratch.insert(word_of_row(a, row, cols)) && scratch.is_full() {
                    return true;
                }
            }
        }
        Array::Perms(a) => {
            for row in 0..a.k() {
                if scratch.insert(pattern_of_row(a, row, cols)) && scratch.is_full() {
                    return true;
                }
            }
        }
    }
    scratch.is_full()
}

/// Counts unshattered t-tuples (the X statistic) over all `(n choose t)`
/// tuples, retaining up to `witness_cap` witnesses and a greedy disjoint
/// count.
pub fn count_unshattered(arr: &Array, t: u32, witness_cap: usize) -> Result<CoverageReport> {
    let arity = check_tuple_params(arr, t)?;
    let mut scratch = Scratch::new(arity);
    let mut x_count = 0u64;
    let mut witnesses: Vec<ColumnTuple> = Vec::new();
    for_each_tuple_colex(arr.n(), t as usize, |cols| {
        if !tuple_shattered(arr, cols, &mut scratch) {
            x_count += 1;
            if witnesses.len() < witness_cap {
                witnesses.push(ColumnTuple::from_zero_based(cols.to_vec()).expect("valid tuple"));
            }
        }
        true
    });
    witnesses.sort();
    let y_greedy = greedy_disjoint(arr.n(), &witnesses);
    Ok(CoverageReport {
        kind: arr.kind(),
        t,
        x_count,
        witnesses,
        y_greedy,
    })
}

/// The X statistic alone, without witness collection.
pub fn x_statistic(arr: &Array, t: u32) -> Result<u64> {
    let arity = check_tuple_params(arr, t)?;
    let mut scratch = Scratch::new(arity);
    let mut x_count = 0u64;
    for_each_tuple_colex(arr.n(), t as usize, |cols| {
        if !tuple_shattered(arr, cols, &mut scratch) {
            x_count += 1;
        }
        true
    });
    Ok(x_count)
}

/// First-fit disjoint selection over lexicographically sorted witnesses.
fn greedy_disjoint(n: usize, sorted_witnesses: &[ColumnTuple]) -> u64 {
    let mut used = vec![false; n];
    let mut count = 0u64;
    for w in sorted_witnesses {
        if w.zero_based().iter().all(|&c| !used[c as usize]) {
            for &c in w.zero_based() {
                used[c as usize] = true;
            }
            count += 1;
        }
    }
    count
}

/// True iff every t-tuple is shattered; stops at the first unshattered one.
pub fn is_covering(arr: &Array, t: u32) -> Result<bool> {
    let arity = check_tuple_params(arr, t)?;
    let mut scratch = Scratch::new(arity);
    let mut covering = true;
    for_each_tuple_colex(arr.n(), t as usize, |cols| {
        if !tuple_shattered(arr, cols, &mut scratch) {
            covering = false;
            return false;
        }
        true
    });
    Ok(covering)
}

/// VC dimension search outcome: either the exact smallest unshattered tuple
/// size, or a lower bound when every size up to the search cap is shattered.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VcBound {
    Exactly(u32),
    AtLeast(u32),
}

impl std::fmt::Display for VcBound {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            VcBound::Exactly(d) => write!(f, "{d}"),
            VcBound::AtLeast(d) => write!(f, ">= {d}"),
        }
    }
}

/// Smallest t in `1..=t_max` with an unshattered t-tuple, searching each
/// size with early exit. An empty family leaves every singleton unshattered,
/// so `k = 0` yields dimension 1.
pub fn vc_dimension(arr: &Array, t_max: u32) -> Result<VcBound> {
    if t_max == 0 {
        return Err(Error::Parameter("t_max must be >= 1".into()));
    }
    if t_max as usize > arr.n() {
        return Err(Error::Parameter(format!(
            "t_max={t_max} exceeds column count n={}",
            arr.n()
        )));
    }
    for t in 1..=t_max {
        if !is_covering(arr, t)? {
            return Ok(VcBound::Exactly(t));
        }
    }
    Ok(VcBound::AtLeast(t_max + 1))
}

/// Exhaustive search bound for [`exact_max_disjoint_unshattered`].
pub const EXACT_DISJOINT_MAX_WITNESSES: u64 = 25;

/// Exact maximum number of pairwise column-disjoint unshattered t-tuples
/// (the Y statistic), by branch and bound over all witnesses. Refuses when
/// more than [`EXACT_DISJOINT_MAX_WITNESSES`] tuples are unshattered; the
/// greedy lower bound in [`count_unshattered`] is always available.
pub fn exact_max_disjoint_unshattered(arr: &Array, t: u32) -> Result<u64> {
    let arity = check_tuple_params(arr, t)?;
    let cap = EXACT_DISJOINT_MAX_WITNESSES as usize;
    let mut scratch = Scratch::new(arity);
    let mut witnesses: Vec<ColumnTuple> = Vec::new();
    let mut overflow = false;
    for_each_tuple_colex(arr.n(), t as usize, |cols| {
        if !tuple_shattered(arr, cols, &mut scratch) {
            if witnesses.len() == cap {
                overflow = true;
                return false;
            }
            witnesses.push(ColumnTuple::from_zero_based(cols.to_vec()).expect("valid tuple"));
        }
        true
    });
    if overflow {
        return Err(Error::Capacity(format!(
            "more than {EXACT_DISJOINT_MAX_WITNESSES} unshattered tuples; exact packing refused"
        )));
    }
    witnesses.sort();
    let mut used = vec![false; arr.n()];
    let mut best = 0u64;
    branch_max_disjoint(&witnesses, 0, 0, &mut used, &mut best);
    Ok(best)
}

fn branch_max_disjoint(
    tuples: &[ColumnTuple],
    i: usize,
    chosen: u64,
    used: &mut [bool],
    best: &mut u64,
) {
    if chosen > *best {
        *best = chosen;
    }
    if i == tuples.len() || chosen + (tuples.len() - i) as u64 <= *best {
        return;
    }
    // Branch 1: take tuple i if its columns are free.
    let cols = tuples[i].zero_based();
    if cols.iter().all(|&c| !used[c as usize]) {
        for &c in cols {
            used[c as usize] = true;
        }
        branch_max_disjoint(tuples, i + 1, chosen + 1, used, best);
        for &c in cols {
            used[c as usize] = false;
        }
    }
    // Branch 2: skip it.
    branch_max_disjoint(tuples, i + 1, chosen, used, best);
}

/// Randomized search for an unshattered t-tuple: samples tuples uniformly
/// until one is unshattered or `max_tries` is exhausted. Deterministic given
/// the seed.
pub fn find_unshattered_tuple(
    arr: &Array,
    t: u32,
    seed: SeedSpec,
    max_tries: u64,
) -> Result<Option<ColumnTuple>> {
    let arity = check_tuple_params(arr, t)?;
    let mut scratch = Scratch::new(arity);
    let mut rng = seed.rng();
    let n = arr.n();
    let t = t as usize;
    let mut cols: Vec<u32> = Vec::with_capacity(t);
    for _ in 0..max_tries {
        // Floyd's algorithm: t distinct values from 0..n.
        cols.clear();
        for j in (n - t)..n {
            let x = rng.random_range(0..=j as u32);
            if cols.contains(&x) {
                cols.push(j as u32);
            } else {
                cols.push(x);
            }
        }
        cols.sort_unstable();
        if !tuple_shattered(arr, &cols, &mut scratch) {
            return Ok(Some(ColumnTuple::from_zero_based(cols.clone())?));
        }
    }
    Ok(None)
}
