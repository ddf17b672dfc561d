//! Core domain types: word arrays, permutation arrays, column tuples, and
//! coverage reports.
//!
//! All types are immutable after construction and safe to share across
//! threads. Column indices are 1-based at every public boundary (file
//! formats, reports, constructors taking user input) and 0-based internally.

use crate::error::{Error, Result};

/// Which of the two random-array models an array or report belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ArrayKind {
    Words,
    Perms,
}

impl ArrayKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ArrayKind::Words => "words",
            ArrayKind::Perms => "perms",
        }
    }
}

impl std::str::FromStr for ArrayKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "words" => Ok(ArrayKind::Words),
            "perms" => Ok(ArrayKind::Perms),
            other => Err(Error::Input(format!("unknown array kind {other:?}"))),
        }
    }
}

impl std::fmt::Display for ArrayKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl serde::Serialize for ArrayKind {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

impl<'de> serde::Deserialize<'de> for ArrayKind {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A `k x n` array of symbols from the alphabet `{0..q-1}`, stored row-major.
///
/// `k = 0` is legal: the empty family shatters nothing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordArray {
    q: u32,
    k: usize,
    n: usize,
    cells: Vec<u32>,
}

impl WordArray {
    /// Builds an array from rows, validating rectangularity and symbol range.
    pub fn new(q: u32, n: usize, rows: Vec<Vec<u32>>) -> Result<Self> {
        if q < 2 {
            return Err(Error::Parameter(format!(
                "alphabet size q must be >= 2, got {q}"
            )));
        }
        if n == 0 {
            return Err(Error::Parameter("column count n must be >= 1".into()));
        }
        let mut cells = Vec::with_capacity(rows.len() * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Input(format!(
                    "row {} has length {}, expected {n}",
                    i + 1,
                    row.len()
                )));
            }
            for &s in row {
                if s >= q {
                    return Err(Error::Input(format!("symbol {s} out of range for q={q}")));
                }
            }
            cells.extend_from_slice(row);
        }
        Ok(WordArray {
            q,
            k: rows.len(),
            n,
            cells,
        })
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Number of rows (words).
    pub fn k(&self) -> usize {
        self.k
    }

    /// Number of columns (word length).
    pub fn n(&self) -> usize {
        self.n
    }

    /// Row as a slice of symbols.
    pub fn row(&self, i: usize) -> &[u32] {
        &self.cells[i * self.n..(i + 1) * self.n]
    }

    /// Cell at 0-based (row, column).
    pub fn cell(&self, row: usize, col: usize) -> u32 {
        self.cells[row * self.n + col]
    }
}

/// A family of `k` permutations of `{1..n}`, one per row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermArray {
    k: usize,
    n: usize,
    rows: Vec<u32>,
}

impl PermArray {
    /// Builds a permutation array; every row must be a bijection on `{1..n}`.
    pub fn new(n: usize, rows: Vec<Vec<u32>>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Parameter("permutation length n must be >= 1".into()));
        }
        let mut flat = Vec::with_capacity(rows.len() * n);
        let mut seen = vec![false; n];
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Input(format!(
                    "row {} has length {}, expected {n}",
                    i + 1,
                    row.len()
                )));
            }
            seen.iter_mut().for_each(|s| *s = false);
            for &v in row {
                if v == 0 || v as usize > n {
                    return Err(Error::Input(format!(
                        "row {} value {v} outside 1..={n}",
                        i + 1
                    )));
                }
                if seen[v as usize - 1] {
                    return Err(Error::Input(format!(
                        "row {} is not a permutation: value {v} repeats",
                        i + 1
                    )));
                }
                seen[v as usize - 1] = true;
            }
            flat.extend_from_slice(row);
        }
        Ok(PermArray {
            k: rows.len(),
            n,
            rows: flat,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Row as a slice of 1-based values.
    pub fn row(&self, i: usize) -> &[u32] {
        &self.rows[i * self.n..(i + 1) * self.n]
    }

    /// Value at 0-based (row, column); values themselves are 1-based.
    pub fn value(&self, row: usize, col: usize) -> u32 {
        self.rows[row * self.n + col]
    }
}

/// Either array model, for call sites that dispatch on kind at runtime.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Array {
    Words(WordArray),
    Perms(PermArray),
}

impl Array {
    pub fn kind(&self) -> ArrayKind {
        match self {
            Array::Words(_) => ArrayKind::Words,
            Array::Perms(_) => ArrayKind::Perms,
        }
    }

    pub fn n(&self) -> usize {
        match self {
            Array::Words(a) => a.n(),
            Array::Perms(a) => a.n(),
        }
    }

    pub fn k(&self) -> usize {
        match self {
            Array::Words(a) => a.k(),
            Array::Perms(a) => a.k(),
        }
    }
}

/// A strictly increasing tuple of `t` column indices, the unit of all
/// shattering checks. Stored 0-based; constructors and accessors exist for
/// both conventions.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ColumnTuple {
    indices: Vec<u32>,
}

impl ColumnTuple {
    /// From 1-based indices, as used in file formats and reports.
    pub fn from_one_based(indices: &[u32]) -> Result<Self> {
        if indices.contains(&0) {
            return Err(Error::Input("column indices are 1-based; got 0".into()));
        }
        Self::from_zero_based(indices.iter().map(|&i| i - 1).collect())
    }

    /// From 0-based indices.
    pub fn from_zero_based(indices: Vec<u32>) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::Input("column tuple must have t >= 1".into()));
        }
        if !indices.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::Input(format!(
                "column indices must be strictly increasing, got {indices:?}"
            )));
        }
        Ok(ColumnTuple { indices })
    }

    pub fn t(&self) -> usize {
        self.indices.len()
    }

    pub fn zero_based(&self) -> &[u32] {
        &self.indices
    }

    pub fn one_based(&self) -> Vec<u32> {
        self.indices.iter().map(|&i| i + 1).collect()
    }

    /// True if the two tuples share no column.
    pub fn is_disjoint(&self, other: &ColumnTuple) -> bool {
        // Both sides are sorted; merge scan.
        let (mut i, mut j) = (0, 0);
        while i < self.indices.len() && j < other.indices.len() {
            match self.indices[i].cmp(&other.indices[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => return false,
            }
        }
        true
    }
}

/// Result of scanning all `(n choose t)` column tuples of an array.
///
/// `x_count` is the number of unshattered tuples (the X statistic). The
/// witness list holds the first `witness_cap` unshattered tuples in
/// enumeration order, re-sorted lexicographically; when `x_count` exceeds the
/// cap it is a deterministic subset. `y_greedy` is a first-fit count of
/// pairwise column-disjoint witnesses in lexicographic order, a lower bound
/// on the maximum disjoint packing Y.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverageReport {
    pub kind: ArrayKind,
    pub t: u32,
    pub x_count: u64,
    pub witnesses: Vec<ColumnTuple>,
    pub y_greedy: u64,
}

impl CoverageReport {
    /// An array is t-covering / t-shattering exactly when nothing is missing.
    pub fn is_covering(&self) -> bool {
        self.x_count == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn word_array_rejects_bad_symbols() {
        assert!(WordArray::new(2, 2, vec![vec![0, 2]]).is_err());
        assert!(WordArray::new(1, 2, vec![]).is_err());
        assert!(WordArray::new(2, 2, vec![vec![0]]).is_err());
    }

    #[test]
    fn word_array_empty_k_is_legal() {
        let a = WordArray::new(2, 3, vec![]).unwrap();
        assert_eq!(a.k(), 0);
        assert_eq!(a.n(), 3);
    }

    #[test]
    fn perm_array_rejects_non_bijections() {
        assert!(PermArray::new(3, vec![vec![1, 1, 2]]).is_err());
        assert!(PermArray::new(3, vec![vec![1, 2, 4]]).is_err());
        assert!(PermArray::new(3, vec![vec![0, 1, 2]]).is_err());
        assert!(PermArray::new(3, vec![vec![1, 2]]).is_err());
    }

    #[test]
    fn perm_array_accepts_valid_rows() {
        let a = PermArray::new(4, vec![vec![3, 2, 4, 1], vec![1, 4, 3, 2]]).unwrap();
        assert_eq!(a.k(), 2);
        assert_eq!(a.row(0), &[3, 2, 4, 1]);
        assert_eq!(a.value(1, 1), 4);
    }

    #[test]
    fn column_tuple_conventions() {
        let c = ColumnTuple::from_one_based(&[1, 3, 4]).unwrap();
        assert_eq!(c.zero_based(), &[0, 2, 3]);
        assert_eq!(c.one_based(), vec![1, 3, 4]);
        assert_eq!(c.t(), 3);
        assert!(ColumnTuple::from_one_based(&[0, 1]).is_err());
        assert!(ColumnTuple::from_one_based(&[2, 2]).is_err());
        assert!(ColumnTuple::from_one_based(&[3, 2]).is_err());
        assert!(ColumnTuple::from_one_based(&[]).is_err());
    }

    #[test]
    fn column_tuple_disjointness() {
        let a = ColumnTuple::from_one_based(&[1, 2]).unwrap();
        let b = ColumnTuple::from_one_based(&[3, 4]).unwrap();
        let c = ColumnTuple::from_one_based(&[2, 3]).unwrap();
        assert!(a.is_disjoint(&b));
        assert!(!a.is_disjoint(&c));
        assert!(!b.is_disjoint(&c));
    }
}
