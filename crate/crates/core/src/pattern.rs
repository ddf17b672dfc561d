//! Order-isomorphism pattern encoding and radix word encoding.
//!
//! A length-t sequence of distinct values is order isomorphic to exactly one
//! permutation of `{1..t}`; [`pattern_id`] ranks that permutation with the
//! Lehmer code so the `t!` patterns enumerate as ids `0..t!-1` in
//! lexicographic one-line order. Word projections are indexed by their
//! radix-q value via [`word_id`].

use crate::error::{Error, Result};

/// Largest supported pattern length; 12! still fits comfortably in a `u64`
/// and presence bitsets stay allocatable.
pub const MAX_PATTERN_LEN: usize = 12;

/// `t!` for `t <= 20`.
pub fn factorial(t: u32) -> u64 {
    (1..=t as u64).product()
}

/// Lehmer-code rank of the permutation of `{1..t}` order isomorphic to some
/// input sequence. `id` ranges over `0..t!-1`; the identity pattern has id 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PatternId {
    t: u32,
    id: u64,
}

impl PatternId {
    pub fn new(t: u32, id: u64) -> Result<Self> {
        check_len(t as usize)?;
        if id >= factorial(t) {
            return Err(Error::Input(format!(
                "pattern id {id} out of range for t={t}"
            )));
        }
        Ok(PatternId { t, id })
    }

    pub fn t(&self) -> u32 {
        self.t
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    /// The canonical permutation of `{1..t}` this id ranks.
    pub fn decode(&self) -> Vec<u32> {
        let t = self.t as usize;
        let mut remaining: Vec<u32> = (1..=t as u32).collect();
        let mut out = Vec::with_capacity(t);
        let mut rest = self.id;
        for i in 0..t {
            let f = factorial((t - 1 - i) as u32);
            let digit = (rest / f) as usize;
            rest %= f;
            out.push(remaining.remove(digit));
        }
        out
    }
}

impl std::fmt::Display for PatternId {
    /// One-line pattern, e.g. `213`.
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for v in self.decode() {
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

fn check_len(t: usize) -> Result<()> {
    if t == 0 || t > MAX_PATTERN_LEN {
        return Err(Error::Parameter(format!(
            "pattern length must be in 1..={MAX_PATTERN_LEN}, got {t}"
        )));
    }
    Ok(())
}

/// 1-based ranks of each element within the sequence; errors on duplicates.
pub fn ranks<T: PartialOrd>(values: &[T]) -> Result<Vec<u32>> {
    check_len(values.len())?;
    let mut out = Vec::with_capacity(values.len());
    for (i, v) in values.iter().enumerate() {
        let mut rank = 1u32;
        for (j, w) in values.iter().enumerate() {
            if w < v {
                rank += 1;
            } else if i != j && w == v {
                return Err(Error::Input("values must be pairwise distinct".into()));
            }
        }
        out.push(rank);
    }
    Ok(out)
}

/// The [`PatternId`] of the unique permutation of `{1..t}` order isomorphic
/// to `values`. Two sequences get equal ids iff they are order isomorphic.
pub fn pattern_id<T: PartialOrd>(values: &[T]) -> Result<PatternId> {
    let r = ranks(values)?;
    Ok(pattern_id_of_ranks(&r))
}

/// Lehmer rank of a rank vector (a permutation of `{1..t}`); no validation.
pub(crate) fn pattern_id_of_ranks(r: &[u32]) -> PatternId {
    let t = r.len();
    let mut id = 0u64;
    for i in 0..t {
        let smaller_after = r[i + 1..].iter().filter(|&&x| x < r[i]).count() as u64;
        id += smaller_after * factorial((t - 1 - i) as u32);
    }
    PatternId { t: t as u32, id }
}

/// Radix-q index of a t-word: `sum symbols[j] * q^(t-1-j)`, a bijection onto
/// `{0..q^t-1}`.
pub fn word_id(symbols: &[u32], q: u32) -> Result<u64> {
    if symbols.is_empty() {
        return Err(Error::Parameter("word must have t >= 1".into()));
    }
    let mut id: u64 = 0;
    for &s in symbols {
        if s >= q {
            return Err(Error::Input(format!("symbol {s} out of range for q={q}")));
        }
        id = id
            .checked_mul(q as u64)
            .and_then(|x| x.checked_add(s as u64))
            .ok_or_else(|| {
                Error::Parameter(format!("q^t overflows for q={q}, t={}", symbols.len()))
            })?;
    }
    Ok(id)
}

/// Inverse of [`word_id`]: the t symbols of a word index.
pub fn word_from_id(id: u64, q: u32, t: u32) -> Vec<u32> {
    let mut out = vec![0u32; t as usize];
    let mut rest = id;
    for j in (0..t as usize).rev() {
        out[j] = (rest % q as u64) as u32;
        rest /= q as u64;
    }
    out
}
