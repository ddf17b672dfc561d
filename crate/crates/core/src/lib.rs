//! Shattering of random word arrays and random permutation families.
//!
//! A `k x n` array over a q-letter alphabet is *t-covering* when every choice
//! of t columns exhibits all `q^t` words among its rows; a family of
//! permutations *shatters* a t-tuple of positions when all `t!` relative
//! orderings appear. Both properties switch from almost-never to
//! almost-always inside a narrow window of `k = Theta(lg n)`, and this crate
//! provides everything needed to compute, measure, and cross-verify that
//! window:
//!
//! * [`types`] — word/permutation arrays, column tuples, coverage reports;
//! * [`pattern`] — order-isomorphism pattern ids and radix word ids;
//! * [`randgen`] — seeded, stream-splittable generators for both models;
//! * [`shatter`] — the bitset checking engine: X/Y statistics, covering
//!   decision, VC dimension (smallest unshattered tuple size);
//! * [`theory`] — closed-form thresholds, expectation bounds, correlation
//!   constants, and the numeric checks behind them;
//! * [`oracles`] — exhaustive enumerations and naive references that verify
//!   the engine and the constants independently;
//! * [`experiments`] — Monte Carlo probability-vs-k scans with deterministic
//!   parallelism and CSV/JSON persistence.

pub mod error;
pub mod experiments;
pub mod oracles;
pub mod pattern;
pub mod randgen;
pub mod shatter;
pub mod theory;
pub mod types;

pub use error::{Error, Result};
pub use types::{Array, ArrayKind, ColumnTuple, CoverageReport, PermArray, WordArray};
