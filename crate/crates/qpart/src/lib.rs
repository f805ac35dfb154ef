//! Exact arithmetic for integer-partition combinatorics.
//!
//! The crate provides, from the bottom up:
//!
//! - [`series`] — truncated Laurent series and polynomials in one variable `q`
//!   with arbitrary-precision integer coefficients, including q-Pochhammer
//!   products and Gaussian binomials;
//! - [`partition`] — the [`Partition`] value type with its classical
//!   statistics (rank, crank, rank-set, successive Durfee squares);
//! - [`mod2`] — 2-modular diagrams of partitions with distinct odd parts,
//!   their conjugation, and the M2-rank;
//! - [`hypergeom`] — q-hypergeometric building blocks: the `au` staircase
//!   function, bilateral pentagonal-type bracket sums, partial 2φ1 sums at
//!   monomial parameters, and a finite cubic-style sum;
//! - [`bijection`] — weight-tracked combinatorial maps with their inverses and
//!   machine-checked bookkeeping;
//! - [`genfun`] — every generating-function family twice: by brute-force
//!   census and by closed formula, plus the bounded-rank rewrite engine;
//! - [`identity`] — a registry of coefficientwise checks tying the two
//!   constructions together, with machine-readable reports.
//!
//! All values are immutable and all operations are pure functions, so
//! everything here is safe to share across threads.

pub mod bijection;
pub mod error;
pub mod genfun;
pub mod hypergeom;
pub mod identity;
pub mod mod2;
pub mod partition;
pub mod series;

pub use error::{Error, Result};
pub use genfun::{Family, SeriesSpec};
pub use identity::{CheckMode, IdentityCheck, IdentityReport};
pub use mod2::Mod2Graph;
pub use partition::Partition;
pub use series::{QMonomial, QSeries};
