//! Maximum-likelihood sorting from one-shot noisy pairwise comparisons.
//!
//! Every pair of items is compared exactly once and each outcome is correct
//! with probability `1/2 + gamma`, independently. The goal is the ranking
//! with the fewest upsets against the observed tournament (equivalently the
//! maximum-likelihood order, or a minimum feedback arc set of the tournament).
//!
//! Layout:
//! - [`ranking`]: rankings, query tables, the score functional and distances.
//! - [`oracle`]: noisy tournament generation, the counting oracle, CSV ingestion.
//! - [`exact`]: brute-force and subset-DP solvers for small instances.
//! - [`window_dp`]: optimal re-sorting of a list whose optimum is within a
//!   per-element window of the input order.
//! - [`nswr`]: the insertion pipeline and its query-efficient variant.
//! - [`bench`]: metrics, statistical checks and the experiment harness.

pub mod bench;
pub mod error;
pub mod exact;
pub mod nswr;
pub mod oracle;
pub mod ranking;
pub mod stats;
pub mod window_dp;

pub use error::{Error, Result};
pub use oracle::{CountingOracle, NoiseParams, QueryStats};
pub use ranking::{QueryTable, Ranking, Score, Tournament};
