//! Noisy tournaments.
//!
//! The outcome of pair `{i, j}` is drawn from a counter-based hash of
//! `(seed, min(i, j), max(i, j))`, so a tournament is fully determined by
//! its seed and can be materialized lazily in any order.

pub mod counting;
pub mod csv;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ranking::{QueryTable, Ranking};

pub use counting::{CountingOracle, QueryStats};

/// Noise level and seed of a generated tournament.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseParams {
    gamma: f64,
    seed: u64,
}

impl NoiseParams {
    /// `gamma` must lie in `(0, 1/2]`; `gamma = 1/2` is the noiseless case.
    pub fn new(gamma: f64, seed: u64) -> Result<Self> {
        check_gamma(gamma)?;
        Ok(NoiseParams { gamma, seed })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Probability that a comparison reports the true order.
    pub fn p(&self) -> f64 {
        0.5 + self.gamma
    }

    /// Whether the outcome of pair `{i, j}` is flipped relative to the truth.
    #[inline]
    pub fn flips(&self, i: usize, j: usize) -> bool {
        let (lo, hi) = if i < j { (i, j) } else { (j, i) };
        pair_uniform(self.seed, lo as u64, hi as u64) < 0.5 - self.gamma
    }

    /// `q(a_i, a_j)` for the tournament generated over `truth`.
    #[inline]
    pub fn outcome(&self, truth: &Ranking, i: usize, j: usize) -> i8 {
        let correct = if truth.rank(i) > truth.rank(j) { 1 } else { -1 };
        if self.flips(i, j) {
            -correct
        } else {
            correct
        }
    }
}

pub(crate) fn check_gamma(gamma: f64) -> Result<()> {
    if gamma.is_finite() && gamma > 0.0 && gamma <= 0.5 {
        Ok(())
    } else {
        Err(Error::InvalidGamma(gamma))
    }
}

#[inline]
pub(crate) fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Mixes several words into one well-distributed `u64`.
pub fn hash_words(words: &[u64]) -> u64 {
    words
        .iter()
        .fold(splitmix64(0x6E73_7772), |h, &w| splitmix64(h ^ w))
}

/// Uniform variate in `[0, 1)` for the pair `(lo, hi)`.
#[inline]
fn pair_uniform(seed: u64, lo: u64, hi: u64) -> f64 {
    let h = splitmix64(splitmix64(splitmix64(seed) ^ lo) ^ hi.rotate_left(32));
    (h >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Flips each entry of `q_pi` independently with probability `1/2 - gamma`.
pub fn make_noisy_tournament(pi: &Ranking, params: &NoiseParams) -> QueryTable {
    QueryTable::from_fn(pi.len(), |i, j| params.outcome(pi, i, j) > 0)
}
