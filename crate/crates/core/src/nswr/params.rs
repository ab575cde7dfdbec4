use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oracle::check_gamma;
use crate::stats::{binomial_le, binomial_lt};

/// How much of the working order is re-sorted after each insertion.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ResortMode {
    /// Run the windowed DP over the whole working order.
    Full,
    /// Run it over the `4 * window` neighborhood of the inserted element.
    #[default]
    Local,
}

/// How the new element is placed inside the range its coarse location
/// leaves open.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Refine {
    /// Use the coarse position as is.
    Off,
    /// Compare with every element of the range and take the best position,
    /// doubling the range while the best position lies on its edge.
    #[default]
    Scan,
    /// Bisect the range by majority tests of `majority_k` comparisons, then
    /// scan the last few positions.
    Bisect,
}

/// Tunable constants of the insertion solvers.
///
/// The asymptotic analysis prescribes constants (window `~ 4 c3 log n`,
/// walk length `c2 log n`, ...) far too large to run at desk scale; these
/// fields stand in for them. [`NswrParams::calibrated`] gives defaults that
/// work for `n` up to a few thousand; [`super::theory_constants`] reports the
/// asymptotic values for comparison.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NswrParams {
    /// Per-element dislocation bound handed to the windowed DP.
    pub window: usize,
    /// Block length of coarse insertion.
    pub block_len: usize,
    /// Comparisons per majority test.
    pub majority_k: usize,
    /// Steps of the tree walk; also the length of the leaf chains.
    pub walk_steps: usize,
    /// Shortest interval of the tree-walk partition.
    pub interval_len_min: usize,
    /// Longest interval of the tree-walk partition.
    pub interval_len_max: usize,
    /// Elements dropped from each end of an interval for boundary tests.
    pub trim: usize,
    /// Target failure exponent: runs should fail with probability `n^-beta`.
    pub beta: f64,
    /// Seed of the random insertion order.
    pub seed: u64,
    pub resort: ResortMode,
    /// Placement of the new element within its coarse range.
    pub refine: Refine,
    /// After re-sorting, each element within this distance of the inserted
    /// one moves to its best position within `polish_radius`. 0 disables.
    pub polish_span: usize,
    /// How far a polished element may move; `None` means anywhere.
    pub polish_radius: Option<usize>,
    /// Whenever the working order reaches a power-of-two length up to this
    /// bound, every element moves to its best position in the whole order.
    /// Only applies while `polish_span > 0`.
    pub checkpoint_max: usize,
    /// Maximum windowed-DP passes and polishing sweeps per insertion; passes stop early once one
    /// gains nothing.
    pub max_passes: usize,
}

impl NswrParams {
    /// Desk-scale defaults for `n` items at noise level `gamma`.
    ///
    /// - `window = 3`: the DP costs `O(m * C(12, 6) * C(6, 3))` per pass.
    /// - `block_len = 2 ceil(log2 n)`, at least 4.
    /// - `majority_k`: smallest odd `k` whose majority is right with
    ///   probability 0.9 (the asymptotic argument asks for 0.999).
    /// - `walk_steps`: the walk-length bound with per-step accuracy 0.9.
    /// - partition intervals of 16..32 items trimmed by 2 on each side.
    /// - elements within `block_len` of each insertion are polished with
    ///   unlimited radius; whole-order checkpoints up to 128 items.
    pub fn calibrated(n: usize, gamma: f64) -> Self {
        let log_n = log2_ceil(n.max(2));
        let beta = 1.0;
        NswrParams {
            window: 3,
            block_len: (2 * log_n).max(4),
            majority_k: majority_size(gamma, 0.9),
            walk_steps: walk_length(n.max(2), beta, 0.9),
            interval_len_min: 16,
            interval_len_max: 32,
            trim: 2,
            beta,
            seed: 0,
            resort: ResortMode::Local,
            refine: Refine::Scan,
            polish_span: (2 * log_n).max(4),
            polish_radius: None,
            checkpoint_max: 128,
            max_passes: 4,
        }
    }

    /// Defaults for the tree-walk solver: majorities right with probability
    /// 0.85, 8 walk steps, bisecting refinement and polishing limited to 20
    /// positions, so that each insertion compares the new element with
    /// `O(log n)` others.
    pub fn calibrated_query_efficient(n: usize, gamma: f64) -> Self {
        NswrParams {
            majority_k: majority_size(gamma, 0.85),
            walk_steps: 8,
            refine: Refine::Bisect,
            polish_radius: Some(20),
            ..Self::calibrated(n, gamma)
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: &str| Err(Error::InvalidParams(msg.to_string()));
        if self.block_len == 0
            || self.majority_k == 0
            || self.walk_steps == 0
            || self.interval_len_min == 0
            || self.max_passes == 0
        {
            return fail("block_len, majority_k, walk_steps, interval lengths and max_passes must be positive");
        }
        if self.interval_len_min > self.interval_len_max {
            return fail("interval_len_min exceeds interval_len_max");
        }
        if self.interval_len_max > 2 * self.interval_len_min {
            return fail("interval_len_max exceeds 2 * interval_len_min");
        }
        if 2 * self.trim >= self.interval_len_min {
            return fail("2 * trim must be below interval_len_min");
        }
        if !(self.beta.is_finite() && self.beta > 0.0) {
            return fail("beta must be positive");
        }
        Ok(())
    }
}

pub(crate) fn log2_ceil(n: usize) -> usize {
    (usize::BITS - n.saturating_sub(1).leading_zeros()) as usize
}

/// Smallest odd `k` with `P[Bin(k, 1/2 + gamma) > k/2] >= confidence`.
pub fn majority_size(gamma: f64, confidence: f64) -> usize {
    check_gamma(gamma).expect("gamma in (0, 1/2]");
    let p = 0.5 + gamma;
    let mut k = 1u64;
    loop {
        if 1.0 - binomial_le(k, p, k as f64 / 2.0) >= confidence {
            return k as usize;
        }
        k += 2;
    }
}

/// Smallest number of steps `L` with
/// `P[Bin(L, step_accuracy) < L/2 + 2 log2 n] < n^(-beta - 1)`.
pub fn walk_length(n: usize, beta: f64, step_accuracy: f64) -> usize {
    let log_n = (n as f64).log2();
    let target = (n as f64).powf(-beta - 1.0);
    let mut steps = 1u64;
    loop {
        if binomial_lt(steps, step_accuracy, steps as f64 / 2.0 + 2.0 * log_n) < target {
            return steps as usize;
        }
        steps += 1;
    }
}
