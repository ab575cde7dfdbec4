//! Noisy sorting by insertion.
//!
//! Items are inserted in a seeded random order. Each new item is located
//! coarsely, either by block majorities ([`insert_coarse`], all pairs get
//! compared) or by a backtracking walk over a tree of intervals
//! ([`insert_tree_walk`], `O(log n)` comparisons per item), and the working
//! order is then repaired with the windowed DP.

mod constants;
mod insertion;
mod params;
mod walk;

use serde::{Deserialize, Serialize};

use crate::ranking::Ranking;

pub use constants::{theory_constants, TheoryConstants};
pub use insertion::{
    best_insertion, insert_coarse, insertion_chain, move_to_best, polish, noisy_sort_insertion,
    noisy_sort_insertion_traced, Placement,
};
pub use params::{majority_size, walk_length, NswrParams, Refine, ResortMode};
pub use walk::{
    build_walk_tree, insert_tree_walk, noisy_sort_query_efficient,
    noisy_sort_query_efficient_traced, Partition, WalkNode, WalkTree, ROOT,
};

/// Counters collected while a solver runs.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunReport {
    pub insertions: usize,
    /// Windowed-DP passes that changed the order.
    pub resort_passes: u64,
    /// Total score gained by those passes.
    pub resort_gain: i64,
    /// Single-element moves made by the polishing step.
    pub polish_moves: u64,
    /// Whether the truth was supplied, enabling the two fields below.
    pub tracked: bool,
    /// Insertions after which some element sat more than `window` positions
    /// from its place in the truth restricted to the inserted set.
    pub window_violations: u64,
    pub max_intermediate_dislocation: u64,
    /// Tree-walk majority tests that had run out of fresh elements.
    pub walk_exhaustions: u64,
}

impl RunReport {
    /// Flagged events as `name=value` strings.
    pub fn events(&self) -> Vec<String> {
        let mut events = Vec::new();
        if self.window_violations > 0 {
            events.push(format!("window_violations={}", self.window_violations));
            events.push(format!(
                "max_intermediate_disloc={}",
                self.max_intermediate_dislocation
            ));
        }
        if self.walk_exhaustions > 0 {
            events.push(format!("walk_exhausted={}", self.walk_exhaustions));
        }
        events
    }
}

/// A solver's output ranking together with its run report.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Traced {
    pub ranking: Ranking,
    pub report: RunReport,
}
