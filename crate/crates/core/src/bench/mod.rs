//! Metrics, a check of the beat-the-truth probability, and the experiment
//! harness behind the `nswr` command.

mod experiment;
mod metrics;

pub use experiment::{
    apply_overrides, collect_rows, net_wins_order, read_rows_csv, run_experiment, sidecar_path,
    solve, summarize, trial_instance, trial_seed, write_experiment, write_experiment_file,
    Algorithm, CellSummary, ExperimentConfig, OutputFormat, ResolvedParams, ResultRow, Solution,
    CSV_COLUMNS,
};
pub use metrics::{beat_probability_check, evaluate, permutation_with_inversions, BeatCheck, Metrics};
