use std::fmt;
use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize};
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::exact::{optimal_ranking_exhaustive, optimal_ranking_subset_dp, EXHAUSTIVE_LIMIT, SUBSET_DP_LIMIT};
use crate::nswr::{noisy_sort_insertion_traced, noisy_sort_query_efficient_traced, NswrParams, RunReport};
use crate::oracle::csv::CsvError;
use crate::oracle::{hash_words, CountingOracle, NoiseParams, QueryStats};
use crate::ranking::{Ranking, Score, Tournament};
use crate::stats::mean_se;
use crate::window_dp::sort_presorted;

use super::metrics::{evaluate, Metrics};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    Exhaustive,
    SubsetDp,
    /// Windowed DP started from the order by net wins.
    WindowDp,
    Insertion,
    QueryEfficient,
}

impl Algorithm {
    pub const ALL: [Algorithm; 5] = [
        Algorithm::Exhaustive,
        Algorithm::SubsetDp,
        Algorithm::WindowDp,
        Algorithm::Insertion,
        Algorithm::QueryEfficient,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Exhaustive => "exhaustive",
            Algorithm::SubsetDp => "subset-dp",
            Algorithm::WindowDp => "window-dp",
            Algorithm::Insertion => "insertion",
            Algorithm::QueryEfficient => "query-efficient",
        }
    }

    /// Largest instance the solver accepts, if bounded.
    pub fn size_limit(self) -> Option<usize> {
        match self {
            Algorithm::Exhaustive => Some(EXHAUSTIVE_LIMIT),
            Algorithm::SubsetDp => Some(SUBSET_DP_LIMIT),
            _ => None,
        }
    }

    /// Calibrated parameters for `n` items at noise level `gamma`.
    pub fn default_params(self, n: usize, gamma: f64) -> NswrParams {
        match self {
            Algorithm::QueryEfficient => NswrParams::calibrated_query_efficient(n, gamma),
            _ => NswrParams::calibrated(n, gamma),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::InvalidParams(format!("unknown algorithm `{s}`")))
    }
}

/// A solver's answer and what it cost.
#[derive(Clone, Debug)]
pub struct Solution {
    pub ranking: Ranking,
    pub score: Score,
    pub stats: QueryStats,
    pub report: Option<RunReport>,
}

/// Runs `algorithm` against `oracle`. Query counters are read before the
/// final score is computed, so they only reflect the solver's own asks.
/// `truth` enables the insertion solvers' envelope tracking.
pub fn solve(
    algorithm: Algorithm,
    oracle: &CountingOracle,
    params: &NswrParams,
    truth: Option<&Ranking>,
) -> Result<Solution> {
    let (ranking, report) = match algorithm {
        Algorithm::Exhaustive => (optimal_ranking_exhaustive(oracle)?.0, None),
        Algorithm::SubsetDp => (optimal_ranking_subset_dp(oracle)?.0, None),
        Algorithm::WindowDp => {
            let initial = net_wins_order(oracle)?;
            (sort_presorted(oracle, &initial, params.window)?.0, None)
        }
        Algorithm::Insertion => {
            let t = noisy_sort_insertion_traced(oracle, params, truth)?;
            (t.ranking, Some(t.report))
        }
        Algorithm::QueryEfficient => {
            let t = noisy_sort_query_efficient_traced(oracle, params, truth)?;
            (t.ranking, Some(t.report))
        }
    };
    let stats = oracle.stats();
    let score = crate::ranking::score(&oracle.uncounted(), &ranking)?;
    Ok(Solution {
        ranking,
        score,
        stats,
        report,
    })
}

/// Items by increasing net wins, ties by index.
pub fn net_wins_order<T: Tournament + ?Sized>(q: &T) -> Result<Ranking> {
    let n = q.len();
    let mut wins = vec![0i64; n];
    for i in 1..n {
        for j in 0..i {
            let s = q.query(i, j) as i64;
            wins[i] += s;
            wins[j] -= s;
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| (wins[i], i));
    Ranking::from_order(order)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            _ => Err(Error::InvalidParams(format!("unknown format `{s}`"))),
        }
    }
}

/// A sweep over sizes, noise levels and algorithms.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub n: Vec<usize>,
    pub gamma: Vec<f64>,
    pub trials: usize,
    /// One algorithm or a list; every trial instance is solved by each.
    #[serde(deserialize_with = "one_or_many")]
    pub algorithm: Vec<Algorithm>,
    #[serde(default)]
    pub seed: u64,
    /// Overrides of [`NswrParams`] fields, applied on top of the calibrated
    /// defaults of each cell. `seed` cannot be overridden: the insertion
    /// order is seeded per trial.
    #[serde(default)]
    pub params: Map<String, Value>,
    #[serde(default)]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub format: OutputFormat,
    /// Record wall-clock times. Off by default so that outputs are
    /// reproducible byte for byte.
    #[serde(default)]
    pub timing: bool,
}

fn one_or_many<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Algorithm>, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum OneOrMany {
        One(Algorithm),
        Many(Vec<Algorithm>),
    }
    Ok(match OneOrMany::deserialize(d)? {
        OneOrMany::One(a) => vec![a],
        OneOrMany::Many(v) => v,
    })
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Checks gammas, algorithm size limits and parameter overrides.
    pub fn validate(&self) -> Result<()> {
        if self.algorithm.is_empty() {
            return Err(Error::InvalidParams("no algorithm given".into()));
        }
        if self.params.contains_key("seed") {
            return Err(Error::InvalidParams("`seed` is set per trial and cannot be overridden".into()));
        }
        for &gamma in &self.gamma {
            NoiseParams::new(gamma, 0)?;
        }
        for &a in &self.algorithm {
            for &n in &self.n {
                if let Some(limit) = a.size_limit().filter(|&l| n > l) {
                    return Err(Error::TooLarge {
                        solver: a.name(),
                        n,
                        limit,
                    });
                }
                for &gamma in &self.gamma {
                    self.params_for(a, n, gamma)?;
                }
            }
        }
        Ok(())
    }

    /// Calibrated defaults for the cell with the overrides applied.
    pub fn params_for(&self, algorithm: Algorithm, n: usize, gamma: f64) -> Result<NswrParams> {
        apply_overrides(&algorithm.default_params(n, gamma), &self.params)
    }

    /// Every resolved parameter set of the sweep, for provenance.
    pub fn resolved_params(&self) -> Result<Vec<ResolvedParams>> {
        let mut out = Vec::new();
        for &n in &self.n {
            for &gamma in &self.gamma {
                for &algorithm in &self.algorithm {
                    out.push(ResolvedParams {
                        algorithm,
                        n,
                        gamma,
                        params: self.params_for(algorithm, n, gamma)?,
                    });
                }
            }
        }
        Ok(out)
    }
}

/// Replaces fields of `base` by the entries of `overrides` and validates
/// the result.
pub fn apply_overrides(base: &NswrParams, overrides: &Map<String, Value>) -> Result<NswrParams> {
    let mut value = serde_json::to_value(base)?;
    let fields = value.as_object_mut().expect("params serialize to an object");
    for (k, v) in overrides {
        fields.insert(k.clone(), v.clone());
    }
    let params: NswrParams = serde_json::from_value(value)?;
    params.validate()?;
    Ok(params)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResolvedParams {
    pub algorithm: Algorithm,
    pub n: usize,
    pub gamma: f64,
    /// The insertion-order seed shown here is a placeholder; each trial
    /// derives its own.
    pub params: NswrParams,
}

/// One CSV row: a solver run on one trial instance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub n: usize,
    pub gamma: f64,
    pub trial: usize,
    pub algorithm: Algorithm,
    pub score_out: i64,
    pub score_truth: i64,
    pub sum_disloc: u64,
    pub max_disloc: u64,
    pub distinct_queries: u64,
    pub total_accesses: u64,
    pub wall_time_ms: u64,
    /// Flagged events, `;`-separated.
    pub events: String,
}

pub const CSV_COLUMNS: [&str; 12] = [
    "n",
    "gamma",
    "trial",
    "algorithm",
    "score_out",
    "score_truth",
    "sum_disloc",
    "max_disloc",
    "distinct_queries",
    "total_accesses",
    "wall_time_ms",
    "events",
];

impl ResultRow {
    pub fn metrics(&self) -> Metrics {
        Metrics {
            sum_dislocation: self.sum_disloc,
            max_dislocation: self.max_disloc,
            score_out: Score(self.score_out),
            score_truth: Score(self.score_truth),
            distinct_queries: self.distinct_queries,
            total_accesses: self.total_accesses,
            wall_time_ms: self.wall_time_ms,
        }
    }
}

/// Seed of trial `trial` in cell `(n, gamma)`.
pub fn trial_seed(seed: u64, n: usize, gamma: f64, trial: usize) -> u64 {
    hash_words(&[seed, n as u64, gamma.to_bits(), trial as u64])
}

/// Hidden truth and noise of a trial.
pub fn trial_instance(seed: u64, n: usize, gamma: f64, trial: usize) -> Result<(Ranking, NoiseParams)> {
    let s = trial_seed(seed, n, gamma, trial);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(s));
    Ok((Ranking::from_order(order)?, NoiseParams::new(gamma, hash_words(&[s, 1]))?))
}

fn run_trial(config: &ExperimentConfig, n: usize, gamma: f64, trial: usize) -> Result<Vec<ResultRow>> {
    let (truth, noise) = trial_instance(config.seed, n, gamma, trial)?;
    let mut rows = Vec::with_capacity(config.algorithm.len());
    for &algorithm in &config.algorithm {
        let params = config
            .params_for(algorithm, n, gamma)?
            .with_seed(trial_seed(config.seed, n, gamma, trial));
        let oracle = CountingOracle::new(truth.clone(), noise);
        let start = Instant::now();
        let sol = solve(algorithm, &oracle, &params, Some(&truth))?;
        let elapsed = start.elapsed().as_millis() as u64;
        let m = evaluate(&sol.ranking, &truth, &oracle.uncounted(), sol.stats)?;
        rows.push(ResultRow {
            n,
            gamma,
            trial,
            algorithm,
            score_out: m.score_out.0,
            score_truth: m.score_truth.0,
            sum_disloc: m.sum_dislocation,
            max_disloc: m.max_dislocation,
            distinct_queries: m.distinct_queries,
            total_accesses: m.total_accesses,
            wall_time_ms: if config.timing { elapsed } else { 0 },
            events: sol.report.map(|r| r.events().join(";")).unwrap_or_default(),
        });
    }
    Ok(rows)
}

/// Runs the sweep, handing rows to `sink` in `(n, gamma, trial, algorithm)`
/// order. Trials of one `(n, gamma)` cell run in parallel.
pub fn run_experiment(
    config: &ExperimentConfig,
    mut sink: impl FnMut(ResultRow) -> Result<()>,
) -> Result<()> {
    config.validate()?;
    for &n in &config.n {
        for &gamma in &config.gamma {
            let cell: Vec<Vec<ResultRow>> = (0..config.trials)
                .into_par_iter()
                .map(|trial| run_trial(config, n, gamma, trial))
                .collect::<Result<_>>()?;
            for row in cell.into_iter().flatten() {
                sink(row)?;
            }
        }
    }
    Ok(())
}

/// Collects all rows of the sweep.
pub fn collect_rows(config: &ExperimentConfig) -> Result<Vec<ResultRow>> {
    let mut rows = Vec::new();
    run_experiment(config, |r| {
        rows.push(r);
        Ok(())
    })?;
    Ok(rows)
}

fn csv_err(e: csv::Error) -> Error {
    CsvError::from(e).into()
}

/// Runs the sweep and writes it to `out` in the configured format. JSON
/// output embeds the config and the resolved parameters; CSV carries rows
/// only.
pub fn write_experiment<W: Write>(config: &ExperimentConfig, out: W) -> Result<Vec<ResultRow>> {
    match config.format {
        OutputFormat::Csv => {
            let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
            w.write_record(CSV_COLUMNS).map_err(csv_err)?;
            let mut rows = Vec::new();
            run_experiment(config, |r| {
                w.serialize(&r).map_err(csv_err)?;
                w.flush()?;
                rows.push(r);
                Ok(())
            })?;
            Ok(rows)
        }
        OutputFormat::Json => {
            let rows = collect_rows(config)?;
            let doc = serde_json::json!({
                "config": config,
                "params": config.resolved_params()?,
                "rows": rows,
            });
            let mut out = out;
            serde_json::to_writer_pretty(&mut out, &doc)?;
            writeln!(out)?;
            Ok(rows)
        }
    }
}

/// Path of the parameter sidecar written next to CSV output.
pub fn sidecar_path(output: &Path) -> PathBuf {
    let mut s = output.as_os_str().to_owned();
    s.push(".params.json");
    PathBuf::from(s)
}

/// Runs the sweep into `config.output`. CSV output gets a
/// `<output>.params.json` sidecar holding the config and resolved
/// parameters.
pub fn write_experiment_file(config: &ExperimentConfig, output: &Path) -> Result<Vec<ResultRow>> {
    config.validate()?;
    if config.format == OutputFormat::Csv {
        let doc = serde_json::json!({
            "config": config,
            "params": config.resolved_params()?,
        });
        let mut f = BufWriter::new(File::create(sidecar_path(output))?);
        serde_json::to_writer_pretty(&mut f, &doc)?;
        writeln!(f)?;
        f.flush()?;
    }
    let mut f = BufWriter::new(File::create(output)?);
    let rows = write_experiment(config, &mut f)?;
    f.flush()?;
    Ok(rows)
}

/// Parses CSV written by [`write_experiment`].
pub fn read_rows_csv<R: Read>(reader: R) -> Result<Vec<ResultRow>> {
    let mut r = csv::Reader::from_reader(reader);
    let header: Vec<String> = r.headers().map_err(csv_err)?.iter().map(str::to_owned).collect();
    if header != CSV_COLUMNS {
        return Err(CsvError::BadHeader {
            line: 1,
            found: header.join(","),
        }
        .into());
    }
    r.deserialize().map(|row| row.map_err(csv_err)).collect()
}

/// Per-cell means, normalized as the distance bounds suggest.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellSummary {
    pub algorithm: Algorithm,
    pub n: usize,
    pub gamma: f64,
    pub trials: usize,
    /// Mean and standard error of `sum_disloc / n`.
    pub sum_disloc_per_n: (f64, f64),
    /// Mean and standard error of `max_disloc / log2 n`.
    pub max_disloc_per_log_n: (f64, f64),
    /// Mean of `distinct_queries / (n log2 n)`.
    pub queries_per_n_log_n: f64,
    pub mean_distinct_queries: f64,
    /// Fraction of trials whose output scored at least the truth.
    pub beat_truth: f64,
}

/// Groups rows by `(algorithm, n, gamma)` in first-seen order.
pub fn summarize(rows: &[ResultRow]) -> Vec<CellSummary> {
    let mut keys: Vec<(Algorithm, usize, u64)> = Vec::new();
    for r in rows {
        let k = (r.algorithm, r.n, r.gamma.to_bits());
        if !keys.contains(&k) {
            keys.push(k);
        }
    }
    keys.into_iter()
        .map(|(algorithm, n, g)| {
            let cell: Vec<&ResultRow> = rows
                .iter()
                .filter(|r| r.algorithm == algorithm && r.n == n && r.gamma.to_bits() == g)
                .collect();
            let nf = n as f64;
            let log_n = nf.log2().max(1.0);
            let col = |f: &dyn Fn(&ResultRow) -> f64| cell.iter().map(|r| f(r)).collect::<Vec<_>>();
            let queries = col(&|r| r.distinct_queries as f64);
            CellSummary {
                algorithm,
                n,
                gamma: f64::from_bits(g),
                trials: cell.len(),
                sum_disloc_per_n: mean_se(&col(&|r| r.sum_disloc as f64 / nf)),
                max_disloc_per_log_n: mean_se(&col(&|r| r.max_disloc as f64 / log_n)),
                queries_per_n_log_n: mean_se(&queries).0 / (nf * log_n),
                mean_distinct_queries: mean_se(&queries).0,
                beat_truth: cell.iter().filter(|r| r.score_out >= r.score_truth).count() as f64
                    / cell.len() as f64,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(json: &str) -> ExperimentConfig {
        ExperimentConfig::from_json(json).unwrap()
    }

    #[test]
    fn algorithm_names_round_trip() {
        for a in Algorithm::ALL {
            assert_eq!(a.name().parse::<Algorithm>().unwrap(), a);
            assert_eq!(serde_json::to_value(a).unwrap(), Value::String(a.name().into()));
        }
        assert!("quick".parse::<Algorithm>().is_err());
    }

    #[test]
    fn config_accepts_one_or_many_algorithms() {
        let c = config(r#"{"n": [5], "gamma": [0.25], "trials": 2, "algorithm": "insertion"}"#);
        assert_eq!(c.algorithm, [Algorithm::Insertion]);
        assert_eq!(c.format, OutputFormat::Csv);
        let c = config(r#"{"n": [5], "gamma": [0.25], "trials": 2, "algorithm": ["insertion", "subset-dp"]}"#);
        assert_eq!(c.algorithm.len(), 2);
        assert!(ExperimentConfig::from_json(r#"{"n": [5], "gamma": [0.25], "trials": 2, "algorithm": "x"}"#).is_err());
        assert!(ExperimentConfig::from_json(r#"{"n": [5], "gamma": [0.25], "trials": 2, "algorithm": "insertion", "bogus": 1}"#).is_err());
    }

    #[test]
    fn overrides_replace_fields() {
        let c = config(r#"{"n": [50], "gamma": [0.25], "trials": 1, "algorithm": "insertion", "params": {"window": 2, "resort": "full"}}"#);
        let p = c.params_for(Algorithm::Insertion, 50, 0.25).unwrap();
        assert_eq!(p.window, 2);
        assert_eq!(p.resort, crate::nswr::ResortMode::Full);
        assert_eq!(p.block_len, NswrParams::calibrated(50, 0.25).block_len);

        let bad = config(r#"{"n": [50], "gamma": [0.25], "trials": 1, "algorithm": "insertion", "params": {"windw": 2}}"#);
        assert!(bad.validate().is_err());
        let bad = config(r#"{"n": [50], "gamma": [0.25], "trials": 1, "algorithm": "insertion", "params": {"trim": 40}}"#);
        assert!(bad.validate().is_err());
        let bad = config(r#"{"n": [50], "gamma": [0.25], "trials": 1, "algorithm": "insertion", "params": {"seed": 4}}"#);
        assert!(bad.validate().is_err());
    }

    #[test]
    fn exhaustive_rejects_large_n() {
        let c = config(r#"{"n": [11], "gamma": [0.25], "trials": 1, "algorithm": "exhaustive"}"#);
        assert!(c.validate().unwrap_err().is_solver_guard());
    }

    #[test]
    fn zero_trials_give_a_bare_header() {
        let c = config(r#"{"n": [10], "gamma": [0.25], "trials": 0, "algorithm": "insertion"}"#);
        let mut out = Vec::new();
        let rows = write_experiment(&c, &mut out).unwrap();
        assert!(rows.is_empty());
        assert_eq!(String::from_utf8(out).unwrap(), CSV_COLUMNS.join(",") + "\n");
    }

    #[test]
    fn identical_configs_give_identical_bytes() {
        let c = config(r#"{"n": [12, 30], "gamma": [0.25, 0.4], "trials": 3, "algorithm": ["window-dp", "insertion", "query-efficient"], "seed": 7}"#);
        let mut a = Vec::new();
        let mut b = Vec::new();
        write_experiment(&c, &mut a).unwrap();
        write_experiment(&c, &mut b).unwrap();
        assert_eq!(a, b);
        let rows = read_rows_csv(&a[..]).unwrap();
        assert_eq!(rows.len(), 2 * 2 * 3 * 3);
        assert!(rows.iter().all(|r| r.wall_time_ms == 0));
        let order: Vec<(usize, u64, usize)> = rows.iter().map(|r| (r.n, r.gamma.to_bits(), r.trial)).collect();
        let mut sorted = order.clone();
        sorted.sort_by(|x, y| (x.0, f64::from_bits(x.1), x.2).partial_cmp(&(y.0, f64::from_bits(y.1), y.2)).unwrap());
        assert_eq!(order, sorted);
    }

    #[test]
    fn optimum_dominates_insertion() {
        let c = config(r#"{"n": [8], "gamma": [0.25], "trials": 20, "algorithm": ["insertion", "subset-dp"], "seed": 3}"#);
        let rows = collect_rows(&c).unwrap();
        for pair in rows.chunks(2) {
            assert_eq!(pair[0].trial, pair[1].trial);
            assert_eq!(pair[0].score_truth, pair[1].score_truth);
            assert!(pair[0].score_out <= pair[1].score_out);
            assert_eq!(pair[1].distinct_queries, 28);
        }
    }

    #[test]
    fn json_output_embeds_params() {
        let mut c = config(r#"{"n": [10], "gamma": [0.3], "trials": 2, "algorithm": "query-efficient", "format": "json"}"#);
        c.timing = true;
        let mut out = Vec::new();
        write_experiment(&c, &mut out).unwrap();
        let v: Value = serde_json::from_slice(&out).unwrap();
        assert_eq!(v["rows"].as_array().unwrap().len(), 2);
        assert_eq!(v["params"][0]["algorithm"], "query-efficient");
        assert_eq!(v["params"][0]["params"]["polish_radius"], 20);
    }

    #[test]
    fn sidecar_sits_next_to_the_csv() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.csv");
        let c = config(r#"{"n": [6], "gamma": [0.25], "trials": 2, "algorithm": "exhaustive"}"#);
        write_experiment_file(&c, &path).unwrap();
        let side: Value = serde_json::from_str(&std::fs::read_to_string(sidecar_path(&path)).unwrap()).unwrap();
        assert_eq!(side["config"]["trials"], 2);
        let rows = read_rows_csv(File::open(&path).unwrap()).unwrap();
        assert_eq!(rows.len(), 2);
    }

    #[test]
    fn bad_header_is_rejected() {
        assert!(read_rows_csv("n,gamma\n1,0.2\n".as_bytes()).is_err());
    }

    #[test]
    fn net_wins_order_recovers_a_transitive_tournament() {
        let truth = Ranking::from_order(vec![3, 1, 4, 0, 2]).unwrap();
        let q = crate::ranking::induced_queries(&truth);
        assert_eq!(net_wins_order(&q).unwrap(), truth);
    }

    #[test]
    fn summary_normalizes() {
        let row = |trial, sum, max| ResultRow {
            n: 16,
            gamma: 0.25,
            trial,
            algorithm: Algorithm::Insertion,
            score_out: 10,
            score_truth: 12 - trial as i64 * 4,
            sum_disloc: sum,
            max_disloc: max,
            distinct_queries: 64,
            total_accesses: 64,
            wall_time_ms: 0,
            events: String::new(),
        };
        let s = summarize(&[row(0, 16, 4), row(1, 48, 12)]);
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].sum_disloc_per_n.0, 2.0);
        assert_eq!(s[0].max_disloc_per_log_n.0, 2.0);
        assert_eq!(s[0].queries_per_n_log_n, 1.0);
        assert_eq!(s[0].beat_truth, 0.5);
    }
}
