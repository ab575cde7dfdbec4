use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Map, Value};

use nswr::bench::{
    self, apply_overrides, summarize, Algorithm, ExperimentConfig, OutputFormat, ResultRow,
};
use nswr::nswr::{theory_constants, NswrParams};
use nswr::oracle::csv::{default_names, load_tournament_csv, write_tournament_csv};
use nswr::{CountingOracle, Error, Ranking};

/// Maximum-likelihood ranking from one-shot noisy pairwise comparisons.
#[derive(Parser)]
#[command(name = "nswr", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a random noisy tournament as CSV.
    Generate {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0.25)]
        gamma: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        output: Option<PathBuf>,
        /// Also write the hidden ranking here (`item,rank`, rank n on top).
        #[arg(long)]
        truth: Option<PathBuf>,
    },
    /// Rank a tournament file, or a generated instance when no input is given.
    Solve {
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 0.25)]
        gamma: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "insertion")]
        algorithm: Algorithm,
        #[command(flatten)]
        params: ParamFlags,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, default_value = "json")]
        format: OutputFormat,
    },
    /// Run a sweep described by a JSON config.
    Experiment {
        #[arg(long)]
        config: PathBuf,
        /// Overrides the config's output path.
        #[arg(long)]
        output: Option<PathBuf>,
        /// Overrides the config's format.
        #[arg(long)]
        format: Option<OutputFormat>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        algorithm: Option<Algorithm>,
        #[command(flatten)]
        params: ParamFlags,
        /// Record wall-clock times.
        #[arg(long)]
        timing: bool,
    },
    /// Print the asymptotic constants for given inputs as JSON.
    Constants {
        #[arg(long, default_value_t = 0.25)]
        gamma: f64,
        #[arg(long, default_value_t = 1.0)]
        beta: f64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        epsilon: Option<f64>,
    },
}

#[derive(Args, Default)]
struct ParamFlags {
    #[arg(long)]
    window: Option<usize>,
    #[arg(long)]
    block_len: Option<usize>,
    #[arg(long)]
    majority_k: Option<usize>,
    #[arg(long)]
    walk_steps: Option<usize>,
    #[arg(long)]
    beta: Option<f64>,
}

impl ParamFlags {
    fn overrides(&self) -> Map<String, Value> {
        let mut m = Map::new();
        let mut put = |k: &str, v: Option<Value>| {
            if let Some(v) = v {
                m.insert(k.to_string(), v);
            }
        };
        put("window", self.window.map(Value::from));
        put("block_len", self.block_len.map(Value::from));
        put("majority_k", self.majority_k.map(Value::from));
        put("walk_steps", self.walk_steps.map(Value::from));
        put("beta", self.beta.map(Value::from));
        m
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if broken_pipe(&e) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_solver_guard() { 1 } else { 2 })
        }
    }
}

fn broken_pipe(e: &Error) -> bool {
    let kind = match e {
        Error::Io(e) => Some(e.kind()),
        Error::Json(e) => e.io_error_kind(),
        _ => None,
    };
    kind == Some(io::ErrorKind::BrokenPipe)
}

fn sink(path: Option<&PathBuf>) -> nswr::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn write_ranking_csv(out: &mut dyn Write, ranking: &Ranking, names: &[String]) -> nswr::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let csv_err = |e: csv::Error| Error::from(nswr::oracle::csv::CsvError::from(e));
    w.write_record(["item", "rank"]).map_err(csv_err)?;
    for &item in ranking.order().iter().rev() {
        w.write_record([names[item].as_str(), &(ranking.rank(item) + 1).to_string()])
            .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

fn run(command: Command) -> nswr::Result<()> {
    match command {
        Command::Generate {
            n,
            gamma,
            seed,
            output,
            truth,
        } => {
            let (pi, noise) = bench::trial_instance(seed, n, gamma, 0)?;
            let oracle = CountingOracle::new(pi.clone(), noise);
            let names = default_names(n);
            let mut out = sink(output.as_ref())?;
            write_tournament_csv(&mut out, &oracle.uncounted(), &names)?;
            out.flush()?;
            if let Some(path) = truth {
                write_ranking_csv(&mut File::create(path)?, &pi, &names)?;
            }
            Ok(())
        }
        Command::Solve {
            input,
            n,
            gamma,
            seed,
            algorithm,
            params,
            output,
            format,
        } => {
            let (oracle, names, truth) = match (&input, n) {
                (Some(path), _) => {
                    let t = load_tournament_csv(path)?;
                    (CountingOracle::over_table(t.table), t.names, None)
                }
                (None, Some(n)) => {
                    let (pi, noise) = bench::trial_instance(seed, n, gamma, 0)?;
                    (CountingOracle::new(pi.clone(), noise), default_names(n), Some(pi))
                }
                (None, None) => {
                    return Err(Error::InvalidParams("give --input or --n".into()));
                }
            };
            let size = names.len();
            if let Some(limit) = algorithm.size_limit().filter(|&l| size > l) {
                return Err(Error::TooLarge {
                    solver: algorithm.name(),
                    n: size,
                    limit,
                });
            }
            let params: NswrParams = apply_overrides(
                &algorithm.default_params(size, gamma).with_seed(seed),
                &params.overrides(),
            )?;
            let sol = bench::solve(algorithm, &oracle, &params, truth.as_ref())?;
            let mut out = sink(output.as_ref())?;
            match format {
                OutputFormat::Csv => write_ranking_csv(&mut out, &sol.ranking, &names)?,
                OutputFormat::Json => {
                    let order: Vec<&str> =
                        sol.ranking.order().iter().rev().map(|&i| names[i].as_str()).collect();
                    let mut doc = json!({
                        "algorithm": algorithm,
                        "n": size,
                        "ranking": order,
                        "score": sol.score,
                        "distinct_queries": sol.stats.distinct_queries,
                        "total_accesses": sol.stats.total_accesses,
                        "params": params,
                    });
                    if let Some(pi) = &truth {
                        let m = bench::evaluate(&sol.ranking, pi, &oracle.uncounted(), sol.stats)?;
                        doc["gamma"] = json!(gamma);
                        doc["metrics"] = serde_json::to_value(m)?;
                    }
                    if let Some(r) = &sol.report {
                        doc["events"] = json!(r.events());
                    }
                    serde_json::to_writer_pretty(&mut out, &doc)?;
                    writeln!(out)?;
                }
            }
            out.flush()?;
            Ok(())
        }
        Command::Experiment {
            config,
            output,
            format,
            seed,
            algorithm,
            params,
            timing,
        } => {
            let mut cfg = ExperimentConfig::from_json(&fs::read_to_string(config)?)?;
            if let Some(o) = output {
                cfg.output = Some(o);
            }
            if let Some(f) = format {
                cfg.format = f;
            }
            if let Some(s) = seed {
                cfg.seed = s;
            }
            if let Some(a) = algorithm {
                cfg.algorithm = vec![a];
            }
            cfg.params.extend(params.overrides());
            cfg.timing |= timing;
            let rows: Vec<ResultRow> = match cfg.output.clone() {
                Some(path) => bench::write_experiment_file(&cfg, &path)?,
                None => {
                    let mut out = sink(None)?;
                    let rows = bench::write_experiment(&cfg, &mut out)?;
                    out.flush()?;
                    rows
                }
            };
            for cell in summarize(&rows) {
                eprintln!("{}", summary_line(&cell));
            }
            Ok(())
        }
        Command::Constants {
            gamma,
            beta,
            n,
            epsilon,
        } => {
            let t = theory_constants(gamma, beta, n, epsilon)?;
            print_json(&t)
        }
    }
}

fn summary_line(c: &bench::CellSummary) -> String {
    format!(
        "{} n={} gamma={} trials={} sum_disloc/n={:.3}±{:.3} max_disloc/log2n={:.3}±{:.3} queries/(n log2 n)={:.3} beat_truth={:.2}",
        c.algorithm,
        c.n,
        c.gamma,
        c.trials,
        c.sum_disloc_per_n.0,
        c.sum_disloc_per_n.1,
        c.max_disloc_per_log_n.0,
        c.max_disloc_per_log_n.1,
        c.queries_per_n_log_n,
        c.beat_truth
    )
}

fn print_json<T: Serialize>(value: &T) -> nswr::Result<()> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}
