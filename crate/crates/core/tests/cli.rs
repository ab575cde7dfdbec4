use std::fs;
use std::process::{Command, Output};

use nswr::bench::{read_rows_csv, CSV_COLUMNS};
use nswr::exact::optimal_ranking_exhaustive;
use nswr::oracle::csv::load_tournament_csv;
use serde_json::Value;

fn nswr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nswr")).args(args).output().unwrap()
}

fn stdout_json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn constants_as_json() {
    let v = stdout_json(&nswr(&["constants", "--gamma", "0.25", "--beta", "1", "--n", "1000"]));
    assert!((v["p1"].as_f64().unwrap() - (-0.0625f64 / 16.0).exp()).abs() < 1e-12);
    assert_eq!(v["c2"].as_f64().unwrap(), 1120.0);
    assert!(v["C"].as_f64().unwrap() > 0.0);
}

#[test]
fn solve_file_with_subset_dp_is_optimal() {
    let dir = tempfile::tempdir().unwrap();
    let games = dir.path().join("games.csv");
    let g = games.to_str().unwrap();
    assert!(nswr(&["generate", "--n", "8", "--gamma", "0.1", "--seed", "5", "--output", g]).status.success());
    let v = stdout_json(&nswr(&["solve", "--input", g, "--algorithm", "subset-dp"]));
    let t = load_tournament_csv(&games).unwrap();
    let (_, best) = optimal_ranking_exhaustive(&t.table).unwrap();
    assert_eq!(v["score"].as_i64().unwrap(), best.0);
    assert_eq!(v["ranking"].as_array().unwrap().len(), 8);
    assert_eq!(v["distinct_queries"], 28);
}

#[test]
fn generate_is_deterministic() {
    let a = nswr(&["generate", "--n", "12", "--seed", "9"]);
    let b = nswr(&["generate", "--n", "12", "--seed", "9"]);
    let c = nswr(&["generate", "--n", "12", "--seed", "10"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
    assert_eq!(String::from_utf8(a.stdout).unwrap().lines().count(), 1 + 66);
}

#[test]
fn noiseless_generated_instance_is_recovered() {
    let v = stdout_json(&nswr(&["solve", "--n", "60", "--gamma", "0.5", "--algorithm", "query-efficient"]));
    assert_eq!(v["metrics"]["sum_dislocation"], 0);
    assert_eq!(v["score"].as_i64().unwrap(), 60 * 59 / 2);
}

#[test]
fn solve_ranking_csv_is_one_based() {
    let out = nswr(&["solve", "--n", "5", "--gamma", "0.5", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let ranks: Vec<&str> = text.lines().skip(1).map(|l| l.split(',').nth(1).unwrap()).collect();
    assert_eq!(ranks, ["5", "4", "3", "2", "1"]);
}

#[test]
fn parameter_flags_reach_the_solver() {
    let v = stdout_json(&nswr(&[
        "solve", "--n", "40", "--window", "2", "--block-len", "5", "--majority-k", "3", "--walk-steps", "6", "--beta", "2",
    ]));
    let p = &v["params"];
    assert_eq!((p["window"].as_u64(), p["block_len"].as_u64()), (Some(2), Some(5)));
    assert_eq!((p["majority_k"].as_u64(), p["walk_steps"].as_u64()), (Some(3), Some(6)));
    assert_eq!(p["beta"].as_f64(), Some(2.0));
}

#[test]
fn experiment_writes_csv_and_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("exp.json");
    let out = dir.path().join("rows.csv");
    fs::write(
        &cfg,
        format!(
            r#"{{"n": [8, 20], "gamma": [0.25], "trials": 3, "algorithm": ["insertion", "query-efficient"], "seed": 1, "output": {:?}}}"#,
            out.to_str().unwrap()
        ),
    )
    .unwrap();
    let res = nswr(&["experiment", "--config", cfg.to_str().unwrap()]);
    assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));
    let text = fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().next().unwrap(), CSV_COLUMNS.join(","));
    assert_eq!(read_rows_csv(text.as_bytes()).unwrap().len(), 12);
    let side: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("rows.csv.params.json")).unwrap()).unwrap();
    assert_eq!(side["params"].as_array().unwrap().len(), 4);
    assert!(String::from_utf8_lossy(&res.stderr).contains("sum_disloc/n"));

    let again = dir.path().join("again.csv");
    let res = nswr(&["experiment", "--config", cfg.to_str().unwrap(), "--output", again.to_str().unwrap()]);
    assert!(res.status.success());
    assert_eq!(fs::read(&out).unwrap(), fs::read(&again).unwrap());
}

#[test]
fn exit_codes() {
    assert_eq!(nswr(&["solve", "--n", "12", "--algorithm", "exhaustive"]).status.code(), Some(1));
    assert_eq!(nswr(&["solve", "--n", "5", "--frobnicate"]).status.code(), Some(2));
    assert_eq!(nswr(&["solve", "--n", "5", "--algorithm", "quicksort"]).status.code(), Some(2));
    assert_eq!(nswr(&["solve", "--input", "/nonexistent/games.csv"]).status.code(), Some(2));
    assert_eq!(nswr(&["constants", "--n", "100", "--gamma", "0.9"]).status.code(), Some(2));
    assert_eq!(nswr(&["solve"]).status.code(), Some(2));
    assert_eq!(nswr(&["--help"]).status.code(), Some(0));
}
