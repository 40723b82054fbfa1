use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use lierank::output::read_manifest;
use serde_json::Value;

const SMALL: &str = r#"
[rank]
n_t = 24
m_values = [2, 4, 7]

[proxy]
n_held_out = 16

[vqe]
m_values = [12]
partitions_per_m = 2
p_max = 2
restarts = 2
lap_restarts = 2
"#;

fn lierank(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lierank")).args(args).output().unwrap()
}

fn run_in(dir: &Path, config: &Path, extra: &[&str]) -> Output {
    let mut args = vec!["--config", config.to_str().unwrap(), "--out-dir", dir.to_str().unwrap()];
    args.extend_from_slice(extra);
    let out = lierank(&args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    out
}

fn small_config(dir: &Path) -> std::path::PathBuf {
    let path = dir.join("small.toml");
    fs::write(&path, SMALL).unwrap();
    path
}

fn read(dir: &Path, name: &str) -> String {
    fs::read_to_string(dir.join(name)).unwrap()
}

fn error_of(out: &Output) -> Value {
    let text = String::from_utf8_lossy(&out.stderr);
    let line = text.lines().find(|l| l.starts_with('{')).expect("error JSON on stderr");
    serde_json::from_str(line).unwrap()
}

#[test]
fn rank_dist_is_independent_of_thread_count() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = small_config(tmp.path());
    let (a, b) = (tmp.path().join("serial"), tmp.path().join("parallel"));
    run_in(&a, &cfg, &["--jobs", "1", "rank-dist"]);
    run_in(&b, &cfg, &["--jobs", "3", "rank-dist"]);
    for name in ["partitions.csv", "rank_dist.csv", "rank_dist_max.csv"] {
        assert_eq!(read(&a, name), read(&b, name), "{name}");
    }
}

#[test]
fn manifest_config_replays_outputs() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = small_config(tmp.path());
    let first = tmp.path().join("first");
    run_in(&first, &cfg, &["--seed", "7", "rank-evol", "--n-t", "10"]);
    let manifest = read_manifest(&first.join("rank_evol_manifest.json")).unwrap();
    assert_eq!(manifest.config.seed, 7);
    assert_eq!(manifest.config.rank.n_t, 10);
    let replay_cfg = tmp.path().join("replay.json");
    fs::write(&replay_cfg, serde_json::to_string(&manifest.config).unwrap()).unwrap();
    let second = tmp.path().join("second");
    run_in(&second, &replay_cfg, &["rank-evol"]);
    for name in &manifest.outputs {
        if !name.ends_with("manifest.json") {
            assert_eq!(read(&first, name), read(&second, name), "{name}");
        }
    }
}

#[test]
fn proxy_writes_model_and_backtest() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = small_config(tmp.path());
    run_in(tmp.path(), &cfg, &["proxy"]);
    let model: Value = serde_json::from_str(&read(tmp.path(), "proxy_model.json")).unwrap();
    assert_eq!(model["k"], 3);
    assert!(read(tmp.path(), "proxy_calibration.csv").lines().count() > 1);
    let manifest = read_manifest(&tmp.path().join("proxy_manifest.json")).unwrap();
    assert!(manifest.outputs.contains(&"proxy_curves.csv".to_string()));
}

#[test]
fn vqe_sweep_rows_respect_the_baseline() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = small_config(tmp.path());
    run_in(tmp.path(), &cfg, &["vqe-sweep"]);
    let mut reader = csv::Reader::from_path(tmp.path().join("vqe_sweep.csv")).unwrap();
    let col = reader.headers().unwrap().iter().position(|h| h == "error_vs_lap").unwrap();
    let errors: Vec<f64> = reader.records().map(|r| r.unwrap()[col].parse().unwrap()).collect();
    assert_eq!(errors.len(), 2 * 2 * 2);
    assert!(errors.iter().all(|e| *e >= -1e-6));
}

#[test]
fn eig_and_close_on_the_default_model() {
    let tmp = tempfile::tempdir().unwrap();
    let eig = lierank(&["--out-dir", tmp.path().to_str().unwrap(), "eig"]);
    assert!(eig.status.success());
    let state: Value = serde_json::from_str(&read(tmp.path(), "ground_state.json")).unwrap();
    assert_eq!(state["amplitudes"].as_array().unwrap().len(), 16);
    let close = lierank(&["--out-dir", tmp.path().to_str().unwrap(), "close", "--basis"]);
    assert!(close.status.success());
    let trace: Value = serde_json::from_str(&read(tmp.path(), "closure.json")).unwrap();
    assert_eq!(trace["final_rank"], 61);
    assert_eq!(trace["basis"].as_array().unwrap().len(), 61);
}

#[test]
fn close_accepts_a_partition_file() {
    let tmp = tempfile::tempdir().unwrap();
    let part = tmp.path().join("p.json");
    fs::write(&part, r#"{"n_items": 13, "blocks": [[0,1,2,3,4,5,6,7,8,9,10,11,12]]}"#).unwrap();
    let out = lierank(&["--out-dir", tmp.path().to_str().unwrap(), "close", "--partition", part.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let trace: Value = serde_json::from_str(&read(tmp.path(), "closure.json")).unwrap();
    assert_eq!(trace["final_rank"], 1);
}

#[test]
fn usage_errors_exit_with_two() {
    let out = lierank(&["rank-dist", "--no-such-flag"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_of(&out)["error"]["kind"], "Usage");
}

#[test]
fn bad_inputs_exit_with_one_and_json() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path().to_str().unwrap();

    let missing = lierank(&["--out-dir", dir, "--model-json", "/nonexistent/model.json", "eig"]);
    assert_eq!(missing.status.code(), Some(1));
    assert_eq!(error_of(&missing)["error"]["kind"], "Io");

    let part = tmp.path().join("bad.json");
    fs::write(&part, r#"{"n_items": 13, "blocks": [[0, 1], [1, 2]]}"#).unwrap();
    let overlap = lierank(&["--out-dir", dir, "close", "--partition", part.to_str().unwrap()]);
    assert_eq!(overlap.status.code(), Some(1));
    let err = error_of(&overlap);
    assert_ne!(err["error"]["kind"], "Usage");
    assert!(!err["error"]["chain"].as_array().unwrap().is_empty());

    let cfg = tmp.path().join("typo.toml");
    fs::write(&cfg, "[rank]\nnt = 3\n").unwrap();
    let typo = lierank(&["--config", cfg.to_str().unwrap(), "--out-dir", dir, "rank-dist"]);
    assert_eq!(typo.status.code(), Some(1));
}
