//! Command-line interface.

use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use lierank_core::closure::{controllability, su_dimension};
use lierank_core::models::exact_ground_state;
use lierank_core::partitions::generators_from_partition;
use lierank_core::{close_algebra_with, StateVector};
use serde_json::json;

use crate::config::ExperimentConfig;
use crate::experiments::{self, energy_calibration};
use crate::formats::{fmt12, HamiltonianJson, PartitionJson, ProxyModelJson, StateJson, TraceJson};
use crate::output::OutDir;

#[derive(Debug, Parser)]
#[command(name = "lierank", version, about = "Lie-rank analysis of Pauli-based parameterized circuits")]
pub struct Cli {
    /// Root seed for every random stream.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads (0 = all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[arg(long, global = true)]
    pub out_dir: Option<PathBuf>,
    /// Hamiltonian JSON replacing the built-in 2x2 XXZ model.
    #[arg(long, global = true)]
    pub model_json: Option<PathBuf>,
    /// JSON or TOML configuration file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Close every subset of the 16 two-qubit Pauli strings.
    Scaling2q,
    /// Lie-rank distribution of sampled partitions per block count.
    RankDist {
        #[arg(long)]
        n_t: Option<usize>,
    },
    /// Rank after each commutator iteration for sampled partitions.
    RankEvol {
        #[arg(long)]
        n_t: Option<usize>,
    },
    /// LAP baseline and VHA sweep over partitions and layer counts.
    VqeSweep {
        #[arg(long)]
        partitions_per_m: Option<usize>,
        #[arg(long)]
        p_max: Option<usize>,
        #[arg(long)]
        restarts: Option<usize>,
    },
    /// Fit the early-iteration proxy and backtest it.
    Proxy {
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        n_t: Option<usize>,
    },
    /// Exact ground state of the model and the coupling scan.
    Eig,
    /// Closure of the model's terms, or of the blocks of a partition.
    Close {
        /// Partition JSON; defaults to all terms separately.
        #[arg(long)]
        partition: Option<PathBuf>,
        /// Include the orthonormal basis in the output.
        #[arg(long)]
        basis: bool,
        #[arg(long)]
        max_iterations: Option<usize>,
    },
}

impl Cli {
    /// Config file values overridden by the flags given on the command line.
    pub fn resolve(&self) -> Result<ExperimentConfig> {
        let mut cfg = match &self.config {
            Some(path) => ExperimentConfig::load(path)?,
            None => ExperimentConfig::default(),
        };
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        if let Some(j) = self.jobs {
            cfg.jobs = j;
        }
        if let Some(d) = &self.out_dir {
            cfg.out_dir = d.display().to_string();
        }
        if let Some(m) = &self.model_json {
            cfg.model.model_json = Some(m.display().to_string());
        }
        match &self.command {
            Command::RankDist { n_t } | Command::RankEvol { n_t } => {
                if let Some(n) = n_t {
                    cfg.rank.n_t = *n;
                }
            }
            Command::Proxy { k, n_t } => {
                if let Some(k) = k {
                    cfg.proxy.k = *k;
                }
                if let Some(n) = n_t {
                    cfg.rank.n_t = *n;
                }
            }
            Command::VqeSweep { partitions_per_m, p_max, restarts } => {
                if let Some(v) = partitions_per_m {
                    cfg.vqe.partitions_per_m = *v;
                }
                if let Some(v) = p_max {
                    cfg.vqe.p_max = *v;
                }
                if let Some(v) = restarts {
                    cfg.vqe.restarts = *v;
                }
            }
            Command::Close { max_iterations, .. } => {
                if max_iterations.is_some() {
                    cfg.closure.max_iterations = *max_iterations;
                }
            }
            Command::Scaling2q | Command::Eig => {}
        }
        Ok(cfg)
    }

    /// Runs the command and returns the manifest path.
    pub fn run(&self) -> Result<PathBuf> {
        let cfg = self.resolve()?;
        let mut out = OutDir::create(&cfg.out_dir)?;
        match &self.command {
            Command::Scaling2q => scaling2q(&cfg, &mut out),
            Command::RankDist { .. } => rank_dist(&cfg, &mut out),
            Command::RankEvol { .. } => rank_evol(&cfg, &mut out),
            Command::VqeSweep { .. } => vqe_sweep(&cfg, &mut out),
            Command::Proxy { .. } => proxy(&cfg, &mut out),
            Command::Eig => eig(&cfg, &mut out),
            Command::Close { partition, basis, .. } => close(&cfg, &mut out, partition.as_ref(), *basis),
        }
    }
}

fn b(x: bool) -> String {
    x.to_string()
}

fn s(x: impl ToString) -> String {
    x.to_string()
}

fn scaling2q(cfg: &ExperimentConfig, out: &mut OutDir) -> Result<PathBuf> {
    let res = experiments::scaling2q(cfg)?;
    out.csv(
        "scaling2q.csv",
        &["m", "subset_id", "strings", "final_rank", "traceless_rank", "fully_controllable"],
        res.rows.iter().map(|r| {
            vec![s(r.m), s(r.subset_id), r.strings.clone(), s(r.final_rank), s(r.traceless_rank), b(r.fully_controllable)]
        }),
    )?;
    out.csv(
        "scaling2q_summary.csv",
        &["m", "subsets", "min_traceless_rank", "max_traceless_rank", "fully_controllable"],
        res.summary.iter().map(|r| {
            vec![s(r.m), s(r.subsets), s(r.min_traceless_rank), s(r.max_traceless_rank), s(r.fully_controllable)]
        }),
    )?;
    out.csv(
        "scaling2q_histogram.csv",
        &["m", "traceless_rank", "count"],
        res.summary.iter().flat_map(|r| r.histogram.iter().map(|(k, c)| vec![s(r.m), s(k), s(c)])),
    )?;
    let first_full = res.summary.iter().find(|r| r.fully_controllable > 0).map(|r| r.m);
    let results = json!({
        "subsets": res.rows.len(),
        "smallest_m_fully_controllable": first_full,
        "summary": res.summary,
    });
    out.manifest("scaling2q", cfg, results)
}

fn rank_dist(cfg: &ExperimentConfig, out: &mut OutDir) -> Result<PathBuf> {
    let spec = cfg.model.build()?;
    let data = experiments::rank_data(&spec, cfg)?;
    write_samples(out, &data)?;
    out.csv(
        "rank_dist.csv",
        &["m", "l_r", "count", "probability"],
        data.histogram().into_iter().map(|(m, r, c, p)| vec![s(m), s(r), s(c), fmt12(p)]),
    )?;
    let p_max = data.p_max();
    out.csv(
        "rank_dist_max.csv",
        &["m", "n_t", "p_max"],
        p_max.iter().map(|(m, n, p)| vec![s(m), s(n), fmt12(*p)]),
    )?;
    let results = json!({
        "max_rank": data.max_rank,
        "p_max": p_max.iter().map(|(m, n, p)| json!({"m": m, "n_t": n, "p_max": p})).collect::<Vec<_>>(),
        "energy_calibration": energy_calibration(&spec)?,
    });
    out.manifest("rank-dist", cfg, results)
}

fn write_samples(out: &mut OutDir, data: &experiments::RankData) -> Result<()> {
    out.csv(
        "partitions.csv",
        &["m", "sample", "seed", "partition_json", "final_rank"],
        data.samples.iter().map(|x| {
            vec![s(x.m), s(x.sample), s(x.seed), PartitionJson::compact(&x.partition), s(x.trace.final_rank())]
        }),
    )
}

fn rank_evol(cfg: &ExperimentConfig, out: &mut OutDir) -> Result<PathBuf> {
    let spec = cfg.model.build()?;
    let data = experiments::rank_data(&spec, cfg)?;
    let cap = cfg.rank.export_iterations;
    write_samples(out, &data)?;
    out.csv(
        "rank_evol.csv",
        &["m", "partition_id", "iteration", "rank", "reached_max"],
        data.samples.iter().flat_map(|x| {
            let reached = data.reached_max(x);
            (0..=cap).map(move |k| vec![s(x.m), s(x.sample), s(k), s(x.trace.rank_at(k)), b(reached)])
        }),
    )?;
    out.csv(
        "rank_evol_means.csv",
        &["m", "group", "iteration", "mean_rank", "count"],
        data.mean_curves(cap).into_iter().map(|(m, g, k, mean, n)| vec![s(m), s(g), s(k), fmt12(mean), s(n)]),
    )?;
    let raw: Vec<serde_json::Value> = data
        .samples
        .iter()
        .map(|x| json!({"m": x.m, "partition_id": x.sample, "seed": x.seed, "trace": TraceJson::new(&x.trace, false)}))
        .collect();
    out.jsonl("rank_evol_traces.jsonl", &raw)?;
    let inflections = data.inflections(cap);
    let results = json!({
        "max_rank": data.max_rank,
        "inflection_iteration": inflections.iter().map(|(m, k)| json!({"m": m, "iteration": k})).collect::<Vec<_>>(),
        "inflection_non_increasing_in_m": inflections.windows(2).all(|w| w[1].1 <= w[0].1),
    });
    out.manifest("rank-evol", cfg, results)
}

fn proxy(cfg: &ExperimentConfig, out: &mut OutDir) -> Result<PathBuf> {
    let spec = cfg.model.build()?;
    let data = experiments::rank_data(&spec, cfg)?;
    let res = experiments::proxy(&spec, cfg, &data)?;
    for w in &res.warnings {
        eprintln!("warning: {w}");
    }
    out.json("proxy_model.json", &ProxyModelJson::from(&res.model))?;
    out.csv(
        "proxy_curves.csv",
        &["m", "rank_at_k", "probability"],
        res.curves.iter().map(|(m, x, p)| vec![s(m), s(x), fmt12(*p)]),
    )?;
    out.csv(
        "proxy_calibration.csv",
        &["m", "rank_at_k", "count", "predicted", "empirical"],
        res.calibration.bins.iter().map(|c| {
            vec![s(c.m), s(c.rank_at_k), s(c.count), fmt12(c.predicted), fmt12(c.empirical)]
        }),
    )?;
    let mut by_m: std::collections::BTreeMap<usize, (f64, usize)> = Default::default();
    for c in &res.calibration.bins {
        let e = by_m.entry(c.m).or_default();
        e.0 += c.count as f64 * (c.predicted - c.empirical).abs();
        e.1 += c.count;
    }
    let per_m: Vec<_> = by_m.iter().map(|(m, (sum, n))| json!({"m": m, "mean_abs_error": sum / *n as f64})).collect();
    let results = json!({
        "k": res.model.k,
        "max_rank": data.max_rank,
        "mean_abs_calibration_error": res.calibration.mean_abs_error,
        "mean_abs_calibration_error_by_m": per_m,
        "held_out_per_m": cfg.proxy.n_held_out,
        "degenerate_fits": res.warnings,
    });
    out.manifest("proxy", cfg, results)
}

fn vqe_sweep(cfg: &ExperimentConfig, out: &mut OutDir) -> Result<PathBuf> {
    let spec = cfg.model.build()?;
    let res = experiments::vqe_sweep(&spec, cfg)?;
    out.json("lap_baseline.json", &res.lap)?;
    out.csv(
        "vqe_sweep.csv",
        &["m", "partition_id", "partition_json", "p", "restart", "energy", "error_vs_lap", "evaluations", "seed", "is_best"],
        res.rows.iter().map(|r| {
            vec![
                s(r.m),
                s(r.partition_id),
                PartitionJson::compact(&r.partition),
                s(r.p),
                s(r.restart),
                fmt12(r.energy),
                fmt12(r.error_vs_lap),
                s(r.evaluations),
                s(r.seed),
                b(r.is_best),
            ]
        }),
    )?;
    let summary: Vec<serde_json::Value> = res
        .summary
        .iter()
        .map(|x| {
            json!({"m": x.m, "p": x.p, "cells": x.cells, "mean_error": x.mean_error,
                   "std_error": x.std_error, "min_error": x.min_error})
        })
        .collect();
    out.json("vqe_summary.json", &summary)?;
    let results = json!({
        "lap_energy": res.lap.energy,
        "exact_ground_energy": res.lap.exact_ground_energy,
        "lap_generator_order": res.lap.generator_order,
        "partitions": res.partitions.len(),
        "min_error_vs_lap": res.rows.iter().map(|r| r.error_vs_lap).fold(f64::INFINITY, f64::min),
        "energy_calibration": energy_calibration(&spec)?,
    });
    out.manifest("vqe-sweep", cfg, results)
}

fn eig(cfg: &ExperimentConfig, out: &mut OutDir) -> Result<PathBuf> {
    let spec = cfg.model.build()?;
    let (energy, vector) = exact_ground_state(&spec)?;
    let state = StateVector::from_amplitudes(vector)?;
    out.json("hamiltonian.json", &HamiltonianJson::from(&spec))?;
    out.json("ground_state.json", &StateJson::from(&state))?;
    let calibration = energy_calibration(&spec)?;
    println!("{}", fmt12(energy));
    out.manifest("eig", cfg, json!({"ground_energy": energy, "energy_calibration": calibration}))
}

fn close(cfg: &ExperimentConfig, out: &mut OutDir, partition: Option<&PathBuf>, basis: bool) -> Result<PathBuf> {
    let spec = cfg.model.build()?;
    let gens = match partition {
        Some(path) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let p: PartitionJson = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
            generators_from_partition(&spec, &p.to_partition()?)?
        }
        None => spec.singleton_generators(),
    };
    let trace = close_algebra_with(&gens, &cfg.closure.options(None))?;
    out.json("closure.json", &TraceJson::new(&trace, basis))?;
    let report = controllability(&trace).ok();
    println!("{}", trace.final_rank());
    let results = json!({
        "generators": gens.len(),
        "final_rank": trace.final_rank(),
        "rank_per_iteration": trace.rank_per_iteration,
        "su_dimension": su_dimension(trace.n_qubits).to_string(),
        "traceless_rank": report.map(|r| r.traceless_rank),
        "fully_controllable": report.map(|r| r.fully_controllable),
        "truncated": trace.truncated,
    });
    out.manifest("close", cfg, results)
}

/// Machine-readable error document for stderr.
pub fn error_json(err: &anyhow::Error) -> serde_json::Value {
    let core = err.chain().find_map(|c| c.downcast_ref::<lierank_core::Error>());
    let kind = match core {
        Some(e) => format!("{e:?}").split([' ', '(', '{']).next().unwrap_or("Error").to_string(),
        None if err.chain().any(|c| c.is::<std::io::Error>()) => "Io".into(),
        None if err.chain().any(|c| c.is::<clap::Error>()) => "Usage".into(),
        None => "Error".into(),
    };
    json!({
        "error": {
            "kind": kind,
            "message": err.to_string(),
            "chain": err.chain().map(|c| c.to_string()).collect::<Vec<_>>(),
        }
    })
}
