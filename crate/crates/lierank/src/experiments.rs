//! The experiment drivers behind each subcommand.
//!
//! Randomness flows from the root seed through `derive_seed(root, path)`:
//! rank samples use path `[0, m, t]`, held-out proxy samples `[1, m, t]`, VQE
//! partition draws `[2, m]`, VHA cells derive from `[3]` and the LAP baseline
//! from `[4]`. Tasks run on a rayon pool and are collected in task order, so
//! results do not depend on the worker count.

use std::collections::BTreeMap;

use anyhow::{bail, Context, Result};
use lierank_core::closure::{controllability, ClosureTrace};
use lierank_core::models::{exact_ground_state, two_qubit_pauli_set, xxz_2x2};
use lierank_core::partitions::{all_partitions, count_partitions, generators_from_partition, sample_partition};
use lierank_core::proxy::{calibrate, fit_proxy_observations, CalibrationReport, ProxyModel, RankObservation};
use lierank_core::seed::{derive_seed, task_rng};
use lierank_core::vqe::{build_lap, optimize, summarize, vha_cell, SweepRow, SweepSummary};
use lierank_core::{close_algebra_with, ClosureOptions, HamiltonianSpec, Partition, PauliOperator};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::ExperimentConfig;

const STREAM_RANKS: u64 = 0;
const STREAM_HELD_OUT: u64 = 1;
const STREAM_VQE_PARTITIONS: u64 = 2;
const STREAM_VHA: u64 = 3;
const STREAM_LAP: u64 = 4;

/// Ground energy the XXZ coupling scan tries to reproduce.
pub const REFERENCE_GROUND_ENERGY: f64 = -1.9794;
/// A scan point within this distance of the reference counts as a match.
pub const CALIBRATION_TOL: f64 = 5e-4;

/// Runs `f` on a pool with `jobs` threads (0 means all cores).
pub fn with_pool<T: Send>(jobs: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs).build().context("starting worker pool")?;
    Ok(pool.install(f))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridPoint {
    pub j: f64,
    pub delta: f64,
    pub h: f64,
    pub ground_energy: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnergyCalibration {
    pub reference: f64,
    pub tolerance: f64,
    pub grid: Vec<GridPoint>,
    pub closest: GridPoint,
    pub matched: bool,
    /// Exact ground energy of the configured model, the reference for VQE checks.
    pub model_ground_energy: f64,
    pub note: String,
}

/// Scans `J in {1, 0.5, 0.1}`, `h in {0, 0.1, 0.5, 1}` at `delta = -20 J` with the field term.
pub fn energy_calibration(spec: &HamiltonianSpec) -> Result<EnergyCalibration> {
    let mut grid = Vec::new();
    for j in [1.0, 0.5, 0.1] {
        for h in [0.0, 0.1, 0.5, 1.0] {
            let delta = -20.0 * j;
            let (e, _) = exact_ground_state(&xxz_2x2(j, delta, h)?)?;
            grid.push(GridPoint { j, delta, h, ground_energy: e });
        }
    }
    let closest = grid
        .iter()
        .min_by(|a, b| {
            (a.ground_energy - REFERENCE_GROUND_ENERGY).abs().total_cmp(&(b.ground_energy - REFERENCE_GROUND_ENERGY).abs())
        })
        .cloned()
        .expect("non-empty grid");
    let matched = (closest.ground_energy - REFERENCE_GROUND_ENERGY).abs() <= CALIBRATION_TOL;
    let model_ground_energy = exact_ground_state(spec)?.0;
    let note = if matched {
        format!("grid point J = {}, h = {} matches the reference", closest.j, closest.h)
    } else {
        format!(
            "no grid point within {CALIBRATION_TOL} of {REFERENCE_GROUND_ENERGY} (closest {} at J = {}, h = {}); \
             exact diagonalization of the configured model ({model_ground_energy}) is the reference",
            closest.ground_energy, closest.j, closest.h
        )
    };
    Ok(EnergyCalibration {
        reference: REFERENCE_GROUND_ENERGY,
        tolerance: CALIBRATION_TOL,
        grid,
        closest,
        matched,
        model_ground_energy,
        note,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SubsetRow {
    pub m: usize,
    /// Bit `i` selects entry `i` of the two-qubit Pauli set.
    pub subset_id: u32,
    pub strings: String,
    pub final_rank: usize,
    pub traceless_rank: usize,
    pub fully_controllable: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SubsetSummary {
    pub m: usize,
    pub subsets: usize,
    pub min_traceless_rank: usize,
    pub max_traceless_rank: usize,
    pub fully_controllable: usize,
    /// Traceless rank to subset count.
    pub histogram: BTreeMap<usize, usize>,
}

pub struct Scaling2q {
    pub rows: Vec<SubsetRow>,
    pub summary: Vec<SubsetSummary>,
}

/// Closes every non-empty subset of the 16 two-qubit Pauli strings.
pub fn scaling2q(cfg: &ExperimentConfig) -> Result<Scaling2q> {
    let set = two_qubit_pauli_set();
    let options = cfg.closure.options(None);
    let rows = with_pool(cfg.jobs, || {
        (1u32..1 << set.len())
            .into_par_iter()
            .map(|mask| {
                let chosen: Vec<_> = (0..set.len()).filter(|i| mask >> i & 1 == 1).map(|i| set[i]).collect();
                let gens =
                    chosen.iter().map(|s| PauliOperator::from_string(*s, 1.0)).collect::<Result<Vec<_>, _>>()?;
                let trace = close_algebra_with(&gens, &options)?;
                let report = controllability(&trace)?;
                Ok(SubsetRow {
                    m: chosen.len(),
                    subset_id: mask,
                    strings: chosen.iter().map(|s| s.to_label()).collect::<Vec<_>>().join(" "),
                    final_rank: report.lie_rank,
                    traceless_rank: report.traceless_rank,
                    fully_controllable: report.fully_controllable,
                })
            })
            .collect::<Result<Vec<_>>>()
    })??;
    let mut by_m: BTreeMap<usize, SubsetSummary> = BTreeMap::new();
    for r in &rows {
        let s = by_m.entry(r.m).or_insert_with(|| SubsetSummary {
            m: r.m,
            subsets: 0,
            min_traceless_rank: usize::MAX,
            max_traceless_rank: 0,
            fully_controllable: 0,
            histogram: BTreeMap::new(),
        });
        s.subsets += 1;
        s.min_traceless_rank = s.min_traceless_rank.min(r.traceless_rank);
        s.max_traceless_rank = s.max_traceless_rank.max(r.traceless_rank);
        s.fully_controllable += r.fully_controllable as usize;
        *s.histogram.entry(r.traceless_rank).or_default() += 1;
    }
    Ok(Scaling2q { rows, summary: by_m.into_values().collect() })
}

/// One sampled partition and its closure.
#[derive(Clone, Debug, PartialEq)]
pub struct RankSample {
    pub m: usize,
    pub sample: usize,
    pub seed: u64,
    pub partition: Partition,
    pub trace: ClosureTrace,
}

/// Rank of the closure of all terms taken separately. Every partition's
/// algebra lies inside it.
pub fn max_rank(spec: &HamiltonianSpec, cfg: &ExperimentConfig) -> Result<usize> {
    let trace = close_algebra_with(&spec.singleton_generators(), &cfg.closure.options(None))?;
    if trace.truncated {
        bail!("singleton closure truncated at rank {}; raise closure.max_iterations", trace.final_rank());
    }
    Ok(trace.final_rank())
}

fn sample_ranks(
    spec: &HamiltonianSpec,
    ms: &[usize],
    n_t: usize,
    root: u64,
    stream: u64,
    options: &ClosureOptions,
    jobs: usize,
) -> Result<Vec<RankSample>> {
    let tasks: Vec<(usize, usize)> = ms.iter().flat_map(|&m| (0..n_t).map(move |t| (m, t))).collect();
    with_pool(jobs, || {
        tasks
            .par_iter()
            .map(|&(m, t)| {
                let path = [stream, m as u64, t as u64];
                let partition = sample_partition(spec.len(), m, &mut task_rng(root, &path))?;
                let trace = close_algebra_with(&generators_from_partition(spec, &partition)?, options)?;
                Ok(RankSample { m, sample: t, seed: derive_seed(root, &path), partition, trace })
            })
            .collect::<Result<Vec<_>>>()
    })?
}

pub struct RankData {
    pub max_rank: usize,
    pub samples: Vec<RankSample>,
}

impl RankData {
    pub fn block_counts(&self) -> Vec<usize> {
        let mut ms: Vec<usize> = self.samples.iter().map(|s| s.m).collect();
        ms.dedup();
        ms
    }

    pub fn reached_max(&self, s: &RankSample) -> bool {
        s.trace.final_rank() == self.max_rank
    }

    /// `(m, rank, count, probability)` sorted by `(m, rank)`.
    pub fn histogram(&self) -> Vec<(usize, usize, usize, f64)> {
        let mut counts: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        let mut totals: BTreeMap<usize, usize> = BTreeMap::new();
        for s in &self.samples {
            *counts.entry((s.m, s.trace.final_rank())).or_default() += 1;
            *totals.entry(s.m).or_default() += 1;
        }
        counts.into_iter().map(|((m, r), c)| (m, r, c, c as f64 / totals[&m] as f64)).collect()
    }

    /// `(m, samples, P(max rank))`.
    pub fn p_max(&self) -> Vec<(usize, usize, f64)> {
        self.block_counts()
            .into_iter()
            .map(|m| {
                let of_m: Vec<&RankSample> = self.samples.iter().filter(|s| s.m == m).collect();
                let hits = of_m.iter().filter(|s| self.reached_max(s)).count();
                (m, of_m.len(), hits as f64 / of_m.len() as f64)
            })
            .collect()
    }

    /// Mean rank per iteration `0..=iterations` for each `m`, over all
    /// samples and split by whether the maximum was reached:
    /// `(m, group, iteration, mean, count)`.
    pub fn mean_curves(&self, iterations: usize) -> Vec<(usize, &'static str, usize, f64, usize)> {
        let mut out = Vec::new();
        for m in self.block_counts() {
            for group in ["all", "max", "below_max"] {
                let members: Vec<&RankSample> = self
                    .samples
                    .iter()
                    .filter(|s| s.m == m)
                    .filter(|s| match group {
                        "max" => self.reached_max(s),
                        "below_max" => !self.reached_max(s),
                        _ => true,
                    })
                    .collect();
                if members.is_empty() {
                    continue;
                }
                for k in 0..=iterations {
                    let mean = members.iter().map(|s| s.trace.rank_at(k) as f64).sum::<f64>() / members.len() as f64;
                    out.push((m, group, k, mean, members.len()));
                }
            }
        }
        out
    }

    /// Iteration of steepest growth of the mean rank, per `m`.
    pub fn inflections(&self, iterations: usize) -> Vec<(usize, usize)> {
        let curves = self.mean_curves(iterations);
        self.block_counts()
            .into_iter()
            .map(|m| {
                let means: Vec<f64> =
                    curves.iter().filter(|c| c.0 == m && c.1 == "all").map(|c| c.3).collect();
                let mut best = (1, f64::NEG_INFINITY);
                for k in 1..means.len() {
                    let step = means[k] - means[k - 1];
                    if step > best.1 {
                        best = (k, step);
                    }
                }
                (m, best.0)
            })
            .collect()
    }
}

/// Samples `n_t` partitions per block count and closes each.
pub fn rank_data(spec: &HamiltonianSpec, cfg: &ExperimentConfig) -> Result<RankData> {
    let max_rank = max_rank(spec, cfg)?;
    let ms = ExperimentConfig::block_counts(&cfg.rank.m_values, spec.len())?;
    let options = cfg.closure.options(Some(max_rank));
    let samples = sample_ranks(spec, &ms, cfg.rank.n_t, cfg.seed, STREAM_RANKS, &options, cfg.jobs)?;
    Ok(RankData { max_rank, samples })
}

pub struct ProxyOutcome {
    pub model: ProxyModel,
    pub calibration: CalibrationReport,
    /// `(m, x, L(x))` on the observed rank grid.
    pub curves: Vec<(usize, usize, f64)>,
    pub warnings: Vec<String>,
}

fn observations(data: &RankData, k: usize) -> Vec<RankObservation> {
    data.samples.iter().map(|s| RankObservation::from_trace(s.m, &s.trace, k, data.max_rank)).collect()
}

/// Fits the proxy on `data` and backtests it on fresh held-out partitions.
pub fn proxy(spec: &HamiltonianSpec, cfg: &ExperimentConfig, data: &RankData) -> Result<ProxyOutcome> {
    let ms = data.block_counts();
    let (lo, hi) = (ms[0], *ms.last().expect("non-empty"));
    let pc = cfg.proxy.proxy_config(lo, hi);
    let fit_obs = observations(data, pc.k);
    let model = fit_proxy_observations(&fit_obs, &pc)?;
    let options = cfg.closure.options(Some(data.max_rank));
    let held = sample_ranks(spec, &ms, cfg.proxy.n_held_out, cfg.seed, STREAM_HELD_OUT, &options, cfg.jobs)?;
    let held = RankData { max_rank: data.max_rank, samples: held };
    let calibration = calibrate(&model, &observations(&held, pc.k));
    let mut curves = Vec::new();
    for e in &model.entries {
        let mut xs: Vec<usize> = fit_obs.iter().filter(|o| o.m == e.m).map(|o| o.rank_at_k).collect();
        xs.sort_unstable();
        xs.dedup();
        curves.extend(xs.into_iter().map(|x| (e.m, x, e.interpolate(x as f64))));
    }
    let warnings = model
        .degenerate_fits()
        .into_iter()
        .map(|e| format!("{e}; falling back to a step function"))
        .collect();
    Ok(ProxyOutcome { model, calibration, curves, warnings })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LapBaseline {
    pub energy: f64,
    pub exact_ground_energy: f64,
    pub n_generators: usize,
    pub generator_order: String,
    pub restarts: usize,
    pub seed: u64,
    pub restart_energies: Vec<f64>,
    pub best_params: Vec<f64>,
}

pub fn lap_baseline(spec: &HamiltonianSpec, cfg: &ExperimentConfig) -> Result<LapBaseline> {
    let ansatz = build_lap(spec)?;
    let settings = cfg.vqe.lap_settings();
    let seed = derive_seed(cfg.seed, &[STREAM_LAP]);
    let run = optimize(spec, &ansatz, &settings, seed)?;
    Ok(LapBaseline {
        energy: run.best_energy,
        exact_ground_energy: exact_ground_state(spec)?.0,
        n_generators: ansatz.generators().len(),
        generator_order: "closure basis insertion order".into(),
        restarts: settings.restarts,
        seed,
        restart_energies: run.restarts.iter().map(|r| r.energy).collect(),
        best_params: run.best_params,
    })
}

/// Up to `count` distinct partitions with `m` blocks; all of them when fewer exist.
pub fn sweep_partitions(n: usize, m: usize, count: usize, root: u64) -> Result<Vec<Partition>> {
    if count_partitions(n, m)? <= count as u128 {
        return Ok(all_partitions(n, m)?);
    }
    let mut rng = task_rng(root, &[STREAM_VQE_PARTITIONS, m as u64]);
    let mut out: Vec<Partition> = Vec::with_capacity(count);
    while out.len() < count {
        let p = sample_partition(n, m, &mut rng)?;
        if !out.contains(&p) {
            out.push(p);
        }
    }
    Ok(out)
}

pub struct VqeSweep {
    pub lap: LapBaseline,
    pub partitions: Vec<Partition>,
    pub rows: Vec<SweepRow>,
    pub summary: Vec<SweepSummary>,
}

pub fn vqe_sweep(spec: &HamiltonianSpec, cfg: &ExperimentConfig) -> Result<VqeSweep> {
    let lap = lap_baseline(spec, cfg)?;
    let mut partitions = Vec::new();
    for m in ExperimentConfig::block_counts(&cfg.vqe.m_values, spec.len())? {
        partitions.extend(sweep_partitions(spec.len(), m, cfg.vqe.partitions_per_m, cfg.seed)?);
    }
    let settings = cfg.vqe.vha_settings();
    let cell_root = derive_seed(cfg.seed, &[STREAM_VHA]);
    let tasks: Vec<(usize, usize)> =
        (0..partitions.len()).flat_map(|id| (1..=cfg.vqe.p_max).map(move |p| (id, p))).collect();
    let cells = with_pool(cfg.jobs, || {
        tasks
            .par_iter()
            .map(|&(id, p)| vha_cell(spec, &partitions[id], id, p, &settings, cell_root, lap.energy))
            .collect::<Result<Vec<_>, _>>()
    })??;
    let rows: Vec<SweepRow> = cells.into_iter().flatten().collect();
    let summary = summarize(&rows);
    Ok(VqeSweep { lap, partitions, rows, summary })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(jobs: usize) -> ExperimentConfig {
        let mut cfg = ExperimentConfig { jobs, ..Default::default() };
        cfg.rank.n_t = 6;
        cfg.rank.m_values = vec![1, 4, 13];
        cfg.proxy.n_held_out = 4;
        cfg
    }

    #[test]
    fn rank_samples_ignore_worker_count() {
        let spec = small(1).model.build().unwrap();
        let a = rank_data(&spec, &small(1)).unwrap();
        let b = rank_data(&spec, &small(3)).unwrap();
        assert_eq!(a.samples, b.samples);
        assert_eq!(a.max_rank, 61);
        assert!(a.samples.iter().filter(|s| s.m == 13).all(|s| a.reached_max(s)));
        let h = a.histogram();
        assert!(h.iter().filter(|r| r.0 == 1).all(|r| r.1 == 1 && r.3 == 1.0));
    }

    #[test]
    fn calibration_scan_covers_the_grid() {
        let spec = small(1).model.build().unwrap();
        let c = energy_calibration(&spec).unwrap();
        assert_eq!(c.grid.len(), 12);
        // field-free couplings scale the spectrum linearly in J
        let e = |j: f64| c.grid.iter().find(|g| g.j == j && g.h == 0.0).unwrap().ground_energy;
        assert!((e(1.0) - 10.0 * e(0.1)).abs() < 1e-9);
        assert!((c.model_ground_energy - (e(0.1) + 1.0)).abs() < 1e-9);
    }

    #[test]
    fn sweep_partitions_are_distinct() {
        let ps = sweep_partitions(13, 12, 5, 9).unwrap();
        assert_eq!(ps.len(), 5);
        assert!(ps.iter().all(|p| p.m() == 12));
        assert!((0..5).all(|i| (i + 1..5).all(|j| ps[i] != ps[j])));
        assert_eq!(sweep_partitions(13, 13, 5, 9).unwrap().len(), 1);
    }
}
