//! Variational ground-state search with VHA and LAP ansätze.
//!
//! Each restart draws initial angles uniformly from `(-init_range, init_range)`
//! and runs BFGS on the energy. Restart `r` of a run with seed `s` uses the
//! stream `derive_seed(s, [r])`, so results do not depend on execution order.

use alloc::vec::Vec;
use rand_core::RngCore;

use crate::closure::close_algebra;
use crate::models::HamiltonianSpec;
use crate::operator::PauliOperator;
use crate::optimize::{minimize_with_gradient, BfgsSettings};
use crate::partitions::{generators_from_partition, Partition};
use crate::seed::{derive_seed, task_rng};
use crate::statevector::{CompiledAnsatz, Observable, StateVector};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AnsatzKind {
    /// Variational Hamiltonian ansatz: one generator per partition block, `p` layers.
    Vha,
    /// Lie algebra partition ansatz: one layer over a full closure basis.
    Lap,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AnsatzSpec {
    generators: Vec<PauliOperator>,
    layers: usize,
    kind: AnsatzKind,
}

impl AnsatzSpec {
    pub fn new(generators: Vec<PauliOperator>, layers: usize, kind: AnsatzKind) -> Result<Self> {
        let n = generators.first().ok_or(Error::EmptyGenerators)?.n_qubits();
        if let Some(g) = generators.iter().find(|g| g.n_qubits() != n) {
            return Err(Error::SizeMismatch { expected: n, found: g.n_qubits() });
        }
        if layers == 0 {
            return Err(Error::OutOfRange { what: "layers", value: 0, min: 1, max: usize::MAX });
        }
        if kind == AnsatzKind::Lap && layers != 1 {
            return Err(Error::OutOfRange { what: "LAP layers", value: layers, min: 1, max: 1 });
        }
        Ok(Self { generators, layers, kind })
    }

    /// VHA over the blocks of `partition`.
    pub fn vha(spec: &HamiltonianSpec, partition: &Partition, layers: usize) -> Result<Self> {
        Self::new(generators_from_partition(spec, partition)?, layers, AnsatzKind::Vha)
    }

    pub fn generators(&self) -> &[PauliOperator] {
        &self.generators
    }

    pub fn layers(&self) -> usize {
        self.layers
    }

    pub fn kind(&self) -> AnsatzKind {
        self.kind
    }

    pub fn n_qubits(&self) -> usize {
        self.generators[0].n_qubits()
    }

    pub fn n_params(&self) -> usize {
        self.layers * self.generators.len()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct VqeSettings {
    pub restarts: usize,
    /// Initial angles are uniform in `(-init_range, init_range)`.
    pub init_range: f64,
    /// Computational basis state the circuit starts from.
    pub initial_basis_state: usize,
    pub bfgs: BfgsSettings,
}

impl VqeSettings {
    pub fn vha_default() -> Self {
        Self { restarts: 10, init_range: 0.1, initial_basis_state: 0, bfgs: BfgsSettings::default() }
    }

    pub fn lap_default() -> Self {
        Self { restarts: 20, ..Self::vha_default() }
    }
}

impl Default for VqeSettings {
    fn default() -> Self {
        Self::vha_default()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RestartResult {
    pub restart: usize,
    pub seed: u64,
    pub energy: f64,
    pub evaluations: usize,
    pub converged: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VqeRun {
    pub ansatz: AnsatzSpec,
    pub seed: u64,
    pub settings: VqeSettings,
    pub best_energy: f64,
    pub best_params: Vec<f64>,
    /// Energy after every accepted optimizer step of the best restart.
    pub energy_history: Vec<f64>,
    pub restarts: Vec<RestartResult>,
}

fn uniform_open(rng: &mut impl RngCore, range: f64) -> f64 {
    // 53 random bits mapped to (0, 1)
    let u = ((rng.next_u64() >> 11) as f64 + 0.5) / (1u64 << 53) as f64;
    (2.0 * u - 1.0) * range
}

/// Minimizes `<psi(theta)|H|psi(theta)>` over the ansatz parameters.
pub fn optimize(spec: &HamiltonianSpec, ansatz: &AnsatzSpec, settings: &VqeSettings, seed: u64) -> Result<VqeRun> {
    if spec.n_qubits() != ansatz.n_qubits() {
        return Err(Error::SizeMismatch { expected: spec.n_qubits(), found: ansatz.n_qubits() });
    }
    if settings.restarts == 0 {
        return Err(Error::OutOfRange { what: "restarts", value: 0, min: 1, max: usize::MAX });
    }
    let circuit = CompiledAnsatz::new(ansatz)?;
    let observable = Observable::from_spec(spec)?;
    let initial = StateVector::basis_state(spec.n_qubits(), settings.initial_basis_state)?;
    let dense_h = spec.operator().to_dense()?;
    let energy = |params: &[f64]| observable.expectation(&circuit.run(params, &initial)?);
    let gradient = |params: &[f64]| {
        circuit.energy_and_gradient(params, &initial, &dense_h, settings.bfgs.fd_step).map(|(_, g)| g)
    };

    let mut best: Option<(f64, Vec<f64>, Vec<f64>)> = None;
    let mut restarts = Vec::with_capacity(settings.restarts);
    for r in 0..settings.restarts {
        let restart_seed = derive_seed(seed, &[r as u64]);
        let mut rng = task_rng(seed, &[r as u64]);
        let x0: Vec<f64> = (0..ansatz.n_params()).map(|_| uniform_open(&mut rng, settings.init_range)).collect();
        let min = minimize_with_gradient(energy, gradient, &x0, &settings.bfgs)?;
        restarts.push(RestartResult {
            restart: r,
            seed: restart_seed,
            energy: min.value,
            evaluations: min.evaluations,
            converged: min.converged,
        });
        if best.as_ref().is_none_or(|(e, _, _)| min.value < *e) {
            best = Some((min.value, min.x, min.history));
        }
    }
    let (best_energy, best_params, energy_history) = best.expect("at least one restart");
    Ok(VqeRun {
        ansatz: ansatz.clone(),
        seed,
        settings: settings.clone(),
        best_energy,
        best_params,
        energy_history,
        restarts,
    })
}

/// LAP ansatz: the closure basis of the singleton partition, insertion order, one layer.
pub fn build_lap(spec: &HamiltonianSpec) -> Result<AnsatzSpec> {
    let trace = close_algebra(&spec.singleton_generators(), None)?;
    if trace.truncated {
        return Err(Error::TruncatedClosure {
            iterations: trace.rank_per_iteration.len() - 1,
            rank: trace.final_rank(),
        });
    }
    AnsatzSpec::new(trace.basis, 1, AnsatzKind::Lap)
}

/// One restart of one `(partition, p)` cell of a VHA sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub m: usize,
    pub partition_id: usize,
    pub partition: Partition,
    pub p: usize,
    pub restart: usize,
    pub energy: f64,
    pub error_vs_lap: f64,
    pub evaluations: usize,
    pub seed: u64,
    /// This restart holds the cell's best energy.
    pub is_best: bool,
}

/// Mean and sample standard deviation of the best-per-cell error at fixed `(m, p)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepSummary {
    pub m: usize,
    pub p: usize,
    pub cells: usize,
    pub mean_error: f64,
    pub std_error: f64,
    pub min_error: f64,
}

/// Seed of the `(partition_id, p)` cell.
pub fn cell_seed(root: u64, partition_id: usize, p: usize) -> u64 {
    derive_seed(root, &[partition_id as u64, p as u64])
}

/// Runs one sweep cell and returns its restart rows.
pub fn vha_cell(
    spec: &HamiltonianSpec,
    partition: &Partition,
    partition_id: usize,
    p: usize,
    settings: &VqeSettings,
    root_seed: u64,
    lap_energy: f64,
) -> Result<Vec<SweepRow>> {
    let ansatz = AnsatzSpec::vha(spec, partition, p)?;
    let run = optimize(spec, &ansatz, settings, cell_seed(root_seed, partition_id, p))?;
    let best = run
        .restarts
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.energy.total_cmp(&b.1.energy))
        .map(|(i, _)| i)
        .unwrap_or(0);
    Ok(run
        .restarts
        .iter()
        .enumerate()
        .map(|(i, r)| SweepRow {
            m: partition.m(),
            partition_id,
            partition: partition.clone(),
            p,
            restart: r.restart,
            energy: r.energy,
            error_vs_lap: r.energy - lap_energy,
            evaluations: r.evaluations,
            seed: r.seed,
            is_best: i == best,
        })
        .collect())
}

/// Serial VHA sweep over every partition and layer count.
pub fn vha_sweep(
    spec: &HamiltonianSpec,
    partitions: &[Partition],
    layer_range: &[usize],
    settings: &VqeSettings,
    root_seed: u64,
    lap_energy: f64,
) -> Result<Vec<SweepRow>> {
    let mut rows = Vec::new();
    for (id, partition) in partitions.iter().enumerate() {
        for &p in layer_range {
            rows.extend(vha_cell(spec, partition, id, p, settings, root_seed, lap_energy)?);
        }
    }
    Ok(rows)
}

/// Per-`(m, p)` statistics of the cell-best errors, sorted by `(m, p)`.
pub fn summarize(rows: &[SweepRow]) -> Vec<SweepSummary> {
    let mut keys: Vec<(usize, usize)> = rows.iter().filter(|r| r.is_best).map(|r| (r.m, r.p)).collect();
    keys.sort_unstable();
    keys.dedup();
    keys.into_iter()
        .map(|(m, p)| {
            let mut errs: Vec<f64> =
                rows.iter().filter(|r| r.is_best && r.m == m && r.p == p).map(|r| r.error_vs_lap).collect();
            // fixed summation order regardless of how rows were produced
            errs.sort_by(f64::total_cmp);
            let n = errs.len();
            let mean = errs.iter().sum::<f64>() / n as f64;
            let var = if n > 1 { errs.iter().map(|e| (e - mean) * (e - mean)).sum::<f64>() / (n - 1) as f64 } else { 0.0 };
            SweepSummary {
                m,
                p,
                cells: n,
                mean_error: mean,
                std_error: num_traits::Float::sqrt(var),
                min_error: errs[0],
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{exact_ground_energy, Term};
    use crate::optimize::central_gradient;

    fn one_qubit(label: &str) -> HamiltonianSpec {
        HamiltonianSpec::new(
            1,
            alloc::vec![Term { label: label.into(), operator: PauliOperator::from_labels(&[(label, 1.0)]).unwrap() }],
        )
        .unwrap()
    }

    fn x_ansatz() -> AnsatzSpec {
        AnsatzSpec::new(alloc::vec![PauliOperator::from_labels(&[("X", 1.0)]).unwrap()], 1, AnsatzKind::Vha).unwrap()
    }

    #[test]
    fn rabi_rotation_reaches_minus_one() {
        let run = optimize(&one_qubit("Z"), &x_ansatz(), &VqeSettings::default(), 5).unwrap();
        assert!((run.best_energy + 1.0).abs() < 1e-8, "{}", run.best_energy);
        assert_eq!(run.restarts.len(), 10);
        assert!(run.restarts.iter().all(|r| r.energy >= run.best_energy));
    }

    #[test]
    fn x_rotation_cannot_change_x_expectation() {
        let run = optimize(&one_qubit("X"), &x_ansatz(), &VqeSettings::default(), 5).unwrap();
        assert!(run.best_energy.abs() < 1e-8);
    }

    #[test]
    fn seeded_runs_repeat_exactly() {
        let spec = one_qubit("Z");
        let a = optimize(&spec, &x_ansatz(), &VqeSettings::default(), 42).unwrap();
        let b = optimize(&spec, &x_ansatz(), &VqeSettings::default(), 42).unwrap();
        assert_eq!(a.best_energy.to_bits(), b.best_energy.to_bits());
        assert_eq!(a.best_params, b.best_params);
    }

    #[test]
    fn gradient_agrees_with_analytic_derivative() {
        // E(t) = <0|exp(-itX) Z exp(itX)|0> = cos 2t
        let spec = one_qubit("Z");
        let circuit = CompiledAnsatz::new(&x_ansatz()).unwrap();
        let obs = Observable::from_spec(&spec).unwrap();
        let init = StateVector::zero_state(1).unwrap();
        let mut f = |p: &[f64]| obs.expectation(&circuit.run(p, &init).unwrap());
        for t in [-1.2, 0.05, 0.4, 2.9] {
            let g = central_gradient(&mut f, &[t], 1e-6).unwrap()[0];
            let exact = -2.0 * (2.0 * t).sin();
            assert!((g - exact).abs() <= 1e-5 * exact.abs().max(1e-3), "t = {t}: {g} vs {exact}");
        }
    }

    #[test]
    fn lap_of_single_x_and_of_x_y() {
        assert_eq!(build_lap(&one_qubit("X")).unwrap().generators().len(), 1);
        let xy = HamiltonianSpec::new(
            1,
            alloc::vec![
                Term { label: "X".into(), operator: PauliOperator::from_labels(&[("X", 1.0)]).unwrap() },
                Term { label: "Y".into(), operator: PauliOperator::from_labels(&[("Y", 1.0)]).unwrap() },
            ],
        )
        .unwrap();
        let lap = build_lap(&xy).unwrap();
        assert_eq!(lap.generators().len(), 3);
        assert_eq!(lap.kind(), AnsatzKind::Lap);
        // su(2) reaches the ground state of X + Y
        let run = optimize(&xy, &lap, &VqeSettings::lap_default(), 1).unwrap();
        assert!((run.best_energy - exact_ground_energy(&xy).unwrap()).abs() < 1e-8);
    }

    #[test]
    fn ansatz_validation() {
        let x = PauliOperator::from_labels(&[("X", 1.0)]).unwrap();
        assert!(AnsatzSpec::new(alloc::vec![], 1, AnsatzKind::Vha).is_err());
        assert!(AnsatzSpec::new(alloc::vec![x.clone()], 0, AnsatzKind::Vha).is_err());
        assert!(AnsatzSpec::new(alloc::vec![x.clone()], 2, AnsatzKind::Lap).is_err());
        let two = PauliOperator::from_labels(&[("XX", 1.0)]).unwrap();
        assert!(AnsatzSpec::new(alloc::vec![x, two], 1, AnsatzKind::Vha).is_err());
        let spec2 = HamiltonianSpec::new(
            2,
            alloc::vec![Term { label: "ZZ".into(), operator: PauliOperator::from_labels(&[("ZZ", 1.0)]).unwrap() }],
        )
        .unwrap();
        assert!(matches!(
            optimize(&spec2, &x_ansatz(), &VqeSettings::default(), 0),
            Err(Error::SizeMismatch { .. })
        ));
    }

    #[test]
    fn summary_statistics() {
        let spec = one_qubit("Z");
        let parts = [Partition::singletons(1).unwrap()];
        let settings = VqeSettings { restarts: 2, ..Default::default() };
        let rows = vha_sweep(&spec, &parts, &[1, 2], &settings, 9, -1.0).unwrap();
        assert_eq!(rows.len(), 4);
        let summary = summarize(&rows);
        assert_eq!(summary.len(), 2);
        for s in summary {
            assert_eq!(s.cells, 1);
            // Z generators leave |0> fixed at energy +1
            assert!((s.mean_error - 2.0).abs() < 1e-8);
            assert_eq!(s.std_error, 0.0);
        }
    }
}
