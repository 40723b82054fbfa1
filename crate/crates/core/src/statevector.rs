//! Dense statevector simulation for registers of at most six qubits.

#[allow(unused_imports)]
use num_traits::Float;
use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;

use crate::dense::{hermitian_eigen, index_masks, CMatrix, HermitianEigen};
use crate::models::HamiltonianSpec;
use crate::operator::PauliOperator;
use crate::vqe::AnsatzSpec;
use crate::{Error, Result, DENSE_QUBIT_CAP};

const NORM_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

fn check_cap(n_qubits: usize) -> Result<()> {
    if n_qubits == 0 {
        return Err(Error::InvalidQubitCount(0));
    }
    if n_qubits > DENSE_QUBIT_CAP {
        return Err(Error::Capacity { n_qubits, cap: DENSE_QUBIT_CAP });
    }
    Ok(())
}

impl StateVector {
    /// `|0...0>`.
    pub fn zero_state(n_qubits: usize) -> Result<Self> {
        Self::basis_state(n_qubits, 0)
    }

    /// Computational basis state `|index>`, qubit 0 as the most significant bit.
    pub fn basis_state(n_qubits: usize, index: usize) -> Result<Self> {
        check_cap(n_qubits)?;
        let dim = 1usize << n_qubits;
        if index >= dim {
            return Err(Error::OutOfRange { what: "basis index", value: index, min: 0, max: dim - 1 });
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(Self { n_qubits, amplitudes })
    }

    /// Takes amplitudes that must already be normalized.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let dim = amplitudes.len();
        if dim < 2 || !dim.is_power_of_two() {
            return Err(Error::Numerical(alloc::format!("{dim} amplitudes is not a qubit register")));
        }
        let n_qubits = dim.trailing_zeros() as usize;
        check_cap(n_qubits)?;
        let state = Self { n_qubits, amplitudes };
        let norm = state.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::Numerical(alloc::format!("state norm {norm} is not 1")));
        }
        Ok(state)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `|<self|other>|^2`.
    pub fn fidelity(&self, other: &Self) -> f64 {
        self.amplitudes.iter().zip(&other.amplitudes).map(|(a, b)| a.conj() * b).sum::<Complex64>().norm_sqr()
    }

    /// `exp(i theta H) |self>`.
    pub fn apply_exp(&self, gate: &GeneratorGate, theta: f64) -> Result<Self> {
        let mut out = self.clone();
        out.apply_exp_in_place(gate, theta)?;
        Ok(out)
    }

    pub fn apply_exp_in_place(&mut self, gate: &GeneratorGate, theta: f64) -> Result<()> {
        if gate.n_qubits != self.n_qubits {
            return Err(Error::SizeMismatch { expected: self.n_qubits, found: gate.n_qubits });
        }
        let v = &gate.eigen.vectors;
        let dim = self.amplitudes.len();
        // coordinates in the eigenbasis, phased
        let mut coords = vec![Complex64::new(0.0, 0.0); dim];
        for (k, c) in coords.iter_mut().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for (i, a) in self.amplitudes.iter().enumerate() {
                acc += v.get(i, k).conj() * a;
            }
            *c = acc * Complex64::from_polar(1.0, theta * gate.eigen.values[k]);
        }
        for (i, a) in self.amplitudes.iter_mut().enumerate() {
            *a = (0..dim).map(|k| v.get(i, k) * coords[k]).sum();
        }
        Ok(())
    }
}

/// Exponentiable generator with its dense eigendecomposition cached.
#[derive(Clone, Debug)]
pub struct GeneratorGate {
    n_qubits: usize,
    generator: PauliOperator,
    eigen: HermitianEigen,
}

impl GeneratorGate {
    pub fn new(generator: PauliOperator) -> Result<Self> {
        check_cap(generator.n_qubits())?;
        let dense = generator.to_dense()?;
        let eigen = hermitian_eigen(&dense)?;
        let err = eigen.reconstruct().max_abs_diff(&dense);
        if err > 1e-10 {
            return Err(Error::Numerical(alloc::format!("eigendecomposition reconstruction error {err:e}")));
        }
        Ok(Self { n_qubits: generator.n_qubits(), generator, eigen })
    }

    pub fn generator(&self) -> &PauliOperator {
        &self.generator
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigen.values
    }

    /// Dense `exp(i theta H)`.
    pub fn unitary(&self, theta: f64) -> CMatrix {
        let v = &self.eigen.vectors;
        let dim = v.dim();
        let phases: Vec<Complex64> = self.eigen.values.iter().map(|l| Complex64::from_polar(1.0, theta * l)).collect();
        let mut u = CMatrix::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                let z = (0..dim).map(|k| v.get(i, k) * phases[k] * v.get(j, k).conj()).sum();
                u.set(i, j, z);
            }
        }
        u
    }
}

/// Pauli sum prepared for repeated expectation values.
#[derive(Clone, Debug)]
pub struct Observable {
    n_qubits: usize,
    // (flip, sign mask, coefficient including the i^k phase)
    terms: Vec<(usize, usize, Complex64)>,
}

impl Observable {
    pub fn new(op: &PauliOperator) -> Result<Self> {
        check_cap(op.n_qubits())?;
        let terms = op
            .terms()
            .iter()
            .map(|(s, c)| {
                let (flip, sign, ipow) = index_masks(s);
                let phase = [
                    Complex64::new(1.0, 0.0),
                    Complex64::new(0.0, 1.0),
                    Complex64::new(-1.0, 0.0),
                    Complex64::new(0.0, -1.0),
                ][ipow as usize];
                (flip, sign, phase * *c)
            })
            .collect();
        Ok(Self { n_qubits: op.n_qubits(), terms })
    }

    pub fn from_spec(spec: &HamiltonianSpec) -> Result<Self> {
        Self::new(&spec.operator())
    }

    /// `<psi|O|psi>`; errors if the imaginary part exceeds `1e-10`.
    pub fn expectation(&self, state: &StateVector) -> Result<f64> {
        if state.n_qubits != self.n_qubits {
            return Err(Error::SizeMismatch { expected: self.n_qubits, found: state.n_qubits });
        }
        let amps = &state.amplitudes;
        let mut total = Complex64::new(0.0, 0.0);
        for &(flip, sign, coeff) in &self.terms {
            let mut acc = Complex64::new(0.0, 0.0);
            for (b, a) in amps.iter().enumerate() {
                let term = amps[b ^ flip].conj() * a;
                if (b & sign).count_ones() % 2 == 0 {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
            total += coeff * acc;
        }
        if total.im.abs() > 1e-10 {
            return Err(Error::Numerical(alloc::format!("expectation has imaginary part {:e}", total.im)));
        }
        if !total.re.is_finite() {
            return Err(Error::NonFinite { context: "expectation value", value: total.re });
        }
        Ok(total.re)
    }
}

/// `<psi|H|psi>` for a Hamiltonian spec.
pub fn expectation(state: &StateVector, spec: &HamiltonianSpec) -> Result<f64> {
    Observable::from_spec(spec)?.expectation(state)
}

/// An ansatz with every generator's eigendecomposition precomputed.
#[derive(Clone, Debug)]
pub struct CompiledAnsatz {
    gates: Vec<GeneratorGate>,
    layers: usize,
}

impl CompiledAnsatz {
    pub fn new(ansatz: &AnsatzSpec) -> Result<Self> {
        let gates = ansatz.generators().iter().cloned().map(GeneratorGate::new).collect::<Result<Vec<_>>>()?;
        Ok(Self { gates, layers: ansatz.layers() })
    }

    pub fn n_params(&self) -> usize {
        self.gates.len() * self.layers
    }

    /// Layer by layer, generators in order; `params[d * G + j]` drives
    /// generator `j` in layer `d`.
    pub fn run(&self, params: &[f64], initial: &StateVector) -> Result<StateVector> {
        if params.len() != self.n_params() {
            return Err(Error::ParameterCount { expected: self.n_params(), found: params.len() });
        }
        let mut state = initial.clone();
        for chunk in params.chunks(self.gates.len()) {
            for (gate, &theta) in self.gates.iter().zip(chunk) {
                state.apply_exp_in_place(gate, theta)?;
            }
        }
        Ok(state)
    }
}

impl CompiledAnsatz {
    /// Energy and its central-difference gradient with step `h`.
    ///
    /// Shifting one angle only changes one gate, so each shifted energy is
    /// `<phi|M_k|phi>` with `phi` the state right after the shifted gate and
    /// `M_k` the observable pulled back through the later gates. The `M_k`
    /// come from one backward sweep, which keeps the cost linear in the
    /// parameter count.
    pub fn energy_and_gradient(
        &self,
        params: &[f64],
        initial: &StateVector,
        observable: &CMatrix,
        h: f64,
    ) -> Result<(f64, Vec<f64>)> {
        if params.len() != self.n_params() {
            return Err(Error::ParameterCount { expected: self.n_params(), found: params.len() });
        }
        if observable.dim() != initial.amplitudes.len() {
            return Err(Error::SizeMismatch { expected: initial.amplitudes.len(), found: observable.dim() });
        }
        let g = self.gates.len();
        let mut states = Vec::with_capacity(params.len() + 1);
        states.push(initial.clone());
        for (k, &theta) in params.iter().enumerate() {
            let next = states[k].apply_exp(&self.gates[k % g], theta)?;
            states.push(next);
        }
        let quad = |m: &CMatrix, s: &StateVector| -> f64 {
            let mv = m.mat_vec(&s.amplitudes);
            s.amplitudes.iter().zip(&mv).map(|(a, b)| a.conj() * b).sum::<Complex64>().re
        };
        let energy = quad(observable, &states[params.len()]);
        let mut grad = vec![0.0; params.len()];
        let mut pulled = observable.clone();
        for k in (0..params.len()).rev() {
            let gate = &self.gates[k % g];
            let up = quad(&pulled, &states[k].apply_exp(gate, params[k] + h)?);
            let down = quad(&pulled, &states[k].apply_exp(gate, params[k] - h)?);
            grad[k] = (up - down) / (2.0 * h);
            if k > 0 {
                let u = gate.unitary(params[k]);
                pulled = u.adjoint().matmul(&pulled).matmul(&u);
            }
        }
        if !energy.is_finite() {
            return Err(Error::NonFinite { context: "energy", value: energy });
        }
        Ok((energy, grad))
    }
}

/// Applies `prod_d prod_j exp(i theta_{d,j} H_j)` to `initial`.
pub fn run_ansatz(ansatz: &AnsatzSpec, params: &[f64], initial: &StateVector) -> Result<StateVector> {
    CompiledAnsatz::new(ansatz)?.run(params, initial)
}
