//! Dynamical Lie algebra analysis of Pauli-based parameterized quantum circuits.
//!
//! The crate is `no_std` and only needs `alloc`. It covers:
//!
//! - exact Pauli string / Pauli sum algebra ([`pauli`], [`operator`]),
//! - commutator closure with Gram-Schmidt rank tracking ([`closure`]),
//! - the 2-qubit Pauli set and the 2x2 XXZ-Heisenberg model ([`models`]),
//! - uniform sampling of set partitions of Hamiltonian terms ([`partitions`]),
//! - a dense statevector simulator for small registers ([`statevector`]),
//! - variational optimization of VHA and LAP ansätze ([`vqe`]),
//! - the early-iteration Lie rank proxy ([`proxy`]).
//!
//! File formats, experiment orchestration and the command line live in the
//! `lierank` companion crate.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod closure;
pub mod dense;
mod error;
mod modular;
pub mod models;
pub mod operator;
pub mod optimize;
pub mod partitions;
pub mod pauli;
pub mod proxy;
pub mod seed;
pub mod statevector;
pub mod vqe;

pub use closure::{
    close_algebra, close_algebra_with, controllability, dense_closure_oracle, ClosureOptions, ClosureTrace,
    ControllabilityReport,
};
pub use error::{Error, Result};
pub use models::{HamiltonianSpec, Term};
pub use operator::PauliOperator;
pub use partitions::Partition;
pub use pauli::PauliString;
pub use statevector::{GeneratorGate, StateVector};
pub use vqe::{AnsatzKind, AnsatzSpec, VqeRun, VqeSettings};

/// Coefficients with magnitude below this are dropped from operators.
pub const ZERO_TOL: f64 = 1e-12;

/// Largest register accepted by dense-matrix routines.
pub const DENSE_QUBIT_CAP: usize = 6;

/// Largest register representable by a Pauli string (one machine word per mask).
pub const MAX_QUBITS: usize = 64;
