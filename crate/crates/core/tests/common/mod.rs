#![allow(dead_code)]

use lierank_core::dense::CMatrix;
use lierank_core::{PauliOperator, PauliString};
use num_complex::Complex64;
use proptest::prelude::*;

pub fn string(n: usize) -> impl Strategy<Value = PauliString> {
    let full = (1u64 << n) - 1;
    (0..=full, 0..=full, 0u8..4).prop_map(move |(x, z, ph)| PauliString::new(n, x, z, ph).unwrap())
}

pub fn word(n: usize) -> impl Strategy<Value = PauliString> {
    string(n).prop_map(|s| s.word())
}

/// Coefficients drawn from a small set keep random closures well conditioned.
pub fn coeff() -> impl Strategy<Value = f64> {
    (prop::sample::select(vec![0.5, 1.0, 1.5, 2.0]), any::<bool>()).prop_map(|(c, neg)| if neg { -c } else { c })
}

pub fn operator(n: usize, max_terms: usize) -> impl Strategy<Value = PauliOperator> {
    prop::collection::vec((word(n), coeff()), 1..=max_terms)
        .prop_map(move |terms| PauliOperator::from_terms(n, terms).unwrap())
}

pub fn generator_set(n: usize, max_gens: usize, max_terms: usize) -> impl Strategy<Value = Vec<PauliOperator>> {
    prop::collection::vec(operator(n, max_terms), 1..=max_gens)
}

pub fn dense_string(s: &PauliString) -> CMatrix {
    let base = PauliOperator::from_string(s.word(), 1.0).unwrap().to_dense().unwrap();
    let phase = [(1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0)][s.phase_exp() as usize];
    base.scale(Complex64::new(phase.0, phase.1))
}
