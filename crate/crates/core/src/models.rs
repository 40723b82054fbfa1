//! Concrete Hamiltonians: the two-qubit Pauli set and the 2x2 XXZ-Heisenberg model.

use alloc::string::String;
use alloc::vec::Vec;

use crate::dense::hermitian_eigen;
use crate::operator::PauliOperator;
use crate::pauli::PauliString;
use crate::{Error, Result, DENSE_QUBIT_CAP};

/// One labelled Hamiltonian term. A term is the smallest unit a partition can
/// assign to a block, so it may hold several Pauli strings.
#[derive(Clone, Debug, PartialEq)]
pub struct Term {
    pub label: String,
    pub operator: PauliOperator,
}

/// Hamiltonian as an ordered list of labelled terms.
#[derive(Clone, Debug, PartialEq)]
pub struct HamiltonianSpec {
    n_qubits: usize,
    terms: Vec<Term>,
}

impl HamiltonianSpec {
    /// Rejects an empty term list, mixed sizes, repeated labels and repeated
    /// non-zero operators. Zero terms are kept; they add nothing to a closure.
    pub fn new(n_qubits: usize, terms: Vec<Term>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::EmptyGenerators);
        }
        for (i, t) in terms.iter().enumerate() {
            if t.operator.n_qubits() != n_qubits {
                return Err(Error::SizeMismatch { expected: n_qubits, found: t.operator.n_qubits() });
            }
            if terms[..i].iter().any(|u| u.label == t.label) {
                return Err(Error::InvalidPartition(alloc::format!("duplicate term label {:?}", t.label)));
            }
            if !t.operator.is_empty() && terms[..i].iter().any(|u| u.operator == t.operator) {
                return Err(Error::InvalidPartition(alloc::format!("term {:?} repeats an earlier term", t.label)));
            }
        }
        Ok(Self { n_qubits, terms })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Sum of all terms.
    pub fn operator(&self) -> PauliOperator {
        let mut acc = PauliOperator::zero(self.n_qubits).expect("validated qubit count");
        for t in &self.terms {
            acc = acc.axpy_unchecked(1.0, &t.operator);
        }
        acc
    }

    /// One generator per term, in term order.
    pub fn singleton_generators(&self) -> Vec<PauliOperator> {
        self.terms.iter().map(|t| t.operator.clone()).collect()
    }
}

/// All 16 products `a ⊗ b` with `a, b ∈ {I, X, Y, Z}`, lexicographic, `II` first.
pub fn two_qubit_pauli_set() -> Vec<PauliString> {
    const LETTERS: [char; 4] = ['I', 'X', 'Y', 'Z'];
    let mut out = Vec::with_capacity(16);
    for a in LETTERS {
        for b in LETTERS {
            let mut label = String::new();
            label.push(a);
            label.push(b);
            out.push(label.parse().expect("valid two-letter label"));
        }
    }
    out
}

/// Nearest-neighbour bonds of the open 2x2 lattice, sites numbered row-major.
pub const XXZ_2X2_EDGES: [(usize, usize); 4] = [(0, 1), (2, 3), (0, 2), (1, 3)];

/// What fills the thirteenth slot after the twelve two-body couplings.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum OneBodyTerm {
    /// `-h * sum_k Z_k` as a single term.
    Field { h: f64 },
    /// `c * I`, a constant energy offset.
    Offset { c: f64 },
}

fn two_body(i: usize, j: usize, letter: char, coeff: f64) -> Result<Term> {
    let mut label = String::new();
    let mut text = String::new();
    for q in 0..4 {
        text.push(if q == i || q == j { letter } else { 'I' });
    }
    label.push(letter);
    label.push(letter);
    label.push_str(&alloc::format!("({i},{j})"));
    let s: PauliString = text.parse()?;
    Ok(Term { label, operator: PauliOperator::from_string(s, coeff)? })
}

/// 2x2 XXZ model: per bond `-J XX - J YY - delta ZZ`, then `one_body`.
///
/// Thirteen terms in total. The two-body terms come bond by bond in
/// [`XXZ_2X2_EDGES`] order, `XX` before `YY` before `ZZ`.
pub fn xxz_2x2_with(j: f64, delta: f64, one_body: OneBodyTerm) -> Result<HamiltonianSpec> {
    let mut terms = Vec::with_capacity(13);
    for &(a, b) in &XXZ_2X2_EDGES {
        terms.push(two_body(a, b, 'X', -j)?);
        terms.push(two_body(a, b, 'Y', -j)?);
        terms.push(two_body(a, b, 'Z', -delta)?);
    }
    match one_body {
        OneBodyTerm::Field { h } => {
            let field = (0..4).map(|k| PauliString::single(4, k, 'Z').map(|s| (s, -h))).collect::<Result<Vec<_>>>()?;
            terms.push(Term { label: String::from("field"), operator: PauliOperator::from_terms(4, field)? });
        }
        OneBodyTerm::Offset { c } => {
            terms.push(Term {
                label: String::from("offset"),
                operator: PauliOperator::from_string(PauliString::identity(4)?, c)?,
            });
        }
    }
    HamiltonianSpec::new(4, terms)
}

/// 2x2 XXZ model with the transverse-field term `-h sum_k Z_k` as term 13.
pub fn xxz_2x2(j: f64, delta: f64, h: f64) -> Result<HamiltonianSpec> {
    xxz_2x2_with(j, delta, OneBodyTerm::Field { h })
}

/// Smallest eigenvalue of the dense Hamiltonian.
pub fn exact_ground_energy(spec: &HamiltonianSpec) -> Result<f64> {
    Ok(exact_ground_state(spec)?.0)
}

/// Ground energy and a normalized ground eigenvector.
pub fn exact_ground_state(spec: &HamiltonianSpec) -> Result<(f64, Vec<num_complex::Complex64>)> {
    if spec.n_qubits() > DENSE_QUBIT_CAP {
        return Err(Error::Capacity { n_qubits: spec.n_qubits(), cap: DENSE_QUBIT_CAP });
    }
    let eig = hermitian_eigen(&spec.operator().to_dense()?)?;
    Ok((eig.values[0], eig.eigenvector(0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closure::close_algebra;

    #[test]
    fn two_qubit_set() {
        let set = two_qubit_pauli_set();
        assert_eq!(set.len(), 16);
        assert!(set[0].is_identity());
        assert_eq!(set[15].to_label(), "ZZ");
        assert!(set.windows(2).all(|w| w[0] < w[1]));
        // sum over m of C(16, m)
        let total: u64 = (1..=16u64).map(|m| crate::partitions::binomial(16, m)).sum();
        assert_eq!(total, 65_535);
    }

    #[test]
    fn xxz_has_thirteen_terms() {
        let spec = xxz_2x2(0.1, -2.0, 0.3).unwrap();
        assert_eq!(spec.len(), 13);
        assert_eq!(spec.terms()[0].label, "XX(0,1)");
        assert_eq!(spec.terms()[11].label, "ZZ(1,3)");
        assert_eq!(spec.terms()[12].operator.len(), 4);
        let off = xxz_2x2_with(0.1, -2.0, OneBodyTerm::Offset { c: 1.0 }).unwrap();
        assert_eq!(off.len(), 13);
        assert!(off.terms()[12].operator.terms()[0].0.is_identity());
    }

    #[test]
    fn field_only_ground_energy() {
        let spec = xxz_2x2(0.0, 0.0, 1.0).unwrap();
        assert_eq!(spec.terms().iter().filter(|t| !t.operator.is_empty()).count(), 1);
        assert!((exact_ground_energy(&spec).unwrap() + 4.0).abs() < 1e-12);
    }

    #[test]
    fn single_qubit_z() {
        let spec = HamiltonianSpec::new(
            1,
            alloc::vec![Term { label: "Z".into(), operator: PauliOperator::from_labels(&[("Z", 1.0)]).unwrap() }],
        )
        .unwrap();
        assert!((exact_ground_energy(&spec).unwrap() + 1.0).abs() < 1e-14);
    }

    #[test]
    fn repeated_labels_rejected() {
        let t = xxz_2x2(1.0, 1.0, 1.0).unwrap().terms()[0].clone();
        assert!(HamiltonianSpec::new(4, alloc::vec![t.clone(), t]).is_err());
    }

    #[test]
    fn dense_matrix_is_hermitian() {
        let m = xxz_2x2(0.1, -2.0, 0.5).unwrap().operator().to_dense().unwrap();
        assert!(m.hermiticity_error() < 1e-14);
    }

    #[test]
    fn offset_layout_singleton_rank() {
        for (j, delta, c) in [(0.1, -2.0, 1.0), (1.0, 0.3, -0.7), (-0.5, 10.0, 2.5)] {
            let spec = xxz_2x2_with(j, delta, OneBodyTerm::Offset { c }).unwrap();
            let t = close_algebra(&spec.singleton_generators(), None).unwrap();
            assert_eq!(t.final_rank(), 61);
        }
    }

    #[test]
    fn field_layout_singleton_rank() {
        let spec = xxz_2x2(0.1, -2.0, 0.5).unwrap();
        let t = close_algebra(&spec.singleton_generators(), None).unwrap();
        assert_eq!(t.final_rank(), 126);
    }
}
