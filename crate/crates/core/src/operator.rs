//! Real linear combinations of Pauli strings.
//!
//! Every operator here is Hermitian: coefficients are real and keys carry no
//! phase. Lie algebra elements `iH` are represented by their Hermitian part
//! `H`, so the commutator is stored as `-i(ab - ba)`, which is again Hermitian.

#[allow(unused_imports)]
use num_traits::Float;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::dense::CMatrix;
use crate::pauli::PauliString;
use crate::{Error, Result, DENSE_QUBIT_CAP, MAX_QUBITS, ZERO_TOL};

#[derive(Clone, Debug, PartialEq)]
pub struct PauliOperator {
    n_qubits: usize,
    // sorted by word, unique, |coeff| >= ZERO_TOL, phase_exp == 0
    terms: Vec<(PauliString, f64)>,
}

impl PauliOperator {
    pub fn zero(n_qubits: usize) -> Result<Self> {
        if n_qubits == 0 || n_qubits > MAX_QUBITS {
            return Err(Error::InvalidQubitCount(n_qubits));
        }
        Ok(Self { n_qubits, terms: Vec::new() })
    }

    /// `coeff * string`. Phases `0` and `2` fold into the sign; `±i` phases
    /// would make the operator anti-Hermitian and are rejected.
    pub fn from_string(string: PauliString, coeff: f64) -> Result<Self> {
        Self::from_terms(string.n_qubits(), [(string, coeff)])
    }

    /// Sums `(string, coeff)` pairs, merging repeated words.
    pub fn from_terms<I>(n_qubits: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (PauliString, f64)>,
    {
        let mut out = Self::zero(n_qubits)?;
        let mut raw = Vec::new();
        for (s, c) in terms {
            if s.n_qubits() != n_qubits {
                return Err(Error::SizeMismatch { expected: n_qubits, found: s.n_qubits() });
            }
            let c = match s.phase_exp() {
                0 => c,
                2 => -c,
                _ => {
                    return Err(Error::Parse(alloc::format!(
                        "term {s} has an imaginary phase; only Hermitian operators are supported"
                    )))
                }
            };
            if !c.is_finite() {
                return Err(Error::NonFinite { context: "operator coefficient", value: c });
            }
            raw.push((s.word(), c));
        }
        out.terms = merge_sorted(raw);
        Ok(out)
    }

    /// Parses `[(text, coeff)]` pairs such as `[("XZ", 0.5), ("YY", -1.0)]`.
    pub fn from_labels(terms: &[(&str, f64)]) -> Result<Self> {
        let parsed = terms
            .iter()
            .map(|(s, c)| Ok((s.parse::<PauliString>()?, *c)))
            .collect::<Result<Vec<_>>>()?;
        let n = parsed.first().map(|(s, _)| s.n_qubits()).ok_or(Error::EmptyGenerators)?;
        Self::from_terms(n, parsed)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn terms(&self) -> &[(PauliString, f64)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, word: &PauliString) -> f64 {
        self.terms
            .binary_search_by(|(s, _)| s.cmp(&word.word()))
            .map(|i| self.terms[i].1)
            .unwrap_or(0.0)
    }

    /// Coefficient of the identity string.
    pub fn identity_coeff(&self) -> f64 {
        match self.terms.first() {
            Some((s, c)) if s.is_identity() => *c,
            _ => 0.0,
        }
    }

    /// Frobenius norm under the normalized Hilbert-Schmidt product.
    pub fn norm(&self) -> f64 {
        self.terms.iter().map(|(_, c)| c * c).sum::<f64>().sqrt()
    }

    pub fn scale(&self, factor: f64) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|&(s, c)| (s, c * factor))
            .filter(|(_, c)| c.abs() >= ZERO_TOL)
            .collect();
        Self { n_qubits: self.n_qubits, terms }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_size(other)?;
        Ok(self.axpy_unchecked(1.0, other))
    }

    /// `self + alpha * other`.
    pub(crate) fn axpy_unchecked(&self, alpha: f64, other: &Self) -> Self {
        self.axpy_drop(alpha, other, ZERO_TOL)
    }

    /// Drops coefficients below [`ZERO_TOL`].
    pub(crate) fn cleaned(&self) -> Self {
        let terms = self.terms.iter().copied().filter(|t| t.1.abs() >= ZERO_TOL).collect();
        Self { n_qubits: self.n_qubits, terms }
    }

    /// `self + alpha * other`, dropping coefficients below `drop`.
    pub(crate) fn axpy_drop(&self, alpha: f64, other: &Self, drop: f64) -> Self {
        let mut terms = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        while i < a.len() || j < b.len() {
            let ord = match (a.get(i), b.get(j)) {
                (Some((s, _)), Some((t, _))) => s.cmp(t),
                (Some(_), None) => Ordering::Less,
                _ => Ordering::Greater,
            };
            let (s, c) = match ord {
                Ordering::Less => {
                    i += 1;
                    (a[i - 1].0, a[i - 1].1)
                }
                Ordering::Greater => {
                    j += 1;
                    (b[j - 1].0, alpha * b[j - 1].1)
                }
                Ordering::Equal => {
                    i += 1;
                    j += 1;
                    (a[i - 1].0, a[i - 1].1 + alpha * b[j - 1].1)
                }
            };
            if c.abs() >= drop && c != 0.0 {
                terms.push((s, c));
            }
        }
        Self { n_qubits: self.n_qubits, terms }
    }

    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.check_size(other)?;
        Ok(self.commutator_unchecked(other))
    }

    pub(crate) fn commutator_unchecked(&self, other: &Self) -> Self {
        let mut raw = Vec::new();
        for &(p, a) in &self.terms {
            for &(q, b) in &other.terms {
                if p.commutes_with(&q) {
                    continue;
                }
                // pq = i^k r with k odd; -i(pq - qp) = -2i * i^k r = ±2r
                let r = p.multiply_unchecked(&q);
                let sign = if r.phase_exp() == 1 { 2.0 } else { -2.0 };
                raw.push((r.word(), sign * a * b));
            }
        }
        Self { n_qubits: self.n_qubits, terms: merge_sorted(raw) }
    }

    /// `Tr(a† b) / 2^n`.
    pub fn hs_inner(&self, other: &Self) -> Result<f64> {
        self.check_size(other)?;
        Ok(self.dot_unchecked(other))
    }

    pub(crate) fn dot_unchecked(&self, other: &Self) -> f64 {
        let (a, b) = (&self.terms, &other.terms);
        let (mut i, mut j, mut acc) = (0, 0, 0.0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => i += 1,
                Ordering::Greater => j += 1,
                Ordering::Equal => {
                    acc += a[i].1 * b[j].1;
                    i += 1;
                    j += 1;
                }
            }
        }
        acc
    }

    /// Dense `2^n x 2^n` matrix, qubit 0 as the most significant tensor factor.
    pub fn to_dense(&self) -> Result<CMatrix> {
        if self.n_qubits > DENSE_QUBIT_CAP {
            return Err(Error::Capacity { n_qubits: self.n_qubits, cap: DENSE_QUBIT_CAP });
        }
        let mut m = CMatrix::zeros(1 << self.n_qubits);
        for &(s, c) in &self.terms {
            crate::dense::add_pauli(&mut m, &s, c);
        }
        Ok(m)
    }

    /// Rebuilds an operator from a dense Hermitian matrix by trace projection.
    pub fn from_dense(matrix: &CMatrix) -> Result<Self> {
        let dim = matrix.dim();
        if dim == 0 || !dim.is_power_of_two() {
            return Err(Error::Numerical(alloc::format!("matrix dimension {dim} is not a power of two")));
        }
        let n = dim.trailing_zeros() as usize;
        if n > DENSE_QUBIT_CAP {
            return Err(Error::Capacity { n_qubits: n, cap: DENSE_QUBIT_CAP });
        }
        let mut terms = Vec::new();
        for x in 0..(1u64 << n) {
            for z in 0..(1u64 << n) {
                let s = PauliString::new(n, x, z, 0)?;
                let c = crate::dense::pauli_projection(matrix, &s);
                if c.im.abs() > 1e-10 {
                    return Err(Error::Numerical(alloc::format!(
                        "matrix is not Hermitian: component {s} has imaginary part {}",
                        c.im
                    )));
                }
                terms.push((s, c.re));
            }
        }
        Self::from_terms(n, terms)
    }

    fn check_size(&self, other: &Self) -> Result<()> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::SizeMismatch { expected: self.n_qubits, found: other.n_qubits });
        }
        Ok(())
    }
}

fn merge_sorted(mut raw: Vec<(PauliString, f64)>) -> Vec<(PauliString, f64)> {
    raw.sort_by_key(|a| a.0);
    let mut out: Vec<(PauliString, f64)> = Vec::with_capacity(raw.len());
    for (s, c) in raw {
        match out.last_mut() {
            Some(last) if last.0 == s => last.1 += c,
            _ => out.push((s, c)),
        }
    }
    out.retain(|(_, c)| c.abs() >= ZERO_TOL);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn op(terms: &[(&str, f64)]) -> PauliOperator {
        PauliOperator::from_labels(terms).unwrap()
    }

    #[test]
    fn commutator_x_y_is_z() {
        let c = op(&[("X", 1.0)]).commutator(&op(&[("Y", 1.0)])).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c.terms()[0].0.to_label(), "Z");
        // -i[X, Y] = -i(2iZ) = 2Z
        assert_eq!(c.terms()[0].1, 2.0);
    }

    #[test]
    fn commuting_strings_give_zero() {
        let c = op(&[("XX", 1.0)]).commutator(&op(&[("ZZ", 1.0)])).unwrap();
        assert!(c.is_empty());
    }

    #[test]
    fn commutator_x_with_x_plus_z() {
        // -i[X, X + Z] = -i[X, Z] = -i(-2iY) = -2Y
        let c = op(&[("X", 1.0)]).commutator(&op(&[("X", 1.0), ("Z", 1.0)])).unwrap();
        assert_eq!(c, op(&[("Y", -2.0)]));
        // dense check of the same expansion
        let (a, b) = (op(&[("X", 1.0)]).to_dense().unwrap(), op(&[("X", 1.0), ("Z", 1.0)]).to_dense().unwrap());
        let dense = a.matmul(&b).sub(&b.matmul(&a)).scale(Complex64::new(0.0, -1.0));
        assert!(dense.max_abs_diff(&c.to_dense().unwrap()) < 1e-14);
    }

    #[test]
    fn inner_products() {
        let (x, z) = (op(&[("X", 1.0)]), op(&[("Z", 1.0)]));
        assert_eq!(x.hs_inner(&x).unwrap(), 1.0);
        assert_eq!(x.hs_inner(&z).unwrap(), 0.0);
        assert_eq!(op(&[("X", 0.5), ("Z", 0.5)]).hs_inner(&x).unwrap(), 0.5);
        assert!(x.hs_inner(&op(&[("XX", 1.0)])).is_err());
    }

    #[test]
    fn dense_matrices() {
        let x = op(&[("X", 1.0)]).to_dense().unwrap();
        assert_eq!(x.get(0, 1), Complex64::new(1.0, 0.0));
        assert_eq!(x.get(1, 0), Complex64::new(1.0, 0.0));
        assert_eq!(x.get(0, 0), Complex64::new(0.0, 0.0));
        let id = op(&[("II", 1.0)]).to_dense().unwrap();
        assert!(id.max_abs_diff(&CMatrix::identity(4)) == 0.0);
        let z = op(&[("Z", 0.3)]).to_dense().unwrap();
        assert_eq!(z.get(0, 0).re, 0.3);
        assert_eq!(z.get(1, 1).re, -0.3);
    }

    #[test]
    fn dense_round_trip() {
        let a = op(&[("XYZ", 0.25), ("IIZ", -1.5), ("YYI", 2.0)]);
        let back = PauliOperator::from_dense(&a.to_dense().unwrap()).unwrap();
        assert_eq!(back.len(), a.len());
        for ((s, c), (t, d)) in a.terms().iter().zip(back.terms()) {
            assert_eq!(s, t);
            assert!((c - d).abs() < 1e-14);
        }
    }

    #[test]
    fn over_cap_rejected() {
        let big = op(&[("XXXXXXX", 1.0)]);
        assert!(matches!(big.to_dense(), Err(Error::Capacity { .. })));
    }

    #[test]
    fn phases_fold_into_coefficients() {
        let s: PauliString = "-XZ".parse().unwrap();
        let o = PauliOperator::from_string(s, 2.0).unwrap();
        assert_eq!(o.terms()[0].1, -2.0);
        let s: PauliString = "iXZ".parse().unwrap();
        assert!(PauliOperator::from_string(s, 1.0).is_err());
    }

    #[test]
    fn tiny_coefficients_dropped() {
        let o = op(&[("X", 1.0), ("Z", 1e-13), ("X", -1.0 + 1e-14)]);
        assert!(o.is_empty());
    }
}
