//! Small dense complex matrices for registers of at most six qubits.
//!
//! Basis index convention: qubit `q` of an `n`-qubit register is bit `n-1-q`
//! of the basis index, so qubit 0 is the leftmost tensor factor.

#[allow(unused_imports)]
use num_traits::Float;
use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;

use crate::pauli::PauliString;
use crate::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I_POW: [Complex64; 4] = [
    Complex64::new(1.0, 0.0),
    Complex64::new(0.0, 1.0),
    Complex64::new(-1.0, 0.0),
    Complex64::new(0.0, -1.0),
];

/// Square complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![ZERO; dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = ONE;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Self {
        let dim = rows.len();
        let mut m = Self::zeros(dim);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), dim, "matrix must be square");
            m.data[i * dim..(i + 1) * dim].copy_from_slice(row);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: Complex64) {
        self.data[row * self.dim + col] = value;
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        out
    }

    pub fn mat_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.dim);
        let n = self.dim;
        (0..n)
            .map(|i| self.data[i * n..(i + 1) * n].iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|a| a * factor).collect() }
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.data[j * n + i] = self.data[i * n + j].conj();
            }
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.data[i * self.dim + i]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    /// Largest `|A - A†|` entry.
    pub fn hermiticity_error(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    fn zip_with(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Self {
        assert_eq!(self.dim, other.dim);
        Self { dim: self.dim, data: self.data.iter().zip(&other.data).map(|(a, b)| f(*a, *b)).collect() }
    }
}

/// Bit masks of a Pauli string in basis-index space: `(flip, sign, i_power)`
/// such that `P|b> = i^i_power * (-1)^popcount(b & sign) |b ^ flip>`.
pub(crate) fn index_masks(s: &PauliString) -> (usize, usize, u8) {
    let n = s.n_qubits();
    let (mut flip, mut sign) = (0usize, 0usize);
    for q in 0..n {
        let bit = 1usize << (n - 1 - q);
        if (s.x_bits() >> q) & 1 == 1 {
            flip |= bit;
        }
        if (s.z_bits() >> q) & 1 == 1 {
            sign |= bit;
        }
    }
    let n_y = (s.x_bits() & s.z_bits()).count_ones() as u8;
    (flip, sign, (n_y + s.phase_exp()) % 4)
}

/// `m += coeff * P`.
pub(crate) fn add_pauli(m: &mut CMatrix, s: &PauliString, coeff: f64) {
    let (flip, sign, ipow) = index_masks(s);
    let base = I_POW[ipow as usize] * coeff;
    for b in 0..m.dim {
        let v = if (b & sign).count_ones() % 2 == 0 { base } else { -base };
        m.data[(b ^ flip) * m.dim + b] += v;
    }
}

/// `Tr(P† M) / dim`.
pub(crate) fn pauli_projection(m: &CMatrix, s: &PauliString) -> Complex64 {
    let (flip, sign, ipow) = index_masks(s);
    let mut acc = ZERO;
    for b in 0..m.dim {
        // (P)_{b^flip, b} = i^ipow (-1)^{..}; Tr(P† M) = sum_b conj(P_{b^flip,b}) M_{b^flip,b}
        let p = if (b & sign).count_ones() % 2 == 0 { I_POW[ipow as usize] } else { -I_POW[ipow as usize] };
        acc += p.conj() * m.data[(b ^ flip) * m.dim + b];
    }
    acc / m.dim as f64
}

/// Eigendecomposition `A = V diag(values) V†` of a Hermitian matrix.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    /// Ascending.
    pub values: Vec<f64>,
    /// Column `k` is the eigenvector of `values[k]`.
    pub vectors: CMatrix,
}

impl HermitianEigen {
    pub fn reconstruct(&self) -> CMatrix {
        let n = self.values.len();
        let mut out = CMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = ZERO;
                for k in 0..n {
                    acc += self.vectors.get(i, k) * self.values[k] * self.vectors.get(j, k).conj();
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    pub fn eigenvector(&self, k: usize) -> Vec<Complex64> {
        (0..self.values.len()).map(|i| self.vectors.get(i, k)).collect()
    }
}

/// Cyclic complex Jacobi eigensolver for Hermitian matrices.
pub fn hermitian_eigen(a: &CMatrix) -> Result<HermitianEigen> {
    let n = a.dim;
    if a.hermiticity_error() > 1e-10 * a.frobenius_norm().max(1.0) {
        return Err(Error::Numerical(alloc::string::String::from("matrix is not Hermitian")));
    }
    let mut m = a.clone();
    let mut v = CMatrix::identity(n);
    let scale = m.frobenius_norm().max(f64::MIN_POSITIVE);
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m.get(i, j).norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= 1e-15 * scale {
            return Ok(sorted_eigen(&m, v));
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m.get(p, q);
                let mag = apq.norm();
                if mag <= 1e-300 {
                    continue;
                }
                let phase = apq / mag; // e^{i phi}
                let (app, aqq) = (m.get(p, p).re, m.get(q, q).re);
                let tau = (aqq - app) / (2.0 * mag);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // V = D R with D = diag(1, e^{-i phi}) on (p, q)
                let vpp = Complex64::new(c, 0.0);
                let vpq = Complex64::new(s, 0.0);
                let vqp = -phase.conj() * s;
                let vqq = phase.conj() * c;
                for k in 0..n {
                    let (akp, akq) = (m.get(k, p), m.get(k, q));
                    m.set(k, p, akp * vpp + akq * vqp);
                    m.set(k, q, akp * vpq + akq * vqq);
                }
                for k in 0..n {
                    let (apk, aqk) = (m.get(p, k), m.get(q, k));
                    m.set(p, k, vpp.conj() * apk + vqp.conj() * aqk);
                    m.set(q, k, vpq.conj() * apk + vqq.conj() * aqk);
                }
                m.set(p, q, ZERO);
                m.set(q, p, ZERO);
                let (dp, dq) = (m.get(p, p).re, m.get(q, q).re);
                m.set(p, p, Complex64::new(dp, 0.0));
                m.set(q, q, Complex64::new(dq, 0.0));
                for k in 0..n {
                    let (wkp, wkq) = (v.get(k, p), v.get(k, q));
                    v.set(k, p, wkp * vpp + wkq * vqp);
                    v.set(k, q, wkp * vpq + wkq * vqq);
                }
            }
        }
    }
    Err(Error::Numerical(alloc::string::String::from("Jacobi eigensolver did not converge")))
}

fn sorted_eigen(m: &CMatrix, v: CMatrix) -> HermitianEigen {
    let n = m.dim;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| m.get(a, a).re.total_cmp(&m.get(b, b).re));
    let values = order.iter().map(|&k| m.get(k, k).re).collect();
    let mut vectors = CMatrix::zeros(n);
    for (new, &old) in order.iter().enumerate() {
        for i in 0..n {
            vectors.set(i, new, v.get(i, old));
        }
    }
    HermitianEigen { values, vectors }
}

/// `exp(A)` by scaling and squaring with a truncated Taylor series.
pub fn expm_taylor(a: &CMatrix) -> CMatrix {
    let n = a.dim;
    let norm = a.frobenius_norm();
    let mut squarings = 0u32;
    let mut scaled = norm;
    while scaled > 0.25 {
        scaled *= 0.5;
        squarings += 1;
    }
    let x = a.scale(Complex64::new(1.0 / (1u64 << squarings) as f64, 0.0));
    let mut result = CMatrix::identity(n);
    let mut term = CMatrix::identity(n);
    for k in 1..=24 {
        term = term.matmul(&x).scale(Complex64::new(1.0 / k as f64, 0.0));
        result = result.add(&term);
    }
    for _ in 0..squarings {
        result = result.matmul(&result);
    }
    result
}

/// Orthonormal basis of the span of `vectors` from a one-sided Jacobi SVD.
///
/// Columns whose singular value is at most `rel_tol` times the largest one
/// (or `rel_tol` absolute, whichever is larger) are treated as zero. The
/// number of returned vectors is the numerical rank.
pub fn svd_span(vectors: &[Vec<f64>], rel_tol: f64) -> Vec<Vec<f64>> {
    let mut cols: Vec<Vec<f64>> = vectors.to_vec();
    let k = cols.len();
    for _sweep in 0..60 {
        let mut rotated = false;
        for i in 0..k {
            for j in (i + 1)..k {
                let (alpha, beta, gamma) = {
                    let (ci, cj) = (&cols[i], &cols[j]);
                    let mut a = 0.0;
                    let mut b = 0.0;
                    let mut g = 0.0;
                    for (x, y) in ci.iter().zip(cj) {
                        a += x * x;
                        b += y * y;
                        g += x * y;
                    }
                    (a, b, g)
                };
                if gamma.abs() <= 1e-15 * (alpha * beta).sqrt() || gamma == 0.0 {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let t = if zeta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                let (lo, hi) = cols.split_at_mut(j);
                let (ci, cj) = (&mut lo[i], &mut hi[0]);
                for (x, y) in ci.iter_mut().zip(cj.iter_mut()) {
                    let (xo, yo) = (*x, *y);
                    *x = c * xo - s * yo;
                    *y = s * xo + c * yo;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let norms: Vec<f64> = cols.iter().map(|c| c.iter().map(|x| x * x).sum::<f64>().sqrt()).collect();
    let largest = norms.iter().cloned().fold(0.0, f64::max);
    let cutoff = rel_tol * largest.max(1.0);
    cols.into_iter()
        .zip(norms)
        .filter(|(_, nrm)| *nrm > cutoff)
        .map(|(c, nrm)| c.into_iter().map(|x| x / nrm).collect())
        .collect()
}
