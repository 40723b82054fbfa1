//! Dynamical Lie algebra closure of a set of Hermitian Pauli-sum generators.
//!
//! Each pass commutes every element added in the previous pass with every
//! element found so far and keeps the independent results. The pass count is
//! the commutator order: entry `k` of [`ClosureTrace::rank_per_iteration`] is
//! the rank after order-`k` brackets.
//!
//! Independence is decided exactly by default ([`RankMethod::Exact`]), by
//! elimination over a large prime field into which the `f64` coefficients map
//! without rounding. [`RankMethod::GramSchmidt`] instead thresholds the
//! residual norm of modified Gram-Schmidt with re-orthogonalization. The two
//! agree on well-conditioned inputs; on sums of terms with very different
//! magnitudes genuine residuals can fall to the threshold and the numerical
//! rank drifts. The returned basis is orthonormal in both cases.

#[allow(unused_imports)]
use num_traits::Float;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::dense::{svd_span, CMatrix};
use crate::modular::{DenseMod, Echelon, ModSpace, SparseMod, WordTable};
use crate::operator::PauliOperator;
use crate::pauli::PauliString;
use crate::{Error, Result, DENSE_QUBIT_CAP};

/// Residual norm above which a normalized candidate counts as a new direction.
pub const INDEPENDENCE_TOL: f64 = 1e-9;

/// Relative singular-value cutoff of [`dense_closure_oracle`].
pub const ORACLE_SVD_TOL: f64 = 1e-8;

/// Coefficients below this are dropped while orthogonalizing.
const DROP_TOL: f64 = 1e-15;

#[derive(Clone, Debug, PartialEq)]
pub struct ClosureTrace {
    pub n_qubits: usize,
    /// Orthonormal basis in insertion order.
    pub basis: Vec<PauliOperator>,
    /// Entry 0 is the rank of the generator span, entry `k` the rank after pass `k`.
    pub rank_per_iteration: Vec<usize>,
    /// The traceless part reached `4^n - 1`, or the rank reached the caller's
    /// bound, so no further growth is possible.
    pub reached_cap: bool,
    /// Stopped by `max_iterations` while still growing.
    pub truncated: bool,
    /// The identity lies in the span.
    pub has_identity: bool,
}

impl ClosureTrace {
    pub fn final_rank(&self) -> usize {
        self.basis.len()
    }

    /// Rank after pass `k`; converged traces stay flat past their last entry.
    pub fn rank_at(&self, k: usize) -> usize {
        let last = self.rank_per_iteration.len() - 1;
        self.rank_per_iteration[k.min(last)]
    }

    pub fn contains_identity(&self) -> bool {
        self.has_identity
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ControllabilityReport {
    pub lie_rank: usize,
    /// Rank with the identity direction projected out.
    pub traceless_rank: usize,
    /// `traceless_rank == 4^n - 1`.
    pub fully_controllable: bool,
}

/// `4^n - 1`, saturating at `u128::MAX` for 64 qubits.
pub fn su_dimension(n_qubits: usize) -> u128 {
    if 2 * n_qubits >= 128 {
        u128::MAX
    } else {
        (1u128 << (2 * n_qubits)) - 1
    }
}

/// Largest qubit count closed with dense coefficient vectors.
const DENSE_SPACE_QUBITS: usize = 5;

/// Coefficient storage used by the closure loop.
trait Space {
    type V: Clone;
    fn encode(&self, op: &PauliOperator) -> Self::V;
    fn to_op(&self, v: &Self::V) -> PauliOperator;
    fn norm(&self, v: &Self::V) -> f64;
    fn scale(&self, v: &Self::V, a: f64) -> Self::V;
    fn dot(&self, a: &Self::V, b: &Self::V) -> f64;
    /// `r - d * b`.
    fn sub_scaled(&self, r: Self::V, d: f64, b: &Self::V) -> Self::V;
    fn commutator(&self, a: &Self::V, b: &Self::V) -> Self::V;
    fn first_coeff(&self, v: &Self::V) -> f64;
    fn identity_coeff(&self, v: &Self::V) -> f64;
    fn order(&self, a: &Self::V, b: &Self::V) -> Ordering;
}

struct SparseSpace;

impl Space for SparseSpace {
    type V = PauliOperator;
    fn encode(&self, op: &PauliOperator) -> PauliOperator {
        op.clone()
    }
    fn to_op(&self, v: &PauliOperator) -> PauliOperator {
        v.clone()
    }
    fn norm(&self, v: &PauliOperator) -> f64 {
        v.norm()
    }
    fn scale(&self, v: &PauliOperator, a: f64) -> PauliOperator {
        v.scale(a)
    }
    fn dot(&self, a: &PauliOperator, b: &PauliOperator) -> f64 {
        a.dot_unchecked(b)
    }
    fn sub_scaled(&self, r: PauliOperator, d: f64, b: &PauliOperator) -> PauliOperator {
        r.axpy_drop(-d, b, DROP_TOL)
    }
    fn commutator(&self, a: &PauliOperator, b: &PauliOperator) -> PauliOperator {
        a.commutator_unchecked(b)
    }
    fn first_coeff(&self, v: &PauliOperator) -> f64 {
        v.terms().first().map_or(0.0, |t| t.1)
    }
    fn identity_coeff(&self, v: &PauliOperator) -> f64 {
        v.identity_coeff()
    }
    fn order(&self, a: &PauliOperator, b: &PauliOperator) -> Ordering {
        for ((s, c), (t, d)) in a.terms().iter().zip(b.terms()) {
            let ord = s.cmp(t).then_with(|| c.total_cmp(d));
            if ord != Ordering::Equal {
                return ord;
            }
        }
        a.len().cmp(&b.len())
    }
}

/// All `4^n` coefficients, indexed in lexicographic word order.
struct DenseSpace<'a> {
    n_qubits: usize,
    table: &'a WordTable,
}

impl Space for DenseSpace<'_> {
    type V = Vec<f64>;
    fn encode(&self, op: &PauliOperator) -> Vec<f64> {
        let mut v = alloc::vec![0.0; self.table.words.len()];
        for (s, c) in op.terms() {
            v[self.table.index(s)] = *c;
        }
        v
    }
    fn to_op(&self, v: &Vec<f64>) -> PauliOperator {
        let terms: Vec<(PauliString, f64)> = v
            .iter()
            .enumerate()
            .filter(|(_, c)| c.abs() >= crate::ZERO_TOL)
            .map(|(i, c)| (self.table.words[i], *c))
            .collect();
        PauliOperator::from_terms(self.n_qubits, terms).expect("finite real coefficients")
    }
    fn norm(&self, v: &Vec<f64>) -> f64 {
        self.dot(v, v).sqrt()
    }
    fn scale(&self, v: &Vec<f64>, a: f64) -> Vec<f64> {
        v.iter().map(|c| c * a).collect()
    }
    fn dot(&self, a: &Vec<f64>, b: &Vec<f64>) -> f64 {
        let mut acc = [0.0; 4];
        let (ca, cb) = (a.chunks_exact(4), b.chunks_exact(4));
        let tail: f64 = ca.remainder().iter().zip(cb.remainder()).map(|(x, y)| x * y).sum();
        for (x, y) in ca.zip(cb) {
            for k in 0..4 {
                acc[k] += x[k] * y[k];
            }
        }
        (acc[0] + acc[1]) + (acc[2] + acc[3]) + tail
    }
    fn sub_scaled(&self, mut r: Vec<f64>, d: f64, b: &Vec<f64>) -> Vec<f64> {
        for (x, y) in r.iter_mut().zip(b) {
            *x -= d * y;
        }
        r
    }
    fn commutator(&self, a: &Vec<f64>, b: &Vec<f64>) -> Vec<f64> {
        let nz = |v: &Vec<f64>| v.iter().enumerate().filter(|(_, c)| **c != 0.0).map(|(i, c)| (i, *c)).collect::<Vec<_>>();
        let (na, nb) = (nz(a), nz(b));
        let words = &self.table.words;
        let mut out = alloc::vec![0.0; words.len()];
        for &(i, x) in &na {
            let p = &words[i];
            for &(j, y) in &nb {
                let q = &words[j];
                if p.commutes_with(q) {
                    continue;
                }
                let r = p.multiply_unchecked(q);
                let sign = if r.phase_exp() == 1 { 2.0 } else { -2.0 };
                out[self.table.index(&r)] += sign * x * y;
            }
        }
        out
    }
    fn first_coeff(&self, v: &Vec<f64>) -> f64 {
        v.iter().copied().find(|c| *c != 0.0).unwrap_or(0.0)
    }
    fn identity_coeff(&self, v: &Vec<f64>) -> f64 {
        v[0]
    }
    fn order(&self, a: &Vec<f64>, b: &Vec<f64>) -> Ordering {
        a.iter().zip(b).map(|(x, y)| x.total_cmp(y)).find(|o| *o != Ordering::Equal).unwrap_or(Ordering::Equal)
    }
}

struct Basis<'a, S: Space> {
    space: &'a S,
    vectors: Vec<S::V>,
    has_identity: bool,
}

impl<S: Space> Basis<'_, S> {
    fn traceless_rank(&self) -> usize {
        self.vectors.len() - self.has_identity as usize
    }

    /// Appends the unit-norm candidate if it is independent of the basis.
    fn try_append(&mut self, candidate: &S::V) -> bool {
        let sp = self.space;
        let mut residual = candidate.clone();
        let mut norm = 0.0;
        for _pass in 0..2 {
            for b in &self.vectors {
                let d = sp.dot(&residual, b);
                if d != 0.0 {
                    residual = sp.sub_scaled(residual, d, b);
                }
            }
            // projection never grows the norm, so a first-pass reject is final
            norm = sp.norm(&residual);
            if norm <= INDEPENDENCE_TOL {
                return false;
            }
        }
        self.vectors.push(sp.scale(&residual, 1.0 / norm));
        if !self.has_identity {
            let captured: f64 = self.vectors.iter().map(|b| sp.identity_coeff(b).powi(2)).sum();
            self.has_identity = 1.0 - captured <= INDEPENDENCE_TOL;
        }
        true
    }

    /// Unit norm with the first coefficient positive.
    fn normalize(&self, v: &S::V) -> Option<S::V> {
        let sp = self.space;
        let norm = sp.norm(v);
        if norm <= INDEPENDENCE_TOL {
            return None;
        }
        let sign = if sp.first_coeff(v) < 0.0 { -1.0 } else { 1.0 };
        Some(sp.scale(v, sign / norm))
    }
}

fn check_generators(generators: &[PauliOperator]) -> Result<usize> {
    let n = generators.first().ok_or(Error::EmptyGenerators)?.n_qubits();
    if let Some(g) = generators.iter().find(|g| g.n_qubits() != n) {
        return Err(Error::SizeMismatch { expected: n, found: g.n_qubits() });
    }
    Ok(n)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum RankMethod {
    /// Exact elimination over `F_p`, `p = 2^61 - 1`.
    #[default]
    Exact,
    /// Gram-Schmidt residual norm above [`INDEPENDENCE_TOL`].
    GramSchmidt,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ClosureOptions {
    /// Stop after this many passes.
    pub max_iterations: Option<usize>,
    /// Known upper bound on the rank, such as the rank of an algebra that
    /// contains this one. Reaching it ends the closure like the `su` cap does.
    pub rank_bound: Option<usize>,
    pub method: RankMethod,
}

/// Runs the commutator closure of `generators`.
///
/// Stops when a pass adds nothing, when the traceless rank hits `4^n - 1`
/// (`reached_cap`), or after `max_iterations` passes (`truncated` if the last
/// pass still grew the basis). Zero generators are ignored.
pub fn close_algebra(generators: &[PauliOperator], max_iterations: Option<usize>) -> Result<ClosureTrace> {
    close_algebra_with(generators, &ClosureOptions { max_iterations, ..Default::default() })
}

pub fn close_algebra_with(generators: &[PauliOperator], options: &ClosureOptions) -> Result<ClosureTrace> {
    let n = check_generators(generators)?;
    let table = (n <= DENSE_SPACE_QUBITS).then(|| WordTable::new(n));
    match (options.method, &table) {
        (RankMethod::Exact, Some(t)) => Ok(run_exact(&DenseMod { table: t }, n, generators, options)),
        (RankMethod::Exact, None) => Ok(run_exact(&SparseMod { n_qubits: n }, n, generators, options)),
        (RankMethod::GramSchmidt, Some(t)) => run_closure(&DenseSpace { n_qubits: n, table: t }, n, generators, options),
        (RankMethod::GramSchmidt, None) => run_closure(&SparseSpace, n, generators, options),
    }
}

/// Dimension of the generated algebra. Left-normed brackets
/// `[g_1, [g_2, ... [g_k-1, g_k]]]` of generators span it, so only brackets
/// with a generator on the left are formed.
fn exact_dimension<S: ModSpace>(space: &S, generators: &[S::V], stop_at: usize) -> usize {
    let mut ech = Echelon::new(space);
    let mut elements: Vec<S::V> = Vec::new();
    for g in generators {
        if ech.insert(g) {
            elements.push(g.clone());
        }
    }
    let mut next = 0;
    while next < elements.len() && ech.rank() < stop_at {
        for g in generators {
            let c = space.commutator(g, &elements[next]);
            if ech.insert(&c) {
                elements.push(c);
                if ech.rank() >= stop_at {
                    break;
                }
            }
        }
        next += 1;
    }
    ech.rank()
}

fn identity_op(n: usize) -> PauliOperator {
    PauliOperator::from_string(PauliString::identity(n).expect("validated qubit count"), 1.0)
        .expect("unit coefficient")
}

fn unit(op: &PauliOperator) -> PauliOperator {
    let norm = op.norm();
    if norm > 0.0 {
        op.scale(1.0 / norm)
    } else {
        op.clone()
    }
}

/// Modified Gram-Schmidt, twice, without a threshold.
fn orthonormalize(vectors: &[PauliOperator]) -> Vec<PauliOperator> {
    let mut out: Vec<PauliOperator> = Vec::with_capacity(vectors.len());
    for v in vectors {
        let mut r = v.clone();
        for _pass in 0..2 {
            for b in &out {
                r = r.axpy_drop(-r.dot_unchecked(b), b, DROP_TOL);
            }
        }
        out.push(unit(&r));
    }
    out.iter().map(PauliOperator::cleaned).collect()
}

struct ExactState<'a, S: ModSpace> {
    identity: S::V,
    ech: Echelon<'a, S>,
    elements: Vec<S::V>,
    /// Floating-point copies of `elements`, normalized.
    floats: Vec<PauliOperator>,
    has_identity: bool,
}

impl<S: ModSpace> ExactState<'_, S> {
    fn accept(&mut self, v: S::V, float: impl FnOnce(&[PauliOperator]) -> PauliOperator) -> bool {
        if !self.ech.insert(&v) {
            return false;
        }
        self.elements.push(v);
        let f = float(&self.floats);
        self.floats.push(f);
        if !self.has_identity {
            self.has_identity = self.ech.contains(&self.identity);
        }
        true
    }
}

fn run_exact<S: ModSpace>(space: &S, n: usize, generators: &[PauliOperator], options: &ClosureOptions) -> ClosureTrace {
    let cap = su_dimension(n);
    let full_space = if 2 * n < usize::BITS as usize { 1usize << (2 * n) } else { usize::MAX };
    let gens: Vec<(S::V, PauliOperator)> =
        generators.iter().filter(|g| !g.is_empty()).map(|g| (space.encode(g), unit(g))).collect();
    let bound = options.rank_bound.unwrap_or(full_space).min(full_space);
    // with the final dimension known the confirming pass can be skipped
    let dimension = options.max_iterations.is_none().then(|| {
        let mods: Vec<S::V> = gens.iter().map(|g| g.0.clone()).collect();
        exact_dimension(space, &mods, bound)
    });

    let mut st = ExactState {
        identity: space.identity(),
        ech: Echelon::new(space),
        elements: Vec::new(),
        floats: Vec::new(),
        has_identity: false,
    };
    for (m, f) in &gens {
        st.accept(m.clone(), |_| f.clone());
    }
    let at_cap = |st: &ExactState<S>| {
        let rank = st.elements.len();
        (rank - st.has_identity as usize) as u128 >= cap || rank >= bound
    };
    let converged = |st: &ExactState<S>| dimension.is_some_and(|d| st.elements.len() >= d);
    let mut ranks = alloc::vec![st.elements.len()];
    let mut reached_cap = at_cap(&st);
    let mut truncated = false;
    let mut fresh_start = 0;
    let mut passes = 0;

    while !reached_cap && !converged(&st) && fresh_start < st.elements.len() {
        if options.max_iterations.is_some_and(|max| passes >= max) {
            truncated = true;
            break;
        }
        passes += 1;
        let end = st.elements.len();
        'pass: for i in fresh_start..end {
            for j in 0..end {
                if j >= fresh_start && j <= i {
                    continue;
                }
                let c = space.commutator(&st.elements[i], &st.elements[j]);
                if st.accept(c, |f| unit(&f[i].commutator_unchecked(&f[j]))) {
                    if at_cap(&st) {
                        reached_cap = true;
                    }
                    if reached_cap || converged(&st) {
                        break 'pass;
                    }
                }
            }
        }
        ranks.push(st.elements.len());
        fresh_start = end;
    }
    if converged(&st) && !reached_cap {
        ranks.push(st.elements.len());
    }
    // su is perfect, so a traceless part spanning it frees any identity component
    if reached_cap
        && !st.has_identity
        && st.elements.len() as u128 >= cap
        && st.elements.iter().any(|v| space.identity_coeff(v) != 0)
    {
        let id = identity_op(n);
        st.accept(st.identity.clone(), |_| id);
        *ranks.last_mut().expect("generator entry") = st.elements.len();
    }

    ClosureTrace {
        n_qubits: n,
        basis: orthonormalize(&st.floats),
        rank_per_iteration: ranks,
        reached_cap,
        truncated,
        has_identity: st.has_identity,
    }
}

fn run_closure<S: Space>(
    space: &S,
    n: usize,
    generators: &[PauliOperator],
    options: &ClosureOptions,
) -> Result<ClosureTrace> {
    let cap = su_dimension(n);
    let mut basis = Basis { space, vectors: Vec::new(), has_identity: false };
    let full = |b: &Basis<S>| {
        b.traceless_rank() as u128 >= cap || options.rank_bound.is_some_and(|r| b.vectors.len() >= r)
    };
    for g in generators {
        if let Some(unit) = basis.normalize(&space.encode(g)) {
            basis.try_append(&unit);
        }
    }
    let mut ranks = alloc::vec![basis.vectors.len()];
    let mut reached_cap = full(&basis);
    let mut truncated = false;
    let mut fresh_start = 0;
    let mut passes = 0;

    while !reached_cap && fresh_start < basis.vectors.len() {
        if options.max_iterations.is_some_and(|max| passes >= max) {
            truncated = true;
            break;
        }
        passes += 1;
        let end = basis.vectors.len();
        let mut candidates = Vec::new();
        for i in fresh_start..end {
            for j in 0..end {
                // pairs inside the fresh block are visited once
                if j >= fresh_start && j <= i {
                    continue;
                }
                let c = space.commutator(&basis.vectors[i], &basis.vectors[j]);
                if let Some(unit) = basis.normalize(&c) {
                    candidates.push(unit);
                }
            }
        }
        candidates.sort_by(|a, b| space.order(a, b));
        candidates.dedup_by(|a, b| space.order(a, b) == Ordering::Equal);
        for c in &candidates {
            basis.try_append(c);
            if full(&basis) {
                reached_cap = true;
                break;
            }
        }
        ranks.push(basis.vectors.len());
        fresh_start = end;
    }
    if reached_cap
        && !basis.has_identity
        && basis.vectors.len() as u128 >= cap
        && basis.vectors.iter().any(|v| space.identity_coeff(v).abs() > INDEPENDENCE_TOL)
    {
        basis.try_append(&space.encode(&identity_op(n)));
        *ranks.last_mut().expect("generator entry") = basis.vectors.len();
    }

    Ok(ClosureTrace {
        n_qubits: n,
        basis: basis.vectors.iter().map(|v| space.to_op(v).cleaned()).collect(),
        rank_per_iteration: ranks,
        reached_cap,
        truncated,
        has_identity: basis.has_identity,
    })
}

/// Lie rank, traceless rank and the full-controllability flag of a finished closure.
pub fn controllability(trace: &ClosureTrace) -> Result<ControllabilityReport> {
    if trace.truncated {
        return Err(Error::TruncatedClosure {
            iterations: trace.rank_per_iteration.len() - 1,
            rank: trace.final_rank(),
        });
    }
    let has_identity = trace.contains_identity();
    let lie_rank = trace.final_rank();
    let traceless_rank = lie_rank - has_identity as usize;
    Ok(ControllabilityReport {
        lie_rank,
        traceless_rank,
        fully_controllable: traceless_rank as u128 == su_dimension(trace.n_qubits),
    })
}

fn realify(m: &CMatrix) -> Vec<f64> {
    m.as_slice().iter().map(|z| z.re).chain(m.as_slice().iter().map(|z| z.im)).collect()
}

fn complexify(v: &[f64], dim: usize) -> CMatrix {
    let half = v.len() / 2;
    let mut m = CMatrix::zeros(dim);
    for r in 0..dim {
        for c in 0..dim {
            let k = r * dim + c;
            m.set(r, c, num_complex::Complex64::new(v[k], v[half + k]));
        }
    }
    m
}

/// Final Lie rank from an independent dense computation: matrix commutators
/// `-i(AB - BA)` of each generator with the directions found in the previous
/// round, kept while the numerical rank of the real vectorizations grows.
pub fn dense_closure_oracle(generators: &[PauliOperator]) -> Result<usize> {
    let n = check_generators(generators)?;
    if n > DENSE_QUBIT_CAP {
        return Err(Error::Capacity { n_qubits: n, cap: DENSE_QUBIT_CAP });
    }
    let dim = 1usize << n;
    let gens = generators.iter().map(|g| g.to_dense()).collect::<Result<Vec<_>>>()?;
    let mut basis = Vec::new();
    let mut chunk: Vec<Vec<f64>> = gens.iter().map(realify).collect();
    absorb(&mut basis, &mut chunk);
    let mut frontier = 0..basis.len();
    while !frontier.is_empty() && basis.len() < dim * dim {
        let start = basis.len();
        for k in frontier {
            let m = complexify(&basis[k], dim);
            for g in &gens {
                let c = g.matmul(&m).sub(&m.matmul(g)).scale(num_complex::Complex64::new(0.0, -1.0));
                chunk.push(realify(&c));
                if chunk.len() == 32 {
                    absorb(&mut basis, &mut chunk);
                }
            }
        }
        absorb(&mut basis, &mut chunk);
        frontier = start..basis.len();
    }
    Ok(basis.len())
}

/// Appends an orthonormal basis of the part of `chunk` outside `basis`.
fn absorb(basis: &mut Vec<Vec<f64>>, chunk: &mut Vec<Vec<f64>>) {
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    let mut residuals = Vec::new();
    for mut v in chunk.drain(..) {
        let norm = dot(&v, &v).sqrt();
        if norm <= ORACLE_SVD_TOL {
            continue;
        }
        v.iter_mut().for_each(|x| *x /= norm);
        for _pass in 0..2 {
            for b in basis.iter() {
                let d = dot(&v, b);
                v.iter_mut().zip(b).for_each(|(x, y)| *x -= d * y);
            }
        }
        residuals.push(v);
    }
    basis.extend(svd_span(&residuals, ORACLE_SVD_TOL));
}

#[cfg(test)]
mod tests {
    use super::*;

    fn op(terms: &[(&str, f64)]) -> PauliOperator {
        PauliOperator::from_labels(terms).unwrap()
    }

    #[test]
    fn identity_component_survives_the_cap() {
        let gens = [op(&[("I", 0.5), ("Z", 0.5)]), op(&[("X", 0.5)])];
        for method in [RankMethod::Exact, RankMethod::GramSchmidt] {
            let t = close_algebra_with(&gens, &ClosureOptions { method, ..Default::default() }).unwrap();
            assert_eq!(t.final_rank(), 4);
            assert!(t.contains_identity() && t.reached_cap);
        }
    }

    #[test]
    fn single_x_has_rank_one() {
        let t = close_algebra(&[op(&[("X", 1.0)])], None).unwrap();
        assert_eq!(t.final_rank(), 1);
        assert_eq!(t.rank_per_iteration, [1, 1]);
        let r = controllability(&t).unwrap();
        assert!(!r.fully_controllable);
        assert_eq!(r.traceless_rank, 1);
    }

    #[test]
    fn x_and_y_generate_su2() {
        let t = close_algebra(&[op(&[("X", 1.0)]), op(&[("Y", 1.0)])], None).unwrap();
        assert_eq!(t.final_rank(), 3);
        assert!(t.reached_cap);
        let r = controllability(&t).unwrap();
        assert_eq!(r.traceless_rank, 3);
        assert!(r.fully_controllable);
    }

    #[test]
    fn joint_control_is_weaker_than_separate() {
        let joint = close_algebra(&[op(&[("X", 1.0), ("Z", 1.0)])], None).unwrap();
        assert_eq!(joint.final_rank(), 1);
        assert!(!controllability(&joint).unwrap().fully_controllable);
        let separate = close_algebra(&[op(&[("X", 1.0)]), op(&[("Z", 1.0)])], None).unwrap();
        assert!(controllability(&separate).unwrap().fully_controllable);
    }

    #[test]
    fn full_two_qubit_group() {
        let all: Vec<_> = crate::models::two_qubit_pauli_set()
            .into_iter()
            .map(|s| PauliOperator::from_string(s, 1.0).unwrap())
            .collect();
        let t = close_algebra(&all, None).unwrap();
        let r = controllability(&t).unwrap();
        assert_eq!(r.lie_rank, 16);
        assert_eq!(r.traceless_rank, 15);
        assert!(r.fully_controllable);
    }

    #[test]
    fn dependent_and_zero_generators() {
        let t = close_algebra(
            &[op(&[("X", 1.0)]), op(&[("X", -2.0)]), PauliOperator::zero(1).unwrap()],
            None,
        )
        .unwrap();
        assert_eq!(t.final_rank(), 1);
    }

    #[test]
    fn errors() {
        assert_eq!(close_algebra(&[], None), Err(Error::EmptyGenerators));
        assert!(matches!(
            close_algebra(&[op(&[("X", 1.0)]), op(&[("XX", 1.0)])], None),
            Err(Error::SizeMismatch { .. })
        ));
    }

    #[test]
    fn truncation_is_flagged() {
        let gens = [op(&[("XI", 1.0)]), op(&[("YZ", 1.0)]), op(&[("ZX", 1.0)])];
        let full = close_algebra(&gens, None).unwrap();
        assert!(full.rank_per_iteration.len() > 2);
        let cut = close_algebra(&gens, Some(1)).unwrap();
        assert!(cut.truncated);
        assert_eq!(cut.rank_per_iteration.len(), 2);
        assert!(matches!(controllability(&cut), Err(Error::TruncatedClosure { .. })));
    }

    #[test]
    fn oracle_matches_on_small_cases() {
        assert_eq!(dense_closure_oracle(&[op(&[("X", 1.0)])]).unwrap(), 1);
        assert_eq!(dense_closure_oracle(&[op(&[("X", 1.0)]), op(&[("Y", 1.0)])]).unwrap(), 3);
        let gens = [op(&[("XI", 1.0), ("ZZ", 0.5)]), op(&[("IY", 1.0)])];
        assert_eq!(dense_closure_oracle(&gens).unwrap(), close_algebra(&gens, None).unwrap().final_rank());
    }
}
