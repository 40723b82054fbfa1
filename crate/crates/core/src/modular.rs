//! Exact linear algebra over the prime field `F_p`, `p = 2^61 - 1`.
//!
//! Every finite `f64` is a dyadic rational, so a real Pauli sum maps exactly
//! into `F_p` (away from the negligible set of inputs whose numerators share a
//! factor with `p`). Ranks computed here are ranks over the rationals except
//! with probability of order `1/p` per independence decision.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::operator::PauliOperator;
use crate::pauli::PauliString;

pub(crate) const P: u64 = (1 << 61) - 1;

#[inline]
fn fold(x: u64) -> u64 {
    let s = (x & P) + (x >> 61);
    if s >= P {
        s - P
    } else {
        s
    }
}

#[inline]
pub(crate) fn mul(a: u64, b: u64) -> u64 {
    let x = a as u128 * b as u128;
    fold((x as u64 & P) + (x >> 61) as u64)
}

#[inline]
pub(crate) fn add(a: u64, b: u64) -> u64 {
    fold(a + b)
}

#[inline]
pub(crate) fn sub(a: u64, b: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + P - b
    }
}

fn pow(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mul(r, a);
        }
        a = mul(a, a);
        e >>= 1;
    }
    r
}

pub(crate) fn inv(a: u64) -> u64 {
    pow(a, P - 2)
}

/// Image of a finite `f64` in `F_p`; `2^61 = 1` makes powers of two a shift.
pub(crate) fn from_f64(x: f64) -> u64 {
    if x == 0.0 {
        return 0;
    }
    let bits = x.to_bits();
    let biased = ((bits >> 52) & 0x7ff) as i64;
    let frac = bits & ((1 << 52) - 1);
    let (mant, exp) = if biased == 0 { (frac, -1074) } else { (frac | (1 << 52), biased - 1075) };
    let v = mul(mant, 1 << exp.rem_euclid(61));
    if x < 0.0 {
        sub(0, v)
    } else {
        v
    }
}

/// Vector storage for the exact closure.
pub(crate) trait ModSpace {
    type V: Clone;
    type K: Ord + Copy;
    fn encode(&self, op: &PauliOperator) -> Self::V;
    fn identity(&self) -> Self::V;
    fn identity_coeff(&self, v: &Self::V) -> u64;
    /// `[a, b]` up to the overall factor `-i`.
    fn commutator(&self, a: &Self::V, b: &Self::V) -> Self::V;
    fn leading(&self, v: &Self::V) -> Option<(Self::K, u64)>;
    fn scale(&self, v: &mut Self::V, s: u64);
    /// `v - f * row`.
    fn sub_scaled(&self, v: &mut Self::V, f: u64, row: &Self::V);
}

/// All `4^n` words in lexicographic order, with the inverse map.
pub(crate) struct WordTable {
    n_qubits: usize,
    pub(crate) words: Vec<PauliString>,
    /// `(x << n) | z` to position.
    index_of: Vec<u32>,
}

impl WordTable {
    pub(crate) fn new(n_qubits: usize) -> Self {
        let size = 1usize << (2 * n_qubits);
        let mut words = Vec::with_capacity(size);
        let mut index_of = vec![0u32; size];
        for idx in 0..size {
            let (mut x, mut z) = (0u64, 0u64);
            for q in 0..n_qubits {
                let code = (idx >> (2 * (n_qubits - 1 - q))) & 3;
                if code == 1 || code == 2 {
                    x |= 1 << q;
                }
                if code == 2 || code == 3 {
                    z |= 1 << q;
                }
            }
            words.push(PauliString::new(n_qubits, x, z, 0).expect("qubit count within range"));
            index_of[((x << n_qubits) | z) as usize] = idx as u32;
        }
        Self { n_qubits, words, index_of }
    }

    #[inline]
    pub(crate) fn index(&self, s: &PauliString) -> usize {
        self.index_of[((s.x_bits() << self.n_qubits) | s.z_bits()) as usize] as usize
    }
}

/// Dense coefficients indexed by lexicographic word order.
pub(crate) struct DenseMod<'a> {
    pub(crate) table: &'a WordTable,
}

impl ModSpace for DenseMod<'_> {
    type V = Vec<u64>;
    type K = usize;
    fn encode(&self, op: &PauliOperator) -> Vec<u64> {
        let mut v = vec![0; self.table.words.len()];
        for (s, c) in op.terms() {
            v[self.table.index(s)] = from_f64(*c);
        }
        v
    }
    fn identity(&self) -> Vec<u64> {
        let mut v = vec![0; self.table.words.len()];
        v[0] = 1;
        v
    }
    fn identity_coeff(&self, v: &Vec<u64>) -> u64 {
        v[0]
    }
    fn commutator(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        let nz = |v: &Vec<u64>| v.iter().enumerate().filter(|(_, c)| **c != 0).map(|(i, c)| (i, *c)).collect::<Vec<_>>();
        let (na, nb) = (nz(a), nz(b));
        let words = &self.table.words;
        let mut out = vec![0; words.len()];
        for &(i, x) in &na {
            let p = &words[i];
            for &(j, y) in &nb {
                let q = &words[j];
                if p.commutes_with(q) {
                    continue;
                }
                let r = p.multiply_unchecked(q);
                let k = self.table.index(&r);
                let t = mul(x, y);
                out[k] = if r.phase_exp() == 1 { add(out[k], t) } else { sub(out[k], t) };
            }
        }
        out
    }
    fn leading(&self, v: &Vec<u64>) -> Option<(usize, u64)> {
        v.iter().position(|c| *c != 0).map(|k| (k, v[k]))
    }
    fn scale(&self, v: &mut Vec<u64>, s: u64) {
        for c in v.iter_mut() {
            *c = mul(*c, s);
        }
    }
    fn sub_scaled(&self, v: &mut Vec<u64>, f: u64, row: &Vec<u64>) {
        for (c, r) in v.iter_mut().zip(row) {
            if *r != 0 {
                *c = sub(*c, mul(f, *r));
            }
        }
    }
}

/// Sorted `(word, coefficient)` lists without zeros.
pub(crate) struct SparseMod {
    pub(crate) n_qubits: usize,
}

fn merge(mut raw: Vec<(PauliString, u64)>) -> Vec<(PauliString, u64)> {
    raw.sort_unstable_by_key(|a| a.0);
    let mut out: Vec<(PauliString, u64)> = Vec::with_capacity(raw.len());
    for (s, c) in raw {
        match out.last_mut() {
            Some(last) if last.0 == s => last.1 = add(last.1, c),
            _ => out.push((s, c)),
        }
    }
    out.retain(|t| t.1 != 0);
    out
}

impl ModSpace for SparseMod {
    type V = Vec<(PauliString, u64)>;
    type K = PauliString;
    fn encode(&self, op: &PauliOperator) -> Self::V {
        op.terms().iter().map(|(s, c)| (*s, from_f64(*c))).filter(|t| t.1 != 0).collect()
    }
    fn identity(&self) -> Self::V {
        vec![(PauliString::identity(self.n_qubits).expect("validated qubit count"), 1)]
    }
    fn identity_coeff(&self, v: &Self::V) -> u64 {
        v.iter().find(|t| t.0.weight() == 0).map_or(0, |t| t.1)
    }
    fn commutator(&self, a: &Self::V, b: &Self::V) -> Self::V {
        let mut raw = Vec::new();
        for (p, x) in a {
            for (q, y) in b {
                if p.commutes_with(q) {
                    continue;
                }
                let r = p.multiply_unchecked(q);
                let t = mul(*x, *y);
                raw.push((r.word(), if r.phase_exp() == 1 { t } else { sub(0, t) }));
            }
        }
        merge(raw)
    }
    fn leading(&self, v: &Self::V) -> Option<(PauliString, u64)> {
        v.first().copied()
    }
    fn scale(&self, v: &mut Self::V, s: u64) {
        for t in v.iter_mut() {
            t.1 = mul(t.1, s);
        }
    }
    fn sub_scaled(&self, v: &mut Self::V, f: u64, row: &Self::V) {
        let mut raw = core::mem::take(v);
        raw.extend(row.iter().map(|(s, c)| (*s, sub(0, mul(f, *c)))));
        *v = merge(raw);
    }
}

/// Rows in semi-echelon form, each with leading coefficient one.
pub(crate) struct Echelon<'a, S: ModSpace> {
    space: &'a S,
    rows: BTreeMap<S::K, S::V>,
}

impl<'a, S: ModSpace> Echelon<'a, S> {
    pub(crate) fn new(space: &'a S) -> Self {
        Self { space, rows: BTreeMap::new() }
    }

    pub(crate) fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, mut v: S::V) -> Option<(S::K, S::V)> {
        while let Some((k, c)) = self.space.leading(&v) {
            match self.rows.get(&k) {
                Some(row) => self.space.sub_scaled(&mut v, c, row),
                None => {
                    self.space.scale(&mut v, inv(c));
                    return Some((k, v));
                }
            }
        }
        None
    }

    pub(crate) fn contains(&self, v: &S::V) -> bool {
        self.reduce(v.clone()).is_none()
    }

    /// Adds `v` if it is independent of the rows.
    pub(crate) fn insert(&mut self, v: &S::V) -> bool {
        match self.reduce(v.clone()) {
            Some((k, row)) => {
                self.rows.insert(k, row);
                true
            }
            None => false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_arithmetic() {
        assert_eq!(mul(P - 1, P - 1), 1);
        assert_eq!(add(P - 1, 5), 4);
        assert_eq!(sub(3, 5), P - 2);
        assert_eq!(mul(inv(12345), 12345), 1);
    }

    #[test]
    fn dyadic_images() {
        assert_eq!(from_f64(3.0), 3);
        assert_eq!(from_f64(-2.0), P - 2);
        assert_eq!(mul(from_f64(0.25), 4), 1);
        assert_eq!(mul(from_f64(-0.375), 8), P - 3);
        // 0.1 and 3 * 0.1 as exact binary fractions
        let tenth = from_f64(0.1);
        assert_ne!(mul(tenth, 10), 1);
        assert_eq!(mul(from_f64(2f64.powi(-70)), from_f64(2f64.powi(70))), 1);
        assert_eq!(from_f64(f64::MIN_POSITIVE / 4.0), mul(from_f64(f64::MIN_POSITIVE), inv(4)));
    }
}
