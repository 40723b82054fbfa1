//! Set partitions of Hamiltonian term indices.
//!
//! Sampling is uniform over set partitions with exactly `m` non-empty blocks.
//! Items are decided from the last to the first: with `i` items left and `k`
//! blocks still to fill, item `i-1` opens its own block with probability
//! `S(i-1, k-1) / S(i, k)` and otherwise joins one of the `k` blocks of the
//! remaining items uniformly. Every partition then has probability `1/S(n, m)`.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use rand_core::RngCore;

use crate::models::HamiltonianSpec;
use crate::operator::PauliOperator;
use crate::{Error, Result};

/// Disjoint non-empty blocks covering `0..n_items`, each sorted, blocks
/// ordered by their smallest element.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    n_items: usize,
    blocks: Vec<Vec<usize>>,
}

impl Partition {
    /// Validates and canonicalizes.
    pub fn new(n_items: usize, mut blocks: Vec<Vec<usize>>) -> Result<Self> {
        if n_items == 0 {
            return Err(Error::InvalidPartition(String::from("no items")));
        }
        let mut seen = vec![false; n_items];
        for block in &mut blocks {
            if block.is_empty() {
                return Err(Error::InvalidPartition(String::from("empty block")));
            }
            block.sort_unstable();
            for &i in block.iter() {
                if i >= n_items {
                    return Err(Error::InvalidPartition(alloc::format!("index {i} >= {n_items}")));
                }
                if seen[i] {
                    return Err(Error::InvalidPartition(alloc::format!("index {i} appears twice")));
                }
                seen[i] = true;
            }
        }
        if let Some(i) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidPartition(alloc::format!("index {i} is not covered")));
        }
        blocks.sort_unstable_by_key(|b| b[0]);
        Ok(Self { n_items, blocks })
    }

    pub fn singletons(n_items: usize) -> Result<Self> {
        Self::new(n_items, (0..n_items).map(|i| vec![i]).collect())
    }

    pub fn single_block(n_items: usize) -> Result<Self> {
        Self::new(n_items, vec![(0..n_items).collect()])
    }

    pub fn n_items(&self) -> usize {
        self.n_items
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    /// Number of blocks.
    pub fn m(&self) -> usize {
        self.blocks.len()
    }

    /// Block index of every item.
    pub fn labels(&self) -> Vec<usize> {
        let mut out = vec![0; self.n_items];
        for (b, block) in self.blocks.iter().enumerate() {
            for &i in block {
                out[i] = b;
            }
        }
        out
    }
}

/// `C(n, k)`.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// Stirling numbers of the second kind `S(i, k)` for `0 <= k <= i <= n`.
fn stirling_table(n: usize) -> Result<Vec<Vec<u128>>> {
    let mut s = vec![vec![0u128; n + 1]; n + 1];
    s[0][0] = 1;
    for i in 1..=n {
        for k in 1..=i {
            let join = (k as u128).checked_mul(s[i - 1][k]).ok_or(Error::Overflow("Stirling number"))?;
            s[i][k] = join.checked_add(s[i - 1][k - 1]).ok_or(Error::Overflow("Stirling number"))?;
        }
    }
    Ok(s)
}

fn check_range(n: usize, m: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::OutOfRange { what: "n", value: n, min: 1, max: usize::MAX });
    }
    if m == 0 || m > n {
        return Err(Error::OutOfRange { what: "m", value: m, min: 1, max: n });
    }
    Ok(())
}

/// `S(n, m)`, the number of partitions of `n` items into `m` blocks. Exact;
/// errors if the value does not fit in a `u128`.
pub fn count_partitions(n: usize, m: usize) -> Result<u128> {
    check_range(n, m)?;
    Ok(stirling_table(n)?[n][m])
}

fn uniform_below<R: RngCore + ?Sized>(rng: &mut R, bound: u128) -> u128 {
    debug_assert!(bound > 0);
    if bound <= u64::MAX as u128 {
        let bound = bound as u64;
        let zone = u64::MAX - (u64::MAX - bound + 1) % bound;
        loop {
            let v = rng.next_u64();
            if v <= zone {
                return (v % bound) as u128;
            }
        }
    }
    let zone = u128::MAX - (u128::MAX - bound + 1) % bound;
    loop {
        let v = ((rng.next_u64() as u128) << 64) | rng.next_u64() as u128;
        if v <= zone {
            return v % bound;
        }
    }
}

/// Draws a partition of `0..n` into exactly `m` blocks, uniformly.
pub fn sample_partition<R: RngCore + ?Sized>(n: usize, m: usize, rng: &mut R) -> Result<Partition> {
    check_range(n, m)?;
    let s = stirling_table(n)?;
    // opens[i]: item i starts a new block
    let mut opens = vec![false; n];
    let mut k = m;
    for i in (1..=n).rev() {
        let r = uniform_below(rng, s[i][k]);
        if r < s[i - 1][k - 1] {
            opens[i - 1] = true;
            k -= 1;
        }
    }
    debug_assert_eq!(k, 0);
    let mut blocks: Vec<Vec<usize>> = Vec::with_capacity(m);
    for (item, &open) in opens.iter().enumerate() {
        if open {
            blocks.push(vec![item]);
        } else {
            let b = uniform_below(rng, blocks.len() as u128) as usize;
            blocks[b].push(item);
        }
    }
    Partition::new(n, blocks)
}

/// Every partition of `0..n` into `m` blocks, in restricted-growth-string order.
pub fn all_partitions(n: usize, m: usize) -> Result<Vec<Partition>> {
    check_range(n, m)?;
    let total = count_partitions(n, m)?;
    if total > 10_000_000 {
        return Err(Error::Overflow("partition enumeration (more than 1e7 partitions)"));
    }
    let mut out = Vec::with_capacity(total as usize);
    let mut rgs = vec![0usize; n];
    fn recurse(i: usize, used: usize, n: usize, m: usize, rgs: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if used + (n - i) < m {
            return;
        }
        if i == n {
            if used == m {
                let mut blocks = vec![Vec::new(); m];
                for (item, &b) in rgs.iter().enumerate() {
                    blocks[b].push(item);
                }
                out.push(Partition { n_items: n, blocks });
            }
            return;
        }
        for b in 0..=used.min(m - 1) {
            rgs[i] = b;
            recurse(i + 1, used.max(b + 1), n, m, rgs, out);
        }
    }
    recurse(0, 0, n, m, &mut rgs, &mut out);
    Ok(out)
}

/// One generator per block: the sum of the block's terms, in block order.
pub fn generators_from_partition(spec: &HamiltonianSpec, partition: &Partition) -> Result<Vec<PauliOperator>> {
    if partition.n_items() != spec.len() {
        return Err(Error::SizeMismatch { expected: spec.len(), found: partition.n_items() });
    }
    partition
        .blocks()
        .iter()
        .map(|block| {
            let mut acc = PauliOperator::zero(spec.n_qubits())?;
            for &i in block {
                acc = acc.add(&spec.terms()[i].operator)?;
            }
            Ok(acc)
        })
        .collect()
}
