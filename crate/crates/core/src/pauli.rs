//! n-qubit Pauli strings in symplectic form.
//!
//! Qubit `j` is stored at bit `j` of both masks. A qubit carries `X` when only
//! its x-bit is set, `Z` when only its z-bit is set and `Y` when both are set;
//! `Y` is the genuine Hermitian Pauli matrix, not `XZ`. The string represents
//! `i^phase_exp` times the tensor product of the single-qubit letters.

use alloc::string::String;
use core::cmp::Ordering;
use core::fmt;
use core::str::FromStr;

use crate::{Error, Result, MAX_QUBITS};

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct PauliString {
    n_qubits: u8,
    x_bits: u64,
    z_bits: u64,
    phase_exp: u8,
}

fn width_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

impl PauliString {
    pub fn new(n_qubits: usize, x_bits: u64, z_bits: u64, phase_exp: u8) -> Result<Self> {
        if n_qubits == 0 || n_qubits > MAX_QUBITS {
            return Err(Error::InvalidQubitCount(n_qubits));
        }
        let mask = width_mask(n_qubits);
        if (x_bits | z_bits) & !mask != 0 {
            return Err(Error::Parse(alloc::format!(
                "bits set above qubit {} in a {n_qubits}-qubit string",
                n_qubits - 1
            )));
        }
        Ok(Self { n_qubits: n_qubits as u8, x_bits, z_bits, phase_exp: phase_exp % 4 })
    }

    pub fn identity(n_qubits: usize) -> Result<Self> {
        Self::new(n_qubits, 0, 0, 0)
    }

    /// Single-qubit letter `letter` (one of `IXYZ`) on `qubit`, identity elsewhere.
    pub fn single(n_qubits: usize, qubit: usize, letter: char) -> Result<Self> {
        if qubit >= n_qubits {
            return Err(Error::OutOfRange { what: "qubit", value: qubit, min: 0, max: n_qubits - 1 });
        }
        let (x, z) = letter_bits(letter)?;
        Self::new(n_qubits, (x as u64) << qubit, (z as u64) << qubit, 0)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits as usize
    }

    pub fn x_bits(&self) -> u64 {
        self.x_bits
    }

    pub fn z_bits(&self) -> u64 {
        self.z_bits
    }

    pub fn phase_exp(&self) -> u8 {
        self.phase_exp
    }

    pub fn is_identity(&self) -> bool {
        self.x_bits == 0 && self.z_bits == 0
    }

    /// Number of qubits carrying a non-identity letter.
    pub fn weight(&self) -> u32 {
        (self.x_bits | self.z_bits).count_ones()
    }

    /// The same word with the phase stripped.
    pub fn word(&self) -> Self {
        Self { phase_exp: 0, ..*self }
    }

    pub fn with_phase(&self, phase_exp: u8) -> Self {
        Self { phase_exp: phase_exp % 4, ..*self }
    }

    /// Letter on `qubit` as one of `I`, `X`, `Y`, `Z`.
    pub fn letter(&self, qubit: usize) -> char {
        let x = (self.x_bits >> qubit) & 1 == 1;
        let z = (self.z_bits >> qubit) & 1 == 1;
        match (x, z) {
            (false, false) => 'I',
            (true, false) => 'X',
            (true, true) => 'Y',
            (false, true) => 'Z',
        }
    }

    pub fn commutes_with(&self, other: &Self) -> bool {
        ((self.x_bits & other.z_bits) ^ (self.z_bits & other.x_bits)).count_ones().is_multiple_of(2)
    }

    /// Group product `self * other`, phase included.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::SizeMismatch { expected: self.n_qubits(), found: other.n_qubits() });
        }
        Ok(self.multiply_unchecked(other))
    }

    pub(crate) fn multiply_unchecked(&self, other: &Self) -> Self {
        let (x1, z1, x2, z2) = (self.x_bits, self.z_bits, other.x_bits, other.z_bits);
        let (px, py, pz) = (x1 & !z1, x1 & z1, !x1 & z1);
        let (qx, qy, qz) = (x2 & !z2, x2 & z2, !x2 & z2);
        // XY = iZ, YZ = iX, ZX = iY and the reversed orders carry -i.
        let plus = (px & qy) | (py & qz) | (pz & qx);
        let minus = (py & qx) | (pz & qy) | (px & qz);
        let phase = self.phase_exp as i64 + other.phase_exp as i64 + plus.count_ones() as i64
            - minus.count_ones() as i64;
        Self {
            n_qubits: self.n_qubits,
            x_bits: x1 ^ x2,
            z_bits: z1 ^ z2,
            phase_exp: phase.rem_euclid(4) as u8,
        }
    }

    /// Text form without phase, qubit 0 leftmost.
    pub fn to_label(&self) -> String {
        (0..self.n_qubits()).map(|q| self.letter(q)).collect()
    }

    fn letter_code(&self, qubit: usize) -> u8 {
        match self.letter(qubit) {
            'I' => 0,
            'X' => 1,
            'Y' => 2,
            _ => 3,
        }
    }
}

fn letter_bits(letter: char) -> Result<(bool, bool)> {
    match letter {
        'I' => Ok((false, false)),
        'X' => Ok((true, false)),
        'Y' => Ok((true, true)),
        'Z' => Ok((false, true)),
        other => Err(Error::Parse(alloc::format!("unknown Pauli letter {other:?}"))),
    }
}

/// Lexicographic on the text form with `I < X < Y < Z`, qubit 0 most significant,
/// then by phase. Strings on fewer qubits sort first.
impl Ord for PauliString {
    fn cmp(&self, other: &Self) -> Ordering {
        self.n_qubits
            .cmp(&other.n_qubits)
            .then_with(|| {
                let diff = (self.x_bits ^ other.x_bits) | (self.z_bits ^ other.z_bits);
                if diff == 0 {
                    return Ordering::Equal;
                }
                let q = diff.trailing_zeros() as usize;
                self.letter_code(q).cmp(&other.letter_code(q))
            })
            .then_with(|| self.phase_exp.cmp(&other.phase_exp))
    }
}

impl PartialOrd for PauliString {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Parses `IXYZ` text, qubit 0 leftmost. An optional prefix `+`, `-`, `i`, `+i`
/// or `-i` sets the phase.
impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (phase, body) = if let Some(rest) = s.strip_prefix("-i") {
            (3, rest)
        } else if let Some(rest) = s.strip_prefix("+i") {
            (1, rest)
        } else if let Some(rest) = s.strip_prefix('i') {
            (1, rest)
        } else if let Some(rest) = s.strip_prefix('-') {
            (2, rest)
        } else if let Some(rest) = s.strip_prefix('+') {
            (0, rest)
        } else {
            (0, s)
        };
        let n = body.chars().count();
        if n == 0 || n > MAX_QUBITS {
            return Err(Error::Parse(alloc::format!("Pauli text {s:?} has {n} letters")));
        }
        let (mut x, mut z) = (0u64, 0u64);
        for (q, c) in body.chars().enumerate() {
            let (xb, zb) = letter_bits(c)?;
            x |= (xb as u64) << q;
            z |= (zb as u64) << q;
        }
        Self::new(n, x, z, phase)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = ["", "i", "-", "-i"][self.phase_exp as usize];
        write!(f, "{prefix}{}", self.to_label())
    }
}

impl fmt::Debug for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PauliString({self})")
    }
}
