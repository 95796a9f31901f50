//! Sparse state descriptions.
//!
//! A state is given as a list of (amplitude, basis string) pairs. Basis
//! strings are stored as integers with qubit 0 as the least significant bit;
//! the JSON file format prints them most-significant-bit first (see
//! [`crate::io`]).

use num_complex::Complex64;

use crate::error::{Error, Result};

pub const NORM_TOL: f64 = 1e-10;
/// Basis strings are stored in u64, so 64 data qubits is the hard cap here.
/// Wider registers go through [`crate::wide`].
pub const MAX_QUBITS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateEntry {
    pub amplitude: Complex64,
    pub basis: u64,
}

/// A validated d-sparse state description on n qubits.
///
/// Invariants held by construction: entries are nonempty, basis strings are
/// distinct and fit in `n` bits, and squared amplitudes sum to 1 within
/// [`NORM_TOL`]. Entry order is preserved from the input.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseStateSpec {
    n: usize,
    entries: Vec<StateEntry>,
}

impl SparseStateSpec {
    pub fn new(n: usize, entries: Vec<StateEntry>) -> Result<Self> {
        if n == 0 || n > MAX_QUBITS {
            return Err(Error::UnsupportedQubitCount { n, max: MAX_QUBITS });
        }
        if entries.is_empty() {
            return Err(Error::EmptySpec);
        }
        for e in &entries {
            if n < 64 && e.basis >> n != 0 {
                return Err(Error::BadWidth { q: e.basis, n });
            }
        }
        let mut seen: Vec<u64> = entries.iter().map(|e| e.basis).collect();
        seen.sort_unstable();
        for pair in seen.windows(2) {
            if pair[0] == pair[1] {
                return Err(Error::DuplicateBasis { q: pair[0] });
            }
        }
        let sum_sq: f64 = entries.iter().map(|e| e.amplitude.norm_sqr()).sum();
        if (sum_sq - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { sum_sq, tol: NORM_TOL });
        }
        Ok(SparseStateSpec { n, entries })
    }

    pub fn from_pairs(n: usize, pairs: &[(Complex64, u64)]) -> Result<Self> {
        Self::new(
            n,
            pairs
                .iter()
                .map(|&(amplitude, basis)| StateEntry { amplitude, basis })
                .collect(),
        )
    }

    /// Uniform superposition over the given distinct basis strings.
    pub fn uniform(n: usize, basis: &[u64]) -> Result<Self> {
        let amp = Complex64::new(1.0 / (basis.len() as f64).sqrt(), 0.0);
        Self::from_pairs(n, &basis.iter().map(|&q| (amp, q)).collect::<Vec<_>>())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[StateEntry] {
        &self.entries
    }

    /// Entries reordered by ascending basis string.
    pub fn entries_sorted(&self) -> Vec<StateEntry> {
        let mut v = self.entries.clone();
        v.sort_by_key(|e| e.basis);
        v
    }

    /// Dense amplitude vector of length 2^n. Only valid for small n.
    pub fn to_dense(&self) -> Vec<Complex64> {
        assert!(self.n <= 26, "dense expansion capped at 26 qubits");
        let mut v = vec![Complex64::new(0.0, 0.0); 1usize << self.n];
        for e in &self.entries {
            v[e.basis as usize] = e.amplitude;
        }
        v
    }
}
