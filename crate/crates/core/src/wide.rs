//! Basis labels wider than 64 bits and the ancilla-free pipeline over them.
//!
//! Gate counts for the batched construction are measured at register widths
//! far beyond anything simulable (hundreds of qubits), where basis labels no
//! longer fit a machine word. This module holds the label type and the one
//! implementation of the no-ancilla pipeline; the u64 entry points in
//! [`crate::sparse`] convert and delegate here, so narrow and wide synthesis
//! can never drift apart.

use std::collections::BTreeSet;

use num_complex::Complex64;

use crate::dense::synth_dense;
use crate::error::{Error, Result};
use crate::gate::{Circuit, Gate, Register};
use crate::perm::batch_cap;
use crate::perm_synth::synth_batch_wide;
use crate::state::{SparseStateSpec, NORM_TOL};

/// A basis label of arbitrary bit width.
///
/// Limbs are stored most significant first and always hold exactly
/// `limb_count(n)` words for the register width the label was built for, so
/// the derived ordering and equality are numeric.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WideBasis {
    limbs: Vec<u64>,
}

impl WideBasis {
    pub fn limb_count(n: usize) -> usize {
        n.div_ceil(64).max(1)
    }

    pub fn zero(n: usize) -> Self {
        WideBasis { limbs: vec![0; Self::limb_count(n)] }
    }

    pub fn from_u64(x: u64, n: usize) -> Result<Self> {
        if n < 64 && x >> n != 0 {
            return Err(Error::BadWidth { q: x, n });
        }
        let mut limbs = vec![0; Self::limb_count(n)];
        *limbs.last_mut().expect("at least one limb") = x;
        Ok(WideBasis { limbs })
    }

    /// Builds a label bit by bit; `bit_set(i)` gives qubit i (LSB first).
    pub fn from_fn(n: usize, mut bit_set: impl FnMut(usize) -> bool) -> Self {
        let mut out = Self::zero(n);
        let count = out.limbs.len();
        for i in 0..n {
            if bit_set(i) {
                out.limbs[count - 1 - i / 64] |= 1u64 << (i % 64);
            }
        }
        out
    }

    pub fn bit(&self, i: usize) -> bool {
        let limb = self.limbs[self.limbs.len() - 1 - i / 64];
        limb >> (i % 64) & 1 == 1
    }

    /// The numeric value when it fits a single word.
    pub fn to_u64(&self) -> Option<u64> {
        let (last, high) = self.limbs.split_last().expect("at least one limb");
        if high.iter().all(|&l| l == 0) {
            Some(*last)
        } else {
            None
        }
    }

    /// Low 64 bits, for error reporting on labels too wide to print whole.
    pub fn low_bits(&self) -> u64 {
        *self.limbs.last().expect("at least one limb")
    }

    /// Whether the label has the limb shape for width n and no stray bits.
    pub fn fits(&self, n: usize) -> bool {
        self.limbs.len() == Self::limb_count(n)
            && (n.is_multiple_of(64) || self.limbs[0] >> (n % 64) == 0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WideEntry {
    pub amplitude: Complex64,
    pub basis: WideBasis,
}

/// A validated d-sparse state description on any number of qubits.
///
/// Same invariants as [`SparseStateSpec`], without the word-width cap.
#[derive(Debug, Clone, PartialEq)]
pub struct WideStateSpec {
    n: usize,
    entries: Vec<WideEntry>,
}

impl WideStateSpec {
    pub fn new(n: usize, entries: Vec<WideEntry>) -> Result<Self> {
        if n == 0 {
            return Err(Error::UnsupportedQubitCount { n, max: usize::MAX });
        }
        if entries.is_empty() {
            return Err(Error::EmptySpec);
        }
        for e in &entries {
            if !e.basis.fits(n) {
                return Err(Error::BadWidth { q: e.basis.low_bits(), n });
            }
        }
        let mut seen: Vec<&WideBasis> = entries.iter().map(|e| &e.basis).collect();
        seen.sort_unstable();
        for pair in seen.windows(2) {
            if pair[0] == pair[1] {
                return Err(Error::DuplicateBasis { q: pair[0].low_bits() });
            }
        }
        let sum_sq: f64 = entries.iter().map(|e| e.amplitude.norm_sqr()).sum();
        if (sum_sq - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { sum_sq, tol: NORM_TOL });
        }
        Ok(WideStateSpec { n, entries })
    }

    pub fn from_narrow(spec: &SparseStateSpec) -> Self {
        let n = spec.n();
        WideStateSpec {
            n,
            entries: spec
                .entries()
                .iter()
                .map(|e| WideEntry {
                    amplitude: e.amplitude,
                    basis: WideBasis::from_u64(e.basis, n).expect("validated basis"),
                })
                .collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[WideEntry] {
        &self.entries
    }
}

/// Slot assignment for the dense stage plus the slot/target swaps.
#[derive(Debug, Clone, PartialEq)]
pub struct Compaction {
    /// Dense stage width: ceil(log2 d).
    pub k: usize,
    /// Amplitude of each slot, index = slot.
    pub slot_amplitudes: Vec<Complex64>,
    /// Disjoint (slot, target) transpositions, targets >= d only.
    pub pairs: Vec<(u64, WideBasis)>,
}

/// Assigns each entry a slot below d and collects the needed swaps.
pub fn compaction(spec: &WideStateSpec) -> Compaction {
    let d = spec.d() as u64;
    let k = usize::BITS as usize - (d as usize - 1).leading_zeros() as usize;
    let mut sorted: Vec<&WideEntry> = spec.entries().iter().collect();
    sorted.sort_by(|a, b| a.basis.cmp(&b.basis));
    let taken: BTreeSet<u64> = sorted
        .iter()
        .filter_map(|e| e.basis.to_u64().filter(|&q| q < d))
        .collect();
    let mut free_slots = (0..d).filter(|s| !taken.contains(s));
    let mut slot_amplitudes = vec![Complex64::new(0.0, 0.0); d as usize];
    let mut pairs = Vec::new();
    for entry in &sorted {
        let slot = match entry.basis.to_u64().filter(|&q| q < d) {
            Some(q) => q,
            None => {
                let slot = free_slots.next().expect("at most d entries compete for d slots");
                pairs.push((slot, entry.basis.clone()));
                slot
            }
        };
        slot_amplitudes[slot as usize] = entry.amplitude;
    }
    Compaction { k, slot_amplitudes, pairs }
}

/// Extends `pairs` with idle transpositions up to `target` total, drawing
/// small labels that are neither occupied slots, nor state targets, nor
/// already used. `forbidden` needs only the labels that fit a word; wider
/// ones can never collide with a candidate. Fails with NoSparePoints when
/// the register is too full.
pub fn pad_with_idle_pairs(
    pairs: &[(WideBasis, WideBasis)],
    forbidden: &BTreeSet<u64>,
    n: usize,
    target: usize,
) -> Result<Vec<(WideBasis, WideBasis)>> {
    debug_assert!(target >= pairs.len());
    let mut out = pairs.to_vec();
    let space = if n >= 64 { u64::MAX } else { 1u64 << n };
    let mut x = 0u64;
    let mut pending: Option<u64> = None;
    while out.len() < target {
        if x >= space {
            return Err(Error::NoSparePoints);
        }
        if !forbidden.contains(&x) {
            match pending.take() {
                None => pending = Some(x),
                Some(a) => out.push((
                    WideBasis::from_u64(a, n).expect("candidate fits"),
                    WideBasis::from_u64(x, n).expect("candidate fits"),
                )),
            }
        }
        x += 1;
    }
    Ok(out)
}

/// Compiles the full state preparation circuit on n qubits, no ancillas.
///
/// Stage one prepares the d amplitudes densely on the low ceil(log2 d)
/// qubits at compacted slot indices; stage two swaps each slot with its
/// target label in power-of-two batches. Residual batches are padded with
/// idle pairs so every batch keeps at least two transpositions (and with
/// them a borrowable qubit for the pairing MCX); when the register is too
/// full to pad, the tail falls back to unpadded power-of-two batches.
pub fn synth_no_ancilla(spec: &WideStateSpec) -> Result<Circuit> {
    let n = spec.n();
    let mut circuit = Circuit::new(n);
    circuit.registers = vec![Register::new("data", 0, n)];

    if spec.d() == 1 {
        let basis = &spec.entries()[0].basis;
        for c in 0..n {
            if basis.bit(c) {
                circuit.push(Gate::X { target: c });
            }
        }
        return Ok(circuit);
    }

    let plan = compaction(spec);
    circuit.concat(&embed(synth_dense(plan.k, &plan.slot_amplitudes)?, n))?;

    if plan.pairs.is_empty() {
        return Ok(circuit);
    }
    let d = spec.d() as u64;
    let mut forbidden: BTreeSet<u64> = spec
        .entries()
        .iter()
        .filter_map(|e| e.basis.to_u64())
        .collect();
    forbidden.extend(0..d);

    let pairs: Vec<(WideBasis, WideBasis)> = plan
        .pairs
        .iter()
        .map(|(slot, t)| (WideBasis::from_u64(*slot, n).expect("slot fits"), t.clone()))
        .collect();
    let cap = batch_cap(n);
    let mut at = 0;
    while pairs.len() - at >= cap {
        circuit.extend(synth_batch_wide(&pairs[at..at + cap], n)?);
        at += cap;
    }
    let rest = &pairs[at..];
    if !rest.is_empty() {
        // rest is only nonempty when cap >= 2, so padding may always lift
        // the tail to at least two transpositions.
        let target = rest.len().next_power_of_two().max(2);
        let padded = if target > rest.len() {
            pad_with_idle_pairs(rest, &forbidden, n, target)
        } else {
            Ok(rest.to_vec())
        };
        match padded {
            Ok(batch) => circuit.extend(synth_batch_wide(&batch, n)?),
            Err(Error::NoSparePoints) => {
                // Register too full to pad: fall back to plain power-of-two
                // batches for the tail.
                let mut remaining = rest;
                while !remaining.is_empty() {
                    let mut take = remaining.len().next_power_of_two();
                    if take > remaining.len() {
                        take /= 2;
                    }
                    circuit.extend(synth_batch_wide(&remaining[..take], n)?);
                    remaining = &remaining[take..];
                }
            }
            Err(e) => return Err(e),
        }
    }
    Ok(circuit)
}

/// Re-hosts a narrow circuit on a wider register (same qubit indices).
pub(crate) fn embed(narrow: Circuit, width: usize) -> Circuit {
    let mut wide = Circuit::new(width);
    wide.extend(narrow.gates);
    wide
}
