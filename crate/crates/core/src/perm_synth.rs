//! Synthesis of basis permutations from batches of disjoint transpositions.
//!
//! A batch of m disjoint transpositions (m a power of two) is realized in
//! three phases. A classical relabeling circuit L maps the 2m endpoints to
//! the basis states 0..2m, pair by pair, so that the two endpoints of pair i
//! land on 2i and 2i+1. A single MCX that fires exactly on the states below
//! 2m then flips the lowest qubit, swapping every pair at once. Running L
//! backwards (every gate it uses is self-inverse) moves the pairs home.
//!
//! L is built by Gaussian-style elimination on the 2m x n bit matrix whose
//! rows are the endpoint labels, co-evolved gate by gate: duplicate nonzero
//! columns collapse via CNOT, the distinct nonzero columns compress to the
//! low positions via SWAP, X gates clear row 0, and each later row j is
//! steered onto the value j with a CNOT fan from a pivot column plus one
//! MCX whose controls are the set bits of j. Rows already finished are never
//! touched again: their bits above the low block are zero, so a pivot-fan
//! CNOT cannot fire on them, and an MCX controlled on the set bits of j can
//! only fire on rows with value at least j.
//!
//! The matrix is tracked column-wise, one u64 mask per qubit column over the
//! at most 64 endpoint rows, so nothing here depends on an endpoint label
//! fitting in a machine word; [`synth_batch_wide`] accepts labels of any
//! width. A full permutation is decomposed into two rounds of disjoint
//! transpositions (odd cycles need the second round), each round cut into
//! power-of-two batches.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::gate::{Circuit, Control, Gate};
use crate::perm::{batch_cap, cycle_decompose, partition_batches, split_two_sets, Permutation, TranspositionSet};
use crate::wide::WideBasis;

/// Most endpoint rows a single batch may hold (columns are tracked as u64
/// bit masks over the rows).
const MAX_BATCH_ROWS: usize = 64;

fn check_batch_shape(m: usize, n: usize) -> Result<()> {
    if !m.is_power_of_two() {
        return Err(Error::NotPowerOfTwo { count: m });
    }
    let rows = 2 * m;
    let available = if m == 1 {
        if n >= 64 {
            u64::MAX
        } else {
            1u64 << n
        }
    } else {
        (1u64 << (n - 1).min(63)).min(MAX_BATCH_ROWS as u64)
    };
    if rows as u64 > available {
        return Err(Error::BatchTooLarge { count: m, needed: rows as u64, n, available });
    }
    Ok(())
}

/// Synthesizes one batch of disjoint transpositions over n qubits.
///
/// The transposition count must be a power of two. A batch of size m >= 2
/// needs 2m <= 2^(n-1) so the relabeling block leaves a spare column; a
/// single transposition works on any n >= 1.
pub fn synth_batch(pairs: &[(u64, u64)], n: usize) -> Result<Vec<Gate>> {
    let set = TranspositionSet::new(pairs.to_vec())?;
    let m = set.len();
    if m == 0 {
        return Ok(Vec::new());
    }
    for &(a, b) in set.pairs() {
        for p in [a, b] {
            if n < 64 && p >> n != 0 {
                return Err(Error::BadWidth { q: p, n });
            }
        }
    }
    check_batch_shape(m, n)?;
    let points: Vec<u64> = set.pairs().iter().flat_map(|&(a, b)| [a, b]).collect();
    let cols = (0..n)
        .map(|c| {
            points
                .iter()
                .enumerate()
                .fold(0u64, |mask, (j, p)| mask | ((p >> c & 1) << j))
        })
        .collect();
    Ok(batch_gates(cols, points.len(), n))
}

/// [`synth_batch`] for endpoint labels wider than 64 bits.
pub fn synth_batch_wide(pairs: &[(WideBasis, WideBasis)], n: usize) -> Result<Vec<Gate>> {
    let m = pairs.len();
    if m == 0 {
        return Ok(Vec::new());
    }
    let mut seen: BTreeSet<&WideBasis> = BTreeSet::new();
    for (a, b) in pairs {
        for p in [a, b] {
            if !p.fits(n) {
                return Err(Error::BadWidth { q: p.low_bits(), n });
            }
            if !seen.insert(p) {
                return Err(Error::NotDisjoint { point: p.low_bits() });
            }
        }
    }
    check_batch_shape(m, n)?;
    let points: Vec<&WideBasis> = pairs.iter().flat_map(|(a, b)| [a, b]).collect();
    let cols = (0..n)
        .map(|c| {
            points
                .iter()
                .enumerate()
                .fold(0u64, |mask, (j, p)| mask | ((p.bit(c) as u64) << j))
        })
        .collect();
    Ok(batch_gates(cols, points.len(), n))
}

/// Relabel + pairing MCX + mirrored relabel, from the endpoint columns.
fn batch_gates(cols: Vec<u64>, rows: usize, n: usize) -> Vec<Gate> {
    let w = rows.trailing_zeros() as usize;
    let mut ev = ColEvolve::new(cols, rows);
    relabel_to_front(&mut ev, rows, w);
    let relabel = ev.gates;
    let pairing = if w == n {
        Gate::X { target: 0 }
    } else {
        Gate::Mcx { controls: (w..n).map(Control::neg).collect(), target: 0 }
    };
    let mut gates = relabel.clone();
    gates.push(pairing);
    gates.extend(relabel.into_iter().rev());
    gates
}

/// Classical circuit mapping endpoint row j to the basis value j.
///
/// Emits only self-inverse gates (X, CNOT, SWAP, MCX).
fn relabel_to_front(ev: &mut ColEvolve, rows: usize, w: usize) {
    let n = ev.cols.len();

    // Collapse duplicate nonzero columns onto their leftmost occurrence.
    let mut seen: std::collections::BTreeMap<u64, usize> = std::collections::BTreeMap::new();
    for c in 0..n {
        let col = ev.cols[c];
        if col == 0 {
            continue;
        }
        match seen.get(&col) {
            Some(&rep) => ev.emit(Gate::Cnot { control: rep, target: c }),
            None => {
                seen.insert(col, c);
            }
        }
    }

    // Compress the distinct nonzero columns into the low positions.
    for slot in 0..n {
        if ev.cols[slot] != 0 {
            continue;
        }
        match (slot + 1..n).find(|&c| ev.cols[c] != 0) {
            Some(c) => ev.emit(Gate::Swap { a: slot, b: c }),
            None => break,
        }
    }

    // Clear row 0.
    for c in 0..n {
        if ev.row_bit(0, c) {
            ev.emit(Gate::X { target: c });
        }
    }

    // Steer row j onto the value j, never disturbing rows below j.
    for j in 1..rows {
        let want = j as u64;
        if ev.row_low(j, w) == want && ev.pivot_above(j, w).is_none() {
            continue;
        }
        if ev.pivot_above(j, w).is_none() {
            // No pivot above the block: kick the row out with an MCX that
            // matches its full block pattern, negative controls included,
            // so no other finished row can fire.
            let v = ev.row_low(j, w);
            debug_assert!(v > want, "rows stay pairwise distinct");
            debug_assert!(w < n, "block leaves a spare column for batches of 2+");
            let controls = (0..w)
                .map(|c| if v >> c & 1 == 1 { Control::pos(c) } else { Control::neg(c) })
                .collect();
            ev.emit(Gate::Mcx { controls, target: w });
        }
        let pivot = ev.pivot_above(j, w).expect("case above set a high bit");
        for c in 0..n {
            if c == pivot {
                continue;
            }
            let have = ev.row_bit(j, c);
            let need = c < w && want >> c & 1 == 1;
            if have != need {
                ev.emit(Gate::Cnot { control: pivot, target: c });
            }
        }
        let controls = (0..w).filter(|&c| want >> c & 1 == 1).map(Control::pos).collect();
        ev.emit(Gate::Mcx { controls, target: pivot });
        debug_assert_eq!(ev.row_low(j, w), want);
        debug_assert!(ev.pivot_above(j, w).is_none());
    }
    debug_assert!(
        (0..rows).all(|j| ev.row_low(j, w) == j as u64 && ev.pivot_above(j, w).is_none())
    );
}

/// Endpoint matrix co-evolved with every emitted gate, stored column-wise:
/// cols[c] holds bit c of every endpoint row as a mask over the rows.
struct ColEvolve {
    cols: Vec<u64>,
    full: u64,
    gates: Vec<Gate>,
}

impl ColEvolve {
    fn new(cols: Vec<u64>, rows: usize) -> Self {
        let full = if rows >= 64 { u64::MAX } else { (1u64 << rows) - 1 };
        ColEvolve { cols, full, gates: Vec::new() }
    }

    fn emit(&mut self, gate: Gate) {
        match &gate {
            Gate::X { target } => self.cols[*target] ^= self.full,
            Gate::Cnot { control, target } => self.cols[*target] ^= self.cols[*control],
            Gate::Swap { a, b } => self.cols.swap(*a, *b),
            Gate::Mcx { controls, target } => {
                let fire = controls.iter().fold(self.full, |acc, c| {
                    acc & if c.positive { self.cols[c.qubit] } else { !self.cols[c.qubit] }
                });
                self.cols[*target] ^= fire;
            }
            _ => unreachable!("relabeling uses classical gates only"),
        }
        self.gates.push(gate);
    }

    fn row_bit(&self, j: usize, c: usize) -> bool {
        self.cols[c] >> j & 1 == 1
    }

    fn row_low(&self, j: usize, w: usize) -> u64 {
        (0..w).fold(0u64, |v, c| v | ((self.cols[c] >> j & 1) << c))
    }

    fn pivot_above(&self, j: usize, w: usize) -> Option<usize> {
        (w..self.cols.len()).find(|&c| self.row_bit(j, c))
    }
}

/// Synthesizes an arbitrary basis permutation over n qubits.
///
/// Two rounds of disjoint transpositions, each cut into batches of at most
/// `batch_cap(n)` transpositions. The result applies round one first.
pub fn synth_permutation(sigma: &Permutation, n: usize) -> Result<Circuit> {
    synth_permutation_with_cap(sigma, n, batch_cap(n))
}

pub fn synth_permutation_with_cap(sigma: &Permutation, n: usize, m_cap: usize) -> Result<Circuit> {
    for p in sigma.support() {
        if n < 64 && p >> n != 0 {
            return Err(Error::BadWidth { q: p, n });
        }
    }
    let mut circuit = Circuit::new(n);
    if sigma.is_identity() {
        return Ok(circuit);
    }
    let (first, second) = split_two_sets(sigma);
    for round in [first, second] {
        if round.is_empty() {
            continue;
        }
        for batch in partition_batches(&round, m_cap).batches {
            circuit.extend(synth_batch(batch.pairs(), n)?);
        }
    }
    Ok(circuit)
}

/// Transposition count of the two-round decomposition, before batching.
pub fn transposition_total(sigma: &Permutation) -> usize {
    cycle_decompose(sigma).iter().map(|c| c.len() - 1).sum()
}
