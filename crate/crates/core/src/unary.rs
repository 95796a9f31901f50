//! Block one-hot encoding of basis strings and its flagged preparation.
//!
//! An n-bit string is cut into B = ceil(n/r) blocks of r bits starting at
//! the least significant end; the last block keeps the n - r(B-1) leftover
//! bits. Each block of b bits is represented one-hot on 2^b qubits, block
//! value v setting qubit v of its block register.
//!
//! The preparation walks the entries behind a flag qubit: the flag starts
//! at 1, and for each entry the flag writes the entry's one-hot pattern
//! (B CNOTs), a G rotation controlled on that full pattern moves the
//! entry's amplitude off the flag, and the pattern is uncomputed (B CNOTs).
//! Entries already placed never match a later pattern, because two distinct
//! strings differ in some block. After the last entry the flag is exactly 0
//! and the block registers hold the superposition of one-hot patterns.
//!
//! G(alpha, beta) is the special unitary sending |1> to
//! (alpha |0> + sqrt(beta^2 - |alpha|^2) |1>) / beta, defined for
//! 0 < beta <= 1, |alpha| <= beta.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gate::{BaseGate, Circuit, Control, Gate, Mat2, Register};
use crate::state::SparseStateSpec;

/// Qubit layout of the one-hot block registers plus the flag.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnaryLayout {
    pub n: usize,
    pub r: usize,
    /// Bits per block, least significant block first.
    pub sizes: Vec<usize>,
    /// First qubit of each block's one-hot register.
    pub offsets: Vec<usize>,
    /// Flag qubit, directly after the last block register.
    pub flag: usize,
    /// One past the flag.
    pub width: usize,
}

impl UnaryLayout {
    /// Lays the block registers out from qubit `base` upward.
    pub fn new(n: usize, r: usize, base: usize) -> Result<Self> {
        if r == 0 || r > n {
            return Err(Error::BadBlockSize { n, r });
        }
        let full = n / r;
        let mut sizes = vec![r; full];
        if !n.is_multiple_of(r) {
            sizes.push(n % r);
        }
        let mut offsets = Vec::with_capacity(sizes.len());
        let mut at = base;
        for &b in &sizes {
            offsets.push(at);
            at += 1usize << b;
        }
        Ok(UnaryLayout { n, r, sizes, offsets, flag: at, width: at + 1 })
    }

    pub fn block_count(&self) -> usize {
        self.sizes.len()
    }

    /// Total one-hot qubits across the blocks.
    pub fn onehot_qubits(&self) -> usize {
        self.flag - self.offsets[0]
    }

    /// Block values of an n-bit string, least significant block first.
    pub fn encode(&self, x: u64) -> Vec<u64> {
        let mut values = Vec::with_capacity(self.sizes.len());
        let mut rest = x;
        for &b in &self.sizes {
            values.push(rest & ((1u64 << b) - 1));
            rest >>= b;
        }
        values
    }

    pub fn decode(&self, values: &[u64]) -> u64 {
        debug_assert_eq!(values.len(), self.sizes.len());
        let mut x = 0u64;
        let mut shift = 0;
        for (&v, &b) in values.iter().zip(&self.sizes) {
            x |= v << shift;
            shift += b;
        }
        x
    }

    /// Qubit holding the one-hot bit for `value` in `block`.
    pub fn onehot_qubit(&self, block: usize, value: u64) -> usize {
        debug_assert!(value < (1u64 << self.sizes[block]));
        self.offsets[block] + value as usize
    }

    /// Basis index of the full one-hot pattern of x (flag clear).
    pub fn onehot_basis(&self, x: u64) -> u64 {
        let mut basis = 0u64;
        for (block, v) in self.encode(x).into_iter().enumerate() {
            basis |= 1u64 << self.onehot_qubit(block, v);
        }
        basis
    }

    pub fn registers(&self) -> Vec<Register> {
        let mut regs: Vec<Register> = self
            .sizes
            .iter()
            .zip(&self.offsets)
            .enumerate()
            .map(|(j, (&b, &at))| Register::new(format!("block{j}"), at, 1 << b))
            .collect();
        regs.push(Register::new("flag", self.flag, 1));
        regs
    }
}

/// Pretty block display: most significant block first, each block written
/// with value 0 leftmost.
pub fn onehot_display(layout: &UnaryLayout, x: u64) -> String {
    let values = layout.encode(x);
    let mut parts = Vec::with_capacity(values.len());
    for (block, &v) in values.iter().enumerate().rev() {
        let width = 1usize << layout.sizes[block];
        let mut s = vec![b'0'; width];
        s[v as usize] = b'1';
        parts.push(String::from_utf8(s).unwrap());
    }
    parts.join(" ")
}

/// Validated amplitude-moving rotation.
pub fn g_matrix(alpha: Complex64, beta: f64) -> Result<Mat2> {
    let a = alpha.norm();
    if beta.is_nan() || beta <= 0.0 || beta > 1.0 + 1e-9 || a > beta * (1.0 + 1e-9) {
        return Err(Error::GDomain { alpha_abs: a, beta });
    }
    Ok(BaseGate::G { alpha, beta }.matrix())
}

/// Prepares the flagged one-hot superposition of the spec's entries, in
/// entry order, on the layout's block registers.
pub fn synth_onehot(spec: &SparseStateSpec, layout: &UnaryLayout) -> Result<Circuit> {
    if layout.n != spec.n() {
        return Err(Error::WidthMismatch { a: layout.n, b: spec.n() });
    }
    let entries: Vec<_> = spec.entries().iter().filter(|e| e.amplitude.norm_sqr() > 0.0).collect();
    let mut tail_mass: Vec<f64> = Vec::with_capacity(entries.len() + 1);
    tail_mass.push(0.0);
    for e in entries.iter().rev() {
        let last = *tail_mass.last().unwrap();
        tail_mass.push(last + e.amplitude.norm_sqr());
    }
    tail_mass.reverse();

    let mut circuit = Circuit::new(layout.width);
    circuit.push(Gate::X { target: layout.flag });
    for (i, entry) in entries.iter().enumerate() {
        let beta = if i + 1 == entries.len() {
            entry.amplitude.norm()
        } else {
            tail_mass[i].sqrt()
        };
        g_matrix(entry.amplitude, beta)?;
        let values = layout.encode(entry.basis);
        let pattern: Vec<usize> = values
            .iter()
            .enumerate()
            .map(|(block, &v)| layout.onehot_qubit(block, v))
            .collect();
        for &q in &pattern {
            circuit.push(Gate::Cnot { control: layout.flag, target: q });
        }
        circuit.push(Gate::Mcu {
            base: BaseGate::G { alpha: entry.amplitude, beta },
            controls: pattern.iter().map(|&q| Control::pos(q)).collect(),
            target: layout.flag,
        });
        for &q in &pattern {
            circuit.push(Gate::Cnot { control: layout.flag, target: q });
        }
    }
    Ok(circuit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::StateVector;
    use proptest::prelude::*;

    #[test]
    fn blocks_split_from_the_low_end_with_relaxed_tail() {
        let l = UnaryLayout::new(8, 3, 0).unwrap();
        assert_eq!(l.sizes, vec![3, 3, 2]);
        assert_eq!(l.offsets, vec![0, 8, 16]);
        assert_eq!(l.flag, 20);
        assert_eq!(l.width, 21);
        assert!(matches!(UnaryLayout::new(4, 0, 0), Err(Error::BadBlockSize { .. })));
        assert!(matches!(UnaryLayout::new(4, 5, 0), Err(Error::BadBlockSize { .. })));
    }

    #[test]
    fn display_matches_block_layout_fixture() {
        let l = UnaryLayout::new(8, 2, 0).unwrap();
        assert_eq!(onehot_display(&l, 0b1101_1000), "0001 0100 0010 1000");
        assert_eq!(l.encode(0b1101_1000), vec![0, 2, 1, 3]);
    }

    #[test]
    fn encode_decode_roundtrip() {
        for (n, r) in [(8usize, 2usize), (8, 3), (5, 5), (9, 4), (1, 1)] {
            let l = UnaryLayout::new(n, r, 0).unwrap();
            for x in [0u64, 1, (1 << n) - 1, (1 << n) / 3] {
                assert_eq!(l.decode(&l.encode(x)), x, "n={n} r={r} x={x}");
            }
        }
    }

    #[test]
    fn g_moves_amplitude_off_the_one_state() {
        let alpha = Complex64::new(0.3, -0.4);
        let beta = 0.9;
        let g = g_matrix(alpha, beta).unwrap();
        assert!(g.unitarity_deviation() < 1e-12);
        assert!((g.det() - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        let s = (beta * beta - alpha.norm_sqr()).sqrt();
        assert!((g.0[0][1] - alpha / beta).norm() < 1e-12);
        assert!((g.0[1][1] - Complex64::new(s / beta, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn g_domain_is_enforced() {
        assert!(matches!(
            g_matrix(Complex64::new(0.8, 0.0), 0.5),
            Err(Error::GDomain { .. })
        ));
        assert!(matches!(g_matrix(Complex64::new(0.1, 0.0), 0.0), Err(Error::GDomain { .. })));
        assert!(matches!(g_matrix(Complex64::new(0.5, 0.0), 1.4), Err(Error::GDomain { .. })));
    }

    #[test]
    fn onehot_preparation_matches_expected_superposition() {
        let spec = SparseStateSpec::from_pairs(
            2,
            &[
                (Complex64::new(0.6, 0.0), 0b01),
                (Complex64::new(0.0, 0.8), 0b10),
            ],
        )
        .unwrap();
        let layout = UnaryLayout::new(2, 1, 0).unwrap();
        let circuit = synth_onehot(&spec, &layout).unwrap();
        let mut sv = StateVector::zero(layout.width).unwrap();
        sv.apply_circuit(&circuit).unwrap();
        let at = |x: u64| sv.amp(layout.onehot_basis(x));
        assert!((at(0b01) - Complex64::new(0.6, 0.0)).norm() < 1e-10);
        assert!((at(0b10) - Complex64::new(0.0, 0.8)).norm() < 1e-10);
        assert!((sv.norm() - 1.0).abs() < 1e-10);
        assert!(sv.mass_with_bit_set(layout.flag) < 1e-12);
    }

    #[test]
    fn three_entry_example_has_x_then_uniform_windows() {
        let spec = SparseStateSpec::uniform(8, &[216, 25, 143]).unwrap();
        let layout = UnaryLayout::new(8, 2, 0).unwrap();
        let circuit = synth_onehot(&spec, &layout).unwrap();
        let b = layout.block_count();
        assert_eq!(circuit.len(), 1 + 3 * (2 * b + 1));
        assert!(matches!(circuit.gates[0], Gate::X { target } if target == layout.flag));
        for i in 0..3 {
            let window = &circuit.gates[1 + i * (2 * b + 1)..1 + (i + 1) * (2 * b + 1)];
            assert!(window[..b].iter().all(|g| matches!(g, Gate::Cnot { .. })));
            assert!(matches!(&window[b], Gate::Mcu { controls, .. } if controls.len() == b));
            assert!(window[b + 1..].iter().all(|g| matches!(g, Gate::Cnot { .. })));
        }
        // Last window's rotation absorbs the full remaining amplitude.
        let last = &circuit.gates[1 + 2 * (2 * b + 1) + b];
        match last {
            Gate::Mcu { base: BaseGate::G { alpha, beta }, .. } => {
                assert!((alpha.norm() - beta).abs() < 1e-15);
            }
            g => panic!("expected G rotation, got {g:?}"),
        }
        // Full simulation at 17 qubits.
        let mut sv = StateVector::zero(layout.width).unwrap();
        sv.apply_circuit(&circuit).unwrap();
        let w = 1.0 / 3f64.sqrt();
        for q in [216u64, 25, 143] {
            assert!((sv.amp(layout.onehot_basis(q)).re - w).abs() < 1e-10, "q={q}");
        }
        assert!(sv.mass_with_bit_set(layout.flag) < 1e-12);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn proptest_encode_decode_roundtrip(x in 0u64..65536, r in 1usize..17) {
            let l = UnaryLayout::new(16, r, 0).unwrap();
            prop_assert_eq!(l.decode(&l.encode(x)), x);
            let values = l.encode(x);
            for (j, &v) in values.iter().enumerate() {
                prop_assert!(v < (1u64 << l.sizes[j]));
            }
        }
    }
}
