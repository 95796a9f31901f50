//! In-place conversion of one-hot block registers to binary.
//!
//! For a block of w bits the one-hot register holds |e_i> and the binary
//! register starts at |0>. Patterns are processed from 2^w - 1 down to 0:
//! the one-hot qubit for pattern i copies the set bits of i into the binary
//! register (popcount(i) CNOTs), then an MCX matching the full binary
//! pattern of i (negative controls on its zero bits) clears that one-hot
//! qubit. Descending order matters: the pattern-0 MCX has all-negative
//! controls and would fire on every branch while the binary register is
//! still |0>, so it must run last, when every other branch has already
//! moved its value across.
//!
//! Cost per block: w 2^(w-1) CNOTs plus 2^w MCX gates.

use crate::error::{Error, Result};
use crate::gate::{Control, Gate};
use crate::unary::UnaryLayout;

/// Gates converting one w-bit block: one-hot register at `unary_base`
/// (2^w qubits), binary bits at `binary_base` (w qubits, initially zero).
pub fn synth_onehot_to_binary(unary_base: usize, w: usize, binary_base: usize) -> Result<Vec<Gate>> {
    let cells = 1usize << w;
    let overlap = unary_base < binary_base + w && binary_base < unary_base + cells;
    if overlap {
        return Err(Error::OverlappingQubits { qubit: unary_base.max(binary_base) });
    }
    let mut gates = Vec::with_capacity(w * cells / 2 + cells);
    for i in (0..cells as u64).rev() {
        let cell = unary_base + i as usize;
        for b in 0..w {
            if i >> b & 1 == 1 {
                gates.push(Gate::Cnot { control: cell, target: binary_base + b });
            }
        }
        let controls = (0..w)
            .map(|b| {
                if i >> b & 1 == 1 {
                    Control::pos(binary_base + b)
                } else {
                    Control::neg(binary_base + b)
                }
            })
            .collect();
        gates.push(Gate::Mcx { controls, target: cell });
    }
    Ok(gates)
}

/// Converts every block of `layout` into the binary register starting at
/// `binary_base`, least significant block first.
pub fn synth_layout_to_binary(layout: &UnaryLayout, binary_base: usize) -> Result<Vec<Gate>> {
    let mut gates = Vec::new();
    let mut bit = binary_base;
    for (j, &w) in layout.sizes.iter().enumerate() {
        gates.extend(synth_onehot_to_binary(layout.offsets[j], w, bit)?);
        bit += w;
    }
    Ok(gates)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gate::Circuit;
    use crate::sim::{track_points, StateVector};
    use num_complex::Complex64;

    fn convert_one(w: usize, j: u64) -> (u64, u64) {
        // Layout: binary at 0..w, one-hot at w..w+2^w.
        let width = w + (1 << w);
        let mut c = Circuit::new(width);
        c.extend(synth_onehot_to_binary(w, w, 0).unwrap());
        let input = 1u64 << (w + j as usize);
        let out = track_points(&c, &[input]).unwrap()[0];
        (out & ((1 << w) - 1), out >> w)
    }

    #[test]
    fn every_onehot_input_lands_on_its_binary_value() {
        for w in 1..=3usize {
            for j in 0..1u64 << w {
                let (binary, unary) = convert_one(w, j);
                assert_eq!(binary, j, "w={w} j={j}");
                assert_eq!(unary, 0, "w={w} j={j}: one-hot must clear");
            }
        }
    }

    #[test]
    fn pattern_zero_runs_last() {
        let gates = synth_onehot_to_binary(2, 2, 0).unwrap();
        let last = gates.last().unwrap();
        match last {
            Gate::Mcx { controls, target } => {
                assert_eq!(*target, 2);
                assert!(controls.iter().all(|c| !c.positive));
            }
            g => panic!("expected all-negative MCX last, got {g:?}"),
        }
    }

    #[test]
    fn gate_totals_match_closed_form() {
        for w in 1..=4usize {
            let gates = synth_onehot_to_binary(w, w, 0).unwrap();
            let cnots = gates.iter().filter(|g| matches!(g, Gate::Cnot { .. })).count();
            let mcx = gates.iter().filter(|g| matches!(g, Gate::Mcx { .. })).count();
            assert_eq!(cnots, w * (1 << w) / 2);
            assert_eq!(mcx, 1 << w);
            assert_eq!(gates.len(), cnots + mcx);
        }
    }

    #[test]
    fn superpositions_convert_linearly() {
        let w = 2;
        let width = w + (1 << w);
        let mut c = Circuit::new(width);
        c.extend(synth_onehot_to_binary(w, w, 0).unwrap());
        let amps = [0.5, -0.5, 0.5, 0.5];
        let entries: Vec<(Complex64, u64)> = amps
            .iter()
            .enumerate()
            .map(|(j, a)| (Complex64::new(*a, 0.0), 1u64 << (w + j)))
            .collect();
        let spec = crate::state::SparseStateSpec::from_pairs(width, &entries).unwrap();
        let mut sv = StateVector::from_spec(&spec, width).unwrap();
        sv.apply_circuit(&c).unwrap();
        for (j, a) in amps.iter().enumerate() {
            let got = sv.amp(j as u64);
            assert!((got - Complex64::new(*a, 0.0)).norm() < 1e-12, "j={j} got={got}");
        }
        assert!((sv.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn relaxed_multi_block_layout_converts_whole_strings() {
        let layout = UnaryLayout::new(5, 2, 5).unwrap();
        let width = layout.width;
        let mut c = Circuit::new(width);
        c.extend(synth_layout_to_binary(&layout, 0).unwrap());
        for x in [0u64, 1, 7, 19, 31] {
            let input = layout.onehot_basis(x);
            let out = track_points(&c, &[input]).unwrap()[0];
            assert_eq!(out, x, "x={x}: one-hot cleared and binary written");
        }
    }

    #[test]
    fn overlapping_registers_are_rejected() {
        assert!(synth_onehot_to_binary(1, 2, 0).is_err());
        assert!(synth_onehot_to_binary(0, 2, 3).is_err());
    }
}
