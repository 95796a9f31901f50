//! Ancilla-assisted preparation: stage the state one-hot, then bring it
//! back to binary.
//!
//! Layout on n + sum(2^r_j) + 1 qubits: the data register sits on qubits
//! 0..n, the one-hot block registers and the flag follow as the ancilla
//! suffix. The flagged one-hot walk places all d amplitudes using one
//! G rotation with B = ceil(n/r) controls per entry, then each block is
//! converted into its data bits and the ancillas end exactly at |0>.
//!
//! The block width r is chosen from the ancilla budget m: start at
//! floor(log2(m/n)) clamped into [1, n] and decrement until the one-hot
//! registers plus flag fit the budget; if even r = 1 does not fit, the
//! budget is too small and the caller should use the ancilla-free pipeline.
//! Larger r than the starting point is never taken even when it would fit,
//! keeping the control count per entry at its intended scale.

use crate::convert::synth_layout_to_binary;
use crate::count::count_prep_circuit;
use crate::error::{Error, Result};
use crate::gate::{Circuit, Gate, Register};
use crate::sparse::synth_no_ancilla;
use crate::state::SparseStateSpec;
use crate::unary::{synth_onehot, UnaryLayout};

/// One-hot cells plus flag for block width r, overflow-safe.
fn ancillas_needed(n: usize, r: usize) -> u128 {
    let full = (n / r) as u128;
    let mut cells = full * (1u128 << r);
    if !n.is_multiple_of(r) {
        cells += 1u128 << (n % r);
    }
    cells + 1
}

/// Largest useful block width fitting the ancilla budget, if any.
pub fn choose_r(n: usize, m: usize) -> Option<usize> {
    let q = m / n.max(1);
    let start = if q == 0 { 1 } else { (q.ilog2() as usize).clamp(1, n) };
    let mut r = start;
    loop {
        if ancillas_needed(n, r) <= m as u128 {
            return Some(r);
        }
        if r == 1 {
            return None;
        }
        r -= 1;
    }
}

/// Compiles the state on n data qubits plus ancillas within budget m.
///
/// The circuit's ancilla count is what the layout actually uses, which may
/// be below the budget. All ancillas return to |0> exactly.
pub fn synth_with_ancilla(spec: &SparseStateSpec, m: usize) -> Result<Circuit> {
    let n = spec.n();
    let r = choose_r(n, m).ok_or(Error::TooFewAncillas { n, m })?;
    synth_with_block_width(spec, r)
}

/// Same pipeline with the block width fixed by the caller.
pub fn synth_with_block_width(spec: &SparseStateSpec, r: usize) -> Result<Circuit> {
    let n = spec.n();
    if spec.d() == 1 {
        let mut circuit = Circuit::new(n);
        circuit.registers = vec![Register::new("data", 0, n)];
        let q = spec.entries()[0].basis;
        for c in 0..n {
            if q >> c & 1 == 1 {
                circuit.push(Gate::X { target: c });
            }
        }
        return Ok(circuit);
    }
    let layout = UnaryLayout::new(n, r, n)?;
    let mut circuit = Circuit::with_ancillas(layout.width, layout.width - n);
    circuit.registers = vec![Register::new("data", 0, n)];
    circuit.registers.extend(layout.registers());
    circuit.concat(&synth_onehot(spec, &layout)?)?;
    circuit.extend(synth_layout_to_binary(&layout, 0)?);
    Ok(circuit)
}

/// How [`synth_auto`] decides between the two pipelines.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AutoMode {
    /// Build both, count elementary gates, keep the smaller (ties go to
    /// the ancilla-free circuit).
    Counted,
    /// Use ancillas only in the regime that favors them asymptotically:
    /// d >= n log2(n) and m >= n^2.
    Threshold,
}

/// Outcome of automatic pipeline selection.
#[derive(Debug, Clone)]
pub struct AutoChoice {
    pub circuit: Circuit,
    pub used_ancillas: bool,
    /// Block width when the ancilla pipeline was taken.
    pub r: Option<usize>,
}

/// Picks a pipeline for the given ancilla budget.
pub fn synth_auto(spec: &SparseStateSpec, m: usize, mode: AutoMode) -> Result<AutoChoice> {
    let n = spec.n();
    let plain = || -> Result<AutoChoice> {
        Ok(AutoChoice { circuit: synth_no_ancilla(spec)?, used_ancillas: false, r: None })
    };
    let r = match choose_r(n, m) {
        Some(r) if spec.d() > 1 => r,
        _ => return plain(),
    };
    match mode {
        AutoMode::Counted => {
            let with = synth_with_block_width(spec, r)?;
            let without = synth_no_ancilla(spec)?;
            if count_prep_circuit(&with)?.elementary < count_prep_circuit(&without)?.elementary {
                Ok(AutoChoice { circuit: with, used_ancillas: true, r: Some(r) })
            } else {
                Ok(AutoChoice { circuit: without, used_ancillas: false, r: None })
            }
        }
        AutoMode::Threshold => {
            let n_f = n as f64;
            let favored = spec.d() as f64 >= n_f * n_f.log2() && m >= n * n;
            if favored {
                Ok(AutoChoice {
                    circuit: synth_with_block_width(spec, r)?,
                    used_ancillas: true,
                    r: Some(r),
                })
            } else {
                plain()
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::run_against_spec;
    use num_complex::Complex64;

    #[test]
    fn block_width_fixtures() {
        assert_eq!(choose_r(4, 64), Some(4));
        assert_eq!(choose_r(8, 8), None);
        assert_eq!(choose_r(8, 64), Some(3));
        assert_eq!(choose_r(2, 8), Some(2));
        assert_eq!(choose_r(4, 16), Some(2));
    }

    #[test]
    fn budget_never_raises_r_above_its_starting_point() {
        // With n = 4, m = 16 both r = 2 (9 ancillas) and r = 3 (11) fit,
        // but the search starts at floor(log2(16/4)) = 2 and stays there.
        assert_eq!(choose_r(4, 16), Some(2));
    }

    fn check_prepares_with_ancilla(spec: &SparseStateSpec, m: usize) -> Circuit {
        let circuit = synth_with_ancilla(spec, m).unwrap();
        assert!(circuit.ancillas as u128 <= m as u128);
        assert_eq!(circuit.data_qubits(), spec.n());
        let report = run_against_spec(&circuit, spec).unwrap();
        assert!(
            report.fidelity > 1.0 - 1e-9,
            "n={} d={} m={m}: fidelity {}",
            spec.n(),
            spec.d(),
            report.fidelity
        );
        assert!(report.ancilla_leak < 1e-10, "leak {}", report.ancilla_leak);
        circuit
    }

    #[test]
    fn ghz_states_prepare_through_the_staged_pipeline() {
        for n in 2..=5usize {
            let spec = SparseStateSpec::uniform(n, &[0, (1u64 << n) - 1]).unwrap();
            check_prepares_with_ancilla(&spec, 3 * n * n);
        }
    }

    #[test]
    fn w_states_prepare_through_the_staged_pipeline() {
        for n in 3..=5usize {
            let w: Vec<u64> = (0..n).map(|i| 1u64 << i).collect();
            let spec = SparseStateSpec::uniform(n, &w).unwrap();
            check_prepares_with_ancilla(&spec, 3 * n * n);
        }
    }

    #[test]
    fn complex_amplitudes_prepare_through_the_staged_pipeline() {
        let entries = [
            (Complex64::new(0.5, 0.5), 0b0110u64),
            (Complex64::new(-0.5, 0.0), 0b1011),
            (Complex64::new(0.0, -0.5), 0b0001),
        ];
        let spec = SparseStateSpec::from_pairs(4, &entries).unwrap();
        check_prepares_with_ancilla(&spec, 20);
    }

    #[test]
    fn tight_budget_falls_to_single_bit_blocks() {
        let spec = SparseStateSpec::uniform(4, &[1, 6, 11]).unwrap();
        // r = 1 needs 4 * 2 + 1 = 9 ancillas.
        let circuit = check_prepares_with_ancilla(&spec, 9);
        assert_eq!(circuit.ancillas, 9);
        assert!(matches!(
            synth_with_ancilla(&spec, 8),
            Err(Error::TooFewAncillas { n: 4, m: 8 })
        ));
    }

    #[test]
    fn single_entry_uses_plain_x_gates() {
        let spec = SparseStateSpec::uniform(6, &[0b101001]).unwrap();
        let circuit = synth_with_ancilla(&spec, 64).unwrap();
        assert_eq!(circuit.ancillas, 0);
        assert_eq!(circuit.len(), 3);
        let report = run_against_spec(&circuit, &spec).unwrap();
        assert!(report.fidelity > 1.0 - 1e-12);
    }

    #[test]
    fn counted_auto_picks_a_working_circuit() {
        let spec = SparseStateSpec::uniform(4, &[3, 5, 9, 14]).unwrap();
        for m in [0usize, 9, 40] {
            let choice = synth_auto(&spec, m, AutoMode::Counted).unwrap();
            let report = run_against_spec(&choice.circuit, &spec).unwrap();
            assert!(report.fidelity > 1.0 - 1e-9, "m={m}");
            if m == 0 {
                assert!(!choice.used_ancillas);
            }
        }
    }

    #[test]
    fn threshold_auto_follows_the_regime_rule() {
        let dense: Vec<u64> = (0..12).collect();
        let spec = SparseStateSpec::uniform(4, &dense).unwrap();
        let favored = synth_auto(&spec, 16, AutoMode::Threshold).unwrap();
        assert!(favored.used_ancillas, "d=12 >= 8 and m=16 >= 16");
        let sparse_spec = SparseStateSpec::uniform(4, &[0, 15]).unwrap();
        let plain = synth_auto(&sparse_spec, 16, AutoMode::Threshold).unwrap();
        assert!(!plain.used_ancillas, "d=2 < 8");
        let tiny_budget = synth_auto(&spec, 15, AutoMode::Threshold).unwrap();
        assert!(!tiny_budget.used_ancillas, "m=15 < 16");
    }
}
