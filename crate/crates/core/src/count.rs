//! Gate counting.
//!
//! Counts are taken at three levels: gates as written, the Toffoli level
//! (every SWAP / MCX / MCU lowered, Toffolis kept whole), and fully
//! elementary (Toffolis costed as their standard 10 single-qubit gates plus
//! 6 CNOTs). Lowering for counting runs through the same expansion code
//! that materializes circuits, so counted and emitted sizes always agree.

use std::collections::BTreeMap;

use crate::error::Result;
use crate::gate::Circuit;
use crate::mcx::{tally_expanded, tally_expanded_from_zero, GateTally};

/// Gate totals for one circuit at every counting level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountReport {
    /// Gates exactly as written, keyed by kind name.
    pub raw: BTreeMap<String, u64>,
    /// After lowering SWAP / MCX / MCU; Toffolis kept as units.
    pub lowered: GateTally,
    /// Single-qubit + CNOT total with Toffolis costed at 10 + 6.
    pub elementary: u64,
}

impl CountReport {
    pub fn raw_total(&self) -> u64 {
        self.raw.values().sum()
    }

    /// CNOT count at the fully elementary level.
    pub fn elementary_cnots(&self) -> u64 {
        self.lowered.cnots + self.lowered.toffolis * crate::mcx::TOFFOLI_CNOTS
    }

    pub fn elementary_singles(&self) -> u64 {
        self.lowered.singles + self.lowered.toffolis * crate::mcx::TOFFOLI_SINGLES
    }
}

/// Counts one circuit at all levels without materializing the expansion.
/// Lowering uses unitary semantics, valid for any input state.
pub fn count_circuit(circuit: &Circuit) -> Result<CountReport> {
    finish_report(circuit, tally_expanded(circuit)?)
}

/// Counts a circuit that runs from the all-zeros state, matching
/// [`crate::mcx::expand_circuit_from_zero`]'s cheaper lowering.
pub fn count_prep_circuit(circuit: &Circuit) -> Result<CountReport> {
    finish_report(circuit, tally_expanded_from_zero(circuit)?)
}

fn finish_report(circuit: &Circuit, lowered: GateTally) -> Result<CountReport> {
    let mut raw: BTreeMap<String, u64> = BTreeMap::new();
    for gate in &circuit.gates {
        *raw.entry(gate.kind_name().to_string()).or_insert(0) += 1;
    }
    debug_assert_eq!(lowered.wide_mcx, 0, "expansion must eliminate wide MCX");
    debug_assert_eq!(lowered.mcu, 0, "expansion must eliminate MCU");
    debug_assert_eq!(lowered.swaps, 0, "expansion must eliminate SWAP");
    let elementary = lowered.elementary();
    Ok(CountReport { raw, lowered, elementary })
}
