//! Dense preparation of a small amplitude vector on k qubits.
//!
//! Used by the sparse pipelines after compaction, when the d nonzero
//! amplitudes sit on the basis states 0..d of the low ceil(log2 d) qubits.
//! Magnitudes are produced by one multiplexed Ry per qubit, most significant
//! first, each controlled on the qubits above it; the relative phases follow
//! as multiplexed Rz stages, one per qubit, peeling phase differences and
//! recursing on averages. Global phase is dropped.
//!
//! A multiplexor over j controls is demultiplexed recursively: the top
//! control splits the angle table into halves realized as the half-sum
//! multiplexor, a CNOT, the half-difference multiplexor and a closing CNOT.
//! Identical halves drop the control instead, and an all-zero angle table
//! emits nothing, so states with symmetric or real amplitude patterns come
//! out shorter. Worst case is below 3 * 2^k rotations plus CNOTs combined.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gate::{Circuit, Gate};
use crate::state::NORM_TOL;

const ANGLE_EPS: f64 = 1e-14;

/// Rotation axis of a multiplexed stage.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Axis {
    Y,
    Z,
}

/// Prepares `amplitudes` (padded with zeros up to 2^k) on k qubits from the
/// all-zero state, exact up to global phase.
pub fn synth_dense(k: usize, amplitudes: &[Complex64]) -> Result<Circuit> {
    let dim = 1usize << k;
    if amplitudes.is_empty() || amplitudes.len() > dim {
        return Err(Error::BadAmplitudeCount { len: amplitudes.len() });
    }
    let sum_sq: f64 = amplitudes.iter().map(|c| c.norm_sqr()).sum();
    if (sum_sq - 1.0).abs() > NORM_TOL {
        return Err(Error::NotNormalized { sum_sq, tol: NORM_TOL });
    }
    let mut circuit = Circuit::new(k.max(1));
    if k == 0 {
        return Ok(circuit);
    }
    let mut padded = amplitudes.to_vec();
    padded.resize(dim, Complex64::new(0.0, 0.0));

    // Magnitude tree: cum[t][r] is the probability mass of the 2^t states
    // whose index has prefix r above the low t bits.
    let mut cum: Vec<Vec<f64>> = Vec::with_capacity(k + 1);
    cum.push(padded.iter().map(|c| c.norm_sqr()).collect());
    for t in 0..k {
        let prev = &cum[t];
        let next: Vec<f64> = (0..prev.len() / 2).map(|r| prev[2 * r] + prev[2 * r + 1]).collect();
        cum.push(next);
    }
    for t in (0..k).rev() {
        let level = &cum[t];
        let angles: Vec<f64> = (0..level.len() / 2)
            .map(|h| 2.0 * level[2 * h + 1].sqrt().atan2(level[2 * h].sqrt()))
            .collect();
        let controls: Vec<usize> = (t + 1..k).collect();
        emit_mux(&mut circuit, Axis::Y, &controls, t, &angles);
    }

    // Phase stages: peel the difference across each qubit, recurse on the
    // average. A subtree with no probability mass is a don't-care: its
    // sibling's phase is carried up unchanged so dead branches never force
    // rotations (a single occupied state yields pure global phase, emitted
    // as nothing).
    let mut phases: Vec<f64> = padded
        .iter()
        .map(|c| if c.norm_sqr() == 0.0 { 0.0 } else { c.arg() })
        .collect();
    for (t, masses) in cum.iter().enumerate().take(k) {
        let mut deltas = Vec::with_capacity(phases.len() / 2);
        let mut next = Vec::with_capacity(phases.len() / 2);
        for r in 0..phases.len() / 2 {
            let (m0, m1) = (masses[2 * r], masses[2 * r + 1]);
            let (p0, p1) = (phases[2 * r], phases[2 * r + 1]);
            if m0 == 0.0 || m1 == 0.0 {
                deltas.push(0.0);
                next.push(if m0 == 0.0 { p1 } else { p0 });
            } else {
                deltas.push(p1 - p0);
                next.push((p0 + p1) / 2.0);
            }
        }
        let controls: Vec<usize> = (t + 1..k).collect();
        emit_mux(&mut circuit, Axis::Z, &controls, t, &deltas);
        phases = next;
    }
    Ok(circuit)
}

/// Rotation of `axis` on `target` whose angle is selected by the controls;
/// angle index bit i is the value of controls[i].
fn emit_mux(circuit: &mut Circuit, axis: Axis, controls: &[usize], target: usize, angles: &[f64]) {
    debug_assert_eq!(angles.len(), 1 << controls.len());
    if angles.iter().all(|a| a.abs() < ANGLE_EPS) {
        return;
    }
    match controls.split_last() {
        None => circuit.push(rotation(axis, angles[0], target)),
        Some((&top, rest)) => {
            let half = angles.len() / 2;
            let (lo, hi) = angles.split_at(half);
            if lo == hi {
                emit_mux(circuit, axis, rest, target, lo);
                return;
            }
            let sum: Vec<f64> = (0..half).map(|i| (lo[i] + hi[i]) / 2.0).collect();
            let diff: Vec<f64> = (0..half).map(|i| (lo[i] - hi[i]) / 2.0).collect();
            emit_mux(circuit, axis, rest, target, &sum);
            circuit.push(Gate::Cnot { control: top, target });
            emit_mux(circuit, axis, rest, target, &diff);
            circuit.push(Gate::Cnot { control: top, target });
        }
    }
}

fn rotation(axis: Axis, theta: f64, target: usize) -> Gate {
    match axis {
        Axis::Y => Gate::Ry { theta, target },
        Axis::Z => Gate::Rz { theta, target },
    }
}
