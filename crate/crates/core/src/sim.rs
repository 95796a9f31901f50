//! Dense statevector simulation and classical basis tracking.
//!
//! The statevector path applies every gate kind natively (multi-controlled
//! gates included), so it can serve as the reference both for raw circuits
//! and for their expansions. Width is capped at [`MAX_SIM_WIDTH`] qubits to
//! keep a vector under 2 GB.
//!
//! For circuits built purely from X, CNOT, SWAP and MCX the basis action is
//! a permutation; [`permutation_action`] recovers it exactly without any
//! floating point, and [`track_points`] follows selected points through
//! circuits too wide to enumerate.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gate::{Circuit, Control, Gate, Mat2};
use crate::perm::Permutation;
use crate::state::SparseStateSpec;

pub const MAX_SIM_WIDTH: usize = 26;
/// Dense permutation extraction enumerates all points, so it stops earlier.
pub const MAX_TRACK_WIDTH: usize = 24;
const PAR_WIDTH: usize = 19;

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    width: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    pub fn zero(width: usize) -> Result<Self> {
        Self::basis(width, 0)
    }

    pub fn basis(width: usize, x: u64) -> Result<Self> {
        if width == 0 || width > MAX_SIM_WIDTH {
            return Err(Error::WidthTooLarge { width, max: MAX_SIM_WIDTH });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1usize << width];
        amps[x as usize] = Complex64::new(1.0, 0.0);
        Ok(StateVector { width, amps })
    }

    /// Target vector of a sparse description, padded to `width` qubits
    /// (extra qubits in |0>).
    pub fn from_spec(spec: &SparseStateSpec, width: usize) -> Result<Self> {
        if width < spec.n() || width > MAX_SIM_WIDTH {
            return Err(Error::WidthTooLarge { width, max: MAX_SIM_WIDTH });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1usize << width];
        for e in spec.entries() {
            amps[e.basis as usize] = e.amplitude;
        }
        Ok(StateVector { width, amps })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amp(&self, x: u64) -> Complex64 {
        self.amps[x as usize]
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Probability mass on basis states whose `qubit` bit is 1.
    pub fn mass_with_bit_set(&self, qubit: usize) -> f64 {
        let bit = 1usize << qubit;
        self.amps
            .iter()
            .enumerate()
            .filter(|(i, _)| i & bit != 0)
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    pub fn apply_circuit(&mut self, circuit: &Circuit) -> Result<()> {
        if circuit.width != self.width {
            return Err(Error::WidthMismatch { a: circuit.width, b: self.width });
        }
        for gate in &circuit.gates {
            self.apply_gate(gate);
        }
        Ok(())
    }

    pub fn apply_gate(&mut self, gate: &Gate) {
        match gate {
            Gate::X { target } => self.apply_masked_flip(&[], *target),
            Gate::Cnot { control, target } => {
                self.apply_masked_flip(&[Control::pos(*control)], *target)
            }
            Gate::Swap { a, b } => self.apply_swap(*a, *b),
            Gate::Rx { theta, target } => self.apply_mat(&Mat2::rx(*theta), *target),
            Gate::Ry { theta, target } => self.apply_mat(&Mat2::ry(*theta), *target),
            Gate::Rz { theta, target } => self.apply_mat(&Mat2::rz(*theta), *target),
            Gate::G { alpha, beta, target } => {
                let m = crate::gate::BaseGate::G { alpha: *alpha, beta: *beta }.matrix();
                self.apply_mat(&m, *target)
            }
            Gate::Mcx { controls, target } => self.apply_masked_flip(controls, *target),
            Gate::Mcu { base, controls, target } => {
                self.apply_controlled_mat(&base.matrix(), controls, *target)
            }
        }
    }

    fn control_masks(controls: &[Control]) -> (usize, usize) {
        let mut pos = 0usize;
        let mut neg = 0usize;
        for c in controls {
            if c.positive {
                pos |= 1usize << c.qubit;
            } else {
                neg |= 1usize << c.qubit;
            }
        }
        (pos, neg)
    }

    fn apply_mat(&mut self, m: &Mat2, target: usize) {
        self.apply_controlled_mat(m, &[], target)
    }

    /// Applies a 2x2 matrix on `target` wherever all controls match.
    fn apply_controlled_mat(&mut self, m: &Mat2, controls: &[Control], target: usize) {
        let (pos, neg) = Self::control_masks(controls);
        let bit = 1usize << target;
        let m = *m;
        let chunk = bit << 1;
        let body = move |offset: usize, slice: &mut [Complex64]| {
            for i in 0..bit {
                let lo = offset + i;
                if lo & pos == pos && lo & neg == 0 {
                    let a0 = slice[i];
                    let a1 = slice[i + bit];
                    slice[i] = m.0[0][0] * a0 + m.0[0][1] * a1;
                    slice[i + bit] = m.0[1][0] * a0 + m.0[1][1] * a1;
                }
            }
        };
        if self.width >= PAR_WIDTH {
            self.amps
                .par_chunks_mut(chunk)
                .enumerate()
                .for_each(|(ci, slice)| body(ci * chunk, slice));
        } else {
            let mut offset = 0;
            for slice in self.amps.chunks_mut(chunk) {
                body(offset, slice);
                offset += chunk;
            }
        }
    }

    /// Flips `target` wherever all controls match (X, CNOT, MCX).
    fn apply_masked_flip(&mut self, controls: &[Control], target: usize) {
        let (pos, neg) = Self::control_masks(controls);
        let bit = 1usize << target;
        let chunk = bit << 1;
        let body = move |offset: usize, slice: &mut [Complex64]| {
            for i in 0..bit {
                let lo = offset + i;
                if lo & pos == pos && lo & neg == 0 {
                    slice.swap(i, i + bit);
                }
            }
        };
        if self.width >= PAR_WIDTH {
            self.amps
                .par_chunks_mut(chunk)
                .enumerate()
                .for_each(|(ci, slice)| body(ci * chunk, slice));
        } else {
            let mut offset = 0;
            for slice in self.amps.chunks_mut(chunk) {
                body(offset, slice);
                offset += chunk;
            }
        }
    }

    fn apply_swap(&mut self, a: usize, b: usize) {
        let (lo, hi) = (a.min(b), a.max(b));
        let (lo_bit, hi_bit) = (1usize << lo, 1usize << hi);
        let chunk = hi_bit << 1;
        let body = move |slice: &mut [Complex64]| {
            // Swap states with bit pattern (hi=0, lo=1) and (hi=1, lo=0).
            for base in 0..hi_bit {
                if base & lo_bit != 0 {
                    slice.swap(base, base - lo_bit + hi_bit);
                }
            }
        };
        if self.width >= PAR_WIDTH {
            self.amps.par_chunks_mut(chunk).for_each(body);
        } else {
            for slice in self.amps.chunks_mut(chunk) {
                body(slice);
            }
        }
    }
}

/// |<a|b>| for two vectors of equal width.
pub fn fidelity(a: &StateVector, b: &StateVector) -> Result<f64> {
    if a.width != b.width {
        return Err(Error::WidthMismatch { a: a.width, b: b.width });
    }
    let dot: Complex64 = a
        .amps
        .iter()
        .zip(&b.amps)
        .map(|(x, y)| x.conj() * y)
        .sum();
    Ok(dot.norm())
}

/// Runs `circuit` from |0...0> and reports fidelity against the target
/// description (on the data qubits) along with leaked ancilla mass.
pub struct RunReport {
    pub fidelity: f64,
    /// Probability of any ancilla qubit ending outside |0>.
    pub ancilla_leak: f64,
}

pub fn run_against_spec(circuit: &Circuit, spec: &SparseStateSpec) -> Result<RunReport> {
    if circuit.data_qubits() != spec.n() {
        return Err(Error::WidthMismatch { a: circuit.data_qubits(), b: spec.n() });
    }
    let mut sv = StateVector::zero(circuit.width)?;
    sv.apply_circuit(circuit)?;
    let target = StateVector::from_spec(spec, circuit.width)?;
    let fid = fidelity(&sv, &target)?;
    let mut leak = 0.0;
    for q in circuit.data_qubits()..circuit.width {
        leak += sv.mass_with_bit_set(q);
    }
    Ok(RunReport { fidelity: fid, ancilla_leak: leak })
}

pub(crate) fn classical_step(gate: &Gate, x: u64) -> Option<u64> {
    match gate {
        Gate::X { target } => Some(x ^ (1u64 << target)),
        Gate::Cnot { control, target } => {
            if x >> control & 1 == 1 {
                Some(x ^ (1u64 << target))
            } else {
                Some(x)
            }
        }
        Gate::Swap { a, b } => {
            let (ba, bb) = (x >> a & 1, x >> b & 1);
            Some(x ^ ((ba ^ bb) * ((1u64 << a) | (1u64 << b))))
        }
        Gate::Mcx { controls, target } => {
            let fire = controls
                .iter()
                .all(|c| (x >> c.qubit & 1 == 1) == c.positive);
            if fire {
                Some(x ^ (1u64 << target))
            } else {
                Some(x)
            }
        }
        _ => None,
    }
}

/// Follows each of `points` through the circuit's classical basis action.
///
/// Works for any width up to 64 since only the given points are tracked.
/// Fails on gates without a classical action.
pub fn track_points(circuit: &Circuit, points: &[u64]) -> Result<Vec<u64>> {
    let mut xs = points.to_vec();
    for (index, gate) in circuit.gates.iter().enumerate() {
        for x in &mut xs {
            *x = classical_step(gate, *x).ok_or_else(|| Error::NotClassical {
                index,
                kind: gate.kind_name().to_string(),
            })?;
        }
    }
    Ok(xs)
}

/// Extracts the full basis permutation of a classical circuit.
pub fn permutation_action(circuit: &Circuit) -> Result<Permutation> {
    if circuit.width > MAX_TRACK_WIDTH {
        return Err(Error::WidthTooLarge { width: circuit.width, max: MAX_TRACK_WIDTH });
    }
    let size = 1u64 << circuit.width;
    let points: Vec<u64> = (0..size).collect();
    let images = track_points(circuit, &points)?;
    Permutation::from_map(points.into_iter().zip(images))
}
