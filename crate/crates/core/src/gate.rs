//! Circuit representation: gates, controls, registers.
//!
//! Conventions used across the crate:
//!
//! * Qubit `i` carries bit `i` of a basis index, so qubit 0 is the least
//!   significant bit of every basis string.
//! * A circuit applies its gates in vector order: `gates[0]` acts first.
//! * Ancilla qubits, when present, are a suffix of the index range and the
//!   `ancillas` field records how many.
//! * Global phase is not tracked; two circuits that agree up to global phase
//!   are considered equivalent.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// A 2x2 complex matrix in row-major order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2(pub [[Complex64; 2]; 2]);

impl Mat2 {
    pub fn identity() -> Self {
        Mat2([
            [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
            [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
        ])
    }

    pub fn x() -> Self {
        Mat2([
            [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
            [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
        ])
    }

    pub fn rx(theta: f64) -> Self {
        let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
        Mat2([
            [Complex64::new(c, 0.0), Complex64::new(0.0, -s)],
            [Complex64::new(0.0, -s), Complex64::new(c, 0.0)],
        ])
    }

    pub fn ry(theta: f64) -> Self {
        let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
        Mat2([
            [Complex64::new(c, 0.0), Complex64::new(-s, 0.0)],
            [Complex64::new(s, 0.0), Complex64::new(c, 0.0)],
        ])
    }

    pub fn rz(theta: f64) -> Self {
        let half = theta / 2.0;
        Mat2([
            [Complex64::from_polar(1.0, -half), Complex64::new(0.0, 0.0)],
            [Complex64::new(0.0, 0.0), Complex64::from_polar(1.0, half)],
        ])
    }

    pub fn mul(&self, rhs: &Mat2) -> Mat2 {
        let a = &self.0;
        let b = &rhs.0;
        let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        Mat2(out)
    }

    pub fn adjoint(&self) -> Mat2 {
        let a = &self.0;
        Mat2([[a[0][0].conj(), a[1][0].conj()], [a[0][1].conj(), a[1][1].conj()]])
    }

    pub fn det(&self) -> Complex64 {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    /// Largest absolute entry of `U U^dagger - I`.
    pub fn unitarity_deviation(&self) -> f64 {
        let p = self.mul(&self.adjoint());
        let mut dev: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                let want = if i == j { 1.0 } else { 0.0 };
                dev = dev.max((p.0[i][j] - want).norm());
            }
        }
        dev
    }

    pub fn check_unitary(&self, tol: f64) -> Result<()> {
        let deviation = self.unitarity_deviation();
        if deviation > tol {
            return Err(Error::NotUnitary { deviation });
        }
        Ok(())
    }

    /// Entrywise distance, ignoring global phase.
    pub fn phase_free_distance(&self, rhs: &Mat2) -> f64 {
        // Align on the largest entry of self, then compare entrywise.
        let mut best = (0, 0);
        let mut mag = -1.0;
        for i in 0..2 {
            for j in 0..2 {
                if self.0[i][j].norm() > mag {
                    mag = self.0[i][j].norm();
                    best = (i, j);
                }
            }
        }
        let (bi, bj) = best;
        if rhs.0[bi][bj].norm() < 1e-300 {
            return 2.0;
        }
        let phase = self.0[bi][bj] / rhs.0[bi][bj];
        let phase = phase / Complex64::new(phase.norm(), 0.0);
        let mut dist: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                dist = dist.max((self.0[i][j] - rhs.0[i][j] * phase).norm());
            }
        }
        dist
    }
}

/// One control terminal of a multi-controlled gate.
///
/// `positive` asks for |1> on the control qubit, negative for |0>. Negative
/// controls cost two extra X gates when the gate is expanded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Control {
    pub qubit: usize,
    pub positive: bool,
}

impl Control {
    pub fn pos(qubit: usize) -> Self {
        Control { qubit, positive: true }
    }

    pub fn neg(qubit: usize) -> Self {
        Control { qubit, positive: false }
    }
}

/// Single-qubit payload of a multi-controlled gate.
#[derive(Debug, Clone, PartialEq)]
pub enum BaseGate {
    Rx(f64),
    Ry(f64),
    Rz(f64),
    /// Flag-collapse gate: moves amplitude `alpha` out of a branch of weight
    /// `beta`. See [`crate::unary::g_matrix`] for the matrix.
    G { alpha: Complex64, beta: f64 },
    Unitary(Mat2),
}

impl BaseGate {
    pub fn matrix(&self) -> Mat2 {
        match self {
            BaseGate::Rx(t) => Mat2::rx(*t),
            BaseGate::Ry(t) => Mat2::ry(*t),
            BaseGate::Rz(t) => Mat2::rz(*t),
            BaseGate::G { alpha, beta } => {
                let s = (beta * beta - alpha.norm_sqr()).max(0.0).sqrt();
                Mat2([
                    [
                        Complex64::new(s / beta, 0.0),
                        alpha / beta,
                    ],
                    [
                        -alpha.conj() / beta,
                        Complex64::new(s / beta, 0.0),
                    ],
                ])
            }
            BaseGate::Unitary(m) => *m,
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            BaseGate::Rx(_) => "rx",
            BaseGate::Ry(_) => "ry",
            BaseGate::Rz(_) => "rz",
            BaseGate::G { .. } => "g",
            BaseGate::Unitary(_) => "unitary",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Gate {
    X { target: usize },
    Cnot { control: usize, target: usize },
    Swap { a: usize, b: usize },
    Rx { theta: f64, target: usize },
    Ry { theta: f64, target: usize },
    Rz { theta: f64, target: usize },
    G { alpha: Complex64, beta: f64, target: usize },
    Mcx { controls: Vec<Control>, target: usize },
    Mcu { base: BaseGate, controls: Vec<Control>, target: usize },
}

impl Gate {
    pub fn toffoli(c1: usize, c2: usize, target: usize) -> Gate {
        Gate::Mcx { controls: vec![Control::pos(c1), Control::pos(c2)], target }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Gate::X { .. } => "x",
            Gate::Cnot { .. } => "cx",
            Gate::Swap { .. } => "swap",
            Gate::Rx { .. } => "rx",
            Gate::Ry { .. } => "ry",
            Gate::Rz { .. } => "rz",
            Gate::G { .. } => "g",
            Gate::Mcx { .. } => "mcx",
            Gate::Mcu { .. } => "mcu",
        }
    }

    /// All qubits the gate touches, controls first.
    pub fn qubits(&self) -> Vec<usize> {
        match self {
            Gate::X { target }
            | Gate::Rx { target, .. }
            | Gate::Ry { target, .. }
            | Gate::Rz { target, .. }
            | Gate::G { target, .. } => vec![*target],
            Gate::Cnot { control, target } => vec![*control, *target],
            Gate::Swap { a, b } => vec![*a, *b],
            Gate::Mcx { controls, target } | Gate::Mcu { controls, target, .. } => {
                let mut qs: Vec<usize> = controls.iter().map(|c| c.qubit).collect();
                qs.push(*target);
                qs
            }
        }
    }

    pub fn is_single_qubit(&self) -> bool {
        matches!(
            self,
            Gate::X { .. } | Gate::Rx { .. } | Gate::Ry { .. } | Gate::Rz { .. } | Gate::G { .. }
        )
    }

    pub fn validate(&self, width: usize) -> Result<()> {
        let qs = self.qubits();
        for &q in &qs {
            if q >= width {
                return Err(Error::QubitOutOfRange { qubit: q, width });
            }
        }
        let mut sorted = qs.clone();
        sorted.sort_unstable();
        for pair in sorted.windows(2) {
            if pair[0] == pair[1] {
                return Err(Error::OverlappingQubits { qubit: pair[0] });
            }
        }
        Ok(())
    }
}

/// A named contiguous qubit range, for readability of layouts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Register {
    pub name: String,
    pub start: usize,
    pub len: usize,
}

impl Register {
    pub fn new(name: impl Into<String>, start: usize, len: usize) -> Self {
        Register { name: name.into(), start, len }
    }

    pub fn qubits(&self) -> std::ops::Range<usize> {
        self.start..self.start + self.len
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Circuit {
    pub width: usize,
    /// Number of trailing qubits that must start and end in |0>.
    pub ancillas: usize,
    pub registers: Vec<Register>,
    pub gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(width: usize) -> Self {
        Circuit { width, ancillas: 0, registers: Vec::new(), gates: Vec::new() }
    }

    pub fn with_ancillas(width: usize, ancillas: usize) -> Self {
        assert!(ancillas <= width);
        Circuit { width, ancillas, registers: Vec::new(), gates: Vec::new() }
    }

    pub fn push(&mut self, gate: Gate) {
        debug_assert!(gate.validate(self.width).is_ok(), "bad gate {gate:?}");
        self.gates.push(gate);
    }

    pub fn push_checked(&mut self, gate: Gate) -> Result<()> {
        gate.validate(self.width)?;
        self.gates.push(gate);
        Ok(())
    }

    pub fn extend(&mut self, gates: impl IntoIterator<Item = Gate>) {
        for g in gates {
            self.push(g);
        }
    }

    /// Appends another circuit of the same width.
    pub fn concat(&mut self, other: &Circuit) -> Result<()> {
        if other.width != self.width {
            return Err(Error::WidthMismatch { a: self.width, b: other.width });
        }
        self.gates.extend(other.gates.iter().cloned());
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn data_qubits(&self) -> usize {
        self.width - self.ancillas
    }
}
