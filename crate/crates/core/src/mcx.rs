//! Expansion of multi-controlled gates into X, CNOT and Toffoli plus
//! single-qubit rotations.
//!
//! Synthesis layers treat MCX and MCU as primitive; this module is the only
//! place they are lowered. Strategy for a k-control MCX:
//!
//! * k <= 2: direct (X, CNOT, Toffoli).
//! * k >= 3 and k-2 qubits known to be |0>: an AND staircase, 2k-3 Toffolis.
//!   Only valid when the chain qubits really are |0>; the circuit-level
//!   walkers prove this by tracking targets from the all-zeros start.
//! * k >= 3 and at least k-2 borrowable qubits: the borrowed-qubit ladder,
//!   4(k-2) Toffolis. Borrowed qubits may hold arbitrary states; the ladder
//!   restores them on every basis state.
//! * k >= 3 and 1..k-3 borrowable qubits: two-half split through one bridge
//!   qubit; each half runs as a ladder borrowing the other half's controls.
//! * no borrowable qubit at all: an exact ancilla-free recursion that peels
//!   one control per level using controlled square roots of X; size grows
//!   quadratically in k, so the synthesis layers arrange batch shapes that
//!   avoid this case whenever counts matter.
//!
//! Negative controls are handled uniformly by an X sandwich: two extra X
//! gates per negative control, at every strategy.
//!
//! MCU (a multi-controlled single-qubit unitary) is lowered with the
//! two-MCX conjugation A . MCX . B . MCX . C, where A, B, C are rotations
//! built from the ZYZ angles of the special-unitary part of u. A base gate
//! with non-unit determinant additionally needs a multi-controlled phase,
//! emitted as a chain of Rz/MCX pairs; the G gates and rotations produced by
//! the synthesis pipelines are all special unitary, so they never pay that
//! cost.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gate::{BaseGate, Circuit, Control, Gate, Mat2};

const ANGLE_EPS: f64 = 1e-14;
const UNITARY_TOL: f64 = 1e-10;

/// One MCX lowering job: controls with polarity, a target, and qubits the
/// expansion may borrow in arbitrary (dirty) states. Qubits listed in
/// `clean` must be |0>; with k-2 of them the cheaper AND staircase applies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct McxRequest {
    pub controls: Vec<Control>,
    pub target: usize,
    pub free: Vec<usize>,
    pub clean: Vec<usize>,
}

impl McxRequest {
    pub fn new(controls: Vec<Control>, target: usize, free: Vec<usize>) -> Self {
        McxRequest { controls, target, free, clean: Vec::new() }
    }

    pub fn with_clean(mut self, clean: Vec<usize>) -> Self {
        self.clean = clean;
        self
    }

    fn validate(&self) -> Result<()> {
        let mut seen = std::collections::BTreeSet::new();
        for q in self
            .controls
            .iter()
            .map(|c| c.qubit)
            .chain([self.target])
            .chain(self.free.iter().copied())
            .chain(self.clean.iter().copied())
        {
            if !seen.insert(q) {
                return Err(Error::OverlappingQubits { qubit: q });
            }
        }
        Ok(())
    }
}

/// Receives expanded gates; either stores them or just tallies them.
pub trait GateSink {
    fn emit(&mut self, gate: Gate);
}

impl GateSink for Vec<Gate> {
    fn emit(&mut self, gate: Gate) {
        self.push(gate);
    }
}

impl GateSink for Circuit {
    fn emit(&mut self, gate: Gate) {
        self.push(gate);
    }
}

/// Gate tallies at the X / CNOT / Toffoli level, without materializing.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct GateTally {
    pub singles: u64,
    pub cnots: u64,
    pub toffolis: u64,
    pub swaps: u64,
    pub wide_mcx: u64,
    pub mcu: u64,
}

impl GateTally {
    /// Single-qubit + CNOT total once Toffolis are costed at 10 + 6.
    pub fn elementary(&self) -> u64 {
        self.singles + self.cnots + self.toffolis * (TOFFOLI_SINGLES + TOFFOLI_CNOTS)
    }
}

/// Elementary cost of one 3-qubit Toffoli.
pub const TOFFOLI_SINGLES: u64 = 10;
pub const TOFFOLI_CNOTS: u64 = 6;

impl GateSink for GateTally {
    fn emit(&mut self, gate: Gate) {
        match &gate {
            g if g.is_single_qubit() => self.singles += 1,
            Gate::Cnot { .. } => self.cnots += 1,
            Gate::Swap { .. } => self.swaps += 1,
            Gate::Mcx { controls, .. } => match controls.len() {
                0 => self.singles += 1,
                1 => {
                    if controls[0].positive {
                        self.cnots += 1;
                    } else {
                        self.singles += 2;
                        self.cnots += 1;
                    }
                }
                2 if controls.iter().all(|c| c.positive) => self.toffolis += 1,
                2 => {
                    self.singles += 2 * controls.iter().filter(|c| !c.positive).count() as u64;
                    self.toffolis += 1;
                }
                _ => self.wide_mcx += 1,
            },
            Gate::Mcu { .. } => self.mcu += 1,
            _ => unreachable!(),
        }
    }
}

/// Expands one MCX request into X / CNOT / Toffoli gates.
pub fn expand_mcx(req: &McxRequest) -> Result<Vec<Gate>> {
    let mut out = Vec::new();
    expand_mcx_into(req, &mut out)?;
    Ok(out)
}

pub fn expand_mcx_into(req: &McxRequest, sink: &mut impl GateSink) -> Result<()> {
    req.validate()?;
    let k = req.controls.len();
    if k >= 3 && req.clean.len() >= k - 2 {
        return with_sandwich(&req.controls, sink, |pos, sink| {
            mcx_clean_chain(&pos, req.target, &req.clean[..k - 2], sink);
            Ok(())
        });
    }
    // Too few for the staircase; |0> qubits still make fine dirty borrows.
    let pool: Vec<usize> = req.free.iter().chain(req.clean.iter()).copied().collect();
    with_sandwich(&req.controls, sink, |pos, sink| {
        mcx_positive(&pos, req.target, &pool, sink)
    })
}

/// Emits the X sandwich for negative controls around `body`, which receives
/// the all-positive control qubit list.
fn with_sandwich<S: GateSink>(
    controls: &[Control],
    sink: &mut S,
    body: impl FnOnce(Vec<usize>, &mut S) -> Result<()>,
) -> Result<()> {
    let negs: Vec<usize> = controls.iter().filter(|c| !c.positive).map(|c| c.qubit).collect();
    for &q in &negs {
        sink.emit(Gate::X { target: q });
    }
    body(controls.iter().map(|c| c.qubit).collect(), sink)?;
    for &q in &negs {
        sink.emit(Gate::X { target: q });
    }
    Ok(())
}

/// Core dispatch for an all-positive MCX.
fn mcx_positive(controls: &[usize], target: usize, free: &[usize], sink: &mut impl GateSink) -> Result<()> {
    match controls.len() {
        0 => sink.emit(Gate::X { target }),
        1 => sink.emit(Gate::Cnot { control: controls[0], target }),
        2 => sink.emit(Gate::toffoli(controls[0], controls[1], target)),
        k if free.len() >= k - 2 => ladder(controls, target, &free[..k - 2], sink),
        _ if !free.is_empty() => split(controls, target, free[0], sink),
        _ => zero_free(controls, target, sink)?,
    }
    Ok(())
}

/// Borrowed-qubit ladder: 4(k-2) Toffolis through k-2 dirty qubits.
///
/// Two sweeps of a Toffoli staircase; the second sweep restores the dirty
/// qubits. Exact on every basis state for arbitrary dirty contents.
fn ladder(controls: &[usize], target: usize, dirty: &[usize], sink: &mut impl GateSink) {
    let k = controls.len();
    debug_assert!(k >= 3 && dirty.len() == k - 2);
    let top = |sink: &mut dyn FnMut(Gate)| sink(Gate::toffoli(controls[k - 1], dirty[k - 3], target));
    let descent = |sink: &mut dyn FnMut(Gate)| {
        for i in (1..=k - 3).rev() {
            sink(Gate::toffoli(controls[i + 1], dirty[i - 1], dirty[i]));
        }
        sink(Gate::toffoli(controls[1], controls[0], dirty[0]));
        for i in 1..=k - 3 {
            sink(Gate::toffoli(controls[i + 1], dirty[i - 1], dirty[i]));
        }
    };
    let mut push = |g: Gate| sink.emit(g);
    top(&mut push);
    descent(&mut push);
    top(&mut push);
    descent(&mut push);
}

/// AND staircase through k-2 qubits that are known to be |0>: 2k-3 Toffolis.
///
/// The conjunction of the first k-1 controls is computed into the top of the
/// chain, one Toffoli writes the target, and the mirrored staircase restores
/// the chain to |0>. Wrong on any input where a chain qubit is not |0>.
fn mcx_clean_chain(controls: &[usize], target: usize, chain: &[usize], sink: &mut impl GateSink) {
    let k = controls.len();
    debug_assert!(k >= 3 && chain.len() == k - 2);
    sink.emit(Gate::toffoli(controls[0], controls[1], chain[0]));
    for i in 2..k - 1 {
        sink.emit(Gate::toffoli(controls[i], chain[i - 2], chain[i - 1]));
    }
    sink.emit(Gate::toffoli(controls[k - 1], chain[k - 3], target));
    for i in (2..k - 1).rev() {
        sink.emit(Gate::toffoli(controls[i], chain[i - 2], chain[i - 1]));
    }
    sink.emit(Gate::toffoli(controls[0], controls[1], chain[0]));
}

/// MCU through a |0> staircase: the first k-1 controls collapse into the top
/// chain qubit, the base gate runs two-controlled, and the chain uncomputes.
/// 2k-2 Toffolis plus the two-control body, against roughly 8(k-2) for the
/// dirty route.
fn mcu_clean_chain(
    u: &Mat2,
    controls: &[usize],
    target: usize,
    chain: &[usize],
    sink: &mut impl GateSink,
) -> Result<()> {
    let k = controls.len();
    debug_assert!(k >= 3 && chain.len() == k - 2);
    let stair: Vec<Gate> = std::iter::once(Gate::toffoli(controls[0], controls[1], chain[0]))
        .chain((2..k - 1).map(|i| Gate::toffoli(controls[i], chain[i - 2], chain[i - 1])))
        .collect();
    for g in &stair {
        sink.emit(g.clone());
    }
    mcu_positive(u, &[controls[k - 1], chain[k - 3]], target, &[], sink)?;
    for g in stair.iter().rev() {
        sink.emit(g.clone());
    }
    Ok(())
}

/// Two-half split through a single bridge qubit.
///
/// With a = ceil(k/2): AND of the first half is toggled onto the bridge
/// (borrowing the second half and the target as dirty), then the second
/// half plus bridge toggles the target (borrowing the first half). Each
/// piece appears twice so the bridge is restored.
fn split(controls: &[usize], target: usize, bridge: usize, sink: &mut impl GateSink) {
    let k = controls.len();
    debug_assert!(k >= 3);
    let a = k.div_ceil(2);
    let (first, second) = controls.split_at(a);
    let mut first_pool: Vec<usize> = second.to_vec();
    first_pool.push(target);
    let second_controls: Vec<usize> = second.iter().copied().chain([bridge]).collect();
    let second_pool: Vec<usize> = first.to_vec();
    for _ in 0..2 {
        mcx_positive(first, bridge, &first_pool[..first.len().saturating_sub(2)], sink)
            .expect("pool sized for ladder");
        mcx_positive(
            &second_controls,
            target,
            &second_pool[..second_controls.len().saturating_sub(2)],
            sink,
        )
        .expect("pool sized for ladder");
    }
}

/// Exact ancilla-free recursion for a k-control X with no borrowable qubit.
///
/// Peels the last control: CV(c_last, t), MCX over the rest onto c_last
/// (borrowing t), CV-dagger, the MCX again, then a multi-controlled V over
/// the rest (borrowing c_last), with V = sqrt(X). Each level costs O(k) and
/// the controlled-V recursion adds another O(k) levels, so the total is
/// quadratic in k.
fn zero_free(controls: &[usize], target: usize, sink: &mut impl GateSink) -> Result<()> {
    let k = controls.len();
    debug_assert!(k >= 3);
    let v = sqrt_x();
    let v_dag = v.adjoint();
    let last = controls[k - 1];
    let rest = &controls[..k - 1];
    mcu_positive(&v, &[last], target, &[], sink)?;
    mcx_positive(rest, last, &[target], sink)?;
    mcu_positive(&v_dag, &[last], target, &[], sink)?;
    mcx_positive(rest, last, &[target], sink)?;
    mcu_positive(&v, rest, target, &[last], sink)
}

fn sqrt_x() -> Mat2 {
    let p = Complex64::new(0.5, 0.5);
    let m = Complex64::new(0.5, -0.5);
    Mat2([[p, m], [m, p]])
}

/// Expands a multi-controlled single-qubit unitary.
pub fn expand_mcu(
    base: &BaseGate,
    controls: &[Control],
    target: usize,
    free: &[usize],
) -> Result<Vec<Gate>> {
    let mut out = Vec::new();
    expand_mcu_into(base, controls, target, free, &mut out)?;
    Ok(out)
}

pub fn expand_mcu_into(
    base: &BaseGate,
    controls: &[Control],
    target: usize,
    free: &[usize],
    sink: &mut impl GateSink,
) -> Result<()> {
    expand_mcu_req(
        base,
        &McxRequest::new(controls.to_vec(), target, free.to_vec()),
        sink,
    )
}

/// Request-shaped MCU expansion; honours the request's clean qubits.
pub fn expand_mcu_req(base: &BaseGate, req: &McxRequest, sink: &mut impl GateSink) -> Result<()> {
    let u = base.matrix();
    u.check_unitary(UNITARY_TOL)?;
    req.validate()?;
    if u.phase_free_distance(&Mat2::identity()) < 1e-12 && u.det().im.abs() < 1e-12 && u.det().re > 0.0 {
        return Ok(());
    }
    if (u.0[0][0].norm() < 1e-15)
        && (u.0[0][1] - Complex64::new(1.0, 0.0)).norm() < 1e-15
        && (u.0[1][0] - Complex64::new(1.0, 0.0)).norm() < 1e-15
    {
        // Exactly X: the plain MCX strategies are cheaper and phase-exact.
        return expand_mcx_into(req, sink);
    }
    let k = req.controls.len();
    if k >= 3 && req.clean.len() >= k - 2 {
        return with_sandwich(&req.controls, sink, |pos, sink| {
            mcu_clean_chain(&u, &pos, req.target, &req.clean[..k - 2], sink)
        });
    }
    let pool: Vec<usize> = req.free.iter().chain(req.clean.iter()).copied().collect();
    with_sandwich(&req.controls, sink, |pos, sink| {
        mcu_positive(&u, &pos, req.target, &pool, sink)
    })
}

/// All-positive multi-controlled u, exact including relative phase.
fn mcu_positive(
    u: &Mat2,
    controls: &[usize],
    target: usize,
    free: &[usize],
    sink: &mut impl GateSink,
) -> Result<()> {
    if controls.is_empty() {
        for g in single_qubit_rotations(u, target) {
            sink.emit(g);
        }
        return Ok(());
    }
    // u = e^{i delta} W with det(W) = 1.
    let delta = u.det().arg() / 2.0;
    let w = scale(u, Complex64::from_polar(1.0, -delta));
    let (gamma, theta, lambda) = zyz_angles(&w);
    // W = A X B X C with A B C = I:
    //   A = Rz(gamma) Ry(theta/2)
    //   B = Ry(-theta/2) Rz(-(gamma+lambda)/2)
    //   C = Rz((lambda-gamma)/2)
    emit_rz(sink, (lambda - gamma) / 2.0, target);
    mcx_positive(controls, target, free, sink)?;
    emit_rz(sink, -(gamma + lambda) / 2.0, target);
    emit_ry(sink, -theta / 2.0, target);
    mcx_positive(controls, target, free, sink)?;
    emit_ry(sink, theta / 2.0, target);
    emit_rz(sink, gamma, target);
    if delta.abs() > ANGLE_EPS {
        let mut pool = free.to_vec();
        pool.push(target);
        mcphase(delta, controls, &pool, sink)?;
    }
    Ok(())
}

/// Phase e^{i delta} on the subspace where every qubit of `over` is 1,
/// up to global phase. One Rz/MCX/Rz/MCX block per level.
fn mcphase(delta: f64, over: &[usize], free: &[usize], sink: &mut impl GateSink) -> Result<()> {
    match over.len() {
        0 => Ok(()),
        1 => {
            emit_rz(sink, delta, over[0]);
            Ok(())
        }
        n => {
            let star = over[n - 1];
            let rest = &over[..n - 1];
            emit_rz(sink, delta / 2.0, star);
            mcx_positive(rest, star, free, sink)?;
            emit_rz(sink, -delta / 2.0, star);
            mcx_positive(rest, star, free, sink)?;
            let mut pool = free.to_vec();
            pool.push(star);
            mcphase(delta / 2.0, rest, &pool, sink)
        }
    }
}

fn emit_rz(sink: &mut impl GateSink, theta: f64, target: usize) {
    if theta.abs() > ANGLE_EPS {
        sink.emit(Gate::Rz { theta, target });
    }
}

fn emit_ry(sink: &mut impl GateSink, theta: f64, target: usize) {
    if theta.abs() > ANGLE_EPS {
        sink.emit(Gate::Ry { theta, target });
    }
}

fn scale(m: &Mat2, s: Complex64) -> Mat2 {
    Mat2([
        [m.0[0][0] * s, m.0[0][1] * s],
        [m.0[1][0] * s, m.0[1][1] * s],
    ])
}

/// ZYZ angles of a special-unitary matrix: W = Rz(gamma) Ry(theta) Rz(lambda).
pub fn zyz_angles(w: &Mat2) -> (f64, f64, f64) {
    let w00 = w.0[0][0];
    let w10 = w.0[1][0];
    let theta = 2.0 * w10.norm().atan2(w00.norm());
    if w10.norm() < 1e-12 {
        let gamma = -w00.arg();
        (gamma, 0.0, gamma)
    } else if w00.norm() < 1e-12 {
        let gamma = w10.arg();
        (gamma, std::f64::consts::PI, -gamma)
    } else {
        let sum = -2.0 * w00.arg();
        let diff = 2.0 * w10.arg();
        ((sum + diff) / 2.0, theta, (sum - diff) / 2.0)
    }
}

/// Rotation sequence for a bare single-qubit unitary, up to global phase.
pub fn single_qubit_rotations(u: &Mat2, target: usize) -> Vec<Gate> {
    let delta = u.det().arg() / 2.0;
    let w = scale(u, Complex64::from_polar(1.0, -delta));
    let (gamma, theta, lambda) = zyz_angles(&w);
    let mut out = Vec::new();
    if lambda.abs() > ANGLE_EPS {
        out.push(Gate::Rz { theta: lambda, target });
    }
    if theta.abs() > ANGLE_EPS {
        out.push(Gate::Ry { theta, target });
    }
    if gamma.abs() > ANGLE_EPS {
        out.push(Gate::Rz { theta: gamma, target });
    }
    out
}

/// Lowers every SWAP, MCX and MCU of a circuit, borrowing uninvolved qubits
/// as dirty workspace. With `lower_g` the G gates become rotation triples
/// as well, leaving only {x, cx, toffoli, ry, rz, rx}. The output is
/// equivalent to the input as a unitary, so it is safe for circuits applied
/// to arbitrary input states (permutations, converters).
pub fn expand_circuit(circuit: &Circuit, lower_g: bool) -> Result<Circuit> {
    expand_walk(circuit, lower_g, false)
}

/// Like [`expand_circuit`] for a circuit that runs from the all-zeros state.
/// Wide gates may then route through qubits that are provably still |0>,
/// which roughly halves MCX cost and quarters MCU cost. The output prepares
/// the same state as the input but is not unitary-equivalent to it.
pub fn expand_circuit_from_zero(circuit: &Circuit, lower_g: bool) -> Result<Circuit> {
    expand_walk(circuit, lower_g, true)
}

fn expand_walk(circuit: &Circuit, lower_g: bool, from_zero: bool) -> Result<Circuit> {
    let mut out = Circuit::with_ancillas(circuit.width, circuit.ancillas);
    out.registers = circuit.registers.clone();
    walk_gates(circuit, lower_g, from_zero, &mut out)?;
    Ok(out)
}

/// Tallies the full expansion of a circuit without materializing it,
/// with [`expand_circuit`]'s unitary semantics.
pub fn tally_expanded(circuit: &Circuit) -> Result<GateTally> {
    let mut tally = GateTally::default();
    walk_gates(circuit, false, false, &mut tally)?;
    Ok(tally)
}

/// Tally under [`expand_circuit_from_zero`]'s all-zeros-input semantics.
pub fn tally_expanded_from_zero(circuit: &Circuit) -> Result<GateTally> {
    let mut tally = GateTally::default();
    walk_gates(circuit, false, true, &mut tally)?;
    Ok(tally)
}

fn walk_gates(circuit: &Circuit, lower_g: bool, from_zero: bool, sink: &mut impl GateSink) -> Result<()> {
    let mut zero = if from_zero { vec![true; circuit.width] } else { Vec::new() };
    for gate in &circuit.gates {
        let chain = if zero.is_empty() { Vec::new() } else { zero_chain(&zero, gate) };
        expand_gate(gate, circuit.width, lower_g, chain, sink)?;
        if !zero.is_empty() {
            note_raw(gate, &mut zero);
        }
    }
    Ok(())
}

pub fn expand_gate_into(
    gate: &Gate,
    width: usize,
    lower_g: bool,
    sink: &mut impl GateSink,
) -> Result<()> {
    expand_gate(gate, width, lower_g, Vec::new(), sink)
}

fn expand_gate(
    gate: &Gate,
    width: usize,
    lower_g: bool,
    chain: Vec<usize>,
    sink: &mut impl GateSink,
) -> Result<()> {
    match gate {
        Gate::Swap { a, b } => {
            sink.emit(Gate::Cnot { control: *a, target: *b });
            sink.emit(Gate::Cnot { control: *b, target: *a });
            sink.emit(Gate::Cnot { control: *a, target: *b });
            Ok(())
        }
        Gate::Mcx { controls, target } => {
            expand_mcx_into(&gate_request(width, controls, *target, chain), sink)
        }
        Gate::Mcu { base, controls, target } => {
            expand_mcu_req(base, &gate_request(width, controls, *target, chain), sink)
        }
        Gate::G { alpha, beta, target } if lower_g => {
            let m = BaseGate::G { alpha: *alpha, beta: *beta }.matrix();
            for g in single_qubit_rotations(&m, *target) {
                sink.emit(g);
            }
            Ok(())
        }
        g => {
            sink.emit(g.clone());
            Ok(())
        }
    }
}

/// Builds the lowering request for an embedded wide gate: a proven-|0> chain
/// when one was found, the usual dirty borrows otherwise.
fn gate_request(width: usize, controls: &[Control], target: usize, chain: Vec<usize>) -> McxRequest {
    if chain.is_empty() {
        let free = borrowable(width, controls, target, controls.len().saturating_sub(2));
        McxRequest::new(controls.to_vec(), target, free)
    } else {
        McxRequest::new(controls.to_vec(), target, Vec::new()).with_clean(chain)
    }
}

/// The k-2 lowest qubits outside a wide gate that are still provably |0>,
/// or empty when the gate is narrow or not enough qubits qualify.
fn zero_chain(zero: &[bool], gate: &Gate) -> Vec<usize> {
    let want = match gate {
        Gate::Mcx { controls, .. } | Gate::Mcu { controls, .. } if controls.len() >= 3 => {
            controls.len() - 2
        }
        _ => return Vec::new(),
    };
    let used: std::collections::BTreeSet<usize> = gate.qubits().into_iter().collect();
    let mut chain = Vec::with_capacity(want);
    for (q, &z) in zero.iter().enumerate() {
        if z && !used.contains(&q) {
            chain.push(q);
            if chain.len() == want {
                return chain;
            }
        }
    }
    Vec::new()
}

/// Marks the qubits a raw gate can move off |0>. Every lowering restores
/// controls and borrowed workspace exactly, so only targets leave the set;
/// a swap of two |0> qubits is the identity and keeps both.
fn note_raw(gate: &Gate, zero: &mut [bool]) {
    match gate {
        Gate::Swap { a, b } => {
            if !(zero[*a] && zero[*b]) {
                zero[*a] = false;
                zero[*b] = false;
            }
        }
        Gate::X { target }
        | Gate::Cnot { target, .. }
        | Gate::Rx { target, .. }
        | Gate::Ry { target, .. }
        | Gate::Rz { target, .. }
        | Gate::G { target, .. }
        | Gate::Mcx { target, .. }
        | Gate::Mcu { target, .. } => zero[*target] = false,
    }
}

/// First `want` qubits below `width` not used by the gate.
fn borrowable(width: usize, controls: &[Control], target: usize, want: usize) -> Vec<usize> {
    let mut used: Vec<usize> = controls.iter().map(|c| c.qubit).collect();
    used.push(target);
    used.sort_unstable();
    let mut out = Vec::with_capacity(want);
    let mut next = 0usize;
    for q in 0..width {
        if out.len() == want {
            break;
        }
        while next < used.len() && used[next] < q {
            next += 1;
        }
        if next < used.len() && used[next] == q {
            continue;
        }
        out.push(q);
    }
    out
}
