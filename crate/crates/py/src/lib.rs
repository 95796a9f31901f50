//! Python bindings: state specs, circuits and the synthesis entry points.
//!
//! Built as `libsparseprep_py.so`; rename or symlink to `sparseprep.so` so
//! `import sparseprep` finds it (see `python/smoke.py`). Errors surface as
//! `ValueError` carrying the library's message text.

use std::collections::HashMap;

use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use sparseprep::gate::Circuit;
use sparseprep::state::SparseStateSpec;
use sparseprep::{ancilla, convert, io, mcx, perm, perm_synth, sim, sparse, unary};

fn err(e: sparseprep::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Sparse state description: n qubits, amplitude per basis point.
#[pyclass(frozen, name = "StateSpec")]
struct PySpec {
    inner: SparseStateSpec,
}

#[pymethods]
impl PySpec {
    /// StateSpec(n, [(amplitude, basis), ...]); amplitudes must have unit
    /// total norm and the basis points must be distinct.
    #[new]
    fn new(n: usize, entries: Vec<(Complex64, u64)>) -> PyResult<Self> {
        Ok(PySpec { inner: SparseStateSpec::from_pairs(n, &entries).map_err(err)? })
    }

    /// Uniform positive amplitudes over the given basis points.
    #[staticmethod]
    fn uniform(n: usize, bases: Vec<u64>) -> PyResult<Self> {
        Ok(PySpec { inner: SparseStateSpec::uniform(n, &bases).map_err(err)? })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PySpec { inner: io::read_state(text).map_err(err)? })
    }

    fn to_json(&self) -> String {
        io::write_state(&self.inner)
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    fn entries(&self) -> Vec<(Complex64, u64)> {
        self.inner.entries().iter().map(|e| (e.amplitude, e.basis)).collect()
    }

    fn __len__(&self) -> usize {
        self.inner.entries().len()
    }

    fn __repr__(&self) -> String {
        format!("StateSpec(n={}, entries={})", self.inner.n(), self.inner.entries().len())
    }
}

/// Gate list over `width` qubits; trailing `ancillas` start and end in |0>.
#[pyclass(frozen, name = "Circuit")]
struct PyCircuit {
    inner: Circuit,
}

#[pymethods]
impl PyCircuit {
    #[staticmethod]
    fn from_text(text: &str) -> PyResult<Self> {
        Ok(PyCircuit { inner: io::read_circuit(text).map_err(err)? })
    }

    /// The plain-text circuit format used by the CLI.
    fn to_text(&self) -> PyResult<String> {
        io::write_circuit(&self.inner).map_err(err)
    }

    #[getter]
    fn width(&self) -> usize {
        self.inner.width
    }

    #[getter]
    fn ancillas(&self) -> usize {
        self.inner.ancillas
    }

    #[getter]
    fn data_qubits(&self) -> usize {
        self.inner.data_qubits()
    }

    /// Lowers swap/mcx/mcu/g to x, cx, ccx, ry, rz. `from_zero` permits the
    /// cheaper lowering that is only valid when the circuit runs from
    /// |0...0>.
    #[pyo3(signature = (from_zero = false))]
    fn expand(&self, from_zero: bool) -> PyResult<Self> {
        let lowered = if from_zero {
            mcx::expand_circuit_from_zero(&self.inner, true)
        } else {
            mcx::expand_circuit(&self.inner, true)
        };
        Ok(PyCircuit { inner: lowered.map_err(err)? })
    }

    /// Totals: raw_total, singles, cnots, toffolis and elementary (with
    /// Toffolis costed at 16).
    #[pyo3(signature = (from_zero = false))]
    fn counts(&self, from_zero: bool) -> PyResult<HashMap<String, u64>> {
        let report = if from_zero {
            sparseprep::count::count_prep_circuit(&self.inner)
        } else {
            sparseprep::count::count_circuit(&self.inner)
        }
        .map_err(err)?;
        Ok(HashMap::from([
            ("raw_total".into(), report.raw_total()),
            ("singles".into(), report.lowered.singles),
            ("cnots".into(), report.lowered.cnots),
            ("toffolis".into(), report.lowered.toffolis),
            ("elementary".into(), report.elementary),
        ]))
    }

    /// Raw gate tally keyed by kind name (x, cx, mcx, ...).
    fn raw_counts(&self) -> HashMap<String, u64> {
        let mut raw = HashMap::new();
        for gate in &self.inner.gates {
            *raw.entry(gate.kind_name().to_string()).or_insert(0u64) += 1;
        }
        raw
    }

    /// Amplitudes after running from |0...0>, indexed by basis point.
    fn statevector(&self) -> PyResult<Vec<Complex64>> {
        let mut sv = sim::StateVector::zero(self.inner.width).map_err(err)?;
        sv.apply_circuit(&self.inner).map_err(err)?;
        Ok((0..1u64 << self.inner.width).map(|x| sv.amp(x)).collect())
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!(
            "Circuit(width={}, ancillas={}, gates={})",
            self.inner.width,
            self.inner.ancillas,
            self.inner.len()
        )
    }
}

/// Ancilla-free synthesis; output width is exactly spec.n.
#[pyfunction]
fn synth_no_ancilla(spec: &PySpec) -> PyResult<PyCircuit> {
    Ok(PyCircuit { inner: sparse::synth_no_ancilla(&spec.inner).map_err(err)? })
}

/// Synthesis with at most `m` ancillas, all restored to |0>.
#[pyfunction]
fn synth_with_ancilla(spec: &PySpec, m: usize) -> PyResult<PyCircuit> {
    Ok(PyCircuit { inner: ancilla::synth_with_ancilla(&spec.inner, m).map_err(err)? })
}

/// Picks a pipeline: rule "counted" keeps the smaller circuit, rule
/// "threshold" uses ancillas only when d >= n log2(n) and m >= n^2.
#[pyfunction]
#[pyo3(signature = (spec, m, rule = "counted"))]
fn synth_auto(spec: &PySpec, m: usize, rule: &str) -> PyResult<PyCircuit> {
    let mode = match rule {
        "counted" => ancilla::AutoMode::Counted,
        "threshold" => ancilla::AutoMode::Threshold,
        other => return Err(PyValueError::new_err(format!("unknown auto rule `{other}`"))),
    };
    let choice = ancilla::synth_auto(&spec.inner, m, mode).map_err(err)?;
    Ok(PyCircuit { inner: choice.circuit })
}

/// Synthesizes the basis permutation given by (point, image) pairs over n
/// qubits; omitted points stay fixed.
#[pyfunction]
fn synth_permutation(pairs: Vec<(u64, u64)>, n: usize) -> PyResult<PyCircuit> {
    let sigma = perm::Permutation::from_map(pairs).map_err(err)?;
    Ok(PyCircuit { inner: perm_synth::synth_permutation(&sigma, n).map_err(err)? })
}

/// One-hot to binary conversion for one 2^w-cell block; binary register
/// low, one-hot cells above it.
#[pyfunction]
fn onehot_to_binary(w: usize) -> PyResult<PyCircuit> {
    let mut circuit = Circuit::new(w + (1usize << w));
    circuit.extend(convert::synth_onehot_to_binary(w, w, 0).map_err(err)?);
    Ok(PyCircuit { inner: circuit })
}

/// Runs the circuit from |0...0> and returns (fidelity, ancilla_leak)
/// against the spec.
#[pyfunction]
fn verify(circuit: &PyCircuit, spec: &PySpec) -> PyResult<(f64, f64)> {
    let report = sim::run_against_spec(&circuit.inner, &spec.inner).map_err(err)?;
    Ok((report.fidelity, report.ancilla_leak))
}

/// Follows basis points through a classical circuit (x/cx/swap/mcx only).
#[pyfunction]
fn track_points(circuit: &PyCircuit, points: Vec<u64>) -> PyResult<Vec<u64>> {
    sim::track_points(&circuit.inner, &points).map_err(err)
}

/// Extracts the full basis action of a classical circuit as sorted
/// (point, image) pairs, fixed points omitted.
#[pyfunction]
fn permutation_action(circuit: &PyCircuit) -> PyResult<Vec<(u64, u64)>> {
    Ok(sim::permutation_action(&circuit.inner).map_err(err)?.iter().collect())
}

/// Block width used for an n-qubit spec under an m-ancilla budget, or None
/// when m is too small for any block layout.
#[pyfunction]
fn choose_r(n: usize, m: usize) -> Option<usize> {
    ancilla::choose_r(n, m)
}

/// Renders x in the block one-hot encoding for an n-qubit register split
/// into r-bit blocks, most significant block first.
#[pyfunction]
fn onehot_display(n: usize, r: usize, x: u64) -> PyResult<String> {
    let layout = unary::UnaryLayout::new(n, r, 0).map_err(err)?;
    Ok(unary::onehot_display(&layout, x))
}

#[pymodule(name = "sparseprep")]
fn bindings(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySpec>()?;
    m.add_class::<PyCircuit>()?;
    m.add_function(wrap_pyfunction!(synth_no_ancilla, m)?)?;
    m.add_function(wrap_pyfunction!(synth_with_ancilla, m)?)?;
    m.add_function(wrap_pyfunction!(synth_auto, m)?)?;
    m.add_function(wrap_pyfunction!(synth_permutation, m)?)?;
    m.add_function(wrap_pyfunction!(onehot_to_binary, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(track_points, m)?)?;
    m.add_function(wrap_pyfunction!(permutation_action, m)?)?;
    m.add_function(wrap_pyfunction!(choose_r, m)?)?;
    m.add_function(wrap_pyfunction!(onehot_display, m)?)?;
    Ok(())
}
