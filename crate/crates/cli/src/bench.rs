//! Gate-count benchmark harness.
//!
//! Every grid cell draws a random d-sparse state from its own seeded RNG
//! stream, synthesizes it with the requested method, and records raw plus
//! fully expanded gate counts. The RNG stream depends only on the global
//! seed and the cell's (n, d, m), so different methods on the same shape
//! count the same state and the CSV is reproducible for a fixed grid and
//! seed (wall times necessarily vary). Cells run in a worker pool; records
//! keep grid order.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::time::Instant;

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use sparseprep::ancilla::{choose_r, synth_with_ancilla};
use sparseprep::count::count_prep_circuit;
use sparseprep::dense::synth_dense;
use sparseprep::gate::{Circuit, Control, Gate, Register};
use sparseprep::sim::{run_against_spec, MAX_SIM_WIDTH};
use sparseprep::wide::{self, WideBasis, WideEntry, WideStateSpec};
use sparseprep::{Error, Result, SparseStateSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Method {
    NoAncilla,
    Ancilla,
    NaiveBaseline,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::NoAncilla, Method::Ancilla, Method::NaiveBaseline];

    pub fn name(self) -> &'static str {
        match self {
            Method::NoAncilla => "no_ancilla",
            Method::Ancilla => "ancilla",
            Method::NaiveBaseline => "naive_baseline",
        }
    }

    pub fn parse(s: &str) -> Option<Method> {
        Method::ALL.into_iter().find(|m| m.name() == s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BenchCell {
    pub n: usize,
    pub d: usize,
    pub m: usize,
    pub method: Method,
}

#[derive(Debug, Clone)]
pub struct BenchRecord {
    pub cell: BenchCell,
    /// "ok" or "infeasible".
    pub status: &'static str,
    pub raw_count: Option<u64>,
    pub expanded_count: Option<u64>,
    /// None when the cell was not simulated (too wide or disabled).
    pub sim_verified: Option<bool>,
    pub wall_time_ms: u64,
}

/// Parses one `n,d,m,method` grid cell.
pub fn parse_cell(s: &str) -> Result<BenchCell> {
    let err = |msg: String| Error::Parse { line: 0, msg };
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 4 {
        return Err(err(format!("cell `{s}` is not of the form n,d,m,method")));
    }
    let num = |tok: &str, what: &str| {
        tok.parse::<usize>().map_err(|_| err(format!("bad {what} `{tok}` in cell `{s}`")))
    };
    Ok(BenchCell {
        n: num(parts[0], "n")?,
        d: num(parts[1], "d")?,
        m: num(parts[2], "m")?,
        method: Method::parse(parts[3])
            .ok_or_else(|| err(format!("unknown method `{}` in cell `{s}`", parts[3])))?,
    })
}

fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E3779B97F4A7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

/// Seed of a cell's RNG stream. Method is deliberately left out so that
/// different methods on the same (n, d, m) shape draw the same state.
pub fn cell_seed(seed: u64, cell: &BenchCell) -> u64 {
    let mut z = mix(seed);
    for part in [cell.n as u64, cell.d as u64, cell.m as u64] {
        z = mix(z ^ part);
    }
    z
}

fn random_amplitudes(d: usize, rng: &mut impl Rng) -> Vec<Complex64> {
    loop {
        let amps: Vec<Complex64> = (0..d)
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-3 {
            return amps.into_iter().map(|a| a / norm).collect();
        }
    }
}

/// Random d-sparse state description with word-width labels (n <= 64).
pub fn random_spec(n: usize, d: usize, rng: &mut impl Rng) -> Result<SparseStateSpec> {
    if n == 0 || n > 64 {
        return Err(Error::UnsupportedQubitCount { n, max: 64 });
    }
    if d == 0 {
        return Err(Error::EmptySpec);
    }
    if n < 64 && d as u64 > 1u64 << n {
        return Err(Error::NoSparePoints);
    }
    let points: Vec<u64> = if n <= 24 && d as u64 >= (1u64 << n) / 2 {
        // Dense regime: rejection sampling stalls, enumerate instead.
        let mut all: Vec<u64> = (0..1u64 << n).collect();
        all.shuffle(rng);
        all.truncate(d);
        all
    } else {
        let mask = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        let mut seen = BTreeSet::new();
        while seen.len() < d {
            seen.insert(rng.random::<u64>() & mask);
        }
        seen.into_iter().collect()
    };
    let pairs: Vec<(Complex64, u64)> =
        random_amplitudes(d, rng).into_iter().zip(points).collect();
    SparseStateSpec::from_pairs(n, &pairs)
}

/// Random d-sparse state on any width; beyond 64 qubits the labels are
/// sampled bitwise.
pub fn random_wide_spec(n: usize, d: usize, rng: &mut impl Rng) -> Result<WideStateSpec> {
    if n <= 64 {
        return Ok(WideStateSpec::from_narrow(&random_spec(n, d, rng)?));
    }
    let mut seen: BTreeSet<WideBasis> = BTreeSet::new();
    while seen.len() < d {
        seen.insert(WideBasis::from_fn(n, |_| rng.random_bool(0.5)));
    }
    let entries: Vec<WideEntry> = random_amplitudes(d, rng)
        .into_iter()
        .zip(seen)
        .map(|(amplitude, basis)| WideEntry { amplitude, basis })
        .collect();
    WideStateSpec::new(n, entries)
}

/// Prior-art comparison circuit: the same dense stage, then one full-width
/// MCX cascade per compaction transposition instead of batched synthesis.
pub fn naive_circuit(spec: &WideStateSpec) -> Result<Circuit> {
    let n = spec.n();
    let mut circuit = Circuit::new(n);
    circuit.registers = vec![Register::new("data", 0, n)];
    if spec.d() == 1 {
        let basis = &spec.entries()[0].basis;
        for c in 0..n {
            if basis.bit(c) {
                circuit.push(Gate::X { target: c });
            }
        }
        return Ok(circuit);
    }
    let plan = wide::compaction(spec);
    circuit.extend(synth_dense(plan.k, &plan.slot_amplitudes)?.gates);
    for (slot, target) in &plan.pairs {
        let slot = WideBasis::from_u64(*slot, n)?;
        let diff: Vec<usize> = (0..n).filter(|&c| slot.bit(c) != target.bit(c)).collect();
        let pivot = diff[0];
        // The endpoint with the pivot bit clear is untouched by the fan;
        // its remaining bits become the control pattern.
        let low = if slot.bit(pivot) { target } else { &slot };
        let fan: Vec<Gate> = diff[1..]
            .iter()
            .map(|&q| Gate::Cnot { control: pivot, target: q })
            .collect();
        circuit.extend(fan.clone());
        let controls = (0..n)
            .filter(|&c| c != pivot)
            .map(|c| if low.bit(c) { Control::pos(c) } else { Control::neg(c) })
            .collect();
        circuit.push(Gate::Mcx { controls, target: pivot });
        circuit.extend(fan.into_iter().rev());
    }
    Ok(circuit)
}

/// Size bound that the fitted constant divides by.
pub fn bound(cell: &BenchCell) -> Option<f64> {
    let n = cell.n as f64;
    let d = cell.d as f64;
    match cell.method {
        Method::NoAncilla | Method::NaiveBaseline => {
            Some(n * d / (cell.n.max(2) as f64).log2() + n)
        }
        Method::Ancilla => choose_r(cell.n, cell.m).map(|r| {
            n * d / ((cell.m + cell.n) as f64).log2() + n * 2f64.powi(r as i32)
        }),
    }
}

fn build_cell(cell: &BenchCell, rng: &mut ChaCha8Rng) -> Result<(Circuit, Option<SparseStateSpec>)> {
    match cell.method {
        Method::NoAncilla | Method::NaiveBaseline => {
            let synth = |spec: &WideStateSpec| match cell.method {
                Method::NoAncilla => wide::synth_no_ancilla(spec),
                _ => naive_circuit(spec),
            };
            if cell.n <= 64 {
                let spec = random_spec(cell.n, cell.d, rng)?;
                let circuit = synth(&WideStateSpec::from_narrow(&spec))?;
                Ok((circuit, Some(spec)))
            } else {
                Ok((synth(&random_wide_spec(cell.n, cell.d, rng)?)?, None))
            }
        }
        Method::Ancilla => {
            let spec = random_spec(cell.n, cell.d, rng)?;
            let circuit = synth_with_ancilla(&spec, cell.m)?;
            Ok((circuit, Some(spec)))
        }
    }
}

/// Runs one cell: synthesize, count, simulate when small enough.
pub fn run_cell(cell: &BenchCell, grid_seed: u64, verify: bool) -> BenchRecord {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(cell_seed(grid_seed, cell));
    let mut record = match build_cell(cell, &mut rng).and_then(|(circuit, narrow)| {
        let report = count_prep_circuit(&circuit)?;
        Ok((circuit, narrow, report))
    }) {
        Ok((circuit, narrow, report)) => {
            let sim_verified = match narrow {
                Some(spec) if verify && circuit.width <= MAX_SIM_WIDTH => Some(
                    run_against_spec(&circuit, &spec)
                        .map(|r| r.fidelity >= 1.0 - 1e-9 && r.ancilla_leak < 1e-10)
                        .unwrap_or(false),
                ),
                _ => None,
            };
            BenchRecord {
                cell: *cell,
                status: "ok",
                raw_count: Some(report.raw_total()),
                expanded_count: Some(report.elementary),
                sim_verified,
                wall_time_ms: 0,
            }
        }
        Err(_) => BenchRecord {
            cell: *cell,
            status: "infeasible",
            raw_count: None,
            expanded_count: None,
            sim_verified: None,
            wall_time_ms: 0,
        },
    };
    record.wall_time_ms = start.elapsed().as_millis() as u64;
    record
}

/// Runs the whole grid in a worker pool; records keep grid order.
pub fn run_grid(cells: &[BenchCell], seed: u64, verify: bool) -> Vec<BenchRecord> {
    cells.par_iter().map(|cell| run_cell(cell, seed, verify)).collect()
}

pub const CSV_HEADER: &str = "n,d,m,method,status,raw_count,expanded_count,sim_verified,wall_time_ms";

pub fn write_csv(records: &[BenchRecord]) -> String {
    let mut out = String::with_capacity(64 * (records.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in records {
        let count = |v: Option<u64>| v.map(|x| x.to_string()).unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            r.cell.n,
            r.cell.d,
            r.cell.m,
            r.cell.method.name(),
            r.status,
            count(r.raw_count),
            count(r.expanded_count),
            r.sim_verified.map(|b| b.to_string()).unwrap_or_default(),
            r.wall_time_ms
        );
    }
    out
}

/// Per-method fitted constant: the largest expanded_count / bound ratio
/// over the grid's ok cells.
pub fn fitted_constants(records: &[BenchRecord]) -> Vec<(Method, f64)> {
    Method::ALL
        .into_iter()
        .filter_map(|method| {
            records
                .iter()
                .filter(|r| r.cell.method == method)
                .filter_map(|r| Some(r.expanded_count? as f64 / bound(&r.cell)?))
                .fold(None, |acc: Option<f64>, x| Some(acc.map_or(x, |a| a.max(x))))
                .map(|c| (method, c))
        })
        .collect()
}
