//! Command-line driver for the synthesis toolkit.
//!
//! Subcommands: `synth` compiles a state file into a circuit file, `verify`
//! simulates a circuit against a state file, `permsynth` synthesizes a basis
//! permutation given as pairs or cycles, `u2b` emits a standalone one-hot to
//! binary conversion circuit, and `bench` runs the gate-count harness over a
//! cell grid. Exit codes: 1 parse error, 2 validation error, 3 infeasible,
//! 4 circuit too wide to simulate, 5 verification failed.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use sparseprep::ancilla::{synth_auto, synth_with_ancilla, AutoMode};
use sparseprep::convert::synth_onehot_to_binary;
use sparseprep::count::{count_circuit, count_prep_circuit, CountReport};
use sparseprep::gate::{Circuit, Register};
use sparseprep::io::{read_circuit_file, read_state_file, write_circuit};
use sparseprep::mcx::{expand_circuit, expand_circuit_from_zero};
use sparseprep::perm::Permutation;
use sparseprep::perm_synth::synth_permutation;
use sparseprep::sim::run_against_spec;
use sparseprep::sparse::synth_no_ancilla;
use sparseprep::{Error, Result};

pub mod bench;

/// Environment variable fixing every randomized generator in the tool.
pub const SEED_ENV: &str = "SPARSEPREP_SEED";

/// Reads the seed from the environment (default 1 when unset).
pub fn seed_from_env() -> Result<u64> {
    match std::env::var(SEED_ENV) {
        Ok(raw) => raw.trim().parse().map_err(|_| Error::Parse {
            line: 0,
            msg: format!("{SEED_ENV} must be an unsigned integer, got `{raw}`"),
        }),
        Err(_) => Ok(1),
    }
}

#[derive(Parser)]
#[command(name = "sparseprep", version, about = "Sparse state preparation circuit toolkit")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    NoAncilla,
    Ancilla,
    Auto,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RuleArg {
    /// Build both pipelines, keep the one with fewer elementary gates.
    Counted,
    /// Use ancillas only when d >= n log2 n and m >= n^2.
    Threshold,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compile a state description into a circuit file.
    Synth {
        /// Input state file (JSON).
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
        /// Output circuit file.
        #[arg(long = "out", value_name = "FILE")]
        output: PathBuf,
        /// Synthesis pipeline.
        #[arg(long, value_enum, default_value_t = ModeArg::Auto)]
        mode: ModeArg,
        /// Ancilla budget.
        #[arg(long, default_value_t = 0)]
        m: usize,
        /// How auto mode picks its pipeline.
        #[arg(long, value_enum, default_value_t = RuleArg::Counted)]
        auto_rule: RuleArg,
        /// Lower swap/mcx/mcu/g to x, cx, ccx, ry, rz before writing.
        #[arg(long)]
        expand: bool,
    },
    /// Simulate a circuit file and compare against a state file.
    Verify {
        /// Circuit file to run.
        #[arg(long, value_name = "FILE")]
        circuit: PathBuf,
        /// Target state file.
        #[arg(long, value_name = "FILE")]
        state: PathBuf,
    },
    /// Synthesize a basis permutation given as pairs or cycles.
    Permsynth {
        /// Register width in qubits.
        #[arg(long)]
        n: usize,
        /// Mapping as `a:b` entries, comma or space separated.
        #[arg(long, conflicts_with = "cycles")]
        pairs: Option<String>,
        /// Mapping as parenthesized cycles, e.g. "(0 1 5)(2 4)".
        #[arg(long)]
        cycles: Option<String>,
        /// Output circuit file.
        #[arg(long = "out", value_name = "FILE")]
        output: PathBuf,
        /// Lower swap/mcx to x, cx, ccx before writing.
        #[arg(long)]
        expand: bool,
    },
    /// Emit the one-hot to binary conversion circuit for one block.
    U2b {
        /// Block width in bits; the circuit gets 2^w one-hot cells plus w
        /// binary qubits.
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..=20))]
        w: u32,
        /// Output circuit file.
        #[arg(long = "out", value_name = "FILE")]
        output: PathBuf,
        /// Lower mcx to x, cx, ccx before writing.
        #[arg(long)]
        expand: bool,
    },
    /// Count synthesized gates over a grid of cells, verifying where small.
    Bench {
        /// Grid cell `n,d,m,method` with method one of no_ancilla, ancilla,
        /// naive_baseline; repeat for more cells.
        #[arg(long = "cell", value_name = "N,D,M,METHOD")]
        cells: Vec<String>,
        /// Output CSV path.
        #[arg(long = "out", value_name = "FILE")]
        output: PathBuf,
    },
}

/// Parses arguments from the process environment and runs one command.
pub fn run() -> u8 {
    dispatch(Cli::parse().cmd)
}

fn dispatch(cmd: Cmd) -> u8 {
    let result = match cmd {
        Cmd::Synth { input, output, mode, m, auto_rule, expand } => {
            cmd_synth(&input, &output, mode, m, auto_rule, expand)
        }
        Cmd::Verify { circuit, state } => cmd_verify(&circuit, &state),
        Cmd::Permsynth { n, pairs, cycles, output, expand } => {
            cmd_permsynth(n, pairs.as_deref(), cycles.as_deref(), &output, expand)
        }
        Cmd::U2b { w, output, expand } => cmd_u2b(w as usize, &output, expand),
        Cmd::Bench { cells, output } => cmd_bench(&cells, &output),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Parse { .. } | Error::UnsupportedGate { .. } | Error::Io(_) | Error::Json(_) => 1,
        Error::TooFewAncillas { .. } | Error::NoSparePoints | Error::BatchTooLarge { .. } => 3,
        Error::WidthTooLarge { .. } => 4,
        _ => 2,
    }
}

fn cmd_synth(
    input: &Path,
    output: &Path,
    mode: ModeArg,
    m: usize,
    auto_rule: RuleArg,
    expand: bool,
) -> Result<u8> {
    let spec = read_state_file(input)?;
    let circuit = match mode {
        ModeArg::NoAncilla => synth_no_ancilla(&spec)?,
        ModeArg::Ancilla => synth_with_ancilla(&spec, m)?,
        ModeArg::Auto => {
            let rule = match auto_rule {
                RuleArg::Counted => AutoMode::Counted,
                RuleArg::Threshold => AutoMode::Threshold,
            };
            synth_auto(&spec, m, rule)?.circuit
        }
    };
    finish_circuit(circuit, output, expand, true)
}

fn cmd_verify(circuit_path: &Path, state_path: &Path) -> Result<u8> {
    let circuit = read_circuit_file(circuit_path)?;
    let spec = read_state_file(state_path)?;
    let report = run_against_spec(&circuit, &spec)?;
    let restored = report.ancilla_leak < 1e-10;
    println!("fidelity {:.15}", report.fidelity);
    println!("ancilla leak {:.3e}", report.ancilla_leak);
    println!("ancillas restored: {}", if restored { "yes" } else { "no" });
    Ok(if report.fidelity >= 1.0 - 1e-9 && restored { 0 } else { 5 })
}

fn cmd_permsynth(
    n: usize,
    pairs: Option<&str>,
    cycles: Option<&str>,
    output: &Path,
    expand: bool,
) -> Result<u8> {
    let sigma = match (pairs, cycles) {
        (Some(p), None) => Permutation::from_map(parse_pairs(p)?)?,
        (None, Some(c)) => Permutation::from_cycles(&parse_cycles(c)?)?,
        _ => {
            return Err(Error::Parse {
                line: 0,
                msg: "exactly one of --pairs or --cycles is required".into(),
            })
        }
    };
    finish_circuit(synth_permutation(&sigma, n)?, output, expand, false)
}

fn cmd_u2b(w: usize, output: &Path, expand: bool) -> Result<u8> {
    let cells = 1usize << w;
    let mut circuit = Circuit::new(w + cells);
    circuit.registers =
        vec![Register::new("binary", 0, w), Register::new("onehot", w, cells)];
    circuit.extend(synth_onehot_to_binary(w, w, 0)?);
    finish_circuit(circuit, output, expand, false)
}

fn cmd_bench(cells: &[String], output: &Path) -> Result<u8> {
    let cells: Vec<bench::BenchCell> =
        cells.iter().map(|s| bench::parse_cell(s)).collect::<Result<_>>()?;
    let seed = seed_from_env()?;
    let records = bench::run_grid(&cells, seed, true);
    std::fs::write(output, bench::write_csv(&records))?;
    for (method, c) in bench::fitted_constants(&records) {
        println!("C_{} = {:.4}", method.name(), c);
    }
    Ok(0)
}

/// Expands if asked, writes the circuit file, prints the count report.
///
/// State-prep outputs always run from |0...0>, so their expansion and counts
/// may route through provably-zero qubits; permutations and converters act
/// on arbitrary inputs and get the unitary-exact treatment.
fn finish_circuit(circuit: Circuit, output: &Path, expand: bool, from_zero: bool) -> Result<u8> {
    let circuit = if expand {
        if from_zero {
            expand_circuit_from_zero(&circuit, true)?
        } else {
            expand_circuit(&circuit, true)?
        }
    } else {
        circuit
    };
    let report = if from_zero {
        count_prep_circuit(&circuit)?
    } else {
        count_circuit(&circuit)?
    };
    std::fs::write(output, write_circuit(&circuit)?)?;
    print!("{}", format_count_report(&circuit, &report));
    Ok(0)
}

/// Human-readable count report, one datum per line.
pub fn format_count_report(circuit: &Circuit, report: &CountReport) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "width {} (data {}, ancillas {})",
        circuit.width,
        circuit.data_qubits(),
        circuit.ancillas
    );
    let raw: Vec<String> = report.raw.iter().map(|(k, v)| format!("{k} {v}")).collect();
    if raw.is_empty() {
        let _ = writeln!(out, "raw 0");
    } else {
        let _ = writeln!(out, "raw {}: {}", report.raw_total(), raw.join(", "));
    }
    let _ = writeln!(
        out,
        "lowered: {} single-qubit, {} cnot, {} toffoli",
        report.lowered.singles, report.lowered.cnots, report.lowered.toffolis
    );
    let _ = writeln!(out, "elementary {}", report.elementary);
    out
}

fn parse_point(tok: &str, ctx: &str) -> Result<u64> {
    tok.trim().parse().map_err(|_| Error::Parse {
        line: 0,
        msg: format!("bad point `{}` in {ctx}", tok.trim()),
    })
}

/// Parses `a:b` mapping entries separated by commas or whitespace.
fn parse_pairs(s: &str) -> Result<Vec<(u64, u64)>> {
    let toks: Vec<&str> =
        s.split([',', ' ', '\t']).map(str::trim).filter(|t| !t.is_empty()).collect();
    if toks.is_empty() {
        return Err(Error::Parse { line: 0, msg: "empty pair list".into() });
    }
    toks.into_iter()
        .map(|tok| {
            let (a, b) = tok.split_once(':').ok_or_else(|| Error::Parse {
                line: 0,
                msg: format!("pair `{tok}` is not of the form a:b"),
            })?;
            Ok((parse_point(a, "pair list")?, parse_point(b, "pair list")?))
        })
        .collect()
}

/// Parses `(a b c)(d e)` cycle notation; commas also separate points.
fn parse_cycles(s: &str) -> Result<Vec<Vec<u64>>> {
    let mut cycles = Vec::new();
    let mut rest = s.trim();
    while !rest.is_empty() {
        let body = rest.strip_prefix('(').ok_or_else(|| Error::Parse {
            line: 0,
            msg: format!("expected `(` at `{rest}`"),
        })?;
        let (body, tail) = body.split_once(')').ok_or_else(|| Error::Parse {
            line: 0,
            msg: "unclosed cycle: missing `)`".into(),
        })?;
        let cycle: Vec<u64> = body
            .split([',', ' ', '\t'])
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(|t| parse_point(t, "cycle"))
            .collect::<Result<_>>()?;
        if cycle.is_empty() {
            return Err(Error::Parse { line: 0, msg: "empty cycle `()`".into() });
        }
        cycles.push(cycle);
        rest = tail.trim_start();
    }
    if cycles.is_empty() {
        return Err(Error::Parse { line: 0, msg: "empty cycle list".into() });
    }
    Ok(cycles)
}
