//! File formats: state descriptions as JSON, circuits as plain text.
//!
//! State files:
//!
//! ```json
//! {
//!   "n": 4,
//!   "entries": [
//!     {"q": "1100", "re": 0.7071067811865476, "im": 0.0},
//!     {"q": "0011", "re": 0.0, "im": 0.7071067811865476}
//!   ]
//! }
//! ```
//!
//! `q` is the basis string, most significant qubit first, exactly n
//! characters. Entry order is preserved; it steers the staged pipeline's
//! rotation order.
//!
//! Circuit files start with `qubits <width> ancillas <count>`, then one
//! gate per line: `x t`, `cx c t`, `swap a b`, `rx theta t` (also ry, rz),
//! `g alpha_re alpha_im beta t`, `ccx c1 c2 t`, `mcx controls... t` and
//! `mcu <base...> controls... t`. A control token is the qubit number,
//! prefixed with `-` for a negative control; the sign is detected
//! lexically, so `-0` is a negative control on qubit 0. Angles are printed
//! with 17 significant digits, which round-trips f64 bit-exactly. Blank
//! lines and `#` comments are accepted when reading and never written, so
//! write -> read -> write is a string fixpoint.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gate::{BaseGate, Circuit, Control, Gate};
use crate::state::SparseStateSpec;

#[derive(Serialize, Deserialize)]
struct StateFile {
    n: usize,
    entries: Vec<EntryFile>,
}

#[derive(Serialize, Deserialize)]
struct EntryFile {
    q: String,
    re: f64,
    im: f64,
}

/// Serializes a state spec as JSON (entry order preserved).
pub fn write_state(spec: &SparseStateSpec) -> String {
    let file = StateFile {
        n: spec.n(),
        entries: spec
            .entries()
            .iter()
            .map(|e| EntryFile {
                q: basis_string(e.basis, spec.n()),
                re: e.amplitude.re,
                im: e.amplitude.im,
            })
            .collect(),
    };
    let mut text = serde_json::to_string_pretty(&file).expect("state file serializes");
    text.push('\n');
    text
}

/// Parses and validates a JSON state description.
pub fn read_state(text: &str) -> Result<SparseStateSpec> {
    let file: StateFile = serde_json::from_str(text)?;
    let mut pairs = Vec::with_capacity(file.entries.len());
    for entry in &file.entries {
        pairs.push((Complex64::new(entry.re, entry.im), parse_basis(&entry.q, file.n)?));
    }
    SparseStateSpec::from_pairs(file.n, &pairs)
}

pub fn basis_string(basis: u64, n: usize) -> String {
    (0..n).rev().map(|b| if basis >> b & 1 == 1 { '1' } else { '0' }).collect()
}

fn parse_basis(q: &str, n: usize) -> Result<u64> {
    if q.len() != n {
        return Err(Error::Parse {
            line: 0,
            msg: format!("basis string {q:?} must have exactly {n} characters"),
        });
    }
    let mut basis = 0u64;
    for ch in q.chars() {
        basis = basis << 1
            | match ch {
                '0' => 0,
                '1' => 1,
                other => {
                    return Err(Error::Parse {
                        line: 0,
                        msg: format!("basis string {q:?} has invalid character {other:?}"),
                    })
                }
            };
    }
    Ok(basis)
}

fn fmt_f(x: f64) -> String {
    format!("{x:.16e}")
}

/// Serializes a circuit as text. MCU bases must be rotations or G.
pub fn write_circuit(circuit: &Circuit) -> Result<String> {
    let mut out = format!("qubits {} ancillas {}\n", circuit.width, circuit.ancillas);
    for gate in &circuit.gates {
        write_gate(&mut out, gate)?;
    }
    Ok(out)
}

fn write_gate(out: &mut String, gate: &Gate) -> Result<()> {
    match gate {
        Gate::X { target } => out.push_str(&format!("x {target}\n")),
        Gate::Cnot { control, target } => out.push_str(&format!("cx {control} {target}\n")),
        Gate::Swap { a, b } => out.push_str(&format!("swap {a} {b}\n")),
        Gate::Rx { theta, target } => out.push_str(&format!("rx {} {target}\n", fmt_f(*theta))),
        Gate::Ry { theta, target } => out.push_str(&format!("ry {} {target}\n", fmt_f(*theta))),
        Gate::Rz { theta, target } => out.push_str(&format!("rz {} {target}\n", fmt_f(*theta))),
        Gate::G { alpha, beta, target } => out.push_str(&format!(
            "g {} {} {} {target}\n",
            fmt_f(alpha.re),
            fmt_f(alpha.im),
            fmt_f(*beta)
        )),
        Gate::Mcx { controls, target } => {
            if controls.len() == 2 && controls.iter().all(|c| c.positive) {
                out.push_str(&format!(
                    "ccx {} {} {target}\n",
                    controls[0].qubit, controls[1].qubit
                ));
            } else {
                out.push_str("mcx");
                push_controls(out, controls);
                out.push_str(&format!(" {target}\n"));
            }
        }
        Gate::Mcu { base, controls, target } => {
            out.push_str("mcu ");
            match base {
                BaseGate::Rx(theta) => out.push_str(&format!("rx {}", fmt_f(*theta))),
                BaseGate::Ry(theta) => out.push_str(&format!("ry {}", fmt_f(*theta))),
                BaseGate::Rz(theta) => out.push_str(&format!("rz {}", fmt_f(*theta))),
                BaseGate::G { alpha, beta } => out.push_str(&format!(
                    "g {} {} {}",
                    fmt_f(alpha.re),
                    fmt_f(alpha.im),
                    fmt_f(*beta)
                )),
                BaseGate::Unitary(_) => {
                    return Err(Error::UnsupportedGate {
                        kind: "mcu with a raw unitary base (expand the circuit first)".into(),
                    })
                }
            }
            push_controls(out, controls);
            out.push_str(&format!(" {target}\n"));
        }
    }
    Ok(())
}

fn push_controls(out: &mut String, controls: &[Control]) {
    for c in controls {
        if c.positive {
            out.push_str(&format!(" {}", c.qubit));
        } else {
            out.push_str(&format!(" -{}", c.qubit));
        }
    }
}

/// Parses a circuit file, validating every gate against the header width.
pub fn read_circuit(text: &str) -> Result<Circuit> {
    let mut lines = text.lines().enumerate();
    let (header_no, header) = loop {
        match lines.next() {
            Some((no, line)) => {
                let line = strip_comment(line);
                if !line.is_empty() {
                    break (no + 1, line);
                }
            }
            None => return Err(Error::Parse { line: 1, msg: "empty circuit file".into() }),
        }
    };
    let head: Vec<&str> = header.split_whitespace().collect();
    let (width, ancillas) = match head.as_slice() {
        ["qubits", w, "ancillas", m] => (
            parse_num::<usize>(w, header_no)?,
            parse_num::<usize>(m, header_no)?,
        ),
        _ => {
            return Err(Error::Parse {
                line: header_no,
                msg: format!("expected `qubits <w> ancillas <m>`, got {header:?}"),
            })
        }
    };
    if ancillas > width {
        return Err(Error::Parse {
            line: header_no,
            msg: format!("ancilla count {ancillas} exceeds width {width}"),
        });
    }
    let mut circuit = Circuit::with_ancillas(width, ancillas);
    for (no, raw) in lines {
        let line = strip_comment(raw);
        if line.is_empty() {
            continue;
        }
        let no = no + 1;
        let gate = parse_gate(line, no)?;
        gate.validate(width).map_err(|e| Error::Parse { line: no, msg: e.to_string() })?;
        circuit.gates.push(gate);
    }
    Ok(circuit)
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(at) => line[..at].trim(),
        None => line.trim(),
    }
}

fn parse_num<T: std::str::FromStr>(token: &str, line: usize) -> Result<T> {
    token.parse().map_err(|_| Error::Parse {
        line,
        msg: format!("invalid number {token:?}"),
    })
}

fn parse_gate(line: &str, no: usize) -> Result<Gate> {
    let toks: Vec<&str> = line.split_whitespace().collect();
    let fail = |msg: String| Error::Parse { line: no, msg };
    let arity = |want: usize| -> Result<()> {
        if toks.len() != want + 1 {
            Err(fail(format!("{} expects {} arguments", toks[0], want)))
        } else {
            Ok(())
        }
    };
    match toks[0] {
        "x" => {
            arity(1)?;
            Ok(Gate::X { target: parse_num(toks[1], no)? })
        }
        "cx" => {
            arity(2)?;
            Ok(Gate::Cnot { control: parse_num(toks[1], no)?, target: parse_num(toks[2], no)? })
        }
        "swap" => {
            arity(2)?;
            Ok(Gate::Swap { a: parse_num(toks[1], no)?, b: parse_num(toks[2], no)? })
        }
        "rx" | "ry" | "rz" => {
            arity(2)?;
            let theta = parse_num(toks[1], no)?;
            let target = parse_num(toks[2], no)?;
            Ok(match toks[0] {
                "rx" => Gate::Rx { theta, target },
                "ry" => Gate::Ry { theta, target },
                _ => Gate::Rz { theta, target },
            })
        }
        "g" => {
            arity(4)?;
            Ok(Gate::G {
                alpha: Complex64::new(parse_num(toks[1], no)?, parse_num(toks[2], no)?),
                beta: parse_num(toks[3], no)?,
                target: parse_num(toks[4], no)?,
            })
        }
        "ccx" => {
            arity(3)?;
            Ok(Gate::toffoli(
                parse_num(toks[1], no)?,
                parse_num(toks[2], no)?,
                parse_num(toks[3], no)?,
            ))
        }
        "mcx" => {
            if toks.len() < 2 {
                return Err(fail("mcx expects a target".into()));
            }
            let controls = parse_controls(&toks[1..toks.len() - 1], no)?;
            Ok(Gate::Mcx { controls, target: parse_num(toks[toks.len() - 1], no)? })
        }
        "mcu" => {
            if toks.len() < 2 {
                return Err(fail("mcu expects a base gate".into()));
            }
            let (base, consumed) = match toks[1] {
                "rx" | "ry" | "rz" => {
                    if toks.len() < 4 {
                        return Err(fail("mcu rotation expects an angle and a target".into()));
                    }
                    let theta = parse_num(toks[2], no)?;
                    let base = match toks[1] {
                        "rx" => BaseGate::Rx(theta),
                        "ry" => BaseGate::Ry(theta),
                        _ => BaseGate::Rz(theta),
                    };
                    (base, 3)
                }
                "g" => {
                    if toks.len() < 6 {
                        return Err(fail("mcu g expects alpha, beta and a target".into()));
                    }
                    let alpha =
                        Complex64::new(parse_num(toks[2], no)?, parse_num(toks[3], no)?);
                    (BaseGate::G { alpha, beta: parse_num(toks[4], no)? }, 5)
                }
                other => return Err(fail(format!("unknown mcu base {other:?}"))),
            };
            let controls = parse_controls(&toks[consumed..toks.len() - 1], no)?;
            Ok(Gate::Mcu { base, controls, target: parse_num(toks[toks.len() - 1], no)? })
        }
        other => Err(fail(format!("unknown gate {other:?}"))),
    }
}

fn parse_controls(toks: &[&str], no: usize) -> Result<Vec<Control>> {
    toks.iter()
        .map(|t| {
            if let Some(rest) = t.strip_prefix('-') {
                Ok(Control::neg(parse_num(rest, no)?))
            } else {
                Ok(Control::pos(parse_num(t, no)?))
            }
        })
        .collect()
}

/// Reads and validates a state file from disk.
pub fn read_state_file(path: &std::path::Path) -> Result<SparseStateSpec> {
    read_state(&std::fs::read_to_string(path)?)
}

/// Reads and validates a circuit file from disk.
pub fn read_circuit_file(path: &std::path::Path) -> Result<Circuit> {
    read_circuit(&std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sample_circuit() -> Circuit {
        let mut c = Circuit::with_ancillas(6, 2);
        c.push(Gate::X { target: 0 });
        c.push(Gate::Cnot { control: 0, target: 3 });
        c.push(Gate::Swap { a: 1, b: 2 });
        c.push(Gate::Rx { theta: -0.25, target: 1 });
        c.push(Gate::Ry { theta: std::f64::consts::PI, target: 2 });
        c.push(Gate::Rz { theta: 1.0 / 3.0, target: 4 });
        c.push(Gate::G { alpha: Complex64::new(0.6, -0.1), beta: 0.8, target: 5 });
        c.push(Gate::toffoli(0, 1, 2));
        c.push(Gate::Mcx {
            controls: vec![Control::neg(0), Control::pos(1), Control::neg(4)],
            target: 5,
        });
        c.push(Gate::Mcu {
            base: BaseGate::G { alpha: Complex64::new(0.3, 0.4), beta: 0.5 },
            controls: vec![Control::pos(2), Control::neg(0)],
            target: 1,
        });
        c.push(Gate::Mcu { base: BaseGate::Ry(0.7), controls: vec![Control::pos(5)], target: 0 });
        c
    }

    #[test]
    fn circuit_write_read_write_is_a_fixpoint() {
        let c = sample_circuit();
        let once = write_circuit(&c).unwrap();
        let parsed = read_circuit(&once).unwrap();
        assert_eq!(parsed.width, c.width);
        assert_eq!(parsed.ancillas, c.ancillas);
        assert_eq!(parsed.gates, c.gates);
        let twice = write_circuit(&parsed).unwrap();
        assert_eq!(once, twice);
    }

    #[test]
    fn negative_control_on_qubit_zero_survives() {
        let mut c = Circuit::new(3);
        c.push(Gate::Mcx { controls: vec![Control::neg(0)], target: 2 });
        let text = write_circuit(&c).unwrap();
        assert!(text.contains("mcx -0 2"));
        let back = read_circuit(&text).unwrap();
        assert_eq!(back.gates, c.gates);
    }

    #[test]
    fn comments_and_blanks_are_ignored() {
        let text = "\n# header comment\nqubits 2 ancillas 0\n\nx 0 # flip\ncx 0 1\n";
        let c = read_circuit(text).unwrap();
        assert_eq!(c.width, 2);
        assert_eq!(c.len(), 2);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let text = "qubits 2 ancillas 0\nx 0\nfoo 1\n";
        match read_circuit(text) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected parse error, got {other:?}"),
        }
        let text = "qubits 2 ancillas 0\nx 5\n";
        match read_circuit(text) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected range error at line 2, got {other:?}"),
        }
        assert!(matches!(
            read_circuit("qubits 2 ancillas 3\n"),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn state_files_round_trip_in_order() {
        let spec = SparseStateSpec::from_pairs(
            4,
            &[
                (Complex64::new(0.6, 0.0), 0b1010),
                (Complex64::new(0.0, -0.8), 0b0001),
            ],
        )
        .unwrap();
        let text = write_state(&spec);
        let back = read_state(&text).unwrap();
        assert_eq!(back.n(), 4);
        assert_eq!(back.entries(), spec.entries());
        assert_eq!(write_state(&back), text);
    }

    #[test]
    fn state_file_validation_errors() {
        let bad_len = r#"{"n": 3, "entries": [{"q": "01", "re": 1.0, "im": 0.0}]}"#;
        assert!(matches!(read_state(bad_len), Err(Error::Parse { .. })));
        let bad_char = r#"{"n": 2, "entries": [{"q": "0x", "re": 1.0, "im": 0.0}]}"#;
        assert!(matches!(read_state(bad_char), Err(Error::Parse { .. })));
        let bad_json = "{not json";
        assert!(matches!(read_state(bad_json), Err(Error::Json(_))));
        let unnormalized = r#"{"n": 2, "entries": [{"q": "01", "re": 0.5, "im": 0.0}]}"#;
        assert!(matches!(read_state(unnormalized), Err(Error::NotNormalized { .. })));
        let dup = r#"{"n": 2, "entries": [
            {"q": "01", "re": 0.8, "im": 0.0},
            {"q": "01", "re": 0.6, "im": 0.0}
        ]}"#;
        assert!(matches!(read_state(dup), Err(Error::DuplicateBasis { q: 1 })));
    }

    #[test]
    fn basis_strings_are_msb_first() {
        assert_eq!(basis_string(0b1100, 4), "1100");
        assert_eq!(parse_basis("1100", 4).unwrap(), 0b1100);
        assert_eq!(parse_basis("0001", 4).unwrap(), 1);
    }

    proptest! {
        #[test]
        fn proptest_angles_round_trip_bit_exactly(bits in any::<u64>()) {
            let x = f64::from_bits(bits);
            if !x.is_finite() {
                return Ok(());
            }
            let mut c = Circuit::new(1);
            c.push(Gate::Rz { theta: x, target: 0 });
            let text = write_circuit(&c).unwrap();
            let back = read_circuit(&text).unwrap();
            match back.gates[0] {
                Gate::Rz { theta, .. } => prop_assert_eq!(theta.to_bits(), x.to_bits()),
                _ => prop_assert!(false),
            }
        }

        #[test]
        fn proptest_random_state_files_round_trip(
            seed in 0u64..10_000,
            n in 1usize..12,
            d_raw in 1usize..10,
        ) {
            use rand::Rng;
            use rand::seq::SliceRandom;
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let d = d_raw.min(1 << n.min(10));
            let mut points: Vec<u64> = (0..1u64 << n.min(16)).collect();
            points.shuffle(&mut rng);
            let mut entries: Vec<(Complex64, u64)> = points[..d]
                .iter()
                .map(|&q| {
                    (Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)), q)
                })
                .collect();
            let norm: f64 = entries.iter().map(|(c, _)| c.norm_sqr()).sum::<f64>().sqrt();
            if norm < 1e-3 {
                return Ok(());
            }
            for (c, _) in &mut entries {
                *c /= norm;
            }
            let spec = SparseStateSpec::from_pairs(n, &entries).unwrap();
            let text = write_state(&spec);
            let back = read_state(&text).unwrap();
            prop_assert_eq!(back.entries(), spec.entries());
        }
    }
}
