//! End-to-end runs of the `sparseprep` binary: exit codes, file output,
//! stdout shape and seeding.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use sparseprep_cli::{bench, SEED_ENV};

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_sparseprep"));
    cmd.env_remove(SEED_ENV);
    cmd
}

fn run(cmd: &mut Command) -> Output {
    cmd.output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write_file(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn ghz4(dir: &Path) -> PathBuf {
    let a = std::f64::consts::FRAC_1_SQRT_2;
    write_file(
        dir,
        "ghz4.json",
        &format!(
            r#"{{"n": 4, "entries": [
                {{"q": "0000", "re": {a}, "im": 0.0}},
                {{"q": "1111", "re": {a}, "im": 0.0}}
            ]}}"#
        ),
    )
}

fn gate_lines(path: &Path) -> Vec<String> {
    let text = std::fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap();
    assert!(header.starts_with("qubits "), "missing header: {header}");
    lines.map(str::to_owned).collect()
}

#[test]
fn synth_then_verify_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let state = ghz4(dir.path());
    let circuit = dir.path().join("ghz4.circ");
    let out = run(bin().args(["synth", "--in"]).arg(&state).arg("--out").arg(&circuit));
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    let text = stdout(&out);
    assert!(text.contains("width 4 (data 4, ancillas 0)"), "{text}");
    assert!(text.contains("elementary "), "{text}");

    let out = run(bin().args(["verify", "--circuit"]).arg(&circuit).arg("--state").arg(&state));
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    assert!(stdout(&out).contains("ancillas restored: yes"));
}

#[test]
fn verify_flags_the_wrong_state() {
    let dir = tempfile::tempdir().unwrap();
    let state = ghz4(dir.path());
    let circuit = dir.path().join("ghz4.circ");
    run(bin().args(["synth", "--in"]).arg(&state).arg("--out").arg(&circuit));
    let other = write_file(
        dir.path(),
        "zero.json",
        r#"{"n": 4, "entries": [{"q": "0000", "re": 1.0, "im": 0.0}]}"#,
    );
    let out = run(bin().args(["verify", "--circuit"]).arg(&circuit).arg("--state").arg(&other));
    assert_eq!(code(&out), 5);
}

#[test]
fn verify_rejects_circuits_too_wide_to_simulate() {
    let dir = tempfile::tempdir().unwrap();
    let circuit = write_file(dir.path(), "wide.circ", "qubits 30 ancillas 0\nx 0\n");
    let q = format!("{}1", "0".repeat(29));
    let state = write_file(
        dir.path(),
        "wide.json",
        &format!(r#"{{"n": 30, "entries": [{{"q": "{q}", "re": 1.0, "im": 0.0}}]}}"#),
    );
    let out = run(bin().args(["verify", "--circuit"]).arg(&circuit).arg("--state").arg(&state));
    assert_eq!(code(&out), 4);
}

#[test]
fn ancilla_mode_without_budget_is_infeasible() {
    let dir = tempfile::tempdir().unwrap();
    let state = ghz4(dir.path());
    let circuit = dir.path().join("out.circ");
    let out = run(bin()
        .args(["synth", "--mode", "ancilla", "--m", "0", "--in"])
        .arg(&state)
        .arg("--out")
        .arg(&circuit));
    assert_eq!(code(&out), 3);
}

#[test]
fn single_entry_spec_synthesizes_to_bit_flips_only() {
    let dir = tempfile::tempdir().unwrap();
    let state = write_file(
        dir.path(),
        "point.json",
        r#"{"n": 6, "entries": [{"q": "000101", "re": 1.0, "im": 0.0}]}"#,
    );
    let circuit = dir.path().join("point.circ");
    let out = run(bin()
        .args(["synth", "--mode", "auto", "--m", "16", "--in"])
        .arg(&state)
        .arg("--out")
        .arg(&circuit));
    assert_eq!(code(&out), 0);
    let gates = gate_lines(&circuit);
    assert!(!gates.is_empty());
    assert!(gates.iter().all(|g| g.starts_with("x ")), "{gates:?}");
    let out = run(bin().args(["verify", "--circuit"]).arg(&circuit).arg("--state").arg(&state));
    assert_eq!(code(&out), 0);
}

#[test]
fn expanded_output_stays_in_the_target_gate_set() {
    let dir = tempfile::tempdir().unwrap();
    let state = write_file(
        dir.path(),
        "mix.json",
        r#"{"n": 5, "entries": [
            {"q": "00011", "re": 0.5, "im": 0.0},
            {"q": "10100", "re": 0.0, "im": 0.5},
            {"q": "01110", "re": -0.5, "im": 0.0},
            {"q": "11111", "re": 0.3, "im": -0.4}
        ]}"#,
    );
    let circuit = dir.path().join("mix.circ");
    let out = run(bin()
        .args(["synth", "--mode", "no-ancilla", "--expand", "--in"])
        .arg(&state)
        .arg("--out")
        .arg(&circuit));
    assert_eq!(code(&out), 0);
    let allowed = ["x", "cx", "ccx", "ry", "rz"];
    for line in gate_lines(&circuit) {
        let word = line.split_whitespace().next().unwrap();
        assert!(allowed.contains(&word), "unexpected gate `{line}`");
    }
    let out = run(bin().args(["verify", "--circuit"]).arg(&circuit).arg("--state").arg(&state));
    assert_eq!(code(&out), 0, "{}", stdout(&out));
}

#[test]
fn u2b_emits_the_block_conversion() {
    let dir = tempfile::tempdir().unwrap();
    let circuit = dir.path().join("u2b.circ");
    let out = run(bin().args(["u2b", "--w", "3", "--out"]).arg(&circuit));
    assert_eq!(code(&out), 0);
    let gates = gate_lines(&circuit);
    // 2^(w-1) * w multi-controlled writes plus 2^w clears.
    assert_eq!(gates.len(), 4 * 3 + 8);
    assert!(stdout(&out).contains("width 11"));

    let expanded = dir.path().join("u2b_x.circ");
    let out = run(bin().args(["u2b", "--w", "3", "--expand", "--out"]).arg(&expanded));
    assert_eq!(code(&out), 0);
    let allowed = ["x", "cx", "ccx"];
    for line in gate_lines(&expanded) {
        let word = line.split_whitespace().next().unwrap();
        assert!(allowed.contains(&word), "unexpected gate `{line}`");
    }
}

#[test]
fn permsynth_accepts_pairs_and_cycles() {
    let dir = tempfile::tempdir().unwrap();
    let from_pairs = dir.path().join("pairs.circ");
    let out = run(bin()
        .args(["permsynth", "--n", "3", "--pairs", "0:1,1:5,2:4,4:2,5:7,7:0", "--out"])
        .arg(&from_pairs));
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    let from_cycles = dir.path().join("cycles.circ");
    let out = run(bin()
        .args(["permsynth", "--n", "3", "--cycles", "(0 1 5 7)(2 4)", "--out"])
        .arg(&from_cycles));
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    // Same permutation either way, so the same synthesis.
    assert_eq!(
        std::fs::read_to_string(&from_pairs).unwrap(),
        std::fs::read_to_string(&from_cycles).unwrap()
    );
}

#[test]
fn permsynth_rejects_non_bijective_pairs() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(bin()
        .args(["permsynth", "--n", "3", "--pairs", "0:1,2:1", "--out"])
        .arg(dir.path().join("bad.circ")));
    assert_eq!(code(&out), 2);
}

#[test]
fn bench_csv_is_deterministic_for_a_fixed_seed() {
    let dir = tempfile::tempdir().unwrap();
    let cells = [
        "--cell",
        "4,3,0,no_ancilla",
        "--cell",
        "4,3,16,ancilla",
        "--cell",
        "3,2,0,naive_baseline",
    ];
    let strip_wall = |path: &Path| -> Vec<String> {
        std::fs::read_to_string(path)
            .unwrap()
            .lines()
            .map(|l| {
                let mut cols: Vec<&str> = l.split(',').collect();
                cols.pop();
                cols.join(",")
            })
            .collect()
    };
    let a = dir.path().join("a.csv");
    let out = run(bin().env(SEED_ENV, "7").args(["bench"]).args(cells).arg("--out").arg(&a));
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    assert!(stdout(&out).contains("C_no_ancilla = "));
    let b = dir.path().join("b.csv");
    run(bin().env(SEED_ENV, "7").args(["bench"]).args(cells).arg("--out").arg(&b));
    assert_eq!(strip_wall(&a), strip_wall(&b));
    assert!(strip_wall(&a)[1..].iter().all(|l| l.contains(",ok,")), "{:?}", strip_wall(&a));
}

#[test]
fn bench_with_no_cells_writes_only_the_header() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("empty.csv");
    let out = run(bin().args(["bench", "--out"]).arg(&csv));
    assert_eq!(code(&out), 0);
    assert_eq!(std::fs::read_to_string(&csv).unwrap(), format!("{}\n", bench::CSV_HEADER));
}

#[test]
fn malformed_inputs_exit_with_parse_errors() {
    let dir = tempfile::tempdir().unwrap();
    let circuit = dir.path().join("out.circ");
    let out = run(bin()
        .args(["synth", "--in"])
        .arg(dir.path().join("missing.json"))
        .arg("--out")
        .arg(&circuit));
    assert_eq!(code(&out), 1);

    let bad = write_file(dir.path(), "bad.json", "{not json");
    let out = run(bin().args(["synth", "--in"]).arg(&bad).arg("--out").arg(&circuit));
    assert_eq!(code(&out), 1);

    let unnormalized = write_file(
        dir.path(),
        "short.json",
        r#"{"n": 2, "entries": [{"q": "01", "re": 0.5, "im": 0.0}]}"#,
    );
    let out = run(bin().args(["synth", "--in"]).arg(&unnormalized).arg("--out").arg(&circuit));
    assert_eq!(code(&out), 2);

    let out = run(bin()
        .env(SEED_ENV, "not-a-number")
        .args(["bench", "--cell", "4,2,0,no_ancilla", "--out"])
        .arg(dir.path().join("seeded.csv")));
    assert_eq!(code(&out), 1);
}
