use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use revkit::{BitWord, Circuit, Gate};
use serde_json::Value;
use tempfile::TempDir;

fn revkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_revkit"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let o = revkit(&full);
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(&o)))
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

const CNOT_TABLE: &str = "table 2 2\n00 -> 00\n01 -> 01\n10 -> 11\n11 -> 10\n";
const MERGING_TABLE: &str = "table 2 2\n00 -> 01\n01 -> 11\n11 -> 00\n10 -> 11\n";

#[test]
fn check_reports_table_verdicts() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "cnot.table", CNOT_TABLE);
    let o = revkit(&["check", s(&a)]);
    assert_eq!(stdout(&o), "reversible: yes, conservative: no\n");
    assert_eq!(o.status.code(), Some(0));

    let b = write(&dir, "merging.table", MERGING_TABLE);
    let o = revkit(&["check", s(&b)]);
    assert_eq!(stdout(&o), "reversible: no, conservative: no\n");
    assert_eq!(o.status.code(), Some(1));

    let swap = write(
        &dir,
        "swap.table",
        "table 2 2\n00 -> 00\n01 -> 10\n10 -> 01\n11 -> 11\n",
    );
    assert_eq!(
        stdout(&revkit(&["check", s(&swap)])),
        "reversible: yes, conservative: yes\n"
    );
}

#[test]
fn check_accepts_circuits() {
    let dir = TempDir::new().unwrap();
    let c = write(
        &dir,
        "fred.net",
        "# swap under control\nlines 3\nFRED 0 1 2\n",
    );
    let v = json(&["check", s(&c)]);
    assert_eq!(v["kind"], "circuit");
    assert_eq!(v["reversible"], true);
    assert_eq!(v["conservative"], true);
}

#[test]
fn sim_single_cnot() {
    let dir = TempDir::new().unwrap();
    let c = write(&dir, "cnot.net", "lines 2\nCNOT 0 1\n");
    let o = revkit(&["sim", s(&c), "--input", "10"]);
    assert_eq!(stdout(&o), "11\n");
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn sim_requires_input() {
    let dir = TempDir::new().unwrap();
    let c = write(&dir, "cnot.net", "lines 2\nCNOT 0 1\n");
    assert_eq!(revkit(&["sim", s(&c)]).status.code(), Some(2));
    assert_eq!(
        revkit(&["sim", s(&c), "--input", "1x"]).status.code(),
        Some(2)
    );
    assert_eq!(
        revkit(&["sim", s(&c), "--input", "101"]).status.code(),
        Some(1)
    );
}

#[test]
fn energy_of_empty_circuit_is_zero() {
    let dir = TempDir::new().unwrap();
    let c = write(&dir, "empty.net", "lines 0\n");
    let o = revkit(&["energy", s(&c), "--input", ""]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("total 0.000000e0 J"), "{text}");
    assert!(text.contains("rho = 1.678e-8"), "{text}");
}

#[test]
fn energy_echoes_technology_file_and_overrides() {
    let dir = TempDir::new().unwrap();
    let c = write(&dir, "not.net", "lines 1\nNOT 0\n");
    let tech = write(&dir, "cmos.tech", "# metal\nrho = 2.0e-8\nv = 3.3\n");
    let v = json(&["energy", s(&c), "--tech", s(&tech), "--temp", "300"]);
    assert_eq!(v["parameters"]["resistivity"], 2.0e-8);
    assert_eq!(v["parameters"]["voltage"], 3.3);
    assert_eq!(v["parameters"]["temperature"], 300.0);
    let text = stdout(&revkit(&[
        "energy",
        s(&c),
        "--tech",
        s(&tech),
        "--temp",
        "300",
    ]));
    assert!(
        text.contains("rho = 2e-8") && text.contains("temperature = 300"),
        "{text}"
    );

    let bad = write(&dir, "bad.tech", "colour = 3\n");
    assert_eq!(
        revkit(&["energy", s(&c), "--tech", s(&bad)]).status.code(),
        Some(2)
    );
}

#[test]
fn energy_profile_flags_shape_the_ledger() {
    let dir = TempDir::new().unwrap();
    let c = write(&dir, "nots.net", "lines 2\nNOT 0\nNOT 1\n");
    let open = json(&["energy", s(&c), "--input", "00"]);
    let stages = |v: &Value| -> Vec<String> {
        v["report"]["ledger"]["entries"]
            .as_array()
            .unwrap()
            .iter()
            .map(|e| e["stage"].as_str().unwrap().to_string())
            .collect()
    };
    let open_stages = stages(&open);
    assert!(
        open_stages.contains(&"COMPUTE".to_string()),
        "{open_stages:?}"
    );
    assert!(
        open_stages.contains(&"INTERCONNECT".to_string()),
        "{open_stages:?}"
    );
    assert_eq!(open["report"]["bound_satisfied"], true);

    let closed = json(&[
        "energy",
        s(&c),
        "--input",
        "00",
        "--closed",
        "--ideal-wires",
        "--cyclic-tag",
    ]);
    let closed_stages = stages(&closed);
    assert!(
        !closed_stages.contains(&"COMPUTE".to_string()),
        "{closed_stages:?}"
    );
    assert!(
        !closed_stages.contains(&"INTERCONNECT".to_string()),
        "{closed_stages:?}"
    );
    assert_eq!(closed["report"]["ledger"]["observable"], false);

    assert_eq!(
        revkit(&["energy", s(&c), "--recovered-fraction", "1.5"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn text_and_json_agree_on_numbers() {
    let dir = TempDir::new().unwrap();
    let c = write(
        &dir,
        "mix.net",
        "lines 3\nNOT 0\nTOF 0 1 2\nCNOT 2 1\nFRED 1 0 2\n",
    );
    let args = ["energy", s(&c), "--input", "011"];
    let text = stdout(&revkit(&args));
    let v = json(&args);
    let total = v["report"]["ledger"]["total"].as_f64().unwrap();
    assert!(text.contains(&format!("total {total:.6e} J")), "{text}");
    let bound = v["report"]["lower_bound"].as_f64().unwrap();
    assert!(
        text.contains(&format!("{bound:.6e} J, satisfied")),
        "{text}"
    );
    for e in v["report"]["ledger"]["entries"].as_array().unwrap() {
        let joules = e["joules"].as_f64().unwrap();
        let line = format!("{} bits  {joules:.6e} J", e["bits"]);
        assert!(text.contains(&line), "missing `{line}` in\n{text}");
    }
    assert!(text.contains(&format!("class: {}", v["class"].as_str().unwrap())));
}

#[test]
fn json_output_is_byte_identical_across_runs() {
    let dir = TempDir::new().unwrap();
    let c = write(&dir, "mix.net", "lines 3\nNOT 0\nTOF 0 1 2\nCNOT 2 1\n");
    let q = write(&dir, "bell.q", "H 0\nIZZ 0.7 0 1\nMEASURE 0\nMEASURE 1\n");
    for args in [
        vec!["--format", "json", "energy", s(&c), "--input", "101"],
        vec!["--format", "json", "quantum", s(&q)],
        vec!["--format", "json", "quantum", s(&q), "--sample", "42"],
    ] {
        let a = revkit(&args).stdout;
        let b = revkit(&args).stdout;
        assert!(!a.is_empty());
        assert_eq!(a, b, "{args:?}");
    }
}

#[test]
fn invert_round_trips_under_sim() {
    let dir = TempDir::new().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for trial in 0..5 {
        let width = rng.gen_range(3..=6);
        let mut c = Circuit::new(width).unwrap();
        for _ in 0..8 {
            let mut lines: Vec<usize> = (0..width).collect();
            rand::seq::SliceRandom::shuffle(&mut lines[..], &mut rng);
            let g = match rng.gen_range(0..4) {
                0 => Gate::not(lines[0]),
                1 => Gate::cnot(lines[0], lines[1]),
                2 => Gate::toffoli(lines[0], lines[1], lines[2]),
                _ => Gate::fredkin(lines[0], lines[1], lines[2]),
            };
            c.push(g).unwrap();
        }
        let path = write(&dir, &format!("c{trial}.net"), &c.to_string());
        let inverse_text = stdout(&revkit(&["invert", s(&path)]));
        let inv: Circuit = inverse_text.parse().unwrap();
        let inv_path = write(&dir, &format!("c{trial}.inv.net"), &inverse_text);
        for x in 0..1u32 << width {
            let x = BitWord::new(width, x).unwrap().to_string();
            let y = stdout(&revkit(&["sim", s(&path), "--input", &x]));
            let back = stdout(&revkit(&["sim", s(&inv_path), "--input", y.trim()]));
            assert_eq!(back.trim(), x, "trial {trial}\n{c}");
        }
        assert_eq!(inv.gates().len(), c.gates().len());
    }
}

#[test]
fn invert_table_and_reject_irreversible() {
    let dir = TempDir::new().unwrap();
    let b = write(
        &dir,
        "shift.table",
        "table 2 2\n00 -> 11\n01 -> 10\n10 -> 00\n11 -> 01\n",
    );
    let text = stdout(&revkit(&["invert", s(&b)]));
    let inv: revkit::TruthTable = text.parse().unwrap();
    assert_eq!(inv.get(0b11), 0b00);
    assert_eq!(inv.get(0b00), 0b10);

    let irr = write(&dir, "merging.table", MERGING_TABLE);
    let o = revkit(&["invert", s(&irr)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("not reversible"));
}

#[test]
fn dualrail_embeds_reversible_tables() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "cnot.table", CNOT_TABLE);
    let v = json(&["dualrail", s(&a)]);
    assert_eq!(v["rail_width"], 2);
    assert_eq!(v["conserves_codewords"], true);
    assert_eq!(v["reversible"], true);
    let embedded: revkit::TruthTable = v["table"].as_str().unwrap().parse().unwrap();
    assert_eq!(embedded.in_width(), 4);
    // 10 encodes as 10|01 and maps to 11|00.
    assert_eq!(embedded.get(0b1001), 0b1100);

    let b = write(&dir, "merging.table", MERGING_TABLE);
    assert_eq!(revkit(&["dualrail", s(&b)]).status.code(), Some(1));
}

#[test]
fn quantum_reports_full_distribution() {
    let dir = TempDir::new().unwrap();
    let q = write(&dir, "h.q", "qubits 1\nH 0\nMEASURE 0\n");
    let text = stdout(&revkit(&["quantum", s(&q)]));
    assert!(
        text.contains("branch 0: probability 0.500000, outcomes q0=0"),
        "{text}"
    );
    assert!(
        text.contains("branch 1: probability 0.500000, outcomes q0=1"),
        "{text}"
    );
    assert!(
        text.contains("  1: 1.000000+0.000000i  p=1.000000"),
        "{text}"
    );
    assert!(text.contains("MEASUREMENT"), "{text}");

    let v = json(&["quantum", s(&q), "--sample", "3"]);
    assert_eq!(v["branches"].as_array().unwrap().len(), 1);
    assert_eq!(v["sampled"], true);

    let x = write(&dir, "x.q", "RX 3.141592653589793 0\n");
    let v = json(&["quantum", s(&x), "--state", "0"]);
    let state = &v["branches"][0]["state"];
    assert_eq!(state.as_array().unwrap().len(), 1);
    assert_eq!(state[0]["index"], "1");
}

#[test]
fn quantum_rejects_bad_programs() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.q", "CZ 0 1\n");
    assert_eq!(revkit(&["quantum", s(&bad)]).status.code(), Some(2));
    let ok = write(&dir, "ok.q", "H 1\n");
    assert_eq!(
        revkit(&["quantum", s(&ok), "--state", "1"]).status.code(),
        Some(1)
    );
}

#[test]
fn classify_levels() {
    assert_eq!(
        stdout(&revkit(&["classify", "--software-tracked"])),
        "class: NSLR\n"
    );
    assert_eq!(
        stdout(&revkit(&["classify", "--logical-reversible"])),
        "class: SLR\n"
    );
    assert_eq!(
        stdout(&revkit(&["classify", "--energy-conservative"])),
        "class: ESR\n"
    );
    assert_eq!(
        stdout(&revkit(&[
            "classify",
            "--energy-conservative",
            "--ideal-wires"
        ])),
        "class: FSR\n"
    );
    let o = revkit(&["classify"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(revkit(&[]).status.code(), Some(2));
    assert_eq!(revkit(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        revkit(&["classify", "--no-such-flag"]).status.code(),
        Some(2)
    );
    let dir = TempDir::new().unwrap();
    let broken = write(&dir, "broken.net", "lines 2\nCNOT 0\n");
    let o = revkit(&["check", s(&broken)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
}

#[test]
fn help_states_bit_order() {
    let o = revkit(&["--help"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("most-significant line first"));
}

#[test]
fn run_returns_report_without_a_process() {
    let r = revkit_cli::run([
        "revkit",
        "--format",
        "json",
        "classify",
        "--logical-reversible",
    ]);
    assert_eq!(r.exit_code, 0);
    assert_eq!(r.format, revkit_cli::Format::Json);
    let v: Value = serde_json::from_str(&r.body).unwrap();
    assert_eq!(v["class"], "SLR");
}
