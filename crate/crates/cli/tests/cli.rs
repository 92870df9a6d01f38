use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const YES: &str = "n=1 m=0 p=2\nTOFFOLI 1 2 0\nX 0\n";

fn stoqforge(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stoqforge"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn guided(dir: &Path, input: &str) {
    std::fs::write(dir.join("yes.crqvc"), YES).unwrap();
    let out = stoqforge(
        &[
            "guide",
            "--circuit",
            "yes.crqvc",
            "--input",
            input,
            "--pre-idle",
            "4",
            "--truncation",
            "4",
            "--out",
            "inst.json",
        ],
        dir,
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn accept_reports_exact_probability() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("c.crqvc"), YES).unwrap();
    let out = stoqforge(
        &["accept", "--circuit", "c.crqvc", "--input", "0"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert_eq!(report["result"]["probability"], 0.75);
    assert_eq!(report["manifest"]["command"], "accept");
    assert!(
        report["manifest"]["inputs"]["c.crqvc"]
            .as_str()
            .unwrap()
            .len()
            == 64
    );
    assert!(report["manifest"].get("wall_time_ms").is_none());
}

#[test]
fn compile_writes_a_hamiltonian_that_spectrum_reads() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("c.crqvc"), YES).unwrap();
    let out = stoqforge(
        &[
            "compile",
            "--circuit",
            "c.crqvc",
            "--input",
            "1",
            "--out",
            "h.ham",
        ],
        dir.path(),
    );
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let out = stoqforge(&["spectrum", "--ham", "h.ham", "--k", "2"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    let lambda0 = report["result"]["eigenvalues"][0].as_f64().unwrap();
    assert!(lambda0.abs() < 1e-10);
}

#[test]
fn verify_passes_a_correct_instance() {
    let dir = tempfile::tempdir().unwrap();
    guided(dir.path(), "0");
    let out = stoqforge(&["verify", "--instance", "inst.json"], dir.path());
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert_eq!(json(&out)["result"]["verdict"], "PASS");
}

#[test]
fn verify_fails_a_mislabeled_instance() {
    let dir = tempfile::tempdir().unwrap();
    guided(dir.path(), "0");
    let path = dir.path().join("inst.json");
    let mut inst: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(inst["claim"], "yes");
    inst["claim"] = "no".into();
    std::fs::write(&path, serde_json::to_string(&inst).unwrap()).unwrap();
    let out = stoqforge(&["verify", "--instance", "inst.json"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["result"]["verdict"], "FAIL");
    assert!(String::from_utf8_lossy(&out.stderr).contains("FAIL energy"));
}

#[test]
fn errors_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let missing = stoqforge(
        &["accept", "--circuit", "nope.crqvc", "--input", "0"],
        dir.path(),
    );
    assert_eq!(missing.status.code(), Some(1));
    std::fs::write(dir.path().join("bad.crqvc"), "n=1 m=0 p=0\nFREDKIN 0 1 2\n").unwrap();
    let bad = stoqforge(
        &["accept", "--circuit", "bad.crqvc", "--input", "0"],
        dir.path(),
    );
    assert_eq!(bad.status.code(), Some(1));
    let unknown = stoqforge(&["frobnicate"], dir.path());
    assert_eq!(unknown.status.code(), Some(1));
    let help = stoqforge(&["--help"], dir.path());
    assert_eq!(help.status.code(), Some(0));
}

#[test]
fn qubit_cap_is_enforced() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("c.crqvc"), YES).unwrap();
    let out = stoqforge(
        &[
            "compile",
            "--circuit",
            "c.crqvc",
            "--input",
            "0",
            "--pre-idle",
            "30",
            "--cap-qubits",
            "12",
            "--out",
            "h.ham",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn text_format_prints_flat_keys() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("c.crqvc"), YES).unwrap();
    let out = stoqforge(
        &[
            "accept",
            "--circuit",
            "c.crqvc",
            "--input",
            "1",
            "--format",
            "text",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("manifest.command = accept\n"));
    assert!(text.contains("result.probability = 0.25\n"));
}

#[test]
fn sampling_is_seeded() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("s.sstate"),
        "n=3\nmember 000\nmember 101\nmember 110\n",
    )
    .unwrap();
    let run = |seed: &str| {
        let out = stoqforge(
            &[
                "sample", "--state", "s.sstate", "--shots", "200", "--seed", seed,
            ],
            dir.path(),
        );
        assert_eq!(out.status.code(), Some(0));
        out.stdout
    };
    assert_eq!(run("5"), run("5"));
    assert_ne!(run("5"), run("6"));
}
