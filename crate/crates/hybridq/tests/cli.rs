use std::process::Command;

fn hybridq() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hybridq"))
}

#[test]
fn validate_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("validate.tsv");
    let status = hybridq().args(["validate", "--out"]).arg(&out).output().unwrap();
    assert!(status.status.success(), "{}", String::from_utf8_lossy(&status.stderr));
    let text = std::fs::read_to_string(out).unwrap();
    assert!(text.contains("t4_exact"));
    assert!(!text.contains("FAIL"));
}

#[test]
fn ideal_tomography_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("chi.csv");
    let run = hybridq().args(["tomography", "--ideal", "hadamard", "--out"]).arg(&out).output().unwrap();
    assert!(run.status.success());
    let stdout = String::from_utf8(run.stdout).unwrap();
    assert!(stdout.contains("process_fidelity\t1.000000000"));
    let csv = std::fs::read_to_string(out).unwrap();
    assert_eq!(csv.lines().count(), 17);
    assert_eq!(csv.lines().filter(|l| l.contains(",0.500000000000,")).count(), 4);
}

#[test]
fn gate_then_tomography() {
    let dir = tempfile::tempdir().unwrap();
    let gate = dir.path().join("x.json");
    let run = hybridq().args(["grape-gate", "--gate", "x", "--system", "ryd", "--nts", "10", "--iters", "20", "--out"]).arg(&gate).output().unwrap();
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    let chi = dir.path().join("chi.csv");
    let run = hybridq().args(["tomography", "--ideal", "x", "--gate"]).arg(&gate).arg("--out").arg(&chi).output().unwrap();
    assert!(run.status.success());
    assert!(String::from_utf8(run.stdout).unwrap().contains("process_fidelity"));
    let run = hybridq().args(["tomography", "--ideal", "cnot", "--gate"]).arg(&gate).output().unwrap();
    assert_eq!(run.status.code(), Some(2));
}

#[test]
fn sweep_writes_companions() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s.csv");
    let run = hybridq()
        .args(["sweep", "--nts", "6", "--iters", "2,3", "--shots", "2", "--seed", "4", "--out"])
        .arg(&out)
        .output()
        .unwrap();
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    assert!(dir.path().join("s.grid.tsv").exists());
    assert!(!dir.path().join("s.timing.tsv").exists());
    let first = std::fs::read_to_string(&out).unwrap();
    hybridq().args(["sweep", "--nts", "6", "--iters", "2,3", "--shots", "2", "--seed", "4", "--out"]).arg(&out).output().unwrap();
    assert_eq!(first, std::fs::read_to_string(&out).unwrap());
    let run = hybridq().args(["sweep", "--nts", "6", "--iters", "2", "--shots", "1", "--timing", "--out"]).arg(&out).output().unwrap();
    assert!(run.status.success());
    assert!(dir.path().join("s.timing.tsv").exists());
}

#[test]
fn bad_input_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    std::fs::write(&cfg, "version = 1\nbogus = 1\n").unwrap();
    let run = hybridq().arg("--config").arg(&cfg).arg("validate").output().unwrap();
    assert_eq!(run.status.code(), Some(2));
    let run = hybridq().args(["tomography", "--ideal", "toffoli"]).output().unwrap();
    assert_eq!(run.status.code(), Some(2));
    let run = hybridq().arg("nonsense").output().unwrap();
    assert!(!run.status.success());
}
