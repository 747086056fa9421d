use std::fs;
use std::process::Command;

fn qthermo() -> Command {
    Command::new(env!("CARGO_BIN_EXE_qthermo"))
}

#[test]
fn runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for out in [&a, &b] {
        let status = qthermo().args(["run", "fig2", "--steps", "200", "--out"]).arg(out).output().unwrap().status;
        assert_eq!(status.code(), Some(0));
    }
    let first = fs::read(a.join("fig2.csv")).unwrap();
    assert!(!first.is_empty());
    assert_eq!(first, fs::read(b.join("fig2.csv")).unwrap());
}

#[test]
fn unwritable_output_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("plain");
    fs::write(&file, "x").unwrap();
    let out = qthermo().args(["run", "fig3", "--steps", "50", "--out"]).arg(file.join("sub")).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn incomplete_custom_config_exits_3() {
    let out = qthermo().args(["run", "custom", "--set", "omega_a=1"]).output().unwrap();
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("missing"));
}

#[test]
fn unknown_key_exits_3() {
    let out = qthermo().args(["run", "fig2", "--set", "bogus=1"]).output().unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn counterexample_reports_negative_sigma_erg() {
    let dir = tempfile::tempdir().unwrap();
    let out = qthermo().args(["run", "appB", "--steps", "200", "--out"]).arg(dir.path()).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let log = String::from_utf8_lossy(&out.stdout);
    assert!(log.contains("sigma_erg min -"), "{log}");
    assert!(dir.path().join("appB_sigma_erg.csv").exists());
}

#[test]
fn config_file_is_read() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    fs::write(&cfg, "scenario = \"fig3\"\nn_steps = 100\nt_max = 10.0\n").unwrap();
    let out = qthermo().arg("run").arg("--config").arg(&cfg).arg("--out").arg(dir.path()).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let csv = fs::read_to_string(dir.path().join("fig3.csv")).unwrap();
    assert!(csv.starts_with("t,E_A,E_B,E_int,"));
    assert_eq!(csv.lines().count(), 102);
}

#[test]
fn missing_config_file_exits_2() {
    let out = qthermo().args(["run", "--config", "/nonexistent/qthermo.toml"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}
