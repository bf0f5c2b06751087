use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use mhd1d_cli::csv::read_snapshot;
use mhd1d_cli::{cmd_solve, cmd_sweep, Options};
use mhd1d_core::InitialData;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_mhd1d"))
}

fn write_config(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn run_bin(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

const TRIVIAL: &str = "\
[grid]
n = 64
[time]
T = 0.5
snapshots = [0.1, 0.3, 0.5]
[initial]
profile = \"constant(1.3)\"
";

#[test]
fn solve_on_trivial_config_keeps_initial_state() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "t.toml", TRIVIAL);
    let out = tmp.path().join("out");
    let o = cmd_solve(&cfg, &out, &Options::default()).unwrap();
    assert!(o.manifest.files.iter().any(|f| f == "invariants.csv"));
    let grid = mhd1d_core::Grid::new(64).unwrap();
    let initial = InitialData::Constant { rho_bar: 1.3 }.state(&grid);
    for k in 0..3 {
        let (_, s) = read_snapshot(&out.join(format!("snapshot_{k:04}.csv")), 0.0).unwrap();
        assert_eq!(s.rho, initial.rho);
        assert_eq!(s.u, initial.u);
        assert_eq!(s.b, initial.b);
    }
    let manifest = std::fs::read_to_string(out.join("manifest.txt")).unwrap();
    assert!(manifest.contains("config_sha256: "));
    assert!(manifest.contains("snapshot_0002.csv"));
}

#[test]
fn solve_is_byte_reproducible() {
    let tmp = tempfile::tempdir().unwrap();
    let text = TRIVIAL
        .replace("constant(1.3)", "sine(1, 0.2, 2, 0.1, 1, 0.3, 1)")
        .replace("T = 0.5", "T = 0.3")
        .replace("[0.1, 0.3, 0.5]", "[0.3]");
    let cfg = write_config(tmp.path(), "s.toml", &text);
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    cmd_solve(&cfg, &a, &Options::default()).unwrap();
    cmd_solve(&cfg, &b, &Options::default()).unwrap();
    for f in ["snapshot_0000.csv", "invariants.csv"] {
        assert_eq!(
            std::fs::read(a.join(f)).unwrap(),
            std::fs::read(b.join(f)).unwrap(),
            "{f}"
        );
    }
}

#[test]
fn one_point_sweep_warns_and_leaves_fits_empty() {
    let tmp = tempfile::tempdir().unwrap();
    let text = "\
[grid]
n = 64
[time]
T = 0.05
[initial]
profile = \"smooth\"
[boundary]
b = \"constant(0, 0)\"
[study]
kind = \"sweep\"
ladder = \"1e-2\"
";
    let cfg = write_config(tmp.path(), "sw.toml", text);
    let out = tmp.path().join("out");
    let o = run_bin(&[
        "sweep",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning:"));
    let report = std::fs::read_to_string(out.join("sweep_report.csv")).unwrap();
    assert_eq!(report.lines().filter(|l| !l.starts_with('#')).count(), 2);
    assert!(report.contains("# fit,b_diff,,,,\n"));

    let again = cmd_sweep(&cfg, &tmp.path().join("again"), &Options::default()).unwrap();
    assert!(again.warnings.iter().any(|w| w.contains("at least 3")));
}

#[test]
fn config_errors_exit_one_and_leave_nothing() {
    let tmp = tempfile::tempdir().unwrap();
    let bad = write_config(
        tmp.path(),
        "bad.toml",
        "[fluid]\nnu = 0\n[boundary]\nb = \"constant(1, 1)\"\n",
    );
    let out = tmp.path().join("out");
    let o = run_bin(&[
        "solve",
        "--config",
        bad.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("nu=0 requires boundary kind none"));
    assert!(!out.exists());

    let o = run_bin(&[
        "solve",
        "--config",
        "/nonexistent/cfg.toml",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));

    let unknown = write_config(tmp.path(), "u.toml", "[grid]\nn = 64\nsize = 3\n");
    let o = run_bin(&[
        "solve",
        "--config",
        unknown.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
    let o = run_bin(&[
        "--strict",
        "false",
        "solve",
        "--config",
        unknown.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
}

#[test]
fn numerical_failure_exits_two_and_removes_output() {
    let tmp = tempfile::tempdir().unwrap();
    // the pressure overflows, so no finite time step exists
    let text = "\
[fluid]
A = 1e300
gamma = 3
[grid]
n = 16
[time]
T = 1.0
[initial]
profile = \"constant(1e10)\"
";
    let cfg = write_config(tmp.path(), "v.toml", text);
    let out = tmp.path().join("out");
    let o = run_bin(&[
        "solve",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(
        o.status.code(),
        Some(2),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    assert!(!out.exists());
}

#[test]
fn bad_thread_setting_is_a_usage_error() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "t.toml", TRIVIAL);
    let o = bin()
        .env("MHD1D_THREADS", "zero")
        .args([
            "solve",
            "--config",
            cfg.to_str().unwrap(),
            "--out",
            tmp.path().join("o").to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn shipped_verification_suite_passes() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("verify");
    let o = run_bin(&["verify", "--out", out.to_str().unwrap()]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stdout)
    );
    let report = std::fs::read_to_string(out.join("verify_report.csv")).unwrap();
    assert!(
        report.lines().skip(1).all(|l| l.ends_with(",true")),
        "{report}"
    );
}

#[test]
fn verify_flags_under_resolved_config_with_exit_three() {
    let tmp = tempfile::tempdir().unwrap();
    let text = "\
[fluid]
nu = 1e-4
[grid]
n = 16
[time]
T = 0.1
[boundary]
b = \"ramp(1, 1, 0.05)\"
";
    let cfg = write_config(tmp.path(), "layer.toml", text);
    let out = tmp.path().join("out");
    let o = run_bin(&[
        "verify",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(
        o.status.code(),
        Some(3),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let report = std::fs::read_to_string(out.join("verify_report.csv")).unwrap();
    assert!(
        report.contains("self_convergence_config,UnderResolved"),
        "{report}"
    );
}
