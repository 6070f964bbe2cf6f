use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use accelshift::asymptotic::Regime;
use accelshift::shift::shift_total;
use accelshift::structfun::stat_functions;
use accelshift::units::to_natural;
use accelshift::{AtomSpec, Polarization, QuadratureSettings};

const HEADER: &str =
    "z_si,a_si,omega0,az,w0z,total_reduced,vf_reduced,rr_reduced,bracket,regime,ratio_to_static,err_est,error";

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_accelshift"));
    c.env_remove("ACCELSHIFT_THREADS");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn recipe(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../recipes").join(name)
}

fn json(args: &[&str]) -> serde_json::Value {
    let o = run(args);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn static_point_is_low_a_short() {
    let o = run(&["shift", "--omega0", "1e15", "--accel", "0", "--z", "1e-8", "--units", "si", "--pol", "0.333333,0.333333,0.333334"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.lines().any(|l| l.starts_with("regime") && l.ends_with("LOW_A_SHORT")), "{text}");
}

#[test]
fn unit_point_reports_near_resonance() {
    let v = json(&["shift", "--units", "natural", "--omega0", "1", "--accel", "1", "--z", "1", "--format", "json"]);
    assert_eq!(v["classification"]["band"], "NEAR_RES");
}

#[test]
fn single_axis_static_shift_matches_library() {
    let v = json(&["shift", "--units", "natural", "--omega0", "2", "--accel", "0", "--z", "0.7", "--pol", "1,0,0", "--format", "json"]);
    let total = v["breakdown"]["total_reduced"].as_f64().unwrap();
    let g = stat_functions(2.0, 0.7, 0.0, &QuadratureSettings::default()).unwrap().g.xx;
    let expected = 3.0 * 2.0 / (128.0 * std::f64::consts::PI) * g;
    assert!((total - expected).abs() <= 1e-13 * expected.abs(), "{total} vs {expected}");
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        vec!["shift", "--omega0", "1e15", "--accel", "0"],
        vec!["shift", "--omega0", "1e15", "--accel", "0", "--z", "1e-8", "--pol", "0.5,0.5,0.5"],
        vec!["shift", "--omega0", "1e15", "--accel", "-1", "--z", "1e-8"],
        vec!["shift", "--omega0", "1e15", "--accel", "0", "--z", "0"],
        vec!["shift", "--omega0", "1e15", "--accel", "0", "--z", "1e-8", "--bogus"],
        vec!["regime", "--omega0", "1", "--accel", "1", "--z", "1", "--units", "natural", "--regime", "NOPE"],
        vec!["scan", "--omega0", "1e15", "--accel", "0", "--from", "1", "--to", "1"],
        vec!["scan", "--omega0", "1e15", "--accel", "0", "--from", "1e-8", "--to", "1e-6", "--columns", "z_si,nope"],
    ] {
        let o = run(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn unknown_config_key_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.conf");
    std::fs::write(&cfg, "omega0 = 1\nspeed = 3\n").unwrap();
    let o = run(&["shift", "--config", cfg.to_str().unwrap(), "--accel", "0", "--z", "1", "--units", "natural"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("speed"));
}

#[test]
fn flags_override_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.conf");
    std::fs::write(&cfg, "omega0 = 1\nunits = natural\naccel = 0\nz = 1\nformat = json\n").unwrap();
    let v = json(&["shift", "--config", cfg.to_str().unwrap(), "--z", "2"]);
    assert_eq!(v["point"]["z"].as_f64(), Some(2.0));
}

#[test]
fn unwritable_output_exits_4() {
    let o = run(&["scan", "--omega0", "1e15", "--accel", "0", "--from", "1e-8", "--to", "1e-6", "--points", "3", "--out", "/nonexistent-dir/x.csv"]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn failed_rows_are_recorded_and_exit_5() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s.csv");
    let o = run(&[
        "scan", "--units", "natural", "--omega0", "1", "--z", "1", "--var", "a", "--from", "-1", "--to", "1",
        "--points", "3", "--spacing", "linear", "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(5));
    let text = std::fs::read_to_string(&out).unwrap();
    let rows: Vec<_> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 3);
    let first: Vec<_> = rows[0].split(',').collect();
    assert_eq!(first.len(), 13);
    assert!(first[5].is_empty() && !first[12].is_empty());
    for r in &rows[1..] {
        assert!(r.ends_with(','), "{r}");
    }
}

#[test]
fn csv_schema_and_library_agreement() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s.csv");
    let o = run(&[
        "scan", "--omega0", "1e15", "--accel", "1e23", "--from", "1e-8", "--to", "1e-2", "--points", "25",
        "--out", out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let bytes = std::fs::read(&out).unwrap();
    assert!(!bytes.contains(&b'\r') && !bytes.contains(&b'"'));
    let text = String::from_utf8(bytes).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some(HEADER));
    let atom = AtomSpec::new(1e15, Polarization::ISOTROPIC).unwrap();
    let settings = QuadratureSettings::default();
    let mut n = 0;
    for line in lines {
        let f: Vec<_> = line.split(',').collect();
        assert_eq!(f.len(), 13);
        for (i, cell) in f.iter().enumerate() {
            match i {
                9 => assert!(Regime::parse(cell).is_some(), "{cell}"),
                10 => assert!(*cell == "NA" || cell.parse::<f64>().is_ok()),
                12 => assert!(cell.is_empty()),
                _ => {
                    let mantissa = cell.split('e').next().unwrap().trim_start_matches('-');
                    assert_eq!(mantissa.chars().filter(char::is_ascii_digit).count(), 17, "{cell}");
                }
            }
        }
        let z_si: f64 = f[0].parse().unwrap();
        let a_si: f64 = f[1].parse().unwrap();
        let kin = to_natural(a_si, z_si).unwrap();
        let fresh = shift_total(&atom, &kin, &settings).unwrap().total_reduced;
        assert_eq!(f[5].parse::<f64>().unwrap().to_bits(), fresh.to_bits(), "{line}");
        n += 1;
    }
    assert_eq!(n, 25);

    let meta: serde_json::Value = serde_json::from_slice(&std::fs::read(dir.path().join("s.csv.meta.json")).unwrap()).unwrap();
    for key in ["command_line", "version", "settings", "wall_time_s"] {
        assert!(meta.get(key).is_some(), "{key}");
    }
    assert_eq!(meta["rows"], 25);
}

#[test]
fn column_selection_keeps_order() {
    let o = run(&["scan", "--omega0", "1e15", "--accel", "0", "--from", "1e-8", "--to", "1e-6", "--points", "2", "--columns", "ratio_to_static,z_si"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let lines: Vec<_> = text.lines().collect();
    assert_eq!(lines[0], "ratio_to_static,z_si");
    assert_eq!(lines[1].split(',').nth(1), Some("1.0000000000000000e-8"));
}

#[test]
fn scan_is_identical_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let mut files = Vec::new();
    for (i, threads) in ["1", "8", "8"].iter().enumerate() {
        let out = dir.path().join(format!("{i}.csv"));
        let o = bin()
            .args(["scan", "--config", recipe("fig4.conf").to_str().unwrap(), "--points", "40", "--out", out.to_str().unwrap()])
            .env("ACCELSHIFT_THREADS", threads)
            .output()
            .unwrap();
        assert!(o.status.success());
        files.push(std::fs::read(&out).unwrap());
    }
    assert_eq!(files[0], files[1]);
    assert_eq!(files[1], files[2]);
}

#[test]
fn recipes_run() {
    for (name, accel) in [("fig2.conf", Some("1e22")), ("fig3.conf", Some("0")), ("fig4.conf", None), ("fig5.conf", Some("1e23"))] {
        let path = recipe(name);
        let mut args = vec!["scan", "--config", path.to_str().unwrap(), "--points", "4"];
        if let Some(a) = accel {
            args.extend(["--accel", a]);
        }
        let o = run(&args);
        assert!(o.status.success(), "{name}: {}", String::from_utf8_lossy(&o.stderr));
        assert_eq!(stdout(&o).lines().next(), Some(HEADER));
    }
}

#[test]
fn regime_report_and_forced_expansion() {
    let v = json(&["regime", "--units", "natural", "--omega0", "1", "--accel", "0.01", "--z", "0.01", "--format", "json"]);
    assert_eq!(v["classification"]["regime"], "LOW_A_SHORT");
    assert!(v["report"]["rel_deviation"].as_f64().unwrap() < 0.02);

    let o = run(&["regime", "--units", "natural", "--omega0", "1", "--accel", "1", "--z", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("no expansion"));

    let v = json(&["regime", "--units", "natural", "--omega0", "1", "--accel", "1", "--z", "1", "--regime", "LOW_A_SHORT", "--format", "json"]);
    assert_eq!(v["expansion"], "LOW_A_SHORT");
    assert!(v["report"]["asymptote_total"].is_f64());
}

#[test]
fn ratio_reports_static_comparator() {
    let v = json(&["ratio", "--omega0", "1e15", "--accel", "1e23", "--z", "1e-8", "--format", "json"]);
    let r = v["comparators"]["ratio_to_static"].as_f64().unwrap();
    assert!((r - 0.997).abs() <= 0.003, "{r}");
    assert_eq!(v["comparators"]["ratio_thermal_to_accel"], "NA");
}

#[test]
fn selftest_passes_and_detects_mutation() {
    let o = run(&["selftest"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("epsilon"));

    let o = run(&["selftest", "--skip", "epsilon"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(!text.lines().any(|l| l.contains("eps-regulated")));
    assert!(text.lines().any(|l| l.starts_with("PASS  dual-path")));
    assert!(text.lines().any(|l| l.starts_with("PASS  isotropic")));
    assert!(text.lines().any(|l| l.starts_with("PASS  limits")));

    let o = run(&["selftest", "--skip", "epsilon", "--cross-multiplicity", "2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).lines().any(|l| l.starts_with("FAIL  isotropic")));
}
