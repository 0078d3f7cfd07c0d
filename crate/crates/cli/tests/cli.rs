use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn run(args: &[&str], config: &Path, out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sisampling"))
        .args(args)
        .arg("--config")
        .arg(config)
        .arg("--out")
        .arg(out)
        .output()
        .unwrap()
}

fn report(dir: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(dir.join("report.json")).unwrap()).unwrap()
}

#[test]
fn analyze_reports_the_symmetry_data() {
    let tmp = TempDir::new().unwrap();
    let out = tmp.path().join("run");
    let o = run(&["analyze"], &configs().join("hsec_analyze.toml"), &out);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let r = report(&out);
    assert_eq!(r["task"], "analyze");
    let g = &r["result"]["generator"];
    assert_eq!(g["k"]["finite"], 2);
    assert_eq!(g["q"], 2);
    assert!((g["sym_const"][0].as_f64().unwrap() + 1.0).abs() < 1e-12);
    assert_eq!(r["result"]["stability"]["stable"], true);
    assert!(r["tolerances"]["eps_stab"].is_number());
}

#[test]
fn malformed_config_writes_nothing() {
    let tmp = TempDir::new().unwrap();
    let cfg = tmp.path().join("bad.toml");
    std::fs::write(&cfg, "task = \"analyze\"\n[generator]\nclass = \"K\"\nP = [[0, 0]\n").unwrap();
    let out = tmp.path().join("run");
    let o = run(&["analyze"], &cfg, &out);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("bad.toml"));
    assert!(!out.exists());

    std::fs::write(&cfg, "task = \"sampling\"\n[generator]\npreset = \"hsec\"\n").unwrap();
    let o = run(&["sampling"], &cfg, &out);
    assert!(!o.status.success());
    assert!(!out.exists());
}

#[test]
fn mismatched_task_is_rejected() {
    let tmp = TempDir::new().unwrap();
    let out = tmp.path().join("run");
    let o = run(&["gabor"], &configs().join("hsec_analyze.toml"), &out);
    assert!(!o.status.success());
    assert!(!out.exists());
}

#[test]
fn runs_are_reproducible() {
    let tmp = TempDir::new().unwrap();
    let cfg = configs().join("case2_vanisher.toml");
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    for dir in [&a, &b] {
        let o = run(&["vanisher", "--seed", "11"], &cfg, dir);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let (mut ra, mut rb) = (report(&a), report(&b));
    ra["timestamp"] = Value::Null;
    rb["timestamp"] = Value::Null;
    assert_eq!(ra, rb);
    assert_eq!(ra["seed"], 11);
    let trace_a = std::fs::read_to_string(a.join("vanisher_trace.csv")).unwrap();
    assert_eq!(trace_a, std::fs::read_to_string(b.join("vanisher_trace.csv")).unwrap());
    assert!(trace_a.starts_with("x,f\n"));
    assert_eq!(trace_a.lines().count(), 1025);
    assert_eq!(ra["result"]["solution"]["signed"], true);
}

#[test]
fn json_config_spectrum() {
    let tmp = TempDir::new().unwrap();
    let out = tmp.path().join("run");
    let o = run(&["spectrum"], &configs().join("hsec_difference_spectrum.json"), &out);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let mut rdr = csv::Reader::from_path(out.join("spectrum.csv")).unwrap();
    assert_eq!(rdr.headers().unwrap(), vec!["t", "re", "im", "abs", "method", "err_est"]);
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 81);
    for row in &rows {
        let t: f64 = row[0].parse().unwrap();
        if (t - t.round()).abs() < 1e-12 {
            let abs: f64 = row[3].parse().unwrap();
            assert!(abs < 1e-9, "t = {t}: {abs}");
        }
    }
}

#[test]
fn sampling_and_gabor_find_frames() {
    let tmp = TempDir::new().unwrap();
    let out = tmp.path().join("s");
    let o = run(&["sampling"], &configs().join("hsec_sampling.toml"), &out);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let r = report(&out);
    assert_eq!(r["result"]["frame"]["verdict"], "sampling");
    assert!(r["result"]["bloch"]["a"].as_f64().unwrap() > 1e-3);
    assert!(out.join("frame_sweep.csv").exists());

    let cfg = tmp.path().join("gabor.toml");
    std::fs::write(
        &cfg,
        "task = \"gabor\"\n[generator]\npreset = \"hsec\"\n[lambda.lattice]\nstep = 0.8\n[params]\nx_grid = 6\n",
    )
    .unwrap();
    let out = tmp.path().join("g");
    let o = run(&["gabor", "--threads", "2"], &cfg, &out);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(report(&out)["result"]["verdict"], "frame");
    let sweep = std::fs::read_to_string(out.join("gabor_sweep.csv")).unwrap();
    assert_eq!(sweep.lines().count(), 7);
}
