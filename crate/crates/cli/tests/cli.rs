use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_fracspace"))
}

fn config(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(name)
}

fn run(args: &[&str], out: &Path) -> Output {
    bin().args(args).arg("--out").arg(out).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

fn data_lines(path: &Path) -> Vec<String> {
    fs::read_to_string(path).unwrap().lines().filter(|l| !l.starts_with('#')).map(String::from).collect()
}

fn records(path: &Path) -> Vec<std::collections::HashMap<String, String>> {
    csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_path(path)
        .unwrap()
        .deserialize()
        .map(|r| r.unwrap())
        .collect()
}

fn without_timing(path: &Path) -> String {
    let mut v: serde_json::Value = serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap();
    for r in v.as_array_mut().unwrap() {
        r.as_object_mut().unwrap().remove("runtime_ms");
    }
    serde_json::to_string(&v).unwrap()
}

#[test]
fn quick_config_passes_and_writes_both_formats() {
    let dir = TempDir::new().unwrap();
    let o = run(&["--config", config("quick.json").to_str().unwrap(), "verify"], dir.path());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(dir.path().join("report.json").exists());
    let rows = data_lines(&dir.path().join("report.csv"));
    assert_eq!(rows.len(), 1 + 6);
    assert!(rows[0].starts_with("index,check_id,passed"));
}

#[test]
fn verify_is_deterministic() {
    let (a, b) = (TempDir::new().unwrap(), TempDir::new().unwrap());
    for d in [&a, &b] {
        let o = run(&["--config", config("quick.json").to_str().unwrap(), "verify"], d.path());
        assert_eq!(code(&o), 0);
    }
    assert_eq!(without_timing(&a.path().join("report.json")), without_timing(&b.path().join("report.json")));
}

#[test]
fn bundled_default_config_passes() {
    let dir = TempDir::new().unwrap();
    let o = run(&["--config", config("default.json").to_str().unwrap(), "verify"], dir.path());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    let reports: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("report.json")).unwrap()).unwrap();
    assert!(reports.as_array().unwrap().iter().all(|r| r["passed"] == true));
}

#[test]
fn json_only_writes_no_csv() {
    let dir = TempDir::new().unwrap();
    let o = run(&["--config", config("quick.json").to_str().unwrap(), "--format", "json", "verify"], dir.path());
    assert_eq!(code(&o), 0);
    assert!(dir.path().join("report.json").exists());
    assert!(!dir.path().join("report.csv").exists());
}

#[test]
fn embedding_beyond_critical_exponent_is_rejected() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        &dir,
        "bad.json",
        r#"{"grid":{"dim":2,"points_per_axis":64,"extent":16.0},
            "checks":[{"check":"embedding","s":0.5,"p":2.0,"q":5.0}]}"#,
    );
    let o = run(&["--config", cfg.to_str().unwrap(), "verify"], &dir.path().join("out"));
    assert_eq!(code(&o), 2);
    assert!(!dir.path().join("out/report.json").exists());
}

#[test]
fn schema_errors_carry_field_paths() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "bad.json", r#"{"grid":{"dim":1,"points_per_axis":64,"extent":16.0},"params":{"s":"half"}}"#);
    let o = run(&["--config", cfg.to_str().unwrap(), "verify"], dir.path());
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("params.s"));
}

#[test]
fn failing_check_exits_with_one() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        &dir,
        "blowup.json",
        r#"{"grid":{"dim":2,"points_per_axis":64,"extent":16.0},
            "checks":[{"check":"blowup_family","s":0.5,"p":2.0,"q":6.0}]}"#,
    );
    let o = run(&["--config", cfg.to_str().unwrap(), "verify"], dir.path());
    assert_eq!(code(&o), 1, "{}", String::from_utf8_lossy(&o.stdout));
    assert!(String::from_utf8_lossy(&o.stdout).contains("FAIL blowup_family"));
}

#[test]
fn missing_config_is_an_io_error() {
    let dir = TempDir::new().unwrap();
    let o = run(&["--config", "/nonexistent/config.json", "verify"], dir.path());
    assert_eq!(code(&o), 3);
}

#[test]
fn out_of_range_s_is_a_config_error() {
    let dir = TempDir::new().unwrap();
    let o = run(&["--grid", "64x16", "gradient", "--s", "1.5"], dir.path());
    assert_eq!(code(&o), 2);
}

#[test]
fn kernel_l1_default_sweep_has_nine_rows() {
    let dir = TempDir::new().unwrap();
    let o = run(&["--grid", "64x16", "--dim", "1", "kernel-l1"], dir.path());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let rows = data_lines(&dir.path().join("kernel_l1.csv"));
    assert_eq!(rows[0], "n,s,value,value_s_1ms");
    assert_eq!(rows.len(), 1 + 9);
    for row in &rows[1..] {
        let f: Vec<f64> = row.split(',').map(|x| x.parse().unwrap()).collect();
        assert!((f[2] - 4.0 / f[1]).abs() < 1e-4 * f[2], "{row}");
    }
}

#[test]
fn k_curve_has_two_hundred_rows() {
    let dir = TempDir::new().unwrap();
    let o = run(&["--grid", "128x16", "kfunctional", "--label", "bump"], dir.path());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let rows = data_lines(&dir.path().join("bump_kfunctional.csv"));
    assert_eq!(rows.len(), 1 + 200);
    assert_eq!(rows[0], "t,K");
}

#[test]
fn empty_parameter_grid_gives_header_only_csv() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "empty.json", r#"{"grid":{"dim":1,"points_per_axis":64,"extent":16.0},"params":{"s":[]}}"#);
    let o = run(&["--config", cfg.to_str().unwrap(), "embedding-sweep"], dir.path());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(dir.path().join("embedding_sweep.csv")).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    assert!(lines[0].starts_with("# columns:"));
    assert_eq!(lines[1], "label,s,p,q,ratio");
}

#[test]
fn written_fields_read_back_bit_identical() {
    let dir = TempDir::new().unwrap();
    let o = run(&["--grid", "128x16", "gradient", "--label", "oscillatory", "--method", "spectral"], dir.path());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let header = dir.path().join("oscillatory_gradient_spectral.json");
    let u: fracspace::Field<f64> = fracspace::io::read_field(&header).unwrap();
    let again = dir.path().join("again");
    fracspace::io::write_field(&u, &again, "copy").unwrap();
    let a = fs::read(dir.path().join("oscillatory_gradient_spectral.bin")).unwrap();
    let b = fs::read(again.join("copy.bin")).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.len(), 8 * 128);

    let o = run(&["norm", "--kind", "lp", "--p", "2", "--input", header.to_str().unwrap()], &again);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let norm = records(&again.join("oscillatory_gradient_spectral_norm.csv"));
    let grad = records(&dir.path().join("oscillatory_gradient.csv"));
    assert_eq!(norm[0]["value"], grad[0]["l2"]);
}

#[test]
fn both_gradient_paths_agree() {
    let dir = TempDir::new().unwrap();
    let o = run(&["--grid", "512x16", "gradient", "--method", "both"], dir.path());
    assert_eq!(code(&o), 0);
    let rows = data_lines(&dir.path().join("gaussian_gradient.csv"));
    let d: f64 = rows.last().unwrap().split(',').nth(3).unwrap().parse().unwrap();
    assert!(d < 1e-3, "{d}");
}
