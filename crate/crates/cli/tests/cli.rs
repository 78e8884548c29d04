use std::path::Path;
use std::process::{Command, Output};

fn qtomo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qtomo"))
        .args(args)
        .output()
        .expect("qtomo runs")
}

fn csv_rows(text: &str) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(str::to_string).collect();
    let rows = lines
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    (header, rows)
}

fn read_json(path: &Path) -> serde_json::Value {
    serde_json::from_slice(&std::fs::read(path).unwrap()).unwrap()
}

#[test]
fn vacuum_tomogram_is_the_measure() {
    let out = qtomo(&["--mode", "tomogram-coherent", "--q", "0.7", "--truncation", "24", "--theta-steps", "3"]);
    assert!(out.status.success());
    let (header, rows) = csv_rows(std::str::from_utf8(&out.stdout).unwrap());
    assert_eq!(header, ["theta", "x", "p", "w", "omega_density"]);
    assert_eq!(rows.len(), 3 * 24);
    for r in &rows {
        assert!((r[2] - r[3]).abs() <= 1e-14 * r[3].max(1e-300), "{r:?}");
    }
    let total: f64 = rows[..24].iter().map(|r| r[2]).sum();
    assert!((total - 1.0).abs() < 1e-12);
}

#[test]
fn check_mode_passes() {
    for q in ["0.5", "0.9", "1"] {
        let out = qtomo(&["--mode", "check", "--q", q, "--alpha-re", "0.4", "--alpha-im", "-0.2"]);
        let text = String::from_utf8(out.stdout).unwrap();
        assert_eq!(out.status.code(), Some(0), "{text}");
        assert!(text.trim_end().ends_with("0 failed"));
        assert!(!text.contains("FAIL"));
    }
}

#[test]
fn amplitude_outside_convergence_disk() {
    let out = qtomo(&["--mode", "tomogram-coherent", "--q", "0.5", "--alpha-re", "1.2"]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("convergence disk"), "{err}");
    assert!(out.stdout.is_empty());
}

#[test]
fn truncation_too_small_is_reported() {
    let out = qtomo(&["--mode", "tomogram-coherent", "--q", "0.9", "--alpha-re", "1.5", "--truncation", "4"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8(out.stderr).unwrap().contains("tail bound"));
}

#[test]
fn validation_errors_exit_2() {
    for args in [
        &["--mode", "measure-dump", "--q", "1.5"][..],
        &["--mode", "measure-dump", "--q", "0"],
        &["--mode", "measure-dump", "--q", "0.5", "--truncation", "0"],
        &["--mode", "tomogram-fock", "--q", "0.5"],
        &["--mode", "tomogram-fock", "--q", "0.5", "--truncation", "4", "--fock-n", "4"],
        &["--mode", "wavefunction", "--q", "0.5", "--theta-steps", "0", "--fock-n", "1"],
        &["--mode", "check", "--q", "0.5", "--truncation", "3"],
        &["--mode", "measure-dump", "--q", "0.5", "--tol", "-1"],
    ] {
        let out = qtomo(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let paths = [dir.path().join("a.csv"), dir.path().join("b.csv")];
    for p in &paths {
        let out = qtomo(&[
            "--mode", "tomogram-coherent", "--q", "0.8", "--alpha-re", "0.6", "--alpha-im", "0.3",
            "--truncation", "48", "--theta-steps", "9", "--output", p.to_str().unwrap(),
        ]);
        assert!(out.status.success());
        assert!(out.stdout.is_empty());
    }
    let a = std::fs::read(&paths[0]).unwrap();
    assert!(!a.is_empty());
    assert_eq!(a, std::fs::read(&paths[1]).unwrap());
}

#[test]
fn json_matches_csv_exactly() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("t.csv");
    let json = dir.path().join("t.json");
    let base = [
        "--mode", "tomogram-coherent", "--q", "0.6", "--alpha-re", "-0.5", "--truncation", "16",
        "--theta-steps", "5",
    ];
    for (path, format) in [(&csv, "csv"), (&json, "json")] {
        let mut args = base.to_vec();
        args.extend(["--format", format, "--output", path.to_str().unwrap()]);
        assert!(qtomo(&args).status.success());
    }
    let (header, rows) = csv_rows(&std::fs::read_to_string(&csv).unwrap());
    let v = read_json(&json);
    let data = v["data"].as_object().unwrap();
    assert_eq!(data.keys().collect::<Vec<_>>(), header.iter().collect::<Vec<_>>());
    for (i, name) in header.iter().enumerate() {
        let col: Vec<f64> = serde_json::from_value(data[name].clone()).unwrap();
        let from_csv: Vec<f64> = rows.iter().map(|r| r[i]).collect();
        assert_eq!(col, from_csv, "column {name}");
    }
    let meta = &v["meta"];
    assert_eq!(meta["mode"], "tomogram-coherent");
    assert_eq!(meta["N"], 16);
    assert_eq!(meta["q"], 0.6);
    assert_eq!(meta["alpha"]["re"], -0.5);
    assert_eq!(meta["theta"]["values"].as_array().unwrap().len(), 5);
    let tail = meta["tail_bound"].as_f64().unwrap();
    assert!(tail > 0.0 && tail <= 1e-10);
}

#[test]
fn fock_tomogram_independent_of_theta() {
    let out = qtomo(&["--mode", "tomogram-fock", "--q", "0.5", "--truncation", "12", "--fock-n", "3", "--theta-steps", "4"]);
    assert!(out.status.success());
    let (_, rows) = csv_rows(std::str::from_utf8(&out.stdout).unwrap());
    assert_eq!(rows.len(), 48);
    for r in &rows[12..] {
        let first = &rows[rows.iter().position(|s| s[1] == r[1]).unwrap()];
        assert_eq!(r[2], first[2]);
    }
    let total: f64 = rows[..12].iter().map(|r| r[2]).sum();
    assert!((total - 1.0).abs() < 1e-12);
}

#[test]
fn wavefunction_is_normalized() {
    let out = qtomo(&["--mode", "wavefunction", "--q", "0.9", "--truncation", "20", "--fock-n", "5", "--theta-steps", "3"]);
    assert!(out.status.success());
    let (header, rows) = csv_rows(std::str::from_utf8(&out.stdout).unwrap());
    assert_eq!(header, ["theta", "x", "w", "psi_re", "psi_im"]);
    for block in rows.chunks(20) {
        let norm: f64 = block.iter().map(|r| r[3] * r[3] + r[4] * r[4]).sum();
        assert!((norm - 1.0).abs() < 1e-12);
    }
}

#[test]
fn measure_dump_layout() {
    let out = qtomo(&["--mode", "measure-dump", "--q", "1", "--truncation", "5"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let (header, rows) = csv_rows(&text);
    assert_eq!(header, ["k", "x", "w"]);
    assert_eq!(rows.iter().map(|r| r[0]).collect::<Vec<_>>(), [0.0, 1.0, 2.0, 3.0, 4.0]);
    assert!((rows[4][1] - 2.020_182_870_456_085_6).abs() < 1e-12);
    let total: f64 = rows.iter().map(|r| r[2]).sum();
    assert!((total - 1.0).abs() < 1e-14);
}
