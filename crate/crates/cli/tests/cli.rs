use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_limitroots"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn manifest(path: &Path) -> serde_json::Value {
    let mut name = path.as_os_str().to_owned();
    name.push(".manifest.json");
    serde_json::from_str(&std::fs::read_to_string(name).unwrap()).unwrap()
}

#[test]
fn analyze_reports_form_types() {
    let o = run(&["analyze", "-g", "a2"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("type: finite"));
    assert!(stdout(&run(&["analyze", "-g", "universal3:1"])).contains("Lorentzian (2,1)"));
    let fig8 = stdout(&run(&["analyze", "-g", "fig8", "--json"]));
    let v: serde_json::Value = serde_json::from_str(&fig8).unwrap();
    assert_eq!(v["rank"], 5);
    assert_eq!(v["signature"]["negative"], 2);
}

#[test]
fn graph_files_are_accepted() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.json");
    std::fs::write(&g, r#"{"rank": 3, "edges": [{"i": 0, "j": 1, "m": "inf", "c": 1.0}, {"i": 1, "j": 2, "m": "inf", "c": 1.0}, {"i": 0, "j": 2, "m": "inf", "c": 1.0}]}"#).unwrap();
    let o = run(&["analyze", "-g", g.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("Lorentzian (2,1)"));

    std::fs::write(&g, r#"{"rank": 2, "edges": [{"i": 0, "j": 1, "m": "inf"}]}"#).unwrap();
    let o = run(&["analyze", "-g", g.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn parabolic_sample_writes_csv_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("p.csv");
    let o = run(&[
        "limit-roots",
        "-g",
        "universal3:1",
        "--core-lengths",
        "0..6",
        "--conj-lengths",
        "0..0",
        "--only",
        "parabolic",
        "-o",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).starts_with("12 limit roots"));
    let csv = std::fs::read_to_string(&out).unwrap();
    assert_eq!(csv.lines().count(), 13);
    assert!(csv.starts_with("x1,x2,x3,kind,source_word,conjugator_word"));
    let m = manifest(&out);
    assert_eq!(m["status"], "ok");
    let digest = m["outputs"][0]["sha256"].as_str().unwrap();
    use sha2::Digest;
    assert_eq!(digest, hex::encode(sha2::Sha256::digest(csv.as_bytes())));
}

#[test]
fn aborted_runs_still_leave_a_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("a.csv");
    let o = run(&[
        "limit-roots",
        "-g",
        "universal3:1",
        "--core-lengths",
        "2..8",
        "--max-elements",
        "50",
        "-o",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!out.exists());
    assert!(manifest(&out)["status"].as_str().unwrap().starts_with("aborted"));
}

#[test]
fn word_limits() {
    let stu = stdout(&run(&["word-limit", "-g", "universal3:1", "--period", "stu"]));
    assert!(stu.contains("hyperbolic, lambda = 17.944271910"));
    for period in ["st", "ts", "1.0"] {
        let o = run(&["word-limit", "-g", "universal3:1", "--period", period, "--json"]);
        let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        assert_eq!(v["kind"], "parabolic");
        let p: Vec<f64> = serde_json::from_value(v["point"].clone()).unwrap();
        assert!((p[0] - 0.5).abs() < 1e-12 && (p[1] - 0.5).abs() < 1e-12 && p[2].abs() < 1e-12);
    }
    let o = run(&["word-limit", "-g", "universal3:1", "--period", "s s"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("not reduced"));
}

#[test]
fn verify_exit_codes() {
    let o = run(&["verify", "-g", "fig8", "--suite", "spectra"]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(stdout(&o).trim_end().ends_with("PASS"));
    let o = run(&["verify", "-g", "universal3:1.1", "--suite", "weights", "--depth", "3", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(run(&["verify", "-g", "a2", "--suite", "nope"]).status.code(), Some(2));
    // a finite group has no limit roots to sample
    assert_eq!(run(&["verify", "-g", "a2", "--suite", "isotropy"]).status.code(), Some(2));
}

#[test]
fn plots_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let pts = dir.path().join("h.csv");
    let o = run(&["limit-roots", "-g", "universal3:1.1", "--conj-lengths", "0..2", "-o", pts.to_str().unwrap()]);
    assert!(o.status.success());
    let mut svgs = Vec::new();
    for k in 0..2 {
        let svg = dir.path().join(format!("p{k}.svg"));
        let o = run(&[
            "plot",
            "-g",
            "universal3:1.1",
            "--points",
            pts.to_str().unwrap(),
            "--depth",
            "2",
            "--weights",
            "-o",
            svg.to_str().unwrap(),
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        svgs.push(std::fs::read(&svg).unwrap());
    }
    assert_eq!(svgs[0], svgs[1]);
    assert!(String::from_utf8_lossy(&svgs[0]).starts_with("<svg"));
}

#[test]
fn arrangement_writes_intersections_and_weights() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("i.csv");
    let w = dir.path().join("w.json");
    let o = run(&[
        "arrangement",
        "-g",
        "universal3:1.1",
        "--depth",
        "2",
        "-o",
        out.to_str().unwrap(),
        "--weights-out",
        w.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(std::fs::read_to_string(&out).unwrap().lines().count() > 1);
    let m = manifest(&out);
    assert_eq!(m["outputs"].as_array().unwrap().len(), 2);
}
