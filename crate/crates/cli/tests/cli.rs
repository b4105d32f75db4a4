use std::path::PathBuf;
use std::process::{Command, Output};

fn honeycomb(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_honeycomb"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("honeycomb-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn analyze_reports_three_logical_qubits() {
    let out = honeycomb(&["code", "analyze", "--L", "2"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["k"], 3);
    assert_eq!(v["rank"], 93);
    assert_eq!(v["no_minus_identity"], true);
}

#[test]
fn oversized_enumeration_exits_three() {
    let out = honeycomb(&["exact", "decompose", "--L", "9", "--betaJ", "0.5"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("limit 24"));
}

#[test]
fn unknown_flag_exits_two() {
    let out = honeycomb(&["code", "analyze", "--bogus"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bad_size_fails() {
    let out = honeycomb(&["lattice", "validate", "--L", "0"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn lattice_validates() {
    let out = honeycomb(&["lattice", "validate", "--L", "2"]);
    assert!(out.status.success());
    assert_eq!(stdout_json(&out)["all_passed"], true);
}

#[test]
fn mc_output_is_reproducible_with_manifest() {
    let dir = scratch("repro");
    let run = |name: &str| {
        let path = dir.join(name);
        let out = honeycomb(&[
            "mc",
            "run",
            "--L",
            "2",
            "--grid",
            "0.08:0.12:3",
            "--sweeps",
            "300",
            "--therm",
            "50",
            "--seed",
            "11",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert!(
            out.status.success(),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
        path
    };
    let a = run("a.csv");
    let b = run("b.csv");
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());

    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("a.csv.manifest.json")).unwrap())
            .unwrap();
    assert_eq!(manifest["seed"], 11);
    assert_eq!(manifest["params"]["L"], 2);
    assert_eq!(manifest["lattice_hash"].as_str().unwrap().len(), 64);
    assert!(manifest["tool_version"].is_string());
    assert!(manifest["wall_time_secs"].as_f64().unwrap() >= 0.0);

    let text = std::fs::read_to_string(&a).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("dual_betaJ,E_mean,E_err,Cv,Cv_err,m_abs,binder")
    );
    assert_eq!(lines.count(), 3);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn config_presets_flags() {
    let dir = scratch("config");
    let cfg = dir.join("preset.cfg");
    std::fs::write(&cfg, "# exact preset\nbetaJ = 0.8\nL = 2\n").unwrap();
    let out = honeycomb(&["exact", "decompose", "--config", cfg.to_str().unwrap()]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v = stdout_json(&out);
    assert_eq!(v["betaJ"], 0.8);
    let explicit = honeycomb(&["exact", "decompose", "--L", "2", "--betaJ", "0.8"]);
    assert_eq!(out.stdout, explicit.stdout);

    std::fs::write(&cfg, "nonsense = 1\n").unwrap();
    let out = honeycomb(&["exact", "decompose", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn critical_reads_size_from_file_name() {
    let dir = scratch("critical");
    for l in ["2", "3"] {
        let path = dir.join(format!("scan_L{l}.csv"));
        let out = honeycomb(&[
            "mc",
            "run",
            "--L",
            l,
            "--grid",
            "0.06:0.14:9",
            "--sweeps",
            "1500",
            "--therm",
            "300",
        ]);
        assert!(out.status.success());
        std::fs::write(&path, out.stdout).unwrap();
    }
    let inputs = format!(
        "{},{}",
        dir.join("scan_L2.csv").display(),
        dir.join("scan_L3.csv").display()
    );
    let out = honeycomb(&["mc", "critical", "--in", &inputs]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v = stdout_json(&out);
    let peaks = v["peaks"].as_array().unwrap();
    assert_eq!(peaks.len(), 2);
    assert_eq!(peaks[0]["size"], 2);
    assert_eq!(peaks[1]["size"], 3);
    assert!(v["dual_betaJc"].as_f64().unwrap() > 0.06);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn string_scan_weight_is_flat_until_closure() {
    let out = honeycomb(&[
        "excite", "scan", "--L", "2", "--kind", "string", "--dir", "x",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let weights: Vec<u32> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert_eq!(weights, [6, 6, 6, 6, 6, 4, 0]);
}

#[test]
fn verify_subset_passes() {
    let out = honeycomb(&["verify-all", "--only", "1,2,3"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.matches("[PASS]").count(), 3);
    assert!(honeycomb(&["verify-all", "--only", "12"]).status.code() == Some(1));
}
