use std::fs;
use std::path::Path;
use std::process::Command;

fn qsense(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_qsense")).args(args).output().unwrap()
}

fn read(dir: &Path, name: &str) -> String {
    fs::read_to_string(dir.join(name)).unwrap()
}

#[test]
fn presets_are_listed() {
    let out = qsense(&["presets"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for name in ["fig2", "fig3-top", "fig3-bottom", "fig5-top", "fig5-bottom", "fig6", "rate"] {
        assert!(text.lines().any(|l| l.starts_with(name)), "{name}");
    }
}

#[test]
fn identical_seed_gives_identical_tables() {
    let tmp = tempfile::tempdir().unwrap();
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    for dir in [&a, &b] {
        let out = qsense(&["run", "--preset", "fig3-bottom", "--out", dir.to_str().unwrap()]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
    for name in ["trajectory.csv", "estimates.csv", "summary.json"] {
        assert_eq!(read(&a, name), read(&b, name), "{name}");
    }
    let strip = |s: String| s.lines().filter(|l| !l.contains("\"created\"")).collect::<Vec<_>>().join("\n");
    assert_eq!(strip(read(&a, "manifest.json")), strip(read(&b, "manifest.json")));

    let c = tmp.path().join("c");
    qsense(&["run", "--preset", "fig3-bottom", "--seed", "1", "--out", c.to_str().unwrap()]);
    assert_ne!(read(&a, "estimates.csv"), read(&c, "estimates.csv"));
}

#[test]
fn table_headers_are_stable() {
    let tmp = tempfile::tempdir().unwrap();
    let out = qsense(&["run", "--preset", "rate", "--out", tmp.path().to_str().unwrap()]);
    assert!(out.status.success());
    let header = |name| read(tmp.path(), name).lines().next().unwrap().to_string();
    assert_eq!(header("trajectory.csv"), "repetition,framework,shot,outcome,control,estimate,error,empirical_loss");
    assert_eq!(
        header("estimates.csv"),
        "repetition,framework,estimate,error,empirical_loss,out_of_range,zeta,dzeta,closed_form_estimate,closed_form_error"
    );
    let summary: serde_json::Value = serde_json::from_str(&read(tmp.path(), "summary.json")).unwrap();
    assert_eq!(summary["rate_check"]["agree"], true);
    assert!(summary["rate_check"]["max_relative_estimate_difference"].as_f64().unwrap() < 1e-3);
    let manifest: serde_json::Value = serde_json::from_str(&read(tmp.path(), "manifest.json")).unwrap();
    assert_eq!(manifest["config_sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn sweep_writes_rows_and_plots() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("fig2.json");
    fs::write(
        &cfg,
        r#"{"case": "coherence", "true_parameter": 0.52, "shots": 1, "grid_nodes": 256, "plots": true,
            "sweep": {"axis": "prior_width", "values": [0.55, 0.65, 0.75, 0.85, 0.95]}}"#,
    )
    .unwrap();
    let out = qsense(&["sweep", "--config", cfg.to_str().unwrap(), "--out", tmp.path().to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(read(tmp.path(), "sweep.csv").lines().count(), 1 + 10);
    assert!(read(tmp.path(), "sweep.svg").starts_with("<svg"));
    let summary: serde_json::Value = serde_json::from_str(&read(tmp.path(), "summary.json")).unwrap();
    let d = &summary["sweep"]["diagnostics"];
    assert_eq!(d["transformation_ge_geometry"], true);
    assert_eq!(d["strictly_increasing"]["transformation"], true);
    assert_eq!(d["strictly_increasing"]["geometry"], true);
}

#[test]
fn config_errors_exit_with_two() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("bad.json");
    fs::write(&cfg, r#"{"case": "coherence", "true_parameter": 0.99, "shots": 0, "prior_width": 0.9}"#).unwrap();
    let out = qsense(&["run", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("shots") && err.contains("true_parameter"), "{err}");

    fs::write(&cfg, r#"{"case": "rate", "true_parameter": 1, "shots": 1, "colour": "blue"}"#).unwrap();
    assert_eq!(qsense(&["run", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(qsense(&["run", "--preset", "fig9"]).status.code(), Some(2));
    assert_eq!(qsense(&["run", "--config", "/nonexistent/x.json"]).status.code(), Some(2));
}
