use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fracfact"))
        .args(args)
        .output()
        .unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn names(dir: &Path) -> Vec<String> {
    let mut v: Vec<String> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    v.sort();
    v
}

#[test]
fn alpha_out_of_range_is_rejected() {
    let out = run(&["states", "--alpha", "2.5"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("1 < α ≤ 2"));
}

#[test]
fn bad_arguments_exit_with_two() {
    assert_eq!(code(&run(&["states", "--points", "100"])), 2);
    assert_eq!(code(&run(&["states", "--format", "xml"])), 2);
    assert_eq!(code(&run(&["states", "--n", "13"])), 2);
    assert_eq!(code(&run(&["nonsense"])), 2);
}

#[test]
fn unwritable_output_exits_with_three() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    fs::write(&blocker, "x").unwrap();
    let out = run(&[
        "states",
        "--alpha",
        "2.0",
        "--n",
        "0",
        "--out",
        blocker.join("sub").to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 3);
}

#[test]
fn default_verification_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["verify", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
    let report: serde_json::Value = serde_json::from_str(
        &fs::read_to_string(dir.path().join("verification_report.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(report["overall_pass"], true);
    assert_eq!(report["failed_checks"], 0);
    let checks = report["checks"].as_array().unwrap();
    for name in [
        "kernel",
        "factorization",
        "eigen_identity",
        "conventional_energy",
        "residual_momentum",
    ] {
        assert!(checks.iter().any(|c| c["check"] == name), "missing {name}");
    }
    for c in checks {
        for key in ["check", "alpha", "n", "residual", "tolerance", "pass"] {
            assert!(c.get(key).is_some());
        }
    }
}

#[test]
fn zero_tolerance_fails_every_check() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "verify",
        "--tol",
        "0",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 1);
    let report: serde_json::Value = serde_json::from_str(
        &fs::read_to_string(dir.path().join("verification_report.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(report["overall_pass"], false);
    assert_eq!(report["failed_checks"], report["total_checks"]);
    assert!(String::from_utf8_lossy(&out.stdout).contains("failed: kernel"));
}

#[test]
fn paper_verbatim_flag_reports_e2_divergence() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "verify",
        "--paper-verbatim-e2",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("printed E2"));
    assert!(text.contains("differs"));
}

#[test]
fn states_file_layout() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "states",
        "--alpha",
        "1.2,1.5",
        "--n",
        "0,1,2",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let files = names(dir.path());
    assert_eq!(files.len(), 12);
    assert!(files.contains(&"state_a1.2_n0_momentum.csv".to_string()));
    assert!(files.contains(&"state_a1.5_n2_position.csv".to_string()));
    let text = fs::read_to_string(dir.path().join("state_a1.5_n1_position.csv")).unwrap();
    assert!(text.starts_with("x,re,im\n"));
    assert!(!text.contains('\r'));
}

#[test]
fn conventional_ground_state_is_gaussian_in_both_representations() {
    let dir = tempfile::tempdir().unwrap();
    run(&[
        "states",
        "--alpha",
        "2.0",
        "--n",
        "0",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    for file in ["state_a2.0_n0_momentum.csv", "state_a2.0_n0_position.csv"] {
        let text = fs::read_to_string(dir.path().join(file)).unwrap();
        let rows: Vec<Vec<f64>> = text
            .lines()
            .skip(1)
            .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
            .collect();
        let norm = std::f64::consts::PI.powf(-0.25);
        for r in rows.iter().filter(|r| r[0].abs() <= 4.0) {
            let g = norm * (-r[0] * r[0] / 2.0).exp();
            assert!((r[1] - g).abs() < 1e-6 * norm, "{file} at {}", r[0]);
        }
    }
}

#[test]
fn energies_have_constant_columns_at_alpha_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "energies",
        "--alpha",
        "2.0",
        "--n",
        "0,1,2",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    for n in 0..3 {
        let text = fs::read_to_string(dir.path().join(format!("energy_a2.0_n{n}.csv"))).unwrap();
        for line in text.lines().skip(1) {
            let e: f64 = line.split(',').nth(1).unwrap().parse().unwrap();
            assert!((e - (2 * n + 1) as f64).abs() < 1e-10);
        }
        assert!(dir
            .path()
            .join(format!("energy_a2.0_n{n}.meta.json"))
            .exists());
    }
}

#[test]
fn energy_gap_around_the_second_state_node() {
    let dir = tempfile::tempdir().unwrap();
    run(&[
        "energies",
        "--alpha",
        "1.5",
        "--n",
        "2",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    let node = (1.5f64 / 4.0).powf(2.0 / 3.5);
    let text = fs::read_to_string(dir.path().join("energy_a1.5_n2.csv")).unwrap();
    let ks: Vec<f64> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').next().unwrap().parse().unwrap())
        .collect();
    assert!(ks.iter().all(|k| (k - node).abs() > 0.02));
    let meta: serde_json::Value = serde_json::from_str(
        &fs::read_to_string(dir.path().join("energy_a1.5_n2.meta.json")).unwrap(),
    )
    .unwrap();
    let recorded = meta["nodes"][0].as_f64().unwrap();
    assert!((recorded - node).abs() < 1e-9);
}

#[test]
fn figure_overlay_and_determinism() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for dir in [&a, &b] {
        let out = run(&[
            "figure",
            "--alpha",
            "2.0",
            "--overlay",
            "--out",
            dir.path().to_str().unwrap(),
        ]);
        assert_eq!(code(&out), 0);
    }
    let files = names(a.path());
    assert_eq!(files.iter().filter(|f| f.ends_with(".svg")).count(), 6);
    assert_eq!(files.iter().filter(|f| f.ends_with(".csv")).count(), 18);
    let panel = fs::read_to_string(a.path().join("figure_panel_d.svg")).unwrap();
    assert!(panel.contains("α = 2.0") && panel.contains(r#"stroke-dasharray="2,4""#));
    for f in files
        .iter()
        .filter(|f| f.ends_with(".csv") || f.ends_with(".svg"))
    {
        assert_eq!(
            fs::read(a.path().join(f)).unwrap(),
            fs::read(b.path().join(f)).unwrap(),
            "{f}"
        );
    }
}

#[test]
fn config_file_is_read_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "alpha = 1.3\nn = 0\nformat = csv\n").unwrap();
    let out_dir = dir.path().join("out");
    let out = run(&[
        "states",
        "--config",
        cfg.to_str().unwrap(),
        "--n",
        "1",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(
        names(&out_dir),
        vec!["state_a1.3_n1_momentum.csv", "state_a1.3_n1_position.csv"]
    );
}

#[test]
fn info_lists_exit_codes() {
    let out = run(&["info"]);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stdout).contains("Exit codes"));
}
