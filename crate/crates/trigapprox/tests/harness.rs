use std::process::Command;

use trigapprox::config::GeneratorConfig;
use trigapprox::harness::{classical_functions, sharpness_probe, verify_functions, verify_lebesgue, BoundReport};
use trigapprox::ExperimentConfig;
use trigapprox_core::{PsiFamily, TrigPoly};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_trigapprox"))
}

#[test]
fn high_harmonic_geometric_full_grid() {
    let cfg = ExperimentConfig { n: vec![4], x_grid: 512, ..Default::default() };
    let out = verify_functions(&cfg, &[TrigPoly::cosine(6, 1.0)]).unwrap();
    assert_eq!(out.rows.len(), 512);
    assert_eq!(out.summary.fail, 0);
    assert!(out.rows.iter().all(BoundReport::ok));
}

#[test]
fn classical_bound_holds() {
    let cfg = ExperimentConfig {
        psi: vec![PsiFamily::gen_poisson(1.0, 1.0).unwrap()],
        n: vec![8],
        x_grid: 512,
        ..Default::default()
    };
    let (rows, summary) = classical_functions(&cfg, &[TrigPoly::cosine(9, 1.0)]).unwrap();
    assert_eq!(rows.len(), 512);
    assert!(summary.ok(), "{summary:?}");
    let trivial = classical_functions(&cfg, &[TrigPoly::sine(3, 1.0)]).unwrap().0;
    assert!(trivial.iter().all(|r| r.lhs < 1e-12 && r.classical_rhs < 1e-9));
}

#[test]
fn sharpness_within_envelope_for_any_beta() {
    let cfg = ExperimentConfig {
        psi: vec![PsiFamily::geometric((-1.0f64).exp()).unwrap()],
        n: vec![4, 8, 16, 32],
        ..Default::default()
    };
    let s = sharpness_probe(&cfg).unwrap();
    assert!(s.monotone && s.rows.iter().all(|r| r.within));
    for beta in [1.0, -0.5, 2.5] {
        let s = sharpness_probe(&ExperimentConfig { beta, ..cfg.clone() }).unwrap();
        assert!(s.rows.iter().all(|r| r.within), "beta = {beta}");
    }
}

#[test]
fn csv_is_deterministic_and_self_consistent() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = ExperimentConfig {
        psi: vec![PsiFamily::geometric(0.5).unwrap(), PsiFamily::even_odd(0.9, 0.5).unwrap()],
        n: vec![3, 5],
        x_grid: 48,
        seed: 11,
        generator: GeneratorConfig { count: 4, ..Default::default() },
        ..Default::default()
    };
    let cfg_path = dir.path().join("cfg.json");
    std::fs::write(&cfg_path, serde_json::to_string(&cfg).unwrap()).unwrap();
    let mut outputs = Vec::new();
    for i in 0..2 {
        let csv = dir.path().join(format!("out{i}.csv"));
        let summary = dir.path().join(format!("summary{i}.json"));
        let plot = dir.path().join("plot.gp");
        let status = bin()
            .args(["verify-lebesgue", "--config"])
            .arg(&cfg_path)
            .arg("--out")
            .arg(&csv)
            .arg("--summary")
            .arg(&summary)
            .arg("--emit-plot-script")
            .arg(&plot)
            .status()
            .unwrap();
        assert!(status.success());
        assert!(std::fs::read_to_string(&plot).unwrap().contains("out"));
        let s: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&summary).unwrap()).unwrap();
        assert_eq!(s["fail"], 0);
        outputs.push(std::fs::read(&csv).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);

    let mut reader = csv::Reader::from_reader(outputs[0].as_slice());
    let rows: Vec<BoundReport> = reader.deserialize().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 2 * 2 * 4 * 48);
    for r in &rows {
        assert_eq!(r.flags(&cfg), (r.lhs_le_thm1, r.thm1_le_modified, r.dual_in_thm2));
    }
    let direct = verify_lebesgue(&cfg).unwrap();
    assert_eq!(direct.rows, rows);
}

#[test]
fn cli_subcommands() {
    let out = bin().args(["bestapprox", "--metric", "l1", "--n", "2", "--fn", "cos:2"]).output().unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((v["norm_estimate"].as_f64().unwrap() - 4.0).abs() < 1e-3);
    assert_eq!(v["grid_size"], 128);

    let out = bin().args(["bounds", "--psi", "geometric:q=0.5", "--n", "4", "--x-grid", "8", "--emit", "json"]).output().unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 8);
    assert_eq!(v[0]["thm1"], 0.0);

    let out = bin().args(["lebesgue", "--n", "5", "--grid", "9"]).output().unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 10);

    let out = bin().args(["psi-info", "--psi", "neumann:q=0.5", "--n", "20"]).output().unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8(out.stdout).unwrap().contains("weighted >= double  true"));

    let out = bin().args(["bounds", "--psi", "geometric:q=3", "--n", "4"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}
