use std::f64::consts::TAU;
use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::{json, Value};
use tempfile::TempDir;

struct Run {
    code: i32,
    out: PathBuf,
    _dir: TempDir,
}

impl Run {
    fn manifest(&self) -> Value {
        let text =
            std::fs::read_to_string(self.out.join("manifest.json")).expect("manifest written");
        serde_json::from_str(&text).unwrap()
    }

    fn read(&self, name: &str) -> Vec<u8> {
        std::fs::read(self.out.join(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
    }
}

fn run_text(config: &str, extra: &[&str]) -> Run {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("config.json");
    std::fs::write(&path, config).unwrap();
    let out = dir.path().join("out");
    let status = Command::new(env!("CARGO_BIN_EXE_shearwave"))
        .arg("--quiet")
        .arg("--config")
        .arg(&path)
        .arg("--out")
        .arg(&out)
        .args(extra)
        .status()
        .unwrap();
    Run {
        code: status.code().unwrap(),
        out,
        _dir: dir,
    }
}

fn run(config: Value) -> Run {
    run_text(&config.to_string(), &[])
}

fn carroll_simulation() -> Value {
    json!({"command": {"simulate": {
        "system": {"full": {"modulus": {"cubic": {"mu0": 1.0, "mu1": 0.5, "rho": 1.0}}}},
        "grid": {"cells": 128, "start": 0.0, "end": TAU},
        "scheme": {"kind": "muscl_minmod", "end": 1.0, "snapshot_interval": 0.25},
        "initial": {"carroll": {"amplitude": 1.0, "wavenumber": 1.0, "polarization": "plus"}}
    }}})
}

#[test]
fn simulation_writes_artifacts_and_checks_the_oracle() {
    let r = run(carroll_simulation());
    assert_eq!(r.code, 0);
    let m = r.manifest();
    assert_eq!(m["status"], "ok");
    assert_eq!(m["exit_code"], 0);
    assert_eq!(m["command"], "simulate");
    assert!(m["summary"]["oracle_max_error"].as_f64().unwrap() < 1e-2);
    let snapshots = String::from_utf8(r.read("snapshots.csv")).unwrap();
    assert!(snapshots.lines().next().unwrap().starts_with("coord,x,"));
    // Five snapshots of 128 cells plus the header.
    assert_eq!(snapshots.lines().count(), 5 * 128 + 1);
}

#[test]
fn repeated_runs_are_bit_identical() {
    let a = run_text(&carroll_simulation().to_string(), &["--threads", "2"]);
    let b = run_text(&carroll_simulation().to_string(), &["--threads", "2"]);
    assert_eq!(a.read("snapshots.csv"), b.read("snapshots.csv"));
    assert_eq!(a.read("diagnostics.csv"), b.read("diagnostics.csv"));
    assert_eq!(a.manifest()["threads"], 2);
}

#[test]
fn zero_initial_data_stays_zero() {
    let r = run(json!({"command": {"simulate": {
        "system": {"asymptotic": {"beta": 0.5}},
        "grid": {"cells": 32, "start": 0.0, "end": 1.0},
        "scheme": {"end": 0.5},
        "initial": {"profiles": {"U": {"const": 0.0}, "V": {"const": 0.0}}}
    }}}));
    assert_eq!(r.code, 0);
    let text = String::from_utf8(r.read("snapshots.csv")).unwrap();
    for line in text.lines().skip(1) {
        let cols: Vec<f64> = line.split(',').map(|c| c.parse().unwrap()).collect();
        assert!(cols[2..].iter().all(|v| *v == 0.0), "{line}");
    }
}

#[test]
fn config_errors_exit_two() {
    let mut negative_cfl = carroll_simulation();
    negative_cfl["command"]["simulate"]["scheme"]["cfl"] = json!(-0.5);
    let mut unknown_key = carroll_simulation();
    unknown_key["command"]["simulate"]["grid"]["colour"] = json!("blue");
    let missing_reference = json!({"command": {"convergence": {
        "system": {"full": {"modulus": {"mooney_rivlin": {"mu": 1.0, "rho": 1.0}}}},
        "initial": {"carroll": {"amplitude": 1.0, "wavenumber": 1.0, "polarization": "plus"}},
        "grid": {"cells": 64, "start": 0.0, "end": TAU},
        "scheme": {"end": 1.0},
        "cells": [64, 128],
        "target": {"order": 1.0}
    }}});
    for cfg in [negative_cfl, unknown_key, missing_reference] {
        let r = run(cfg);
        assert_eq!(r.code, 2);
        assert_eq!(r.manifest()["status"], "config_error");
    }
    let r = run_text("{ not json", &[]);
    assert_eq!(r.code, 2);
}

#[test]
fn carroll_convergence_meets_its_target() {
    let r = run(json!({"command": {"convergence": {
        "system": {"full": {"modulus": {"cubic": {"mu0": 1.0, "mu1": 0.5, "rho": 1.0}}}},
        "initial": {"carroll": {"amplitude": 1.0, "wavenumber": 1.0, "polarization": "plus", "periods": 1.0}},
        "grid": {"cells": 64, "start": 0.0, "end": TAU},
        "scheme": {"kind": "muscl_minmod", "end": 1.0},
        "cells": [128, 256, 512],
        "reference": "exact",
        "target": {"order": 2.0, "tolerance": 0.3}
    }}}));
    assert_eq!(r.code, 0, "{}", r.manifest());
    let table = String::from_utf8(r.read("convergence.csv")).unwrap();
    assert_eq!(table.lines().next().unwrap(), "cells,h,linf,l1,l2");
    assert_eq!(table.lines().count(), 4);
}

#[test]
fn exact_sampling_with_self_check() {
    let r = run(json!({"command": {"exact": {
        "solution": {"constant_modulus": {"beta": 0.5, "amplitude": 1.2, "theta": {"sine": {"amp": 1.0, "freq": 1.0}}}},
        "rows": {"start": 0.0, "end": 0.5, "points": 17},
        "cols": {"start": 0.0, "end": 2.0, "points": 17},
        "self_check": true
    }}}));
    assert_eq!(r.code, 0, "{}", r.manifest());
    let text = String::from_utf8(r.read("exact.csv")).unwrap();
    let header: Vec<&str> = text.lines().next().unwrap().split(',').collect();
    let rho = header.iter().position(|h| *h == "rho").expect("rho column");
    let values: Vec<&str> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(rho).unwrap())
        .collect();
    assert!(values.iter().all(|v| *v == values[0]));
}

#[test]
fn fold_crossing_hodograph_exits_three_with_locus() {
    // s3 = θ, s4 = ρ³, β = 1: the fold θ = −ρ⁴ maps onto τ = −X³/4, which
    // the column at X = −1.75 crosses near τ ≈ 1.34.
    let r = run(json!({"command": {"exact": {
        "solution": {"hodograph": {
            "beta": 1.0, "s3": {"linear": {"k": 1.0}}, "s4": {"poly": [0.0, 0.0, 0.0, 1.0]},
            "seed": {"theta": -0.5, "rho": 1.0}
        }},
        "rows": {"start": -1.75, "end": -1.25, "points": 17},
        "cols": {"start": 1.25, "end": 2.5, "points": 17}
    }}}));
    assert_eq!(r.code, 3);
    let m = r.manifest();
    assert_eq!(m["status"], "solver_error");
    let tau = m["error"]["locus"]["tau"]
        .as_f64()
        .expect("locus in manifest");
    assert!(tau > 1.3 && tau < 1.5, "{m}");
}

#[test]
fn hodograph_table_reports_fold_freedom() {
    let r = run(json!({"command": {"hodograph": {
        "beta": 0.7, "s3": {"linear": {"k": 1.0}}, "s4": {"poly": [0.0, 0.0, 0.0, 1.0]},
        "theta": {"start": 0.5, "end": 1.5, "points": 5},
        "rho": {"start": 0.8, "end": 1.2, "points": 5}
    }}}));
    assert_eq!(r.code, 0);
    assert_eq!(r.manifest()["summary"]["fold_free"], true);
    let r = run(json!({"command": {"hodograph": {
        "beta": 0.7, "s3": {"linear": {"k": 1.0}}, "s4": {"poly": [0.0, 0.0, 0.0, 1.0]},
        "theta": {"start": -1.5, "end": -0.5, "points": 5},
        "rho": {"start": 0.8, "end": 1.2, "points": 5}
    }}}));
    assert_eq!(r.code, 0);
    assert_eq!(r.manifest()["summary"]["fold_free"], false);
}

fn classify(flux: Value) -> Value {
    let r = run(json!({"command": {"classify": {
        "flux": flux,
        "u": {"start": 0.5, "end": 2.0, "points": 4},
        "v": {"start": 0.5, "end": 2.0, "points": 4}
    }}}));
    assert_eq!(r.code, 0);
    assert!(Path::new(&r.out.join("eigen.csv")).exists());
    serde_json::from_slice(&r.read("classification.json")).unwrap()
}

#[test]
fn classification_examples() {
    assert_eq!(
        classify(json!("ratio"))["completely_exceptional"]["state"],
        "set"
    );
    assert_eq!(classify(json!("product"))["hamiltonian"]["state"], "set");
    let constant = classify(json!({"const": 2.0}));
    assert_eq!(constant["constant_flux"], true);
    assert_eq!(constant["equal_eigenvalues"]["state"], "set");
}

#[test]
fn solution_study_passes_and_control_fails() {
    let rows = json!({"start": 0.0, "end": 1.0, "points": 9});
    let study = |field: Value| {
        json!({"command": {"verify": {"study": {"full_residual": {
            "modulus": {"cubic": {"mu0": 1.0, "mu1": 0.5, "rho": 1.0}},
            "field": field, "rows": rows, "cols": {"start": 0.0, "end": 2.0, "points": 9}
        }}}}})
    };
    let ok = run(study(
        json!({"carroll": {"amplitude": 1.0, "wavenumber": 1.0, "polarization": "plus"}}),
    ));
    assert_eq!(ok.code, 0, "{}", ok.manifest());
    assert!(ok.out.join("residual.csv").exists());
    let bad = run(study(json!({"noise": {"amplitude": 0.1}})));
    assert_eq!(bad.code, 1);
    assert_eq!(bad.manifest()["exit_code"], 1);
}
