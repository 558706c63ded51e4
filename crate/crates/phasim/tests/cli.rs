//! End-to-end checks of the batch front door: exit codes, byte-level
//! determinism of outputs, manifests, and schema validity of every JSON
//! payload the tool emits.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn phasim() -> Command {
    Command::new(env!("CARGO_BIN_EXE_phasim"))
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    phasim()
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn assert_success(output: &Output) {
    assert!(
        output.status.success(),
        "stdout: {}\nstderr: {}",
        String::from_utf8_lossy(&output.stdout),
        String::from_utf8_lossy(&output.stderr)
    );
}

fn schema(name: &str) -> jsonschema::JSONSchema {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("schemas/v1")
        .join(name);
    let value: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap();
    jsonschema::JSONSchema::compile(&value).unwrap()
}

fn assert_valid(schema_name: &str, path: &Path) {
    let value: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap();
    let compiled = schema(schema_name);
    let result = compiled.validate(&value);
    if let Err(errors) = result {
        let messages: Vec<String> = errors.map(|e| e.to_string()).collect();
        panic!(
            "{} does not validate against {schema_name}: {messages:?}",
            path.display()
        );
    }
}

#[test]
fn hpea_sweep_outputs_and_schemas() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &["hpea-sweep", "--grid-size", "16", "--out", "sweep"],
    );
    assert_success(&out);
    assert_valid(
        "sweep_summary.schema.json",
        &dir.path().join("sweep.summary.json"),
    );
    assert_valid(
        "manifest.schema.json",
        &dir.path().join("sweep.manifest.json"),
    );

    let csv = fs::read_to_string(dir.path().join("sweep.csv")).unwrap();
    assert!(csv.starts_with("phi,V_cond,mu,P_dd,P_ad,P_da,P_aa\n"));
    assert_eq!(csv.lines().count(), 17);

    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("sweep.summary.json")).unwrap())
            .unwrap();
    let v_h = summary["V_H"].as_f64().unwrap();
    assert!((v_h - 0.5278640450004204).abs() < 1e-9);
    assert!((summary["ratio_to_HL"].as_f64().unwrap() - 1.0).abs() < 1e-9);

    // Too-coarse grids are a validation failure.
    let out = run_in(
        dir.path(),
        &["hpea-sweep", "--grid-size", "4", "--out", "coarse"],
    );
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("too coarse"));
}

#[test]
fn monte_carlo_outputs_are_byte_identical_across_runs_and_threads() {
    let dir_a = tempfile::tempdir().unwrap();
    let dir_b = tempfile::tempdir().unwrap();
    let args = [
        "hpea-sweep",
        "--mode",
        "mc",
        "--grid-size",
        "8",
        "--trials",
        "5000",
        "--seed",
        "3",
        "--out",
        "mc",
    ];

    let out_a = phasim()
        .current_dir(dir_a.path())
        .args(args)
        .env("RAYON_NUM_THREADS", "1")
        .output()
        .unwrap();
    let out_b = phasim()
        .current_dir(dir_b.path())
        .args(args)
        .env("RAYON_NUM_THREADS", "8")
        .output()
        .unwrap();
    assert_success(&out_a);
    assert_success(&out_b);
    for file in ["mc.csv", "mc.summary.json", "mc.manifest.json"] {
        assert_eq!(
            fs::read(dir_a.path().join(file)).unwrap(),
            fs::read(dir_b.path().join(file)).unwrap(),
            "{file} differs across thread counts"
        );
    }
}

#[test]
fn snl_outputs_and_schemas() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["snl", "--n", "3", "--out", "snl"]);
    assert_success(&out);
    assert_valid(
        "sweep_summary.schema.json",
        &dir.path().join("snl.summary.json"),
    );
    assert_valid(
        "manifest.schema.json",
        &dir.path().join("snl.manifest.json"),
    );
    let csv = fs::read_to_string(dir.path().join("snl.csv")).unwrap();
    assert!(csv.starts_with("phi,V_cond,mu\n"));

    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("snl.summary.json")).unwrap())
            .unwrap();
    assert_eq!(summary["n_outcomes"].as_u64().unwrap(), 8);
    assert!((summary["V_H"].as_f64().unwrap() - 7.0 / 9.0).abs() < 1e-10);

    let out = run_in(dir.path(), &["snl", "--n", "13"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn hpea_shot_reconstructs_special_phase() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &[
            "hpea-shot",
            "--phi",
            "1.5707963267948966",
            "--shots",
            "50000",
            "--out",
            "shot",
        ],
    );
    assert_success(&out);
    assert_valid("shot_summary.schema.json", &dir.path().join("shot.json"));
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("shot.json")).unwrap()).unwrap();
    let reconstructed = summary["reconstructed_phi"].as_f64().unwrap();
    assert!((reconstructed - std::f64::consts::FRAC_PI_2).abs() < 0.02);
}

#[test]
fn optimize_matches_reference_and_validates() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &[
            "optimize",
            "--symmetric",
            "--single-pass",
            "--adaptive",
            "--restarts",
            "60",
            "--seed",
            "11",
            "--out",
            "opt",
        ],
    );
    assert_success(&out);
    assert_valid("optimize_result.schema.json", &dir.path().join("opt.json"));
    let result: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("opt.json")).unwrap()).unwrap();
    assert!((result["best_variance"].as_f64().unwrap() - 0.5569202271898053).abs() < 1e-6);
    assert!(result["abs_error"].as_f64().unwrap() < 1e-6);
    assert_eq!(result["spec"]["state_class"].as_str().unwrap(), "symmetric");

    // Independent photons with multipassing allowed: single passes win.
    let out = run_in(
        dir.path(),
        &[
            "optimize",
            "--no-entanglement",
            "--multipass",
            "--adaptive",
            "--restarts",
            "40",
            "--seed",
            "11",
            "--out",
            "sep",
        ],
    );
    assert_success(&out);
    let result: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("sep.json")).unwrap()).unwrap();
    assert!((result["best_variance"].as_f64().unwrap() - 0.5609756097560981).abs() < 1e-6);
    assert_eq!(result["spec"]["allocation"].as_array().unwrap().len(), 3);
    assert_eq!(
        result["spec"]["allocation_policy"].as_str().unwrap(),
        "multipass-best"
    );
}

#[test]
fn optimize_flag_validation_and_exit_codes() {
    let dir = tempfile::tempdir().unwrap();

    // Conflicting/missing groups are clap-level usage errors (exit 2).
    let out = run_in(dir.path(), &["optimize", "--symmetric", "--adaptive"]);
    assert_eq!(out.status.code(), Some(2));

    // Symmetric entanglement with a single photon is rejected.
    let out = run_in(
        dir.path(),
        &["optimize", "--symmetric", "--allocation", "3", "--adaptive"],
    );
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("two photons"));

    // Allocations must sum to the three resources.
    let out = run_in(
        dir.path(),
        &["optimize", "--general", "--allocation", "2,2", "--adaptive"],
    );
    assert_eq!(out.status.code(), Some(2));

    // A starved evaluation budget cannot converge: exit 3.
    let out = run_in(
        dir.path(),
        &[
            "optimize",
            "--general",
            "--single-pass",
            "--adaptive",
            "--restarts",
            "2",
            "--max-evals",
            "5",
            "--out",
            "starved",
        ],
    );
    assert_eq!(out.status.code(), Some(3));

    // Single photon with all passes: legal, infinite variance flag.
    let out = run_in(
        dir.path(),
        &[
            "optimize",
            "--general",
            "--allocation",
            "3",
            "--adaptive",
            "--restarts",
            "2",
            "--out",
            "inf",
        ],
    );
    assert_success(&out);
    let result: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("inf.json")).unwrap()).unwrap();
    assert_eq!(result["best_variance"].as_str().unwrap(), "inf");
}

#[test]
fn table2_report_validates_and_orders() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &["table2", "--restarts", "40", "--seed", "5", "--out", "t2"],
    );
    assert_success(&out);
    assert_valid("table2_report.schema.json", &dir.path().join("t2.json"));
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("t2.json")).unwrap()).unwrap();
    let rows = report["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 5);
    let variances: Vec<f64> = rows
        .iter()
        .map(|r| r["variance"].as_f64().unwrap())
        .collect();
    for pair in variances.windows(2) {
        assert!(
            pair[0] < pair[1],
            "table rows not increasing: {variances:?}"
        );
    }
    assert_eq!(report["extras"].as_array().unwrap().len(), 2);
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("not reproduced"));
}

#[test]
fn calibrate_writes_table() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["calibrate", "--points", "16", "--out", "cal"]);
    assert_success(&out);
    let csv = fs::read_to_string(dir.path().join("cal.csv")).unwrap();
    assert!(csv.starts_with("stage,angle,phase\n"));
    assert_eq!(csv.lines().count(), 33);
    assert_valid(
        "manifest.schema.json",
        &dir.path().join("cal.manifest.json"),
    );
}

#[test]
fn fidelity_reports_and_rejections() {
    let dir = tempfile::tempdir().unwrap();

    // Optimal probe: fidelity 1, purity 1, variance at the floor.
    let optimal =
        phasim::quantum::DensityMatrix::from_pure(&phasim::hpea::optimal_state(1).unwrap());
    let state_path = dir.path().join("optimal.json");
    phasim::io::write_density_matrix(&state_path, &optimal).unwrap();
    assert_valid("density_matrix.schema.json", &state_path);
    let out = run_in(
        dir.path(),
        &["fidelity", "--state", "optimal.json", "--out", "fid"],
    );
    assert_success(&out);
    assert_valid("fidelity_report.schema.json", &dir.path().join("fid.json"));
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("fid.json")).unwrap()).unwrap();
    assert!((report["fidelity_with_optimal"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert!((report["purity"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert!((report["V_H_exact"].as_f64().unwrap() - 0.5278640450004204).abs() < 1e-9);

    // A bare Bell state: fidelity c0² ≈ 0.2764, purity 1.
    let h = num_complex::Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let zero = num_complex::Complex64::new(0.0, 0.0);
    let bell = phasim::quantum::PureState::new(2, vec![h, zero, zero, h]).unwrap();
    let bell_path = dir.path().join("bell.json");
    phasim::io::write_density_matrix(
        &bell_path,
        &phasim::quantum::DensityMatrix::from_pure(&bell),
    )
    .unwrap();
    let out = run_in(
        dir.path(),
        &["fidelity", "--state", "bell.json", "--out", "fid_bell"],
    );
    assert_success(&out);
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("fid_bell.json")).unwrap())
            .unwrap();
    assert!((report["fidelity_with_optimal"].as_f64().unwrap() - 0.276393202250021).abs() < 1e-9);
    assert!((report["purity"].as_f64().unwrap() - 1.0).abs() < 1e-12);

    // Invalid matrices are rejected naming the violated invariant.
    let bad_path = dir.path().join("bad.json");
    fs::write(
        &bad_path,
        serde_json::json!({
            "num_qubits": 2,
            "real": [
                [0.7, 0.0, 0.0, 0.0],
                [0.0, 0.5, 0.0, 0.0],
                [0.0, 0.0, 0.4, 0.0],
                [0.0, 0.0, 0.0, -0.6]
            ],
            "imag": vec![vec![0.0; 4]; 4],
        })
        .to_string(),
    )
    .unwrap();
    let out = run_in(dir.path(), &["fidelity", "--state", "bad.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("positive semidefinite"));
}

#[test]
fn state_file_flows_into_sweep() {
    let dir = tempfile::tempdir().unwrap();
    let mixed = phasim::quantum::DensityMatrix::maximally_mixed(2).unwrap();
    let path = dir.path().join("mixed.json");
    phasim::io::write_density_matrix(&path, &mixed).unwrap();
    let out = run_in(
        dir.path(),
        &[
            "hpea-sweep",
            "--grid-size",
            "8",
            "--state",
            "mixed.json",
            "--out",
            "mix",
        ],
    );
    assert_success(&out);
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("mix.summary.json")).unwrap())
            .unwrap();
    assert_eq!(summary["V_H"].as_str().unwrap(), "inf");
    assert_valid(
        "sweep_summary.schema.json",
        &dir.path().join("mix.summary.json"),
    );
}

#[test]
fn seed_env_var_is_honored() {
    let dir_flag = tempfile::tempdir().unwrap();
    let dir_env = tempfile::tempdir().unwrap();
    let args = [
        "hpea-sweep",
        "--mode",
        "mc",
        "--grid-size",
        "8",
        "--trials",
        "2000",
        "--out",
        "s",
    ];
    let with_flag = phasim()
        .current_dir(dir_flag.path())
        .args(args)
        .arg("--seed")
        .arg("424242")
        .output()
        .unwrap();
    let with_env = phasim()
        .current_dir(dir_env.path())
        .args(args)
        .env("PHASIM_SEED", "424242")
        .output()
        .unwrap();
    assert_success(&with_flag);
    assert_success(&with_env);
    assert_eq!(
        fs::read(dir_flag.path().join("s.csv")).unwrap(),
        fs::read(dir_env.path().join("s.csv")).unwrap()
    );
}
