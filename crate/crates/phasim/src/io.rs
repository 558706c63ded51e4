//! File formats: density-matrix JSON, sweep CSV, result summaries, and
//! run manifests.
//!
//! Numeric text is deterministic: CSV floats are printed with 17
//! significant digits, JSON numbers use the shortest round-trip form, and
//! infinite Holevo variances are written as the string `"inf"` (JSON has
//! no infinity literal). Identical inputs therefore produce byte-identical
//! files. JSON payloads carry a `schema_version` and validate against the
//! schemas shipped under `schemas/v1/`.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::hpea::HpeaSweep;
use crate::quantum::DensityMatrix;
use crate::snl::SnlSweep;

/// Version tag written into every JSON payload.
pub const SCHEMA_VERSION: u32 = 1;

/// On-disk density-matrix layout: row-major real and imaginary parts,
/// basis ordering big-endian with qubit 0 first-measured.
#[derive(Debug, Serialize, Deserialize)]
pub struct DensityMatrixFile {
    pub num_qubits: usize,
    pub real: Vec<Vec<f64>>,
    pub imag: Vec<Vec<f64>>,
}

impl DensityMatrixFile {
    pub fn from_matrix(rho: &DensityMatrix) -> Self {
        let dim = rho.dim();
        let mut real = vec![vec![0.0; dim]; dim];
        let mut imag = vec![vec![0.0; dim]; dim];
        for i in 0..dim {
            for j in 0..dim {
                real[i][j] = rho.matrix()[(i, j)].re;
                imag[i][j] = rho.matrix()[(i, j)].im;
            }
        }
        Self {
            num_qubits: rho.num_qubits(),
            real,
            imag,
        }
    }

    /// Validate shape and every density-matrix invariant; errors name the
    /// first violated one.
    pub fn into_matrix(self) -> Result<DensityMatrix> {
        let dim = 1usize
            .checked_shl(self.num_qubits as u32)
            .ok_or_else(|| Error::BadStateFile("num_qubits is absurdly large".into()))?;
        for (name, part) in [("real", &self.real), ("imag", &self.imag)] {
            if part.len() != dim || part.iter().any(|row| row.len() != dim) {
                return Err(Error::BadStateFile(format!(
                    "{name} part must be a {dim}×{dim} row-major matrix"
                )));
            }
            if part.iter().flatten().any(|x| !x.is_finite()) {
                return Err(Error::BadStateFile(format!(
                    "{name} part contains non-finite entries"
                )));
            }
        }
        let mut matrix = nalgebra::DMatrix::zeros(dim, dim);
        for i in 0..dim {
            for j in 0..dim {
                matrix[(i, j)] = num_complex::Complex64::new(self.real[i][j], self.imag[i][j]);
            }
        }
        DensityMatrix::new(self.num_qubits, matrix)
    }
}

pub fn load_density_matrix(path: &Path) -> Result<DensityMatrix> {
    let text = fs::read_to_string(path)?;
    let file: DensityMatrixFile = serde_json::from_str(&text)
        .map_err(|e| Error::BadStateFile(format!("not valid density-matrix JSON: {e}")))?;
    file.into_matrix()
}

pub fn write_density_matrix(path: &Path, rho: &DensityMatrix) -> Result<()> {
    write_json(
        path,
        &serde_json::to_value(DensityMatrixFile::from_matrix(rho))?,
    )
}

/// 17-significant-digit float text; infinities become `inf`.
pub fn format_float(x: f64) -> String {
    if x.is_infinite() {
        if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        }
    } else {
        format!("{x:.16e}")
    }
}

/// JSON value for a possibly-infinite float: a number, or the string `"inf"`.
pub fn json_float(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else if x > 0.0 {
        json!("inf")
    } else {
        json!("-inf")
    }
}

/// Write a JSON value pretty-printed with a trailing newline.
pub fn write_json(path: &Path, value: &Value) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

/// Sweep CSV for the two-qubit protocol:
/// `phi,V_cond,mu,P_dd,P_ad,P_da,P_aa`, one row per grid phase.
pub fn write_hpea_sweep_csv(path: &Path, sweep: &HpeaSweep) -> Result<()> {
    let mut text = String::from("phi,V_cond,mu,P_dd,P_ad,P_da,P_aa\n");
    for (g, &phi) in sweep.result.phases.iter().enumerate() {
        let p = sweep.distributions[g].probabilities();
        text.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            format_float(phi),
            format_float(sweep.result.conditional_variance[g]),
            format_float(sweep.result.sharpness_per_phase[g]),
            format_float(p[0]),
            format_float(p[1]),
            format_float(p[2]),
            format_float(p[3]),
        ));
    }
    fs::write(path, text)?;
    Ok(())
}

/// Sweep CSV for the shot-noise baseline: `phi,V_cond,mu` (the outcome
/// space is 2^N wide; its size goes to the summary as `n_outcomes`).
pub fn write_snl_sweep_csv(path: &Path, sweep: &SnlSweep) -> Result<()> {
    let mut text = String::from("phi,V_cond,mu\n");
    for (g, &phi) in sweep.result.phases.iter().enumerate() {
        text.push_str(&format!(
            "{},{},{}\n",
            format_float(phi),
            format_float(sweep.result.conditional_variance[g]),
            format_float(sweep.result.sharpness_per_phase[g]),
        ));
    }
    fs::write(path, text)?;
    Ok(())
}

/// Calibration CSV: `stage,angle,phase`.
pub fn write_calibration_csv(path: &Path, rows: &[crate::optics::CalibrationRow]) -> Result<()> {
    let mut text = String::from("stage,angle,phase\n");
    for row in rows {
        text.push_str(&format!(
            "{},{},{}\n",
            row.stage.label(),
            format_float(row.angle),
            format_float(row.phase),
        ));
    }
    fs::write(path, text)?;
    Ok(())
}

/// Provenance record emitted alongside every command's outputs;
/// re-running the same manifest reproduces byte-identical numeric files.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub schema_version: u32,
    pub command: String,
    pub parameters: Value,
    pub output_paths: Vec<String>,
    pub seed: u64,
    pub tool_version: String,
}

impl RunManifest {
    pub fn new(command: &str, parameters: Value, output_paths: Vec<String>, seed: u64) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            command: command.to_string(),
            parameters,
            output_paths,
            seed,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        write_json(path, &serde_json::to_value(self)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hpea;
    use crate::quantum::PureState;
    use num_complex::Complex64;

    #[test]
    fn density_matrix_round_trip() {
        let rho = DensityMatrix::from_pure(&hpea::optimal_state(1).unwrap());
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("state.json");
        write_density_matrix(&path, &rho).unwrap();
        let loaded = load_density_matrix(&path).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                assert!((loaded.matrix()[(i, j)] - rho.matrix()[(i, j)]).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn loader_names_the_violated_invariant() {
        let dir = tempfile::tempdir().unwrap();

        let path = dir.path().join("bad_shape.json");
        fs::write(
            &path,
            r#"{"num_qubits": 2, "real": [[1.0]], "imag": [[0.0]]}"#,
        )
        .unwrap();
        let err = load_density_matrix(&path).unwrap_err();
        assert!(err.to_string().contains("4×4"), "{err}");

        let path = dir.path().join("not_psd.json");
        let file = json!({
            "num_qubits": 1,
            "real": [[1.2, 0.0], [0.0, -0.2]],
            "imag": [[0.0, 0.0], [0.0, 0.0]],
        });
        fs::write(&path, file.to_string()).unwrap();
        let err = load_density_matrix(&path).unwrap_err();
        assert!(
            matches!(err, Error::NotPositiveSemidefinite { .. }),
            "{err}"
        );

        let path = dir.path().join("not_hermitian.json");
        let file = json!({
            "num_qubits": 1,
            "real": [[0.5, 0.3], [0.1, 0.5]],
            "imag": [[0.0, 0.0], [0.0, 0.0]],
        });
        fs::write(&path, file.to_string()).unwrap();
        let err = load_density_matrix(&path).unwrap_err();
        assert!(matches!(err, Error::NotHermitian { .. }), "{err}");

        let path = dir.path().join("not_json.json");
        fs::write(&path, "pemmican").unwrap();
        assert!(matches!(
            load_density_matrix(&path),
            Err(Error::BadStateFile(_))
        ));
    }

    #[test]
    fn float_formatting() {
        assert_eq!(format_float(f64::INFINITY), "inf");
        assert_eq!(format_float(0.5278640450004204), "5.2786404500042039e-1");
        assert_eq!(json_float(f64::INFINITY), json!("inf"));
        assert_eq!(json_float(2.0), json!(2.0));
    }

    #[test]
    fn hpea_csv_layout() {
        let rho = DensityMatrix::from_pure(&hpea::optimal_state(1).unwrap());
        let sweep = hpea::sweep_exact(&rho, true, 8).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("sweep.csv");
        write_hpea_sweep_csv(&path, &sweep).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "phi,V_cond,mu,P_dd,P_ad,P_da,P_aa");
        assert_eq!(lines.count(), 8);
    }

    #[test]
    fn csv_bytes_are_deterministic() {
        let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        let psi = PureState::new(2, vec![h, zero, zero, h]).unwrap();
        let rho = DensityMatrix::from_pure(&psi);
        let dir = tempfile::tempdir().unwrap();
        let a = dir.path().join("a.csv");
        let b = dir.path().join("b.csv");
        write_hpea_sweep_csv(
            &a,
            &hpea::sweep_monte_carlo(&rho, true, 8, 2000, 3).unwrap(),
        )
        .unwrap();
        write_hpea_sweep_csv(
            &b,
            &hpea::sweep_monte_carlo(&rho, true, 8, 2000, 3).unwrap(),
        )
        .unwrap();
        assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    }
}
