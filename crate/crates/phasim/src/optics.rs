//! Jones-calculus model of the waveplate interferometer.
//!
//! The polarization qubit uses |h⟩ ≡ |0⟩, |v⟩ ≡ |1⟩. A quarter-wave plate
//! at π/4 converts linear to circular polarization, after which a
//! half-wave plate dialled at −φ/4 + π/8 applies the unknown relative
//! phase φ between the right- and left-circular arms; a plate at
//! θ/4 + π/8 applies a reference phase θ the same way. This module checks
//! that those plate settings really implement the logical diag(1, e^{ipφ})
//! and diag(e^{iθ}, 1) gates of the circuit picture.
//!
//! Conventions (the single place they live):
//!   - retarders have the fast axis along the orientation angle γ and
//!     retardance e^{iδ} on the slow axis: U = R(γ)·diag(1, e^{iδ})·R(−γ);
//!   - circular basis r = (h − iv)/√2, l = (h + iv)/√2, which makes the
//!     quarter-wave conversion come out with the e^{±iπ/4} phases exact
//!     (no global-phase fudging needed);
//!   - a double pass sends the beam back through the same plate; in the
//!     frame of the reversed beam the optic axis angle flips sign. Each
//!     pass swaps handedness, so a plate dialled after p passes of the
//!     phase plate needs a parity-dependent offset (see
//!     [`feedforward_dial`]); the double-passed arm also picks up a
//!     constant φ-independent offset which is referenced away at φ = 0,
//!     the usual interferometer zeroing.

use nalgebra::Matrix2;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quantum::{Unitary, ALGEBRA_TOL};

const TAU: f64 = 2.0 * std::f64::consts::PI;

/// 2×2 polarization transfer matrix on (h, v) amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct JonesMatrix {
    matrix: Matrix2<Complex64>,
}

/// Waveplate kind: retardance π/2 (quarter) or π (half).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WaveplateKind {
    Quarter,
    Half,
}

/// A physical plate setting: kind plus optic-axis orientation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveplateSetting {
    pub kind: WaveplateKind,
    /// Orientation w.r.t. horizontal, normalized to [0, π).
    pub angle: f64,
}

impl WaveplateSetting {
    pub fn new(kind: WaveplateKind, angle: f64) -> Self {
        Self {
            kind,
            angle: angle.rem_euclid(std::f64::consts::PI),
        }
    }

    pub fn matrix(&self) -> JonesMatrix {
        match self.kind {
            WaveplateKind::Quarter => qwp_matrix(self.angle),
            WaveplateKind::Half => hwp_matrix(self.angle),
        }
    }
}

impl JonesMatrix {
    /// Wrap a matrix, validating unitarity to within [`ALGEBRA_TOL`].
    pub fn new(matrix: Matrix2<Complex64>) -> Result<Self> {
        let gram = matrix * matrix.adjoint();
        let mut deviation = 0.0f64;
        for i in 0..2 {
            for j in 0..2 {
                let target = if i == j {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                };
                deviation = deviation.max((gram[(i, j)] - target).norm());
            }
        }
        if !deviation.is_finite() || deviation > ALGEBRA_TOL {
            return Err(Error::NotUnitary { deviation });
        }
        Ok(Self { matrix })
    }

    pub fn matrix(&self) -> &Matrix2<Complex64> {
        &self.matrix
    }

    /// Composition `self · other` (other acts first).
    pub fn compose(&self, other: &JonesMatrix) -> JonesMatrix {
        JonesMatrix {
            matrix: self.matrix * other.matrix,
        }
    }

    pub fn apply(&self, amplitudes: [Complex64; 2]) -> [Complex64; 2] {
        [
            self.matrix[(0, 0)] * amplitudes[0] + self.matrix[(0, 1)] * amplitudes[1],
            self.matrix[(1, 0)] * amplitudes[0] + self.matrix[(1, 1)] * amplitudes[1],
        ]
    }
}

fn retarder(gamma: f64, retardance: f64) -> JonesMatrix {
    let (sin, cos) = gamma.sin_cos();
    let rot = Matrix2::new(
        Complex64::new(cos, 0.0),
        Complex64::new(-sin, 0.0),
        Complex64::new(sin, 0.0),
        Complex64::new(cos, 0.0),
    );
    let rot_back = Matrix2::new(
        Complex64::new(cos, 0.0),
        Complex64::new(sin, 0.0),
        Complex64::new(-sin, 0.0),
        Complex64::new(cos, 0.0),
    );
    let delay = Matrix2::new(
        Complex64::new(1.0, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::from_polar(1.0, retardance),
    );
    JonesMatrix {
        matrix: rot * delay * rot_back,
    }
}

/// Quarter-wave plate with fast axis at `gamma`.
pub fn qwp_matrix(gamma: f64) -> JonesMatrix {
    retarder(gamma, std::f64::consts::FRAC_PI_2)
}

/// Half-wave plate with fast axis at `gamma`.
pub fn hwp_matrix(gamma: f64) -> JonesMatrix {
    retarder(gamma, std::f64::consts::PI)
}

/// Right/left circular components (amp_r, amp_l) of an (h, v) vector.
fn circular_components(hv: [Complex64; 2]) -> [Complex64; 2] {
    let inv_sqrt2 = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let i = Complex64::new(0.0, 1.0);
    // ⟨r| = (⟨h| + i⟨v|)/√2, ⟨l| = (⟨h| − i⟨v|)/√2 for r = (h − iv)/√2.
    [
        (hv[0] + i * hv[1]) * inv_sqrt2,
        (hv[0] - i * hv[1]) * inv_sqrt2,
    ]
}

const H: [Complex64; 2] = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];
const V: [Complex64; 2] = [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)];

/// Plate dial that encodes the unknown phase φ in a single pass.
pub fn unknown_phase_dial(phi: f64) -> f64 {
    -phi / 4.0 + std::f64::consts::FRAC_PI_8
}

/// Plate dial that encodes the reference phase θ in a standalone stage.
pub fn feedforward_standalone_dial(theta: f64) -> f64 {
    theta / 4.0 + std::f64::consts::FRAC_PI_8
}

/// Plate dial for a reference phase applied after `passes` traversals of
/// the phase plate. Each traversal swaps the circular handedness, so the
/// dial that realizes a given θ depends on the parity: after an odd number
/// of passes it is −θ/4, after an even number θ/4 − π/8. (With θ = 0 and
/// θ = π/2 after one pass this lands on the dial pair {0, ∓π/8}, the
/// same two settings the hardware toggles between, up to the arbitrary
/// sense of rotation.)
pub fn feedforward_dial(theta: f64, passes: u32) -> f64 {
    if passes % 2 == 1 {
        -theta / 4.0
    } else {
        theta / 4.0 - std::f64::consts::FRAC_PI_8
    }
}

/// Relative phase (first arm minus second arm) between the two circular
/// output components of a composed stage, given the input states whose
/// images define the arms.
fn relative_arm_phase(stage: &JonesMatrix) -> f64 {
    let from_h = circular_components(stage.apply(H));
    let from_v = circular_components(stage.apply(V));
    // One of the two circular components of each image is (numerically)
    // empty; take the populated one.
    let h_arm = if from_h[0].norm() >= from_h[1].norm() {
        from_h[0]
    } else {
        from_h[1]
    };
    let v_arm = if from_v[0].norm() >= from_v[1].norm() {
        from_v[0]
    } else {
        from_v[1]
    };
    (h_arm.arg() - v_arm.arg()).rem_euclid(TAU)
}

/// Verify the single-pass unknown-phase stage: compose QWP(π/4) with the
/// phase plate at −φ/4 + π/8 and return the extracted relative phase
/// between the arms, which equals φ (mod 2π).
pub fn verify_unknown_phase_encoding(phi: f64) -> f64 {
    let stage =
        hwp_matrix(unknown_phase_dial(phi)).compose(&qwp_matrix(std::f64::consts::FRAC_PI_4));
    relative_arm_phase(&stage)
}

/// Verify the standalone feedforward stage: compose QWP(π/4) with the
/// reference plate at θ/4 + π/8 and return the extracted phase, with the
/// sign convention that θ rides on the arm fed by |v⟩.
pub fn verify_feedforward_encoding(theta: f64) -> f64 {
    let stage = hwp_matrix(feedforward_standalone_dial(theta))
        .compose(&qwp_matrix(std::f64::consts::FRAC_PI_4));
    let from_h = circular_components(stage.apply(H));
    let from_v = circular_components(stage.apply(V));
    let h_arm = if from_h[0].norm() >= from_h[1].norm() {
        from_h[0]
    } else {
        from_h[1]
    };
    let v_arm = if from_v[0].norm() >= from_v[1].norm() {
        from_v[0]
    } else {
        from_v[1]
    };
    (v_arm.arg() - h_arm.arg()).rem_euclid(TAU)
}

/// Full mode train: QWP(π/4), then `passes` traversals of the phase plate
/// (odd traversals at the dial, even ones with the axis sign flipped for
/// the reversed beam), then the in-train reference plate.
fn mode_train(phi: f64, theta: f64, passes: u32) -> JonesMatrix {
    let mut train = qwp_matrix(std::f64::consts::FRAC_PI_4);
    let dial = unknown_phase_dial(phi);
    for pass in 0..passes {
        let angle = if pass % 2 == 0 { dial } else { -dial };
        train = hwp_matrix(angle).compose(&train);
    }
    train = hwp_matrix(feedforward_dial(theta, passes)).compose(&train);
    train
}

/// Relative arm phase of the double-passed stage, referenced to its φ = 0
/// value (the constant offset a double pass picks up from the π/8 dial
/// offset is zeroed the way an experiment zeroes its interferometer).
/// Equals 2φ (mod 2π).
pub fn verify_double_pass_encoding(phi: f64) -> f64 {
    let at_phi = relative_arm_phase(&double_pass_stage(phi));
    let at_zero = relative_arm_phase(&double_pass_stage(0.0));
    (at_phi - at_zero).rem_euclid(TAU)
}

fn double_pass_stage(phi: f64) -> JonesMatrix {
    let dial = unknown_phase_dial(phi);
    hwp_matrix(-dial)
        .compose(&hwp_matrix(dial))
        .compose(&qwp_matrix(std::f64::consts::FRAC_PI_4))
}

/// X-basis outcome probabilities (P_d, P_a) of the logical interferometer:
/// the probe (|0⟩ + |1⟩)/√2 evolved by diag(e^{iθ}, 1)·diag(1, e^{ipφ})
/// and read out in the X basis. Built from the circuit gates.
pub fn logical_interferometer_probabilities(
    passes: u32,
    phi: f64,
    theta: f64,
) -> Result<(f64, f64)> {
    let gate = Unitary::phase_gate(passes, phi)?.compose(&Unitary::reference_phase(theta)?)?;
    let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let evolved = [
        gate.matrix()[(0, 0)] * h + gate.matrix()[(0, 1)] * h,
        gate.matrix()[(1, 0)] * h + gate.matrix()[(1, 1)] * h,
    ];
    let p_d = ((evolved[0] + evolved[1]) * Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0))
        .norm_sqr();
    let p_a = ((evolved[0] - evolved[1]) * Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0))
        .norm_sqr();
    Ok((p_d, p_a))
}

/// X-basis outcome probabilities of the waveplate interferometer: a
/// d-polarized photon through the full plate train, analyzed in the
/// (h, v) basis, which is where the circular arms interfere.
pub fn waveplate_interferometer_probabilities(
    passes: u32,
    phi: f64,
    theta: f64,
) -> Result<(f64, f64)> {
    if passes < 1 {
        return Err(Error::InvalidPassCount(passes));
    }
    let probe = [
        Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0),
        Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0),
    ];
    let out = mode_train(phi, theta, passes).apply(probe);
    Ok((out[0].norm_sqr(), out[1].norm_sqr()))
}

/// One row of the plate-calibration table.
#[derive(Debug, Clone, Copy)]
pub struct CalibrationRow {
    /// Which stage the row calibrates.
    pub stage: CalibrationStage,
    /// Plate dial angle in radians.
    pub angle: f64,
    /// Logical phase the dial realizes, extracted from the Jones algebra.
    pub phase: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CalibrationStage {
    UnknownPhase,
    Feedforward,
}

impl CalibrationStage {
    pub fn label(self) -> &'static str {
        match self {
            CalibrationStage::UnknownPhase => "unknown",
            CalibrationStage::Feedforward => "feedforward",
        }
    }
}

/// Calibration table mapping plate dial angles to the logical phases they
/// realize, over `points` uniform phases in [0, 2π).
pub fn calibration_table(points: usize) -> Result<Vec<CalibrationRow>> {
    if points < 2 {
        return Err(Error::GridTooCoarse {
            size: points,
            minimum: 2,
        });
    }
    let mut rows = Vec::with_capacity(2 * points);
    for g in 0..points {
        let phase = TAU * g as f64 / points as f64;
        rows.push(CalibrationRow {
            stage: CalibrationStage::UnknownPhase,
            angle: unknown_phase_dial(phase),
            phase: verify_unknown_phase_encoding(phase),
        });
    }
    for g in 0..points {
        let phase = TAU * g as f64 / points as f64;
        rows.push(CalibrationRow {
            stage: CalibrationStage::Feedforward,
            angle: feedforward_standalone_dial(phase),
            phase: verify_feedforward_encoding(phase),
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn wrapped_gap(a: f64, b: f64) -> f64 {
        let gap = (a - b).rem_euclid(TAU);
        gap.min(TAU - gap)
    }

    #[test]
    fn qwp_at_zero_is_axis_retarder() {
        let q = qwp_matrix(0.0);
        assert!((q.matrix()[(0, 0)] - Complex64::new(1.0, 0.0)).norm() < 1e-14);
        assert!((q.matrix()[(1, 1)] - Complex64::new(0.0, 1.0)).norm() < 1e-14);
        assert!(q.matrix()[(0, 1)].norm() < 1e-14);
    }

    #[test]
    fn qwp_at_quarter_turn_matches_circular_conversion() {
        // h → e^{iπ/4} r and v → e^{−iπ/4} l, phases exact.
        let q = qwp_matrix(std::f64::consts::FRAC_PI_4);
        let from_h = q.apply(H);
        let r = [
            Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0),
            Complex64::new(0.0, -std::f64::consts::FRAC_1_SQRT_2),
        ];
        let phase = Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4);
        for k in 0..2 {
            assert!((from_h[k] - phase * r[k]).norm() < 1e-14);
        }
        let from_v = q.apply(V);
        let l = [
            Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0),
            Complex64::new(0.0, std::f64::consts::FRAC_1_SQRT_2),
        ];
        let phase = Complex64::from_polar(1.0, -std::f64::consts::FRAC_PI_4);
        for k in 0..2 {
            assert!((from_v[k] - phase * l[k]).norm() < 1e-14);
        }
    }

    #[test]
    fn four_quarter_waves_are_identity_up_to_phase() {
        for &gamma in &[0.0, 0.3, std::f64::consts::FRAC_PI_4, 1.9] {
            let q = qwp_matrix(gamma);
            let four = q.compose(&q).compose(&q).compose(&q);
            let phase = four.matrix()[(0, 0)];
            assert_relative_eq!(phase.norm(), 1.0, epsilon = 1e-12);
            for i in 0..2 {
                for j in 0..2 {
                    let target = if i == j {
                        phase
                    } else {
                        Complex64::new(0.0, 0.0)
                    };
                    assert!((four.matrix()[(i, j)] - target).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn hwp_reference_points() {
        // π/4 swaps h and v.
        let swap = hwp_matrix(std::f64::consts::FRAC_PI_4);
        assert!((swap.apply(H)[1] - Complex64::new(1.0, 0.0)).norm() < 1e-14);
        assert!(swap.apply(H)[0].norm() < 1e-14);

        // Two half waves cancel.
        for &gamma in &[0.0, 0.7, 2.2] {
            let h2 = hwp_matrix(gamma).compose(&hwp_matrix(gamma));
            let phase = h2.matrix()[(0, 0)];
            for i in 0..2 {
                for j in 0..2 {
                    let target = if i == j {
                        phase
                    } else {
                        Complex64::new(0.0, 0.0)
                    };
                    assert!((h2.matrix()[(i, j)] - target).norm() < 1e-12);
                }
            }
        }

        // π/8 maps d to h.
        let d = [
            Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0),
            Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0),
        ];
        let out = hwp_matrix(std::f64::consts::FRAC_PI_8).apply(d);
        assert!((out[0].norm() - 1.0).abs() < 1e-12);
        assert!(out[1].norm() < 1e-12);
    }

    #[test]
    fn all_plates_are_unitary() {
        for g in 0..32 {
            let gamma = TAU * g as f64 / 32.0;
            JonesMatrix::new(*qwp_matrix(gamma).matrix()).unwrap();
            JonesMatrix::new(*hwp_matrix(gamma).matrix()).unwrap();
        }
    }

    #[test]
    fn setting_normalizes_angle() {
        let s = WaveplateSetting::new(WaveplateKind::Half, -0.2);
        assert!((0.0..std::f64::consts::PI).contains(&s.angle));
        let direct = hwp_matrix(-0.2);
        for i in 0..2 {
            for j in 0..2 {
                assert!((s.matrix().matrix()[(i, j)] - direct.matrix()[(i, j)]).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn unknown_phase_encoding_is_exact() {
        for g in 0..64 {
            let phi = TAU * g as f64 / 64.0;
            assert!(
                wrapped_gap(verify_unknown_phase_encoding(phi), phi) < 1e-10,
                "phi = {phi}"
            );
        }
    }

    #[test]
    fn feedforward_encoding_is_exact() {
        for g in 0..64 {
            let theta = TAU * g as f64 / 64.0;
            assert!(wrapped_gap(verify_feedforward_encoding(theta), theta) < 1e-10);
        }
    }

    #[test]
    fn encoding_is_additive() {
        for &(a, b) in &[(0.3, 1.1), (2.0, 4.4), (5.0, 2.2)] {
            let combined = verify_unknown_phase_encoding(a + b);
            let separate = verify_unknown_phase_encoding(a) + verify_unknown_phase_encoding(b);
            assert!(wrapped_gap(combined, separate) < 1e-10);
        }
    }

    #[test]
    fn combined_stage_encodes_phase_difference() {
        // Unknown-phase stage then in-train feedforward: net phase φ − θ.
        for &(phi, theta) in &[(0.0, 0.0), (1.2, 0.4), (4.0, 5.5), (0.3, 2.8)] {
            let train = mode_train(phi, theta, 1);
            let gap = wrapped_gap(relative_arm_phase(&train), phi - theta);
            assert!(gap < 1e-10, "phi = {phi}, theta = {theta}: gap = {gap}");
        }
    }

    #[test]
    fn double_pass_doubles_the_phase() {
        for g in 0..64 {
            let phi = TAU * g as f64 / 64.0;
            let gap = wrapped_gap(verify_double_pass_encoding(phi), 2.0 * phi);
            assert!(gap < 1e-10, "phi = {phi}: gap = {gap}");
        }
    }

    #[test]
    fn waveplate_train_matches_logical_circuit() {
        for passes in 1..=2u32 {
            for g in 0..64 {
                let phi = TAU * g as f64 / 64.0;
                for t in 0..8 {
                    let theta = TAU * t as f64 / 8.0;
                    let (ld, la) =
                        logical_interferometer_probabilities(passes, phi, theta).unwrap();
                    let (wd, wa) =
                        waveplate_interferometer_probabilities(passes, phi, theta).unwrap();
                    assert!(
                        (ld - wd).abs() < 1e-10 && (la - wa).abs() < 1e-10,
                        "p = {passes}, phi = {phi}, theta = {theta}: logical ({ld}, {la}) vs plates ({wd}, {wa})"
                    );
                }
            }
        }
    }

    #[test]
    fn logical_probabilities_close_forms() {
        for &(p, phi, theta) in &[(1u32, 0.9, 0.2), (2, 2.3, 1.0), (3, 4.1, 0.6)] {
            let (pd, pa) = logical_interferometer_probabilities(p, phi, theta).unwrap();
            let expected = 0.5 * (1.0 + (p as f64 * phi - theta).cos());
            assert_relative_eq!(pd, expected, epsilon = 1e-12);
            assert_relative_eq!(pd + pa, 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn calibration_table_round_trips() {
        let rows = calibration_table(16).unwrap();
        assert_eq!(rows.len(), 32);
        for row in &rows {
            let expected = match row.stage {
                CalibrationStage::UnknownPhase => {
                    ((std::f64::consts::FRAC_PI_8 - row.angle) * 4.0).rem_euclid(TAU)
                }
                CalibrationStage::Feedforward => {
                    ((row.angle - std::f64::consts::FRAC_PI_8) * 4.0).rem_euclid(TAU)
                }
            };
            assert!(wrapped_gap(row.phase, expected) < 1e-10);
        }
        assert!(calibration_table(1).is_err());
    }
}
