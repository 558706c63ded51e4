//! Shot-noise-limited baseline: N independent single-photon probes.
//!
//! Each probe passes the unknown phase once against a reference phase
//! θ_j from a fixed schedule (default θ_j = jπ/N) and clicks one of two
//! detectors with probability ½[1 + u·cos(φ − θ_j)]. The exact finite-N
//! limit follows from enumerating all 2^N outcome vectors; a Monte-Carlo
//! mode simulates the sequential three-photon experiment.
//!
//! Per-outcome products of the click probabilities are trigonometric
//! polynomials of degree N in φ, so their first Fourier coefficients are
//! computed exactly on equispaced grids of at least 2N + 2 points.

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hpea::{
    holevo_from_sharpness, unconditional_from_means, PhaseSweepResult, MIN_SHARPNESS,
};
use crate::rng;

/// Largest probe count for which the 2^N enumeration is performed.
pub const MAX_PROBES: u32 = 12;

/// Configuration of the shot-noise baseline run.
#[derive(Debug, Clone)]
pub struct SnlConfig {
    /// Number of single-photon probes N (1..=12).
    pub probes: u32,
    /// Reference-phase schedule, one θ_j per probe.
    pub theta_schedule: Vec<f64>,
    /// Monte-Carlo trials per grid phase.
    pub trials: usize,
    pub seed: u64,
    /// Uniform phase-grid size; must be at least 2N + 2.
    pub phase_grid_size: usize,
}

impl SnlConfig {
    /// Standard configuration with the θ_j = jπ/N schedule.
    pub fn standard(probes: u32) -> Result<Self> {
        check_probes(probes)?;
        Ok(Self {
            probes,
            theta_schedule: default_schedule(probes),
            trials: 1000,
            seed: 0,
            phase_grid_size: 64.max(min_grid(probes)),
        })
    }

    pub fn validate(&self) -> Result<()> {
        check_probes(self.probes)?;
        if self.theta_schedule.len() != self.probes as usize {
            return Err(Error::ScheduleLengthMismatch {
                expected: self.probes as usize,
                actual: self.theta_schedule.len(),
            });
        }
        if self.phase_grid_size < min_grid(self.probes) {
            return Err(Error::GridTooCoarse {
                size: self.phase_grid_size,
                minimum: min_grid(self.probes),
            });
        }
        Ok(())
    }
}

fn check_probes(probes: u32) -> Result<()> {
    if !(1..=MAX_PROBES).contains(&probes) {
        return Err(Error::ProbeCountOutOfRange(probes));
    }
    Ok(())
}

fn min_grid(probes: u32) -> usize {
    2 * probes as usize + 2
}

/// The standard schedule θ_j = jπ/N for j = 1..=N.
pub fn default_schedule(probes: u32) -> Vec<f64> {
    (1..=probes)
        .map(|j| j as f64 * std::f64::consts::PI / probes as f64)
        .collect()
}

/// Single-probe click probability ½[1 + u·cos(φ − θ)] for u = ±1.
pub fn click_probability(u: i8, phi: f64, theta: f64) -> Result<f64> {
    if u != 1 && u != -1 {
        return Err(Error::InvalidClickLabel(u));
    }
    Ok(0.5 * (1.0 + u as f64 * (phi - theta).cos()))
}

/// Outcome vector for one sequential run, one ±1 click per probe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnlOutcomeVector(pub Vec<i8>);

impl SnlOutcomeVector {
    /// Decode outcome `index` (bit j set → u_j = +1) for an N-probe run.
    pub fn from_index(index: usize, probes: u32) -> Self {
        Self(
            (0..probes)
                .map(|j| if index >> j & 1 == 1 { 1 } else { -1 })
                .collect(),
        )
    }
}

/// First Fourier coefficient (1/2π)∫ e^{iφ} Π_j P(u_j|φ,θ_j) dφ of one
/// outcome vector's likelihood, computed on an exact equispaced grid.
fn first_fourier_coefficient(u: &[i8], schedule: &[f64]) -> Result<Complex64> {
    if u.len() != schedule.len() {
        return Err(Error::ScheduleLengthMismatch {
            expected: schedule.len(),
            actual: u.len(),
        });
    }
    let grid = min_grid(u.len() as u32).max(2 * u.len() + 2);
    let step = 2.0 * std::f64::consts::PI / grid as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    for g in 0..grid {
        let phi = g as f64 * step;
        let mut likelihood = 1.0;
        for (&uj, &th) in u.iter().zip(schedule) {
            likelihood *= click_probability(uj, phi, th)?;
        }
        acc += Complex64::from_polar(likelihood, phi);
    }
    Ok(acc / grid as f64)
}

/// Exact Holevo variance of the N-probe baseline with the standard
/// schedule: μ = Σ over all 2^N outcome vectors of the modulus of the
/// first Fourier coefficient, V = μ⁻² − 1.
pub fn snl_exact_variance(probes: u32) -> Result<f64> {
    snl_exact_variance_with_schedule(probes, &default_schedule(probes))
}

/// Exact variance under an arbitrary schedule of reference phases.
pub fn snl_exact_variance_with_schedule(probes: u32, schedule: &[f64]) -> Result<f64> {
    check_probes(probes)?;
    if schedule.len() != probes as usize {
        return Err(Error::ScheduleLengthMismatch {
            expected: probes as usize,
            actual: schedule.len(),
        });
    }
    let sharpness: f64 = (0..1usize << probes)
        .into_par_iter()
        .map(|index| {
            let u = SnlOutcomeVector::from_index(index, probes);
            first_fourier_coefficient(&u.0, schedule).map(|c| c.norm())
        })
        .try_reduce(|| 0.0, |a, b| Ok(a + b))?;
    Ok(holevo_from_sharpness(sharpness))
}

/// Phase estimate for one outcome vector: the argument of the first
/// Fourier coefficient of its likelihood, in [0, 2π). Returns `None` for
/// information-free outcome patterns whose coefficient vanishes (at N = 3
/// with the standard schedule these are u = (+,−,+) and (−,+,−)).
pub fn snl_estimate(u: &[i8], schedule: &[f64]) -> Result<Option<f64>> {
    for &uj in u {
        if uj != 1 && uj != -1 {
            return Err(Error::InvalidClickLabel(uj));
        }
    }
    let coefficient = first_fourier_coefficient(u, schedule)?;
    if coefficient.norm() < MIN_SHARPNESS {
        return Ok(None);
    }
    Ok(Some(
        coefficient.arg().rem_euclid(2.0 * std::f64::consts::PI),
    ))
}

/// Result of an SNL sweep plus the outcome-space size metadata.
pub struct SnlSweep {
    pub result: PhaseSweepResult,
    /// Number of distinct outcome vectors, 2^N.
    pub n_outcomes: usize,
}

/// Exact sweep: per-phase conditional means over the full outcome
/// enumeration, using each outcome's own Fourier-argument estimate.
/// Information-free outcomes contribute probability mass with zero
/// sharpness, exactly as their vanishing coefficient dictates.
pub fn snl_sweep_exact(config: &SnlConfig) -> Result<SnlSweep> {
    config.validate()?;
    let estimates = all_estimates(config)?;
    let phases = crate::hpea::phase_grid(config.phase_grid_size.max(min_grid(config.probes)), 0.0)?;
    let conditional_means: Vec<Complex64> = phases
        .par_iter()
        .map(|&phi| -> Result<Complex64> {
            let mut mean = Complex64::new(0.0, 0.0);
            for (index, estimate) in estimates.iter().enumerate() {
                let Some(est) = estimate else { continue };
                let u = SnlOutcomeVector::from_index(index, config.probes);
                let mut p = 1.0;
                for (&uj, &th) in u.0.iter().zip(&config.theta_schedule) {
                    p *= click_probability(uj, phi, th)?;
                }
                mean += Complex64::from_polar(p, phi - est);
            }
            Ok(mean)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(assemble_sweep(phases, conditional_means, config.probes))
}

/// Monte-Carlo sweep of the sequential experiment: per grid phase,
/// `trials` runs of N sequential clicks, each trial on its own stream.
pub fn snl_simulate(config: &SnlConfig) -> Result<SnlSweep> {
    config.validate()?;
    if config.trials == 0 {
        return Err(Error::NoTrials);
    }
    let estimates = all_estimates(config)?;
    let phases = crate::hpea::phase_grid(config.phase_grid_size.max(min_grid(config.probes)), 0.0)?;
    let n_outcomes = 1usize << config.probes;
    let conditional_means: Vec<Complex64> = phases
        .par_iter()
        .enumerate()
        .map(|(g, &phi)| -> Result<Complex64> {
            let mut counts = vec![0u64; n_outcomes];
            for trial in 0..config.trials {
                let mut rng = rng::stream(config.seed, &[g as u64, trial as u64]);
                let mut index = 0usize;
                for (j, &theta) in config.theta_schedule.iter().enumerate() {
                    let p_plus = click_probability(1, phi, theta)?;
                    if rng.gen::<f64>() < p_plus {
                        index |= 1 << j;
                    }
                }
                counts[index] += 1;
            }
            let mut mean = Complex64::new(0.0, 0.0);
            for (index, &n) in counts.iter().enumerate() {
                if n == 0 {
                    continue;
                }
                if let Some(est) = estimates[index] {
                    mean += Complex64::from_polar(n as f64 / config.trials as f64, phi - est);
                }
            }
            Ok(mean)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(assemble_sweep(phases, conditional_means, config.probes))
}

fn all_estimates(config: &SnlConfig) -> Result<Vec<Option<f64>>> {
    (0..1usize << config.probes)
        .map(|index| {
            let u = SnlOutcomeVector::from_index(index, config.probes);
            snl_estimate(&u.0, &config.theta_schedule)
        })
        .collect()
}

fn assemble_sweep(phases: Vec<f64>, conditional_means: Vec<Complex64>, probes: u32) -> SnlSweep {
    let sharpness_per_phase: Vec<f64> = conditional_means.iter().map(|m| m.norm()).collect();
    let conditional_variance: Vec<f64> = sharpness_per_phase
        .iter()
        .map(|&mu| holevo_from_sharpness(mu))
        .collect();
    let unconditional_variance =
        unconditional_from_means(&conditional_means).expect("grid is non-empty");
    SnlSweep {
        result: PhaseSweepResult {
            phases,
            conditional_variance,
            sharpness_per_phase,
            conditional_means,
            unconditional_variance,
        },
        n_outcomes: 1usize << probes,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn click_probability_reference_points() {
        assert_relative_eq!(
            click_probability(1, 0.7, 0.7).unwrap(),
            1.0,
            epsilon = 1e-15
        );
        assert_relative_eq!(
            click_probability(1, std::f64::consts::FRAC_PI_2, 0.0).unwrap(),
            0.5,
            epsilon = 1e-15
        );
        assert_relative_eq!(
            click_probability(-1, 0.7, 0.7).unwrap(),
            0.0,
            epsilon = 1e-15
        );
        assert!(matches!(
            click_probability(0, 0.0, 0.0),
            Err(Error::InvalidClickLabel(0))
        ));
    }

    #[test]
    fn click_probabilities_are_complementary() {
        for &(phi, theta) in &[(0.3, 1.1), (2.9, 0.2), (5.5, 4.4)] {
            let plus = click_probability(1, phi, theta).unwrap();
            let minus = click_probability(-1, phi, theta).unwrap();
            assert_relative_eq!(plus + minus, 1.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn exact_variance_closed_forms() {
        assert!((snl_exact_variance(3).unwrap() - 7.0 / 9.0).abs() < 1e-12);
        assert_relative_eq!(snl_exact_variance(1).unwrap(), 3.0, epsilon = 1e-12);
        assert!(snl_exact_variance(0).is_err());
        assert!(snl_exact_variance(13).is_err());
    }

    #[test]
    fn exact_variance_decreases_with_probe_count() {
        let mut previous = f64::INFINITY;
        for probes in 1..=8 {
            let v = snl_exact_variance(probes).unwrap();
            assert!(v < previous, "N = {probes}: {v} not below {previous}");
            previous = v;
        }
    }

    #[test]
    fn outcome_probabilities_are_normalized() {
        let schedule = default_schedule(4);
        for &phi in &[0.0, 1.1, 3.9] {
            let mut total = 0.0;
            for index in 0..16usize {
                let u = SnlOutcomeVector::from_index(index, 4);
                let mut p = 1.0;
                for (&uj, &th) in u.0.iter().zip(&schedule) {
                    p *= click_probability(uj, phi, th).unwrap();
                }
                total += p;
            }
            assert_relative_eq!(total, 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn estimate_reference_points() {
        let schedule = default_schedule(3);
        let est = snl_estimate(&[1, 1, 1], &schedule).unwrap().unwrap();
        assert_relative_eq!(est, 2.0 * std::f64::consts::PI / 3.0, epsilon = 1e-10);

        // The two patterns with vanishing first Fourier coefficient.
        assert!(snl_estimate(&[1, -1, 1], &schedule).unwrap().is_none());
        assert!(snl_estimate(&[-1, 1, -1], &schedule).unwrap().is_none());
        assert!(snl_estimate(&[1, 2, 1], &schedule).is_err());
    }

    #[test]
    fn opposite_outcomes_estimate_pi_apart() {
        let schedule = default_schedule(3);
        for index in 0..8usize {
            let u = SnlOutcomeVector::from_index(index, 3);
            let negated: Vec<i8> = u.0.iter().map(|&x| -x).collect();
            let (Some(a), Some(b)) = (
                snl_estimate(&u.0, &schedule).unwrap(),
                snl_estimate(&negated, &schedule).unwrap(),
            ) else {
                continue;
            };
            let gap = (a - b).rem_euclid(2.0 * std::f64::consts::PI);
            assert_relative_eq!(gap, std::f64::consts::PI, epsilon = 1e-10);
        }
    }

    #[test]
    fn estimates_shift_with_the_schedule() {
        // Shifting every θ_j and φ by δ shifts all defined estimates by δ.
        let schedule = default_schedule(3);
        let delta = 0.83;
        let shifted: Vec<f64> = schedule.iter().map(|t| t + delta).collect();
        for index in 0..8usize {
            let u = SnlOutcomeVector::from_index(index, 3);
            let base = snl_estimate(&u.0, &schedule).unwrap();
            let moved = snl_estimate(&u.0, &shifted).unwrap();
            match (base, moved) {
                (Some(a), Some(b)) => {
                    let gap = (b - a - delta).rem_euclid(2.0 * std::f64::consts::PI);
                    let gap = gap.min(2.0 * std::f64::consts::PI - gap);
                    assert!(gap < 1e-10, "outcome {index}: {a} -> {b}");
                }
                (None, None) => {}
                other => panic!("flag changed under shift for outcome {index}: {other:?}"),
            }
        }
    }

    #[test]
    fn exact_sweep_matches_enumeration() {
        let config = SnlConfig::standard(3).unwrap();
        let sweep = snl_sweep_exact(&config).unwrap();
        assert!((sweep.result.unconditional_variance - 7.0 / 9.0).abs() < 1e-10);
        assert_eq!(sweep.n_outcomes, 8);
    }

    #[test]
    fn simulation_is_deterministic_and_consistent() {
        let mut config = SnlConfig::standard(3).unwrap();
        config.trials = 20_000;
        config.seed = 17;
        config.phase_grid_size = 8;
        let a = snl_simulate(&config).unwrap();
        let b = snl_simulate(&config).unwrap();
        assert_eq!(
            a.result.unconditional_variance.to_bits(),
            b.result.unconditional_variance.to_bits()
        );
        assert!(
            (a.result.unconditional_variance - 7.0 / 9.0).abs() < 0.05,
            "simulated {}",
            a.result.unconditional_variance
        );
    }

    #[test]
    fn degenerate_schedule_is_strictly_worse() {
        let flat = snl_exact_variance_with_schedule(3, &[0.4, 0.4, 0.4]).unwrap();
        let standard = snl_exact_variance(3).unwrap();
        assert!(flat > standard + 1e-3, "flat {flat} vs standard {standard}");
    }

    #[test]
    fn config_validation() {
        let mut config = SnlConfig::standard(3).unwrap();
        config.theta_schedule.pop();
        assert!(matches!(
            config.validate(),
            Err(Error::ScheduleLengthMismatch { .. })
        ));
        let mut config = SnlConfig::standard(3).unwrap();
        config.phase_grid_size = 4;
        assert!(matches!(
            config.validate(),
            Err(Error::GridTooCoarse { .. })
        ));
    }
}
