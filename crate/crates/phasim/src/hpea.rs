//! Heisenberg-limited phase estimation with N = 3 resources.
//!
//! Two photonic qubits probe an unknown phase φ: qubit 0 (mode C) samples
//! the phase gate twice, is measured in the X basis, and the outcome
//! decides whether a π/2 reference rotation is fed forward to qubit 1
//! (mode T) before its own single pass and X measurement. The two outcome
//! bits give a two-bit estimate φ_est = π(φ₀ + 2φ₁)/2.
//!
//! Both an exact outcome-distribution engine and a Monte-Carlo sampler are
//! provided, along with Holevo-variance statistics over uniform phase
//! grids. Outcome probabilities are trigonometric polynomials of degree
//! ≤ 3 in φ, so any uniform grid with at least 2N + 2 = 8 points averages
//! them exactly; the default grid is 64 points.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::Distribution;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::quantum::{DensityMatrix, PureState, Unitary, XOutcome};
use crate::rng;

/// Resources consumed by the K = 1 protocol: N = 2^(K+1) − 1.
pub const RESOURCES: u32 = 3;
/// Minimum uniform grid size for exact trigonometric averaging (2N + 2).
pub const MIN_GRID: usize = 2 * RESOURCES as usize + 2;
/// Default phase-grid size.
pub const DEFAULT_GRID: usize = 64;
/// Sharpness below this is reported as infinite variance rather than an error.
pub const MIN_SHARPNESS: f64 = 1e-15;

/// Bundled protocol settings: probe state, feedforward switch, and the
/// sampling/grid parameters of a sweep.
#[derive(Debug, Clone)]
pub struct ProtocolConfig {
    /// Protocol depth; K + 1 qubits probe N = 2^(K+1) − 1 passes. Only
    /// K = 1 runs here, but the chain in [`outcome_distribution_exact`]
    /// follows the general recursion.
    pub depth: u32,
    pub input_state: DensityMatrix,
    pub feedforward: bool,
    pub trials_per_phase: usize,
    pub master_seed: u64,
    pub phase_grid_size: usize,
}

impl ProtocolConfig {
    /// Standard configuration for a given input state.
    pub fn new(input_state: DensityMatrix) -> Self {
        Self {
            depth: 1,
            input_state,
            feedforward: true,
            trials_per_phase: 1000,
            master_seed: 0,
            phase_grid_size: DEFAULT_GRID,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.depth != 1 {
            return Err(Error::UnsupportedProtocolDepth(self.depth));
        }
        if self.input_state.num_qubits() != (self.depth as usize + 1) {
            return Err(Error::DimensionMismatch {
                expected: 1 << (self.depth as usize + 1),
                actual: self.input_state.dim(),
            });
        }
        if self.trials_per_phase == 0 {
            return Err(Error::NoTrials);
        }
        if self.phase_grid_size < MIN_GRID {
            return Err(Error::GridTooCoarse {
                size: self.phase_grid_size,
                minimum: MIN_GRID,
            });
        }
        Ok(())
    }

    /// Exact sweep under this configuration.
    pub fn run_exact(&self) -> Result<HpeaSweep> {
        self.validate()?;
        sweep_exact(&self.input_state, self.feedforward, self.phase_grid_size)
    }

    /// Monte-Carlo sweep under this configuration.
    pub fn run_monte_carlo(&self) -> Result<HpeaSweep> {
        self.validate()?;
        sweep_monte_carlo(
            &self.input_state,
            self.feedforward,
            self.phase_grid_size,
            self.trials_per_phase,
            self.master_seed,
        )
    }
}

/// Exact Heisenberg limit tan²[π/(N + 2)] on the Holevo variance of an
/// ab initio phase estimate using N photon-passes.
pub fn heisenberg_limit(resources: u32) -> Result<f64> {
    if resources < 1 {
        return Err(Error::InvalidResourceCount(resources));
    }
    Ok((std::f64::consts::PI / (resources as f64 + 2.0))
        .tan()
        .powi(2))
}

/// Amplitudes (c₀, c₁) of the optimal two-qubit probe
/// c₀|Φ⁺⟩ + c₁|Ψ⁺⟩ with c_j ∝ sin[(j + 1)π/5].
pub fn optimal_coefficients() -> (f64, f64) {
    let s0 = (std::f64::consts::PI / 5.0).sin();
    let s1 = (2.0 * std::f64::consts::PI / 5.0).sin();
    let norm = (s0 * s0 + s1 * s1).sqrt();
    (s0 / norm, s1 / norm)
}

/// The optimal entangled probe state for depth `k`. Only `k = 1`
/// (two qubits, N = 3) is supported.
pub fn optimal_state(k: u32) -> Result<PureState> {
    if k != 1 {
        return Err(Error::UnsupportedProtocolDepth(k));
    }
    let (c0, c1) = optimal_coefficients();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let amps = vec![
        Complex64::new(c0 * h, 0.0),
        Complex64::new(c1 * h, 0.0),
        Complex64::new(c1 * h, 0.0),
        Complex64::new(c0 * h, 0.0),
    ];
    PureState::new(2, amps)
}

/// Prepare c₀|Φ⁺⟩ + c₁|Ψ⁺⟩ the way the hardware does: a CNOT acting on
/// control (|0⟩ + |1⟩)/√2 and target c₀|0⟩ + c₁|1⟩.
pub fn prepare_via_cnot(c0: f64, c1: f64) -> Result<PureState> {
    let deviation = (c0 * c0 + c1 * c1 - 1.0).abs();
    if deviation > 1e-10 {
        return Err(Error::NotNormalized { deviation });
    }
    let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let control = [h, h];
    let target = [Complex64::new(c0, 0.0), Complex64::new(c1, 0.0)];
    PureState::product(&[control, target])?.apply_cnot(0, 1)
}

/// Two-bit estimate φ_est = π(φ₀·2⁰ + φ₁·2¹)/2, mapping the outcome
/// labels dd, ad, da, aa to 0, π/2, π, 3π/2.
pub fn estimate_from_bits(phi0: u8, phi1: u8) -> f64 {
    assert!(phi0 <= 1 && phi1 <= 1, "estimate bits must be 0 or 1");
    std::f64::consts::PI * (phi0 as f64 + 2.0 * phi1 as f64) / 2.0
}

/// Detector labels in estimate order (index = φ₀ + 2φ₁). The first letter
/// is the mode-C outcome, the second the mode-T outcome.
pub const OUTCOME_LABELS: [&str; 4] = ["dd", "ad", "da", "aa"];

/// Probabilities of the four detector patterns at one true phase.
#[derive(Debug, Clone)]
pub struct OutcomeDistribution {
    probabilities: [f64; 4],
    true_phase: f64,
}

impl OutcomeDistribution {
    /// Wrap explicit probabilities, indexed by φ₀ + 2φ₁; they must lie in
    /// [0, 1] and sum to 1 within 1e-10.
    pub fn from_probabilities(probabilities: [f64; 4], true_phase: f64) -> Result<Self> {
        for &p in &probabilities {
            if !(-1e-12..=1.0 + 1e-12).contains(&p) {
                return Err(Error::ProbabilityOutOfRange(p));
            }
        }
        let sum: f64 = probabilities.iter().sum();
        if (sum - 1.0).abs() > 1e-10 {
            return Err(Error::ProbabilitiesNotNormalized { sum });
        }
        Ok(Self {
            probabilities,
            true_phase,
        })
    }

    /// Empirical distribution from shot counts.
    pub fn from_counts(counts: [u64; 4], true_phase: f64) -> Result<Self> {
        let total: u64 = counts.iter().sum();
        if total == 0 {
            return Err(Error::EmptyRecord);
        }
        let mut probabilities = [0.0; 4];
        for (slot, &n) in probabilities.iter_mut().zip(counts.iter()) {
            *slot = n as f64 / total as f64;
        }
        Ok(Self {
            probabilities,
            true_phase,
        })
    }

    pub fn probabilities(&self) -> [f64; 4] {
        self.probabilities
    }

    /// Probability of the outcome with bits (φ₀, φ₁).
    pub fn probability(&self, phi0: u8, phi1: u8) -> f64 {
        self.probabilities[(phi0 + 2 * phi1) as usize]
    }

    pub fn true_phase(&self) -> f64 {
        self.true_phase
    }

    /// Conditional mean ⟨e^{i(φ − φ_est)}⟩ over the outcome ensemble.
    /// Its modulus is the sharpness μ(φ); its argument is needed when
    /// recombining per-phase statistics into the unconditional variance.
    pub fn conditional_mean(&self) -> Complex64 {
        let mut mean = Complex64::new(0.0, 0.0);
        for (k, &p) in self.probabilities.iter().enumerate() {
            let est = estimate_from_bits((k % 2) as u8, (k / 2) as u8);
            mean += Complex64::from_polar(p, self.true_phase - est);
        }
        mean
    }

    pub fn sharpness(&self) -> f64 {
        self.conditional_mean().norm()
    }

    /// Conditional Holevo variance μ⁻² − 1; +∞ when the sharpness falls
    /// below [`MIN_SHARPNESS`] (the estimate carries no phase information).
    pub fn conditional_holevo(&self) -> f64 {
        holevo_from_sharpness(self.sharpness())
    }
}

/// V = μ⁻² − 1 with the infinite-variance flag for μ below [`MIN_SHARPNESS`].
pub fn holevo_from_sharpness(sharpness: f64) -> f64 {
    if sharpness < MIN_SHARPNESS {
        f64::INFINITY
    } else {
        1.0 / (sharpness * sharpness) - 1.0
    }
}

/// Exact single-shot outcome distribution of the feedforward protocol.
///
/// The chain: apply the double-pass phase gate to qubit 0, project it in
/// the X basis, optionally rotate the surviving qubit by the π/2 reference
/// phase when the first outcome was `a` and feedforward is enabled, apply
/// the single-pass phase gate, and project again.
pub fn outcome_distribution_exact(
    rho: &DensityMatrix,
    phi: f64,
    feedforward: bool,
) -> Result<OutcomeDistribution> {
    if rho.num_qubits() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            actual: rho.dim(),
        });
    }
    let double_pass = Unitary::phase_gate(2, phi)?;
    let single_pass = Unitary::phase_gate(1, phi)?;
    let feed = Unitary::reference_phase(std::f64::consts::FRAC_PI_2)?;

    let after_first = rho.apply_on_qubit(&double_pass, 0)?;
    let mut probabilities = [0.0; 4];
    for first in [XOutcome::Diagonal, XOutcome::Antidiagonal] {
        let branch = after_first.project_x(0, first)?;
        let Some(reduced) = branch.collapsed else {
            probabilities[first.bit() as usize] += branch.probability;
            continue;
        };
        let mut gate = single_pass.clone();
        if feedforward && first == XOutcome::Antidiagonal {
            gate = single_pass.compose(&feed)?;
        }
        let evolved = reduced.apply_on_qubit(&gate, 0)?;
        let (p_d, p_a) = evolved.x_probabilities(0)?;
        let phi0 = first.bit();
        probabilities[(phi0 + 2 * XOutcome::Diagonal.bit()) as usize] += branch.probability * p_d;
        probabilities[(phi0 + 2 * XOutcome::Antidiagonal.bit()) as usize] +=
            branch.probability * p_a;
    }
    OutcomeDistribution::from_probabilities(probabilities, phi)
}

/// One sampled run of the protocol.
#[derive(Debug, Clone, Copy)]
pub struct ShotRecord {
    /// Outcome bits (φ₀, φ₁): mode C first, mode T second.
    pub bits: (u8, u8),
    /// The two-bit estimate in {0, π/2, π, 3π/2}.
    pub estimate: f64,
    pub true_phase: f64,
}

/// Run a single shot using two externally supplied uniform draws in [0, 1).
pub fn run_single_shot(
    rho: &DensityMatrix,
    phi: f64,
    feedforward: bool,
    draws: (f64, f64),
) -> Result<ShotRecord> {
    if rho.num_qubits() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            actual: rho.dim(),
        });
    }
    let double_pass = Unitary::phase_gate(2, phi)?;
    let single_pass = Unitary::phase_gate(1, phi)?;

    let after_first = rho.apply_on_qubit(&double_pass, 0)?;
    let first = after_first.measure_x(0, draws.0)?;
    let reduced = first
        .collapsed
        .expect("two-qubit state leaves one qubit after measurement");
    let mut gate = single_pass.clone();
    if feedforward && first.result == XOutcome::Antidiagonal {
        gate = single_pass.compose(&Unitary::reference_phase(std::f64::consts::FRAC_PI_2)?)?;
    }
    let evolved = reduced.apply_on_qubit(&gate, 0)?;
    let second = evolved.measure_x(0, draws.1)?;
    let bits = (first.result.bit(), second.result.bit());
    Ok(ShotRecord {
        bits,
        estimate: estimate_from_bits(bits.0, bits.1),
        true_phase: phi,
    })
}

/// Reconstruct the true phase from an ensemble of shot counts:
/// arg Σ n(φ₀φ₁) e^{iφ_est}, reduced to [0, 2π).
pub fn true_phase_from_record(counts: &[u64; 4]) -> Result<f64> {
    if counts.iter().all(|&n| n == 0) {
        return Err(Error::EmptyRecord);
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for (k, &n) in counts.iter().enumerate() {
        let est = estimate_from_bits((k % 2) as u8, (k / 2) as u8);
        acc += Complex64::from_polar(n as f64, est);
    }
    Ok(acc.arg().rem_euclid(2.0 * std::f64::consts::PI))
}

/// Per-phase and aggregate Holevo statistics over a uniform phase grid.
#[derive(Debug, Clone)]
pub struct PhaseSweepResult {
    /// Grid phases in [0, 2π) (plus any constant offset).
    pub phases: Vec<f64>,
    /// Conditional Holevo variance V_H^φ per grid point (may be +∞).
    pub conditional_variance: Vec<f64>,
    /// Sharpness μ(φ) ∈ [0, 1] per grid point.
    pub sharpness_per_phase: Vec<f64>,
    /// Conditional means ⟨e^{i(φ − φ_est)}⟩ per grid point, phase included.
    pub conditional_means: Vec<Complex64>,
    /// Unconditional Holevo variance from the double average.
    pub unconditional_variance: f64,
}

/// The unconditional Holevo variance from the per-phase conditional means:
/// |⟨⟨e^{i(φ − φ_est)}⟩_{φ_est}⟩_φ|⁻² − 1.
pub fn unconditional_from_means(means: &[Complex64]) -> Result<f64> {
    if means.is_empty() {
        return Err(Error::EmptyRecord);
    }
    let sum: Complex64 = means.iter().sum();
    Ok(holevo_from_sharpness((sum / means.len() as f64).norm()))
}

/// Recombination route: rebuild each conditional mean from its variance
/// (μ = (V + 1)^{-1/2}) and recorded argument, then average as complex
/// numbers. Agrees with [`unconditional_from_means`] up to roundoff; the
/// argument is essential, a phase-blind average of the sharpness alone
/// overestimates the aggregate sharpness.
pub fn unconditional_from_conditional(variances: &[f64], mean_args: &[f64]) -> Result<f64> {
    if variances.is_empty() || variances.len() != mean_args.len() {
        return Err(Error::DimensionMismatch {
            expected: variances.len(),
            actual: mean_args.len(),
        });
    }
    let mut sum = Complex64::new(0.0, 0.0);
    for (&v, &arg) in variances.iter().zip(mean_args) {
        let mu = if v.is_infinite() {
            0.0
        } else {
            1.0 / (v + 1.0).sqrt()
        };
        sum += Complex64::from_polar(mu, arg);
    }
    Ok(holevo_from_sharpness((sum / variances.len() as f64).norm()))
}

/// Uniform grid of `size` phases starting at `offset`.
pub fn phase_grid(size: usize, offset: f64) -> Result<Vec<f64>> {
    if size < MIN_GRID {
        return Err(Error::GridTooCoarse {
            size,
            minimum: MIN_GRID,
        });
    }
    let step = 2.0 * std::f64::consts::PI / size as f64;
    Ok((0..size).map(|g| offset + g as f64 * step).collect())
}

fn sweep_from_distributions(
    phases: Vec<f64>,
    distributions: &[OutcomeDistribution],
) -> PhaseSweepResult {
    let conditional_means: Vec<Complex64> =
        distributions.iter().map(|d| d.conditional_mean()).collect();
    let sharpness_per_phase: Vec<f64> = conditional_means.iter().map(|m| m.norm()).collect();
    let conditional_variance: Vec<f64> = sharpness_per_phase
        .iter()
        .map(|&mu| holevo_from_sharpness(mu))
        .collect();
    let mean: Complex64 =
        conditional_means.iter().sum::<Complex64>() / conditional_means.len() as f64;
    PhaseSweepResult {
        phases,
        conditional_variance,
        sharpness_per_phase,
        conditional_means,
        unconditional_variance: holevo_from_sharpness(mean.norm()),
    }
}

/// Sweep statistics plus the per-phase outcome distributions; Monte-Carlo
/// sweeps also carry the raw shot counts behind the empirical distributions.
pub struct HpeaSweep {
    pub result: PhaseSweepResult,
    pub distributions: Vec<OutcomeDistribution>,
    pub counts: Option<Vec<[u64; 4]>>,
}

/// Exact phase sweep on a uniform grid starting at `offset`.
pub fn sweep_exact_offset(
    rho: &DensityMatrix,
    feedforward: bool,
    grid_size: usize,
    offset: f64,
) -> Result<HpeaSweep> {
    let phases = phase_grid(grid_size, offset)?;
    let distributions = phases
        .par_iter()
        .map(|&phi| outcome_distribution_exact(rho, phi, feedforward))
        .collect::<Result<Vec<_>>>()?;
    Ok(HpeaSweep {
        result: sweep_from_distributions(phases, &distributions),
        distributions,
        counts: None,
    })
}

/// Exact phase sweep on the standard uniform grid over [0, 2π).
pub fn sweep_exact(rho: &DensityMatrix, feedforward: bool, grid_size: usize) -> Result<HpeaSweep> {
    sweep_exact_offset(rho, feedforward, grid_size, 0.0)
}

/// Monte-Carlo sweep: `trials` sampled shots per grid phase, each drawing
/// from its own `(phase index, trial index)` stream so results are
/// bit-identical however the work is scheduled.
pub fn sweep_monte_carlo(
    rho: &DensityMatrix,
    feedforward: bool,
    grid_size: usize,
    trials: usize,
    master_seed: u64,
) -> Result<HpeaSweep> {
    if trials == 0 {
        return Err(Error::NoTrials);
    }
    let phases = phase_grid(grid_size, 0.0)?;
    let counts = phases
        .par_iter()
        .enumerate()
        .map(|(g, &phi)| sample_counts(rho, phi, feedforward, trials, master_seed, g as u64))
        .collect::<Result<Vec<[u64; 4]>>>()?;
    let distributions = counts
        .iter()
        .zip(&phases)
        .map(|(&c, &phi)| OutcomeDistribution::from_counts(c, phi))
        .collect::<Result<Vec<_>>>()?;
    Ok(HpeaSweep {
        result: sweep_from_distributions(phases, &distributions),
        distributions,
        counts: Some(counts),
    })
}

/// Sampled outcome counts at a single phase.
pub fn sample_counts(
    rho: &DensityMatrix,
    phi: f64,
    feedforward: bool,
    trials: usize,
    master_seed: u64,
    phase_index: u64,
) -> Result<[u64; 4]> {
    let chunk = 4096usize;
    let blocks: Vec<[u64; 4]> = (0..trials)
        .into_par_iter()
        .chunks(chunk)
        .map(|trial_block| -> Result<[u64; 4]> {
            let mut local = [0u64; 4];
            for trial in trial_block {
                let mut rng = rng::stream(master_seed, &[phase_index, trial as u64]);
                let draws = (rng.gen::<f64>(), rng.gen::<f64>());
                let shot = run_single_shot(rho, phi, feedforward, draws)?;
                local[(shot.bits.0 + 2 * shot.bits.1) as usize] += 1;
            }
            Ok(local)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut counts = [0u64; 4];
    for block in blocks {
        for (total, n) in counts.iter_mut().zip(block.iter()) {
            *total += n;
        }
    }
    Ok(counts)
}

/// Percentile bootstrap 95% confidence interval for the unconditional
/// Holevo variance of a sweep given per-phase shot counts.
///
/// Each resample redraws every phase cell multinomially from its empirical
/// frequencies (same ensemble size), recomputes the double-average Holevo
/// variance, and the 2.5th/97.5th percentiles of the resampled values are
/// returned. Deterministic for a fixed seed.
pub fn bootstrap_variance_ci(
    per_phase_counts: &[(f64, [u64; 4])],
    resamples: usize,
    seed: u64,
) -> Result<(f64, f64)> {
    if resamples < 100 {
        return Err(Error::TooFewResamples(resamples));
    }
    if per_phase_counts.is_empty() {
        return Err(Error::EmptyRecord);
    }
    for (_, counts) in per_phase_counts {
        if counts.iter().all(|&n| n == 0) {
            return Err(Error::EmptyRecord);
        }
    }
    let mut values: Vec<f64> = (0..resamples)
        .into_par_iter()
        .map(|r| {
            let means: Vec<Complex64> = per_phase_counts
                .iter()
                .enumerate()
                .map(|(cell, &(phi, counts))| {
                    let mut rng = rng::stream(seed, &[r as u64, cell as u64]);
                    let resampled = resample_multinomial(&counts, &mut rng);
                    OutcomeDistribution::from_counts(resampled, phi)
                        .expect("resampled counts preserve the ensemble size")
                        .conditional_mean()
                })
                .collect();
            unconditional_from_means(&means).expect("non-empty grid")
        })
        .collect();
    values.sort_by(f64::total_cmp);
    Ok((percentile(&values, 0.025), percentile(&values, 0.975)))
}

fn resample_multinomial(counts: &[u64; 4], rng: &mut impl Rng) -> [u64; 4] {
    let total: u64 = counts.iter().sum();
    let mut out = [0u64; 4];
    let mut remaining = total;
    let mut mass = 1.0f64;
    for k in 0..3 {
        if remaining == 0 || mass <= 0.0 {
            break;
        }
        let p = (counts[k] as f64 / total as f64 / mass).clamp(0.0, 1.0);
        let draw = rand_distr::Binomial::new(remaining, p)
            .expect("probability clamped to [0, 1]")
            .sample(rng);
        out[k] = draw;
        remaining -= draw;
        mass *= 1.0 - p;
    }
    out[3] = remaining;
    out
}

/// Linear-interpolated percentile of sorted values, q in [0, 1].
fn percentile(sorted: &[f64], q: f64) -> f64 {
    let n = sorted.len();
    let pos = q * (n as f64 - 1.0);
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    if lo == hi {
        sorted[lo]
    } else {
        let w = pos - lo as f64;
        sorted[lo] * (1.0 - w) + sorted[hi] * w
    }
}
