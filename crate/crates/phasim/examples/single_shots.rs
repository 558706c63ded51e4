//! Monte-Carlo single shots and phase reconstruction from the record.
//!
//! Samples the protocol shot by shot at a fixed true phase, rebuilds the
//! phase from the outcome record, and puts a bootstrap confidence
//! interval on the sweep variance.
//!
//! Run with: cargo run --example single_shots

use phasim::hpea;
use phasim::quantum::DensityMatrix;

fn main() -> phasim::Result<()> {
    let rho = DensityMatrix::from_pure(&hpea::optimal_state(1)?);
    let seed = 42;

    // A handful of individual shots at phi = π/2.
    let phi = std::f64::consts::FRAC_PI_2;
    println!("ten shots at phi = π/2:");
    for trial in 0..10u64 {
        let mut stream = phasim::rng::stream(seed, &[0, trial]);
        use rand::Rng;
        let draws = (stream.gen::<f64>(), stream.gen::<f64>());
        let shot = hpea::run_single_shot(&rho, phi, true, draws)?;
        println!(
            "  bits ({}, {})  estimate {:.4}",
            shot.bits.0, shot.bits.1, shot.estimate
        );
    }

    // Aggregate counts recover the phase at the protocol's special points.
    let counts = hpea::sample_counts(&rho, phi, true, 200_000, seed, 0)?;
    println!(
        "\ncounts over 200k shots: dd {} ad {} da {} aa {}",
        counts[0], counts[1], counts[2], counts[3]
    );
    println!(
        "reconstructed phase = {:.6} (true {:.6})",
        hpea::true_phase_from_record(&counts)?,
        phi
    );

    // Monte-Carlo sweep plus a bootstrap interval around its variance.
    let sweep = hpea::sweep_monte_carlo(&rho, true, 16, 20_000, seed)?;
    let cells: Vec<(f64, [u64; 4])> = sweep
        .result
        .phases
        .iter()
        .cloned()
        .zip(
            sweep
                .counts
                .clone()
                .expect("monte-carlo sweeps carry counts"),
        )
        .collect();
    let (low, high) = hpea::bootstrap_variance_ci(&cells, 500, seed)?;
    println!(
        "\nsweep variance = {:.6}, bootstrap 95% CI [{low:.6}, {high:.6}]",
        sweep.result.unconditional_variance
    );
    println!("exact value      = {:.6}", hpea::heisenberg_limit(3)?);
    Ok(())
}
