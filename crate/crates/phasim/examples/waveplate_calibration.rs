//! Jones-calculus checks of the waveplate implementation.
//!
//! Verifies that the plate dials encode the intended phases, that a
//! double pass doubles the phase, and that the full plate train
//! reproduces the logical circuit's outcome probabilities.
//!
//! Run with: cargo run --example waveplate_calibration

use phasim::optics;

fn main() -> phasim::Result<()> {
    println!("single-pass encoding (dial −φ/4 + π/8):");
    println!("{:>8}  {:>10}  {:>10}", "phi", "dial", "extracted");
    for g in 0..8 {
        let phi = std::f64::consts::PI * g as f64 / 4.0;
        println!(
            "{phi:>8.4}  {:>10.4}  {:>10.4}",
            optics::unknown_phase_dial(phi),
            optics::verify_unknown_phase_encoding(phi)
        );
    }

    println!("\ndouble pass doubles the phase:");
    for g in 0..4 {
        let phi = std::f64::consts::PI * g as f64 / 4.0;
        println!(
            "  phi {phi:.4} -> {:.4} (expect {:.4})",
            optics::verify_double_pass_encoding(phi),
            (2.0 * phi).rem_euclid(2.0 * std::f64::consts::PI)
        );
    }

    println!("\nplate train vs logical circuit, worst probability gap:");
    for passes in 1..=2u32 {
        let mut worst = 0.0f64;
        for g in 0..64 {
            let phi = 2.0 * std::f64::consts::PI * g as f64 / 64.0;
            for t in 0..8 {
                let theta = 2.0 * std::f64::consts::PI * t as f64 / 8.0;
                let (ld, _) = optics::logical_interferometer_probabilities(passes, phi, theta)?;
                let (wd, _) = optics::waveplate_interferometer_probabilities(passes, phi, theta)?;
                worst = worst.max((ld - wd).abs());
            }
        }
        println!("  {passes} pass(es): {worst:.3e}");
    }

    println!("\nfirst calibration rows (stage, dial angle, realized phase):");
    for row in optics::calibration_table(8)?.iter().take(6) {
        println!(
            "  {:11} {:>9.5} {:>9.5}",
            row.stage.label(),
            row.angle,
            row.phase
        );
    }
    Ok(())
}
