//! The shot-noise baseline: what N unentangled probes can do.
//!
//! Enumerates the exact finite-N limit, simulates the sequential
//! three-photon experiment, and shows why the reference-phase schedule
//! matters.
//!
//! Run with: cargo run --example snl_baseline

use phasim::snl::{self, SnlConfig};

fn main() -> phasim::Result<()> {
    println!("exact baseline variance by probe count:");
    for probes in 1..=8 {
        println!("  N = {probes}: {:.10}", snl::snl_exact_variance(probes)?);
    }
    println!("  (N = 3 is exactly 7/9 = {:.10})", 7.0 / 9.0);

    let mut config = SnlConfig::standard(3)?;
    config.trials = 50_000;
    config.seed = 7;
    let exact = snl::snl_sweep_exact(&config)?;
    let simulated = snl::snl_simulate(&config)?;
    println!(
        "\nN = 3 sweep: exact {:.6}, simulated {:.6} ({} trials/phase)",
        exact.result.unconditional_variance, simulated.result.unconditional_variance, config.trials,
    );

    // Per-outcome estimates; two patterns carry no phase information.
    println!("\nestimates per outcome vector (standard schedule):");
    for index in 0..8usize {
        let u = snl::SnlOutcomeVector::from_index(index, 3);
        let signs: Vec<&str> = u.0.iter().map(|&x| if x > 0 { "+" } else { "-" }).collect();
        match snl::snl_estimate(&u.0, &config.theta_schedule)? {
            Some(est) => println!("  ({}) -> {:.6}", signs.join(""), est),
            None => println!("  ({}) -> no phase information", signs.join("")),
        }
    }

    let flat = snl::snl_exact_variance_with_schedule(3, &[0.5, 0.5, 0.5])?;
    println!(
        "\nflat schedule θ = (0.5, 0.5, 0.5): {flat:.6} — strictly worse than the spread schedule"
    );
    Ok(())
}
