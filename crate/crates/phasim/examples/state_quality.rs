//! How probe quality maps to estimation variance.
//!
//! Builds the optimal probe via the CNOT preparation, degrades it toward
//! the maximally mixed state, and reports fidelity, purity, and the
//! exact-mode variance at each step. Also round-trips a state through the
//! density-matrix file format.
//!
//! Run with: cargo run --example state_quality

use phasim::hpea;
use phasim::io;
use phasim::quantum::DensityMatrix;

fn main() -> phasim::Result<()> {
    let (c0, c1) = hpea::optimal_coefficients();
    let prepared = hpea::prepare_via_cnot(c0, c1)?;
    let optimal = hpea::optimal_state(1)?;
    let rho = DensityMatrix::from_pure(&prepared);
    println!(
        "CNOT-prepared probe: fidelity with optimal = {:.12}",
        rho.fidelity(&optimal)?
    );

    println!("\ndepolarizing degradation (λ of maximally mixed admixture):");
    println!(
        "{:>5}  {:>10}  {:>10}  {:>12}",
        "λ", "fidelity", "purity", "V_H (exact)"
    );
    let mixed = DensityMatrix::maximally_mixed(2)?;
    for step in 0..=10 {
        let lambda = step as f64 / 10.0;
        let state = rho.mix(&mixed, lambda)?;
        let v = hpea::sweep_exact(&state, true, 16)?
            .result
            .unconditional_variance;
        println!(
            "{lambda:>5.1}  {:>10.6}  {:>10.6}  {:>12.6}",
            state.fidelity(&optimal)?,
            state.purity(),
            v
        );
    }

    // File round trip through the shared density-matrix format.
    let dir = std::env::temp_dir().join("phasim_state_quality");
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("probe.json");
    io::write_density_matrix(&path, &rho)?;
    let loaded = io::load_density_matrix(&path)?;
    println!(
        "\nround-tripped through {}: fidelity with optimal = {:.12}",
        path.display(),
        loaded.fidelity(&optimal)?
    );
    Ok(())
}
