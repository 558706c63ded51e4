//! Simulation and numerical-optimization toolkit for Heisenberg-limited
//! ab initio optical phase estimation with N = 3 photon-passes.
//!
//! What lives where:
//!
//! - [`quantum`]: dense few-qubit states, the phase/reference gates, and
//!   projective X-basis measurement with collapse.
//! - [`hpea`]: the adaptive two-photon protocol (one double-passed qubit,
//!   one single-passed qubit with feedforward), exact outcome
//!   distributions, Monte-Carlo shots, and Holevo-variance sweeps.
//! - [`snl`]: the shot-noise baseline with N independent probes, exact by
//!   outcome enumeration, with the sequential-experiment simulation.
//! - [`scheme`]: Holevo-variance evaluation and multistart optimization
//!   across entanglement/multipass/adaptivity scheme classes.
//! - [`optics`]: Jones-calculus verification that the waveplate settings
//!   implement the logical circuit gates.
//! - [`io`] and [`cli`]: file formats, run manifests, and the batch
//!   command front end.
//!
//! Everything numeric is deterministic: stochastic code draws from
//! counter-derived streams ([`rng`]) so identical seeds give bit-identical
//! results regardless of thread count.
//!
//! See the `examples/` directory for one runnable walkthrough per
//! capability (`cargo run --example hpea_sweep`, etc.).

pub mod cli;
pub mod error;
pub mod hpea;
pub mod io;
pub mod optics;
pub mod optim;
pub mod quantum;
pub mod rng;
pub mod scheme;
pub mod snl;

pub use error::{Error, Result};
