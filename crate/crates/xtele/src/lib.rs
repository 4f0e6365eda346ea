//! Closed-form entanglement, Bell-CHSH-violation, and teleportation-fidelity
//! quantities for two-qubit X states, verified against independent brute-force
//! oracles (full protocol simulation, measurement-angle and correction-unitary
//! optimization, spin-flip concurrence, Monte Carlo ensembles).
//!
//! The main entry points:
//!
//! - [`states`]: the X-state data model, named builders, JSON state files,
//!   and random sampling of the X-state ensemble.
//! - [`metrics`]: the closed-form quantities (correlation matrix, `N`, `M`,
//!   `B_max`, fully entangled fraction, the two maximal average fidelities
//!   and their gap, concurrence, classification flags).
//! - [`oracles`]: brute-force verifiers that recompute everything without the
//!   closed forms.
//! - [`ensemble`]: Monte Carlo fraction estimates and verification campaigns.
//! - [`cli`]: the `xtele` command-line front end.

pub mod cli;
pub mod ensemble;
mod error;
pub mod metrics;
mod optim;
pub mod oracles;
pub mod qmath;
pub mod states;

pub use error::{CoherenceSlot, Error, Result};
