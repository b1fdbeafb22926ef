//! Optimal 1→2 mirror phase-covariant cloning of qubits.
pub mod circuit;
pub mod error;
pub mod fidelity;
pub mod models;
pub mod optimality;
pub mod quantum;
pub mod report;

pub use error::{Error, Result};
