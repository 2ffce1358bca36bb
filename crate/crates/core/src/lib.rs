//! Quantum discord, classical correlation and concurrence dynamics of two
//! identical qubits coupled either to two independent single-mode cavities or
//! to one common single-mode cavity, starting from Bell states with the
//! cavities in vacuum.
//!
//! The pipeline is `dynamics` (amplitudes) → `reduced` (two-qubit X-state) →
//! `correlations` (entropies, discord, concurrence). `oracle` holds
//! independent brute-force versions of each stage, and `engine` ties them
//! into time sweeps.

pub mod correlations;
pub mod dynamics;
pub mod engine;
pub mod linalg;
pub mod oracle;
pub mod reduced;

pub use correlations::{CorrelationPoint, Correlations};
pub use dynamics::{Amplitudes, BellFamily, ModelParams, Scenario, Topology};
pub use engine::{time_grid, Engine, Trajectory};
pub use reduced::XState;

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum Error {
    #[error(transparent)]
    Linalg(#[from] linalg::LinalgError),
    #[error(transparent)]
    Dynamics(#[from] dynamics::DynamicsError),
    #[error(transparent)]
    Reduce(#[from] reduced::ReduceError),
    #[error(transparent)]
    Correlation(#[from] correlations::CorrelationError),
    #[error(transparent)]
    Oracle(#[from] oracle::OracleError),
    #[error(
        "no closed form for a detuned common cavity (detuning {detuning}); use the numeric engine"
    )]
    ClosedFormUnavailable { detuning: f64 },
}
