//! Sweeping a scenario over time with a chosen amplitude engine.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::correlations::CorrelationPoint;
use crate::dynamics::{closed_form_amplitudes, NumericPropagator, Scenario, Topology};
use crate::linalg::ComplexMatrix;
use crate::oracle::{oracle_correlation_point, OracleSystem, DEFAULT_N_MAX};
use crate::reduced::{reduce, XState};
use crate::Error;

/// How the two-qubit state at time `t` is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Engine {
    /// Exact closed-form amplitudes.
    Closed,
    /// Spectral evolution in the conserved excitation sectors.
    Numeric,
    /// Full truncated Fock space with grid-search discord.
    Oracle,
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Engine::Closed => "closed",
            Engine::Numeric => "numeric",
            Engine::Oracle => "oracle",
        })
    }
}

impl FromStr for Engine {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "closed" => Ok(Engine::Closed),
            "numeric" => Ok(Engine::Numeric),
            "oracle" => Ok(Engine::Oracle),
            other => Err(format!(
                "unknown engine '{other}' (expected closed, numeric or oracle)"
            )),
        }
    }
}

#[derive(Debug, Clone)]
enum Backend {
    Closed,
    Numeric(NumericPropagator),
    Oracle(OracleSystem),
}

/// A scenario prepared for evaluation at arbitrary times.
#[derive(Debug, Clone)]
pub struct Trajectory {
    scenario: Scenario,
    engine: Engine,
    backend: Backend,
}

impl Trajectory {
    pub fn new(scenario: &Scenario, engine: Engine) -> Result<Self, Error> {
        let backend = match engine {
            Engine::Closed => {
                if scenario.topology == Topology::CommonCavity && !scenario.params.is_resonant() {
                    return Err(Error::ClosedFormUnavailable {
                        detuning: scenario.params.detuning(),
                    });
                }
                Backend::Closed
            }
            Engine::Numeric => Backend::Numeric(NumericPropagator::new(scenario)?),
            Engine::Oracle => Backend::Oracle(OracleSystem::new(scenario, DEFAULT_N_MAX)?),
        };
        Ok(Self {
            scenario: *scenario,
            engine,
            backend,
        })
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn engine(&self) -> Engine {
        self.engine
    }

    /// Two-qubit density matrix at time `t`.
    pub fn density_matrix(&self, t: f64) -> Result<ComplexMatrix, Error> {
        match &self.backend {
            Backend::Oracle(sys) => Ok(sys.density_matrix(t)?),
            _ => Ok(self.x_state(t)?.to_matrix()),
        }
    }

    /// X-state at time `t`. The oracle result is read back into X form and
    /// rejected if it has weight outside the X pattern.
    pub fn x_state(&self, t: f64) -> Result<XState, Error> {
        match &self.backend {
            Backend::Closed => Ok(reduce(&closed_form_amplitudes(&self.scenario, t)?)?),
            Backend::Numeric(prop) => Ok(reduce(&prop.amplitudes(t)?)?),
            Backend::Oracle(sys) => Ok(XState::from_matrix(&sys.density_matrix(t)?, 1e-10)?),
        }
    }

    pub fn point(&self, t: f64) -> Result<CorrelationPoint, Error> {
        match &self.backend {
            Backend::Oracle(sys) => Ok(oracle_correlation_point(t, &sys.density_matrix(t)?)?),
            _ => Ok(CorrelationPoint::from_state(t, &self.x_state(t)?)),
        }
    }

    /// Correlation points for every time, in the order given.
    pub fn sweep(&self, times: &[f64]) -> Result<Vec<CorrelationPoint>, Error> {
        times.par_iter().map(|&t| self.point(t)).collect()
    }
}

/// `steps` evenly spaced times from 0 to `t_max` inclusive.
pub fn time_grid(t_max: f64, steps: usize) -> Vec<f64> {
    assert!(steps >= 2, "a time grid needs at least two points");
    let last = (steps - 1) as f64;
    (0..steps).map(|i| t_max * i as f64 / last).collect()
}
