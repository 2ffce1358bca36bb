//! Run configuration: defaults, JSON config files, flag overrides and the
//! figure presets.

use std::f64::consts::{FRAC_PI_4, PI};
use std::fmt;
use std::path::{Path, PathBuf};

use cavity_discord::{BellFamily, Engine, ModelParams, Scenario, Topology};
use serde::Deserialize;

use crate::CliError;

/// Where CSV rows go.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Output {
    Stdout,
    File(PathBuf),
}

impl Output {
    pub fn parse(s: &str) -> Self {
        if s == "-" {
            Output::Stdout
        } else {
            Output::File(PathBuf::from(s))
        }
    }
}

impl fmt::Display for Output {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Output::Stdout => f.write_str("-"),
            Output::File(p) => write!(f, "{}", p.display()),
        }
    }
}

/// A fully resolved sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub topology: Topology,
    pub bell: BellFamily,
    pub alpha: f64,
    /// Detuning `δ = Δ - ω` in units of `g`.
    pub delta_over_g: f64,
    pub g: f64,
    pub omega: f64,
    /// Sweep end time in units of `1/g`, i.e. the largest `g·t`.
    pub tmax_over_invg: f64,
    pub steps: usize,
    pub engine: Engine,
    pub out: Output,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            topology: Topology::IndependentCavities,
            bell: BellFamily::AntiCorrelated,
            alpha: FRAC_PI_4,
            delta_over_g: 0.0,
            g: 0.1,
            omega: 1.0,
            tmax_over_invg: 4.0 * PI,
            steps: 801,
            engine: Engine::Closed,
            out: Output::Stdout,
        }
    }
}

impl RunConfig {
    pub fn params(&self) -> Result<ModelParams, CliError> {
        ModelParams::with_detuning(self.omega, self.g, self.delta_over_g * self.g)
            .map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn scenario(&self) -> Result<Scenario, CliError> {
        Scenario::new(self.topology, self.bell, self.alpha, self.params()?)
            .map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn t_max(&self) -> f64 {
        self.tmax_over_invg / self.g
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.steps < 2 {
            return Err(CliError::Config(format!(
                "steps must be at least 2, got {}",
                self.steps
            )));
        }
        if !(self.tmax_over_invg.is_finite() && self.tmax_over_invg > 0.0) {
            return Err(CliError::Config(format!(
                "tmax-over-invg must be positive and finite, got {}",
                self.tmax_over_invg
            )));
        }
        if !self.delta_over_g.is_finite() {
            return Err(CliError::Config("delta-over-g must be finite".into()));
        }
        self.scenario().map(|_| ())
    }

    /// Applies every field that `layer` sets.
    pub fn apply(&mut self, layer: &ConfigLayer) -> Result<(), CliError> {
        if let Some(t) = &layer.topology {
            self.topology = t.parse().map_err(CliError::Config)?;
        }
        if let Some(b) = &layer.bell {
            self.bell = b.parse().map_err(CliError::Config)?;
        }
        if let Some(a) = &layer.alpha {
            self.alpha = a.radians()?;
        }
        if let Some(d) = layer.delta_over_g {
            self.delta_over_g = d;
        }
        if let Some(g) = layer.g {
            self.g = g;
        }
        if let Some(w) = layer.omega {
            self.omega = w;
        }
        if let Some(t) = layer.tmax_over_invg {
            self.tmax_over_invg = t;
        }
        if let Some(s) = layer.steps {
            self.steps = s;
        }
        if let Some(e) = &layer.engine {
            self.engine = e.parse().map_err(CliError::Config)?;
        }
        if let Some(o) = &layer.out {
            self.out = Output::parse(o);
        }
        Ok(())
    }

    /// Defaults, then the JSON file (if any), then flags.
    pub fn resolve(file: Option<&Path>, flags: &ConfigLayer) -> Result<Self, CliError> {
        let mut config = Self::default();
        if let Some(path) = file {
            config.apply(&ConfigLayer::from_file(path)?)?;
        }
        config.apply(flags)?;
        config.validate()?;
        Ok(config)
    }
}

/// An angle given either in radians or as a multiple of π such as `pi/6`,
/// `3pi/8` or `π/24`.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum Angle {
    Radians(f64),
    Text(String),
}

impl Angle {
    pub fn radians(&self) -> Result<f64, CliError> {
        match self {
            Angle::Radians(r) => Ok(*r),
            Angle::Text(s) => parse_angle(s),
        }
    }
}

pub fn parse_angle(text: &str) -> Result<f64, CliError> {
    let bad = || CliError::Config(format!("cannot parse angle '{text}'"));
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let s = s.replace('π', "pi");
    let Some((coef, rest)) = s.split_once("pi") else {
        return s.parse::<f64>().map_err(|_| bad());
    };
    let coef = coef.strip_suffix('*').unwrap_or(coef);
    let coef = if coef.is_empty() {
        1.0
    } else {
        coef.parse::<f64>().map_err(|_| bad())?
    };
    let denom = match rest {
        "" => 1.0,
        r => r
            .strip_prefix('/')
            .and_then(|d| d.parse::<f64>().ok())
            .ok_or_else(bad)?,
    };
    Ok(coef * PI / denom)
}

/// Optional settings from one source. Field names match the flags.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct ConfigLayer {
    pub topology: Option<String>,
    pub bell: Option<String>,
    pub alpha: Option<Angle>,
    pub delta_over_g: Option<f64>,
    pub g: Option<f64>,
    pub omega: Option<f64>,
    pub tmax_over_invg: Option<f64>,
    pub steps: Option<usize>,
    pub engine: Option<String>,
    pub out: Option<String>,
}

impl ConfigLayer {
    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }
}

pub const PRESETS: [&str; 8] = [
    "fig1a", "fig1b", "fig2a", "fig2b", "fig3a", "fig3b", "fig4a", "fig4b",
];

/// One curve of a figure preset.
#[derive(Debug, Clone, PartialEq)]
pub struct PresetRun {
    /// File stem, e.g. `fig2a_delta2g`.
    pub label: String,
    pub config: RunConfig,
}

/// The configurations behind one figure panel.
///
/// Panels 1 and 3 are resonant single curves; panels 2 and 4 hold three
/// curves at `δ = g, 2g, 5g`. The `b` panels use the correlated input with
/// `α = π/6` (independent cavities) and `α = π/24` (common cavity), both
/// inside the sudden-death regime. Detuned curves use the numeric engine.
pub fn figure_preset(name: &str) -> Result<Vec<PresetRun>, CliError> {
    let (topology, bell, alpha, detuned) = match name {
        "fig1a" => (
            Topology::IndependentCavities,
            BellFamily::AntiCorrelated,
            FRAC_PI_4,
            false,
        ),
        "fig1b" => (
            Topology::IndependentCavities,
            BellFamily::Correlated,
            PI / 6.0,
            false,
        ),
        "fig2a" => (
            Topology::IndependentCavities,
            BellFamily::AntiCorrelated,
            FRAC_PI_4,
            true,
        ),
        "fig2b" => (
            Topology::IndependentCavities,
            BellFamily::Correlated,
            PI / 6.0,
            true,
        ),
        "fig3a" => (
            Topology::CommonCavity,
            BellFamily::AntiCorrelated,
            FRAC_PI_4,
            false,
        ),
        "fig3b" => (
            Topology::CommonCavity,
            BellFamily::Correlated,
            PI / 24.0,
            false,
        ),
        "fig4a" => (
            Topology::CommonCavity,
            BellFamily::AntiCorrelated,
            FRAC_PI_4,
            true,
        ),
        "fig4b" => (
            Topology::CommonCavity,
            BellFamily::Correlated,
            PI / 24.0,
            true,
        ),
        other => {
            return Err(CliError::UnknownPreset {
                name: other.to_string(),
            })
        }
    };
    let base = RunConfig {
        topology,
        bell,
        alpha,
        engine: if detuned {
            Engine::Numeric
        } else {
            Engine::Closed
        },
        ..RunConfig::default()
    };
    if !detuned {
        return Ok(vec![PresetRun {
            label: name.to_string(),
            config: base,
        }]);
    }
    Ok([1.0, 2.0, 5.0]
        .into_iter()
        .map(|d| PresetRun {
            label: format!("{name}_delta{d}g"),
            config: RunConfig {
                delta_over_g: d,
                ..base.clone()
            },
        })
        .collect())
}
