//! Time sweeps of discord, classical correlation and concurrence written as
//! CSV, plus the figure presets.

pub mod config;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use cavity_discord::{time_grid, CorrelationPoint, Engine, Trajectory};
use thiserror::Error;

pub use config::{figure_preset, ConfigLayer, Output, PresetRun, RunConfig, PRESETS};

pub const CSV_HEADER: &str =
    "t,gt,discord,classical,concurrence,S_A,S_B,S_AB,theta_min,phi_min,purity";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("unknown preset '{name}' (valid presets: {})", PRESETS.join(", "))]
    UnknownPreset { name: String },
    #[error(transparent)]
    Model(#[from] cavity_discord::Error),
    #[error("{}: {message}", path.display())]
    Io { path: PathBuf, message: String },
}

impl CliError {
    /// Stable short tag for the error line.
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Config(_) => "config",
            CliError::UnknownPreset { .. } => "unknown-preset",
            CliError::Model(cavity_discord::Error::ClosedFormUnavailable { .. }) => {
                "closed-form-unavailable"
            }
            CliError::Model(_) => "model",
            CliError::Io { .. } => "io",
        }
    }
}

/// One correlation point per grid time, ordered by `t`.
pub fn run_sweep(config: &RunConfig) -> Result<Vec<CorrelationPoint>, CliError> {
    config.validate()?;
    let trajectory = Trajectory::new(&config.scenario()?, config.engine)?;
    let times = time_grid(config.t_max(), config.steps);
    log::info!(
        "{} {} alpha={} delta={}g engine={} steps={}",
        config.topology,
        config.bell,
        config.alpha,
        config.delta_over_g,
        config.engine,
        config.steps
    );
    Ok(trajectory.sweep(&times)?)
}

/// Shortest decimal that parses back to the same `f64`; scientific notation
/// for tiny magnitudes. Negative zero prints as `0`.
pub fn format_float(v: f64) -> String {
    if v == 0.0 {
        "0".to_string()
    } else if v.abs() < 1e-5 {
        format!("{v:e}")
    } else {
        format!("{v}")
    }
}

pub fn write_csv<W: Write>(mut w: W, g: f64, points: &[CorrelationPoint]) -> io::Result<()> {
    writeln!(w, "{CSV_HEADER}")?;
    for p in points {
        let row = [
            p.t,
            g * p.t,
            p.discord,
            p.classical,
            p.concurrence,
            p.s_a,
            p.s_b,
            p.s_ab,
            p.theta_min,
            p.phi_min,
            p.purity,
        ]
        .map(format_float);
        writeln!(w, "{}", row.join(","))?;
    }
    w.flush()
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| CliError::Io {
            path: path.to_path_buf(),
            message: e.to_string(),
        })
}

/// Runs the sweep and writes it to `config.out`. The output file is opened
/// before any computation.
pub fn run(config: &RunConfig) -> Result<usize, CliError> {
    match &config.out {
        Output::Stdout => {
            let points = run_sweep(config)?;
            match write_csv(io::stdout().lock(), config.g, &points) {
                Err(e) if e.kind() != io::ErrorKind::BrokenPipe => {
                    return Err(CliError::Io {
                        path: PathBuf::from("-"),
                        message: e.to_string(),
                    })
                }
                _ => {}
            }
            Ok(points.len())
        }
        Output::File(path) => {
            let file = create(path)?;
            let points = run_sweep(config)?;
            write_csv(file, config.g, &points).map_err(|e| CliError::Io {
                path: path.clone(),
                message: e.to_string(),
            })?;
            log::info!("wrote {} rows to {}", points.len(), path.display());
            Ok(points.len())
        }
    }
}

/// Writes `<label>.csv` for every curve of a preset into `dir` and returns
/// the paths.
pub fn run_preset(
    name: &str,
    engine: Option<Engine>,
    steps: Option<usize>,
    dir: &Path,
) -> Result<Vec<PathBuf>, CliError> {
    let mut written = Vec::new();
    for PresetRun { label, mut config } in figure_preset(name)? {
        if let Some(e) = engine {
            config.engine = e;
        }
        if let Some(s) = steps {
            config.steps = s;
        }
        let path = dir.join(format!("{label}.csv"));
        config.out = Output::File(path.clone());
        run(&config)?;
        written.push(path);
    }
    Ok(written)
}
