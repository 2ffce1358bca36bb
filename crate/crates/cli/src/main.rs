use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use cavity_discord::correlations::{esd_critical_angle, scan_critical_angle};
use cavity_discord::{Engine, ModelParams, Topology};
use cavity_discord_cli::{run, run_preset, CliError, ConfigLayer, RunConfig, PRESETS};
use clap::{Args, Parser, Subcommand};

/// Quantum discord, classical correlation and concurrence of two qubits in
/// independent cavities or a common cavity.
#[derive(Parser)]
#[command(name = "cavity-discord", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep one configuration and write CSV.
    Sweep(SweepArgs),
    /// Reproduce a figure panel. fig1b uses alpha = pi/6 and fig3b uses
    /// alpha = pi/24; panels 2 and 4 write one file per detuning g, 2g, 5g.
    Preset {
        /// fig1a, fig1b, fig2a, fig2b, fig3a, fig3b, fig4a or fig4b.
        name: String,
        #[arg(long)]
        engine: Option<Engine>,
        #[arg(long)]
        steps: Option<usize>,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// List the figure presets.
    Presets,
    /// Locate the sudden-death critical angle numerically for the correlated
    /// input at resonance.
    CriticalAngle {
        /// independent or common.
        #[arg(long)]
        topology: Topology,
        #[arg(long, default_value_t = 0.1)]
        g: f64,
        /// Time samples per period.
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = 1e-5)]
        resolution: f64,
    },
}

#[derive(Args)]
struct SweepArgs {
    /// JSON file with any of the flag names below as keys.
    #[arg(long)]
    config: Option<PathBuf>,
    /// independent or common [default: independent].
    #[arg(long)]
    topology: Option<String>,
    /// anti or corr [default: anti].
    #[arg(long)]
    bell: Option<String>,
    /// Radians, or a multiple of pi such as pi/6 [default: pi/4].
    #[arg(long)]
    alpha: Option<String>,
    /// Detuning in units of g [default: 0].
    #[arg(long, allow_negative_numbers = true)]
    delta_over_g: Option<f64>,
    /// Coupling [default: 0.1].
    #[arg(long)]
    g: Option<f64>,
    /// Cavity frequency [default: 1.0].
    #[arg(long)]
    omega: Option<f64>,
    /// Largest g*t of the sweep [default: 4 pi].
    #[arg(long)]
    tmax_over_invg: Option<f64>,
    /// Number of time points [default: 801].
    #[arg(long)]
    steps: Option<usize>,
    /// closed, numeric or oracle [default: closed].
    #[arg(long)]
    engine: Option<String>,
    /// Output file, or - for stdout [default: -].
    #[arg(long)]
    out: Option<String>,
}

impl SweepArgs {
    fn layer(&self) -> ConfigLayer {
        ConfigLayer {
            topology: self.topology.clone(),
            bell: self.bell.clone(),
            alpha: self
                .alpha
                .clone()
                .map(cavity_discord_cli::config::Angle::Text),
            delta_over_g: self.delta_over_g,
            g: self.g,
            omega: self.omega,
            tmax_over_invg: self.tmax_over_invg,
            steps: self.steps,
            engine: self.engine.clone(),
            out: self.out.clone(),
        }
    }
}

fn execute(command: Command) -> Result<(), CliError> {
    match command {
        Command::Sweep(args) => {
            let config = RunConfig::resolve(args.config.as_deref(), &args.layer())?;
            run(&config)?;
        }
        Command::Preset {
            name,
            engine,
            steps,
            out_dir,
        } => {
            let paths = run_preset(&name, engine, steps, &out_dir)?;
            let mut out = io::stdout().lock();
            for path in paths {
                let _ = writeln!(out, "{}", path.display());
            }
        }
        Command::Presets => {
            let mut out = io::stdout().lock();
            for name in PRESETS {
                for run in cavity_discord_cli::figure_preset(name)? {
                    let c = run.config;
                    let _ = writeln!(
                        out,
                        "{}\t{}\t{}\talpha={}\tdelta={}g",
                        run.label, c.topology, c.bell, c.alpha, c.delta_over_g
                    );
                }
            }
        }
        Command::CriticalAngle {
            topology,
            g,
            samples,
            resolution,
        } => {
            let params = ModelParams::resonant(1.0, g).map_err(cavity_discord::Error::from)?;
            let numeric = scan_critical_angle(topology, &params, samples, resolution)
                .map_err(cavity_discord::Error::from)?;
            println!("numeric={numeric}");
            println!("analytic={}", esd_critical_angle(topology));
        }
    }
    Ok(())
}

fn one_line(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let text = e.to_string();
            let first = text.lines().next().unwrap_or("invalid arguments");
            let first = first.strip_prefix("error: ").unwrap_or(first);
            eprintln!("error: usage: {}", one_line(first));
            return ExitCode::from(2);
        }
    };
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}: {}", e.code(), one_line(&e.to_string()));
            ExitCode::FAILURE
        }
    }
}
