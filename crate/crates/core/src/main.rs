use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use omsim::cli::{
    cmd_figure, cmd_point, cmd_sweep, parse_axis_spec, CliError, FigurePreset, RunConfig,
};

/// Steady-state entanglement of a three-mode optomechanical system with
/// Brillouin photon-phonon coupling.
#[derive(Parser)]
#[command(name = "omsim", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonOpts {
    /// Key-value config file applied before the other flags.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Output file (point, sweep) or directory (figure).
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Worker thread count; OMSIM_WORKERS is the fallback.
    #[arg(long, value_name = "N")]
    workers: Option<usize>,
    /// Mode pair: optical-mechanical, optical-acoustic or acoustic-mechanical.
    #[arg(long, value_name = "PAIR")]
    pair: Option<String>,
    /// Relative Lyapunov residual above which a point is flagged.
    #[arg(long = "tol-residual", value_name = "TOL")]
    tol_residual: Option<f64>,
    /// Points per axis for figure presets (default 61).
    #[arg(long, value_name = "N")]
    grid: Option<usize>,
    /// Parameter overrides, e.g. g_coupling_a=0.2 n_th=50.
    #[arg(value_name = "KEY=VALUE")]
    overrides: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate stability, steady state and entanglement at one point.
    Point {
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Sweep one or two parameters and write the full record CSV.
    Sweep {
        /// Axis specification parameter:start:stop:count (repeat for 2D).
        #[arg(long = "axis", value_name = "PARAM:START:STOP:COUNT")]
        axes: Vec<String>,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Emit a bundled figure dataset plus its gnuplot script.
    Figure {
        /// Preset name: fig2, fig3a, fig3b, fig4a, fig4b, fig5a, fig5b.
        name: String,
        #[command(flatten)]
        common: CommonOpts,
    },
}

fn build_config(common: &CommonOpts, axis_specs: &[String]) -> Result<RunConfig, CliError> {
    let mut config = RunConfig::default();
    if let Some(path) = &common.config {
        config.apply_file(path)?;
    }
    if let Some(out) = &common.out {
        config.out = Some(out.clone());
    }
    if let Some(workers) = common.workers {
        if workers == 0 {
            return Err(CliError::Config("workers must be at least 1".into()));
        }
        config.workers = Some(workers);
    }
    if let Some(pair) = &common.pair {
        config.pair = pair.parse()?;
    }
    if let Some(tol) = common.tol_residual {
        if !(tol.is_finite() && tol > 0.0) {
            return Err(CliError::Config(format!(
                "tol-residual must be a positive number, got {tol}"
            )));
        }
        config.tol_residual = tol;
    }
    if let Some(grid) = common.grid {
        if grid < 2 {
            return Err(CliError::Config("grid needs at least 2 points".into()));
        }
        config.grid = Some(grid);
    }
    if !axis_specs.is_empty() {
        if axis_specs.len() > 2 {
            return Err(CliError::Config(format!(
                "at most two --axis flags are supported, got {}",
                axis_specs.len()
            )));
        }
        config.axes = axis_specs
            .iter()
            .map(|spec| parse_axis_spec(spec))
            .collect::<Result<Vec<_>, _>>()?;
    }
    config.apply_overrides(&common.overrides)?;
    // A grid override re-samples every configured axis, whatever its source.
    if let Some(grid) = config.grid {
        config.axes = config
            .axes
            .iter()
            .map(|axis| axis.with_count(grid))
            .collect::<Result<Vec<_>, _>>()?;
    }
    Ok(config)
}

fn fail(err: CliError) -> ExitCode {
    eprintln!("error: {err}");
    ExitCode::from(err.exit_code() as u8)
}

fn run(cli: Cli) -> ExitCode {
    match cli.command {
        Command::Point { common } => match build_config(&common, &[]) {
            Err(err) => fail(err),
            Ok(config) => match cmd_point(&config) {
                Err(err) => fail(err),
                Ok(report) => {
                    println!("{report}");
                    if report.stability.stable {
                        ExitCode::SUCCESS
                    } else {
                        ExitCode::from(2)
                    }
                }
            },
        },
        Command::Sweep { axes, common } => match build_config(&common, &axes) {
            Err(err) => fail(err),
            Ok(config) => match cmd_sweep(&config) {
                Err(err) => fail(err),
                Ok((path, records)) => {
                    println!("wrote {records} records to {}", path.display());
                    ExitCode::SUCCESS
                }
            },
        },
        Command::Figure { name, common } => {
            let preset: FigurePreset = match name.parse() {
                Err(err) => return fail(err),
                Ok(preset) => preset,
            };
            match build_config(&common, &[]) {
                Err(err) => fail(err),
                Ok(config) => match cmd_figure(preset, &config) {
                    Err(err) => fail(err),
                    Ok(paths) => {
                        for path in paths {
                            println!("wrote {}", path.display());
                        }
                        ExitCode::SUCCESS
                    }
                },
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // --help/--version land here as well; keep their exit code 0.
            let code = if err.use_stderr() { 1 } else { 0 };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    run(cli)
}
