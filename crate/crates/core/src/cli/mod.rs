//! Command-line front end: configuration, single-point evaluation, figure
//! presets and sweep CSVs.
//!
//! Exit-code convention enforced by the binary: 0 on success, 1 for
//! usage/config problems, 2 for numerical failures or an unstable operating
//! point.

mod config;
mod figures;
mod output;

use std::fmt;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::entanglement::{
    extract_pair_covariance, logarithmic_negativity, physicality_check, EntanglementError,
    EntanglementResult, ModePair,
};
use crate::lyapunov::{solve_steady_covariance, LyapunovError};
use crate::model::{build_diffusion_matrix, build_drift_matrix, ModelError};
use crate::stability::{assess_stability, StabilityError, StabilityReport};
use crate::sweep::{run_sweep, SweepError};

pub use config::{parse_axis_spec, RunConfig};
pub use figures::{cmd_figure, FigurePreset, PanelSpec, DEFAULT_GRID_POINTS};
pub use output::format_value;

/// Environment variable consulted for the default worker count when the
/// `--workers` flag (or config key) is absent.
pub const WORKERS_ENV_VAR: &str = "OMSIM_WORKERS";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("unknown figure preset '{0}' (expected fig2, fig3a, fig3b, fig4a, fig4b, fig5a or fig5b)")]
    UnknownPreset(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("failed to build worker pool: {0}")]
    ThreadPool(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Sweep(#[from] SweepError),
    #[error(transparent)]
    Stability(#[from] StabilityError),
    #[error(transparent)]
    Lyapunov(#[from] LyapunovError),
    #[error(transparent)]
    Entanglement(#[from] EntanglementError),
}

impl CliError {
    /// Process exit code for this failure: 1 for usage/config, 2 for
    /// numerical or I/O trouble at run time.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_)
            | CliError::UnknownPreset(_)
            | CliError::Model(_)
            | CliError::Sweep(_)
            | CliError::Entanglement(
                EntanglementError::DegeneratePair(_)
                | EntanglementError::UnknownMode(_)
                | EntanglementError::MalformedPair(_),
            ) => 1,
            CliError::Io { .. }
            | CliError::ThreadPool(_)
            | CliError::Stability(_)
            | CliError::Lyapunov(_)
            | CliError::Entanglement(EntanglementError::Unphysical { .. }) => 2,
        }
    }

    fn io(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
        move |source| CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }
}

/// Resolved worker count: explicit setting first, then the
/// [`WORKERS_ENV_VAR`] environment variable, else the rayon default.
pub fn effective_workers(requested: Option<usize>) -> Option<usize> {
    requested.or_else(|| {
        std::env::var(WORKERS_ENV_VAR)
            .ok()
            .and_then(|raw| raw.parse::<usize>().ok())
            .filter(|n| *n > 0)
    })
}

/// Runs `job` on a dedicated pool of `workers` threads, or on the ambient
/// rayon pool when no count was requested.
pub fn run_in_pool<T: Send>(
    workers: Option<usize>,
    job: impl FnOnce() -> T + Send,
) -> Result<T, CliError> {
    match effective_workers(workers) {
        Some(threads) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .map_err(|e| CliError::ThreadPool(e.to_string()))?;
            Ok(pool.install(job))
        }
        None => Ok(job()),
    }
}

/// Everything `point` computes for one parameter set.
#[derive(Debug, Clone)]
pub struct PointReport {
    pub pair: ModePair,
    pub stability: StabilityReport,
    /// Present only when the point is stable.
    pub residual_norm: Option<f64>,
    pub physical: Option<bool>,
    pub entanglement: Option<EntanglementResult>,
}

impl fmt::Display for PointReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "pair: {}", self.pair)?;
        writeln!(
            f,
            "stable: {} (spectral abscissa {:.6e}{})",
            self.stability.stable,
            self.stability.spectral_abscissa,
            if self.stability.marginal { ", marginal" } else { "" }
        )?;
        writeln!(f, "eigenvalues (descending real part):")?;
        for ev in &self.stability.eigenvalues {
            writeln!(f, "  {:+.6e} {:+.6e}i", ev.re, ev.im)?;
        }
        match (&self.residual_norm, &self.physical, &self.entanglement) {
            (Some(residual), Some(physical), Some(result)) => {
                writeln!(f, "residual_norm: {residual:.6e}")?;
                writeln!(f, "physical: {physical}")?;
                writeln!(f, "nu_minus: {:.6e}", result.nu_minus)?;
                writeln!(f, "E_N: {:.6e}", result.log_negativity)?;
                write!(f, "entangled: {}", result.entangled)
            }
            _ => write!(
                f,
                "steady state undefined at an unstable point; no entanglement data"
            ),
        }
    }
}

/// Evaluates the pipeline at the configured parameter point. An unstable
/// point is not an error: the stability report is still returned (and
/// written to `out` if requested) with the entanglement fields empty.
pub fn cmd_point(config: &RunConfig) -> Result<PointReport, CliError> {
    config.params.validate()?;
    let a = build_drift_matrix(&config.params)?;
    let d = build_diffusion_matrix(&config.params)?;
    let stability = assess_stability(&a)?;
    let mut report = PointReport {
        pair: config.pair,
        stability,
        residual_norm: None,
        physical: None,
        entanglement: None,
    };
    if report.stability.stable {
        let solve = solve_steady_covariance(&a, &d)?;
        report.residual_norm = Some(solve.residual_norm);
        report.physical = Some(physicality_check(&solve.covariance));
        let chi = extract_pair_covariance(&solve.covariance, config.pair);
        report.entanglement = Some(logarithmic_negativity(&chi)?);
    }
    if let Some(path) = &config.out {
        output::write_point_csv(path, &report).map_err(CliError::io(path))?;
    }
    Ok(report)
}

/// Runs the configured 1D/2D sweep and writes the full record CSV. Returns
/// the output path and the number of records written.
pub fn cmd_sweep(config: &RunConfig) -> Result<(PathBuf, usize), CliError> {
    if config.axes.is_empty() {
        return Err(CliError::Config(
            "sweep needs at least one axis (--axis PARAM:START:STOP:COUNT)".into(),
        ));
    }
    let records = run_in_pool(config.workers, || {
        run_sweep(&config.params, &config.axes, config.pair, config.tol_residual)
    })??;
    let path = config
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from("sweep.csv"));
    output::write_sweep_csv(&path, &config.axes, &records).map_err(CliError::io(&path))?;
    Ok((path, records.len()))
}
