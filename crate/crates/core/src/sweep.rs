//! Grid evaluation of the full pipeline (drift -> stability -> steady state
//! -> logarithmic negativity) over one or two swept parameters.
//!
//! Grid points are independent; they are evaluated on the current rayon
//! pool and assembled by index, so the output ordering (row-major, first
//! axis outer) and every floating-point value are identical regardless of
//! worker count. Unstable points carry no entanglement data rather than a
//! zero, so threshold reads cannot confuse instability with separability.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use thiserror::Error;

use crate::entanglement::{
    extract_pair_covariance, logarithmic_negativity, EntanglementError, ModePair,
};
use crate::lyapunov::{solve_steady_covariance, LyapunovError};
use crate::model::{build_diffusion_matrix, build_drift_matrix, ModelError, SystemParams};
use crate::stability::assess_stability;

#[derive(Debug, Error)]
pub enum SweepError {
    #[error("unknown sweep parameter '{0}'")]
    UnknownParameter(String),
    #[error("axis for {parameter} needs start < stop, got [{start}, {stop}]")]
    BadRange {
        parameter: SweepParameter,
        start: f64,
        stop: f64,
    },
    #[error("axis for {parameter} needs at least 2 points, got {count}")]
    TooFewPoints {
        parameter: SweepParameter,
        count: usize,
    },
    #[error("a sweep takes one or two axes, got {0}")]
    BadAxisCount(usize),
    #[error("both axes sweep {0}")]
    DuplicateParameter(SweepParameter),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// A parameter of [`SystemParams`] that a sweep axis may vary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParameter {
    DeltaA,
    GCouplingA,
    GCouplingM,
    GammaA,
    NTh,
    Kappa,
    GammaM,
    DeltaTilde,
}

impl SweepParameter {
    pub const ALL: [SweepParameter; 8] = [
        SweepParameter::DeltaA,
        SweepParameter::GCouplingA,
        SweepParameter::GCouplingM,
        SweepParameter::GammaA,
        SweepParameter::NTh,
        SweepParameter::Kappa,
        SweepParameter::GammaM,
        SweepParameter::DeltaTilde,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SweepParameter::DeltaA => "delta_a",
            SweepParameter::GCouplingA => "g_coupling_a",
            SweepParameter::GCouplingM => "g_coupling_m",
            SweepParameter::GammaA => "gamma_a",
            SweepParameter::NTh => "n_th",
            SweepParameter::Kappa => "kappa",
            SweepParameter::GammaM => "gamma_m",
            SweepParameter::DeltaTilde => "delta_tilde",
        }
    }

    pub fn apply(self, params: &mut SystemParams, value: f64) {
        match self {
            SweepParameter::DeltaA => params.delta_a = value,
            SweepParameter::GCouplingA => params.g_coupling_a = value,
            SweepParameter::GCouplingM => params.g_coupling_m = value,
            SweepParameter::GammaA => params.gamma_a = value,
            SweepParameter::NTh => params.n_th = value,
            SweepParameter::Kappa => params.kappa = value,
            SweepParameter::GammaM => params.gamma_m = value,
            SweepParameter::DeltaTilde => params.delta_tilde = value,
        }
    }
}

impl fmt::Display for SweepParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepParameter {
    type Err = SweepError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SweepParameter::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| SweepError::UnknownParameter(s.to_string()))
    }
}

/// Linearly spaced axis over one sweep parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepAxis {
    pub parameter: SweepParameter,
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl SweepAxis {
    pub fn new(
        parameter: SweepParameter,
        start: f64,
        stop: f64,
        count: usize,
    ) -> Result<Self, SweepError> {
        if !(start.is_finite() && stop.is_finite()) || start >= stop {
            return Err(SweepError::BadRange {
                parameter,
                start,
                stop,
            });
        }
        if count < 2 {
            return Err(SweepError::TooFewPoints { parameter, count });
        }
        Ok(Self {
            parameter,
            start,
            stop,
            count,
        })
    }

    /// Grid value at `index`, computed from the index so every worker
    /// produces bitwise-identical coordinates.
    pub fn value(&self, index: usize) -> f64 {
        self.start + (self.stop - self.start) * index as f64 / (self.count - 1) as f64
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.count).map(|i| self.value(i))
    }

    /// Same axis with a different point count.
    pub fn with_count(&self, count: usize) -> Result<Self, SweepError> {
        Self::new(self.parameter, self.start, self.stop, count)
    }
}

/// Why a grid point carries no entanglement value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointError {
    InvalidParams,
    Unsupported,
    EigenFailed,
    SolverFailed,
    ResidualExceeded,
    Unphysical,
}

impl PointError {
    /// Short machine-readable code used in the CSV error column.
    pub fn code(self) -> &'static str {
        match self {
            PointError::InvalidParams => "invalid_params",
            PointError::Unsupported => "unsupported",
            PointError::EigenFailed => "eigen_failed",
            PointError::SolverFailed => "solver_failed",
            PointError::ResidualExceeded => "residual_exceeded",
            PointError::Unphysical => "unphysical_state",
        }
    }
}

/// Pipeline outcome at a single parameter point.
#[derive(Debug, Clone, Copy)]
pub struct PointOutcome {
    pub stable: bool,
    pub spectral_abscissa: f64,
    pub e_n: Option<f64>,
    pub nu_minus: Option<f64>,
    pub residual_norm: Option<f64>,
    pub error: Option<PointError>,
}

/// One grid point of a sweep: axis coordinates plus the pipeline outcome.
#[derive(Debug, Clone)]
pub struct SweepRecord {
    pub axis_values: Vec<f64>,
    pub stable: bool,
    pub spectral_abscissa: f64,
    pub e_n: Option<f64>,
    pub nu_minus: Option<f64>,
    pub residual_norm: Option<f64>,
    pub error: Option<PointError>,
}

/// Runs the full pipeline at one parameter point. Failures are encoded in
/// the outcome, never panicked or propagated, so a sweep survives bad
/// points.
pub fn evaluate_point(params: &SystemParams, pair: ModePair, tol_residual: f64) -> PointOutcome {
    let failure = |error: PointError, abscissa: f64| PointOutcome {
        stable: false,
        spectral_abscissa: abscissa,
        e_n: None,
        nu_minus: None,
        residual_norm: None,
        error: Some(error),
    };

    let a = match build_drift_matrix(params) {
        Ok(a) => a,
        Err(ModelError::UnsupportedHopping(_)) => {
            return failure(PointError::Unsupported, f64::NAN)
        }
        Err(_) => return failure(PointError::InvalidParams, f64::NAN),
    };
    let d = match build_diffusion_matrix(params) {
        Ok(d) => d,
        Err(_) => return failure(PointError::InvalidParams, f64::NAN),
    };
    let stability = match assess_stability(&a) {
        Ok(report) => report,
        Err(_) => return failure(PointError::EigenFailed, f64::NAN),
    };
    if !stability.stable {
        return PointOutcome {
            stable: false,
            spectral_abscissa: stability.spectral_abscissa,
            e_n: None,
            nu_minus: None,
            residual_norm: None,
            error: None,
        };
    }

    let report = match solve_steady_covariance(&a, &d) {
        Ok(report) => report,
        Err(LyapunovError::NotHurwitz { .. }) | Err(LyapunovError::SingularSystem) => {
            return failure(PointError::SolverFailed, stability.spectral_abscissa)
        }
        Err(_) => return failure(PointError::SolverFailed, stability.spectral_abscissa),
    };
    if report.residual_norm > tol_residual {
        return PointOutcome {
            stable: true,
            spectral_abscissa: stability.spectral_abscissa,
            e_n: None,
            nu_minus: None,
            residual_norm: Some(report.residual_norm),
            error: Some(PointError::ResidualExceeded),
        };
    }

    let chi = extract_pair_covariance(&report.covariance, pair);
    match logarithmic_negativity(&chi) {
        Ok(result) => PointOutcome {
            stable: true,
            spectral_abscissa: stability.spectral_abscissa,
            e_n: Some(result.log_negativity),
            nu_minus: Some(result.nu_minus),
            residual_norm: Some(report.residual_norm),
            error: None,
        },
        Err(EntanglementError::Unphysical { .. }) => PointOutcome {
            stable: true,
            spectral_abscissa: stability.spectral_abscissa,
            e_n: None,
            nu_minus: None,
            residual_norm: Some(report.residual_norm),
            error: Some(PointError::Unphysical),
        },
        Err(_) => failure(PointError::Unphysical, stability.spectral_abscissa),
    }
}

/// Evaluates the pipeline over a 1D or 2D grid. Output is row-major with
/// the first axis outermost and is deterministic across runs and worker
/// counts.
pub fn run_sweep(
    base: &SystemParams,
    axes: &[SweepAxis],
    pair: ModePair,
    tol_residual: f64,
) -> Result<Vec<SweepRecord>, SweepError> {
    if axes.is_empty() || axes.len() > 2 {
        return Err(SweepError::BadAxisCount(axes.len()));
    }
    if axes.len() == 2 && axes[0].parameter == axes[1].parameter {
        return Err(SweepError::DuplicateParameter(axes[0].parameter));
    }
    base.validate()?;

    let inner = axes.get(1).map_or(1, |axis| axis.count);
    let total = axes[0].count * inner;
    let base = *base;
    let axes = axes.to_vec();
    Ok((0..total)
        .into_par_iter()
        .map(|flat| {
            let mut params = base;
            let mut axis_values = Vec::with_capacity(axes.len());
            let outer_value = axes[0].value(flat / inner);
            axes[0].parameter.apply(&mut params, outer_value);
            axis_values.push(outer_value);
            if let Some(axis) = axes.get(1) {
                let inner_value = axis.value(flat % inner);
                axis.parameter.apply(&mut params, inner_value);
                axis_values.push(inner_value);
            }
            let outcome = evaluate_point(&params, pair, tol_residual);
            SweepRecord {
                axis_values,
                stable: outcome.stable,
                spectral_abscissa: outcome.spectral_abscissa,
                e_n: outcome.e_n,
                nu_minus: outcome.nu_minus,
                residual_norm: outcome.residual_norm,
                error: outcome.error,
            }
        })
        .collect())
}
