//! Two-mode covariance extraction and logarithmic negativity.
//!
//! Entanglement of a mode pair in the Gaussian steady state is quantified
//! by `E_N = max(0, -ln(2 nu))`, where `nu` is the smallest symplectic
//! eigenvalue of the partially transposed pair covariance. The pair is
//! entangled exactly when `nu < 1/2` (Simon's criterion). Blocks are keyed
//! by mode name in the fixed quadrature ordering: optical rows 0-1,
//! acoustic rows 2-3, mechanical rows 4-5.

use std::fmt;
use std::str::FromStr;

use nalgebra::{Matrix2, Matrix4, Matrix6};
use num_complex::Complex64;
use thiserror::Error;

use crate::model::CovarianceMatrix;

/// Vacuum-threshold value of the minimum symplectic eigenvalue.
pub const SEPARABILITY_THRESHOLD: f64 = 0.5;

/// Discriminant (and radicand) below this raises an unphysical-state error
/// instead of being clamped.
pub const UNPHYSICAL_TOL: f64 = -1e-9;

/// Eigenvalue floor for the positive-semidefiniteness test of `V + i/2 O`.
pub const PHYSICALITY_TOL: f64 = -1e-9;

#[derive(Debug, Error)]
pub enum EntanglementError {
    #[error("mode pair must name two distinct modes, got {0} twice")]
    DegeneratePair(Mode),
    #[error("unknown mode '{0}' (expected optical, acoustic or mechanical)")]
    UnknownMode(String),
    #[error("malformed mode pair '{0}' (expected <mode>-<mode>)")]
    MalformedPair(String),
    #[error("unphysical pair covariance: {quantity} = {value:.6e}; upstream solve or stability check likely failed")]
    Unphysical { quantity: &'static str, value: f64 },
}

/// One of the three bosonic modes of the system.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Optical,
    Acoustic,
    Mechanical,
}

impl Mode {
    /// Row/column of this mode's first quadrature in the 6x6 ordering.
    pub fn block_start(self) -> usize {
        match self {
            Mode::Optical => 0,
            Mode::Acoustic => 2,
            Mode::Mechanical => 4,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Mode::Optical => "optical",
            Mode::Acoustic => "acoustic",
            Mode::Mechanical => "mechanical",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Mode {
    type Err = EntanglementError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "optical" => Ok(Mode::Optical),
            "acoustic" => Ok(Mode::Acoustic),
            "mechanical" => Ok(Mode::Mechanical),
            other => Err(EntanglementError::UnknownMode(other.to_string())),
        }
    }
}

/// Ordered pair of distinct modes selecting a bipartition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModePair {
    first: Mode,
    second: Mode,
}

impl ModePair {
    pub fn new(first: Mode, second: Mode) -> Result<Self, EntanglementError> {
        if first == second {
            return Err(EntanglementError::DegeneratePair(first));
        }
        Ok(Self { first, second })
    }

    /// The default bipartition reported by the sweeps.
    pub fn optical_mechanical() -> Self {
        Self {
            first: Mode::Optical,
            second: Mode::Mechanical,
        }
    }

    pub fn optical_acoustic() -> Self {
        Self {
            first: Mode::Optical,
            second: Mode::Acoustic,
        }
    }

    pub fn acoustic_mechanical() -> Self {
        Self {
            first: Mode::Acoustic,
            second: Mode::Mechanical,
        }
    }

    pub fn first(&self) -> Mode {
        self.first
    }

    pub fn second(&self) -> Mode {
        self.second
    }

    pub fn swapped(&self) -> Self {
        Self {
            first: self.second,
            second: self.first,
        }
    }
}

impl fmt::Display for ModePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.first, self.second)
    }
}

impl FromStr for ModePair {
    type Err = EntanglementError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (first, second) = s
            .split_once('-')
            .ok_or_else(|| EntanglementError::MalformedPair(s.to_string()))?;
        ModePair::new(first.parse()?, second.parse()?)
    }
}

/// 4x4 covariance of a selected mode pair, blocks ordered (first, second).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairCovariance(Matrix4<f64>);

impl PairCovariance {
    pub fn from_matrix(entries: Matrix4<f64>) -> Self {
        Self(entries)
    }

    pub fn as_matrix(&self) -> &Matrix4<f64> {
        &self.0
    }

    fn block(&self, row: usize, col: usize) -> Matrix2<f64> {
        self.0.fixed_view::<2, 2>(row, col).into_owned()
    }
}

/// Entanglement diagnostics for one mode pair.
#[derive(Debug, Clone, Copy)]
pub struct EntanglementResult {
    /// `det V_i + det V_j - 2 det V_ij` from the pair-covariance blocks.
    pub sigma: f64,
    pub det_chi: f64,
    /// Minimum symplectic eigenvalue of the partially transposed pair state.
    pub nu_minus: f64,
    /// `max(0, -ln(2 nu_minus))`; infinite in the degenerate `nu = 0` edge.
    pub log_negativity: f64,
    /// True iff `nu_minus < 1/2`.
    pub entangled: bool,
    /// Round-off below zero was clamped in the eigenvalue formula.
    pub clamped: bool,
    /// `nu_minus` hit exactly zero and the negativity is reported as the
    /// infinity sentinel.
    pub divergent: bool,
}

/// Restricts the full covariance to a mode pair. For Gaussian states the
/// partial trace over the remaining mode is plain block deletion.
pub fn extract_pair_covariance(v: &CovarianceMatrix, pair: ModePair) -> PairCovariance {
    let vm = v.as_matrix();
    let i = pair.first.block_start();
    let j = pair.second.block_start();
    let mut chi = Matrix4::<f64>::zeros();
    chi.fixed_view_mut::<2, 2>(0, 0)
        .copy_from(&vm.fixed_view::<2, 2>(i, i));
    chi.fixed_view_mut::<2, 2>(0, 2)
        .copy_from(&vm.fixed_view::<2, 2>(i, j));
    chi.fixed_view_mut::<2, 2>(2, 0)
        .copy_from(&vm.fixed_view::<2, 2>(j, i));
    chi.fixed_view_mut::<2, 2>(2, 2)
        .copy_from(&vm.fixed_view::<2, 2>(j, j));
    PairCovariance(chi)
}

fn det2(m: &Matrix2<f64>) -> f64 {
    m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)]
}

/// `det V_i + det V_j - 2 det V_ij` over the 2x2 blocks of the pair
/// covariance; the minus sign encodes the partial transposition.
pub fn compute_sigma(chi: &PairCovariance) -> f64 {
    let det_i = det2(&chi.block(0, 0));
    let det_j = det2(&chi.block(2, 2));
    let det_ij = det2(&chi.block(0, 2));
    det_i + det_j - 2.0 * det_ij
}

fn nu_minus_inner(chi: &PairCovariance) -> Result<(f64, f64, f64, bool), EntanglementError> {
    let sigma = compute_sigma(chi);
    let det_chi = chi.0.determinant();
    let mut clamped = false;

    let discriminant = sigma * sigma - 4.0 * det_chi;
    if discriminant < UNPHYSICAL_TOL {
        return Err(EntanglementError::Unphysical {
            quantity: "discriminant",
            value: discriminant,
        });
    }
    if discriminant < 0.0 {
        clamped = true;
    }
    let radicand = sigma - discriminant.max(0.0).sqrt();
    if radicand < UNPHYSICAL_TOL {
        return Err(EntanglementError::Unphysical {
            quantity: "radicand",
            value: radicand,
        });
    }
    if radicand < 0.0 {
        clamped = true;
    }
    let nu_minus = (radicand.max(0.0) / 2.0).sqrt();
    Ok((sigma, det_chi, nu_minus, clamped))
}

/// Minimum symplectic eigenvalue of the partially transposed pair state,
/// `sqrt((sigma - sqrt(sigma^2 - 4 det chi)) / 2)`. Round-off slightly below
/// zero is clamped; violations beyond [`UNPHYSICAL_TOL`] are errors because
/// they signal a broken upstream solve rather than noise.
pub fn min_symplectic_eigenvalue_pt(chi: &PairCovariance) -> Result<f64, EntanglementError> {
    nu_minus_inner(chi).map(|(_, _, nu, _)| nu)
}

/// Full entanglement diagnostics for a pair covariance.
pub fn logarithmic_negativity(
    chi: &PairCovariance,
) -> Result<EntanglementResult, EntanglementError> {
    let (sigma, det_chi, nu_minus, clamped) = nu_minus_inner(chi)?;
    let (log_negativity, divergent) = if nu_minus == 0.0 {
        (f64::INFINITY, true)
    } else {
        ((-(2.0 * nu_minus).ln()).max(0.0), false)
    };
    Ok(EntanglementResult {
        sigma,
        det_chi,
        nu_minus,
        log_negativity,
        entangled: nu_minus < SEPARABILITY_THRESHOLD,
        clamped,
        divergent,
    })
}

fn symplectic_form6() -> Matrix6<f64> {
    let mut omega = Matrix6::<f64>::zeros();
    for block in 0..3 {
        omega[(2 * block, 2 * block + 1)] = 1.0;
        omega[(2 * block + 1, 2 * block)] = -1.0;
    }
    omega
}

/// Heisenberg physicality of a full covariance matrix: `V + (i/2) O` must be
/// positive semidefinite, with `O` the symplectic form in the fixed
/// quadrature ordering and vacuum variance 1/2. Every valid Gaussian steady
/// state passes; failure indicates a corrupted covariance.
pub fn physicality_check(v: &CovarianceMatrix) -> bool {
    let omega = symplectic_form6();
    let m = Matrix6::<Complex64>::from_fn(|i, j| {
        Complex64::new(v.as_matrix()[(i, j)], 0.5 * omega[(i, j)])
    });
    let hermitian = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    match nalgebra::linalg::SymmetricEigen::try_new(hermitian, f64::EPSILON, 10_000) {
        Some(eigen) => eigen.eigenvalues.iter().all(|ev| *ev >= PHYSICALITY_TOL),
        None => false,
    }
}
