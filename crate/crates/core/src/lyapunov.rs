//! Steady-state covariance via the continuous Lyapunov equation
//! `A V + V A^T = -D`, plus a transient integrator for the matrix ODE
//! `V' = A V + V A^T + D` that serves as an independent cross-check.
//!
//! The solver vectorizes the equation into the 36x36 linear system
//! `(I (x) A + A (x) I) vec(V) = -vec(D)` and factorizes it with partially
//! pivoted LU. At this fixed size the dense solve is exact and takes well
//! under a millisecond, so nothing fancier is warranted.

use nalgebra::{DMatrix, DVector};
use thiserror::Error;

use crate::model::{CovarianceMatrix, DiffusionMatrix, DriftMatrix, Mat6};
use crate::stability::{assess_stability, StabilityError};

/// Default integrator step, resolving the fastest dynamical scale with a
/// few hundred steps per period.
pub const DEFAULT_DT: f64 = 0.01;
/// Decay constants of settling required of the default horizon.
pub const HORIZON_FACTOR: f64 = 50.0;
/// Upper bound on the default horizon, binding when a bare decay rate is
/// far slower than the actual spectral gap.
pub const HORIZON_CAP: f64 = 2.0e5;
/// Relative residual the direct solver is expected to meet for
/// well-conditioned inputs.
pub const RESIDUAL_TOLERANCE: f64 = 1e-10;

const SYMMETRIZED_FLAG_TOL: f64 = 1e-12;
const ASYMMETRY_WARN_TOL: f64 = 1e-8;

#[derive(Debug, Error)]
pub enum LyapunovError {
    #[error("drift matrix is not Hurwitz (spectral abscissa {spectral_abscissa:.6e}); the steady state is undefined")]
    NotHurwitz { spectral_abscissa: f64 },
    #[error("singular 36x36 Lyapunov system; A and -A share an eigenvalue")]
    SingularSystem,
    #[error("covariance integration diverged to non-finite values at step {step}")]
    Diverged { step: usize },
    #[error("invalid integration window: dt = {dt}, t_end = {t_end} (need dt > 0, t_end >= dt)")]
    InvalidWindow { dt: f64, t_end: f64 },
    #[error("initial covariance is not symmetric positive semidefinite (min eigenvalue {min_eigenvalue:.3e})")]
    InvalidInitial { min_eigenvalue: f64 },
    #[error(transparent)]
    Eigen(#[from] StabilityError),
}

/// Solver output: the symmetrized steady-state covariance with its
/// verification data.
#[derive(Debug, Clone)]
pub struct SolveReport {
    pub covariance: CovarianceMatrix,
    /// `||A V + V A^T + D||_F / ||D||_F` for the returned covariance.
    pub residual_norm: f64,
    /// True when the `(V + V^T)/2` post-processing moved some entry by
    /// more than 1e-12.
    pub symmetrized: bool,
    /// Largest entry change from the symmetrization step.
    pub asymmetry: f64,
}

impl SolveReport {
    /// Asymmetry above 1e-8 signals a conditioning problem worth surfacing.
    pub fn asymmetry_warning(&self) -> bool {
        self.asymmetry > ASYMMETRY_WARN_TOL
    }
}

/// Solves `A V + V A^T = -D` for the steady-state covariance.
///
/// Rejects non-Hurwitz drift matrices: the linear system may still be
/// solvable there, but the result would not be a steady state of anything.
pub fn solve_steady_covariance(
    a: &DriftMatrix,
    d: &DiffusionMatrix,
) -> Result<SolveReport, LyapunovError> {
    let stability = assess_stability(a)?;
    if !stability.stable {
        return Err(LyapunovError::NotHurwitz {
            spectral_abscissa: stability.spectral_abscissa,
        });
    }

    let am = a.as_matrix();
    // Column-major vec convention: vec(V)[j*6+i] = V[i,j], so
    // M[(j*6+i), (j'*6+i')] = delta_{jj'} A[i,i'] + A[j,j'] delta_{ii'}.
    let mut m = DMatrix::<f64>::zeros(36, 36);
    for j in 0..6 {
        for i in 0..6 {
            let row = j * 6 + i;
            for ip in 0..6 {
                m[(row, j * 6 + ip)] += am[(i, ip)];
            }
            for jp in 0..6 {
                m[(row, jp * 6 + i)] += am[(j, jp)];
            }
        }
    }
    let mut rhs = DVector::<f64>::zeros(36);
    for j in 0..6 {
        for i in 0..6 {
            rhs[j * 6 + i] = -d.as_matrix()[(i, j)];
        }
    }
    let solution = m.lu().solve(&rhs).ok_or(LyapunovError::SingularSystem)?;

    let mut raw = Mat6::zeros();
    for j in 0..6 {
        for i in 0..6 {
            raw[(i, j)] = solution[j * 6 + i];
        }
    }
    let unsymmetrized = CovarianceMatrix::from_matrix(raw);
    let asymmetry = unsymmetrized.max_asymmetry();
    let covariance = unsymmetrized.symmetrized();
    let residual_norm = lyapunov_residual(a, d, &covariance);
    Ok(SolveReport {
        covariance,
        residual_norm,
        symmetrized: asymmetry > SYMMETRIZED_FLAG_TOL,
        asymmetry,
    })
}

/// Relative Frobenius residual `||A V + V A^T + D||_F / ||D||_F`. Falls
/// back to the absolute norm when `D` is identically zero.
pub fn lyapunov_residual(a: &DriftMatrix, d: &DiffusionMatrix, v: &CovarianceMatrix) -> f64 {
    let am = a.as_matrix();
    let vm = v.as_matrix();
    let residual = am * vm + vm * am.transpose() + d.as_matrix();
    let denom = d.as_matrix().norm();
    if denom == 0.0 {
        residual.norm()
    } else {
        residual.norm() / denom
    }
}

/// Integrates `V' = A V + V A^T + D` from `v0` to `t_end` with classical
/// fourth-order Runge-Kutta at fixed step `dt`, re-symmetrizing after every
/// step. For Hurwitz `A` the iteration converges to the Lyapunov solution;
/// its discrete fixed point coincides with it because the ODE is linear.
pub fn evolve_covariance(
    a: &DriftMatrix,
    d: &DiffusionMatrix,
    v0: &CovarianceMatrix,
    dt: f64,
    t_end: f64,
) -> Result<CovarianceMatrix, LyapunovError> {
    if !dt.is_finite() || !t_end.is_finite() || dt <= 0.0 || t_end < dt {
        return Err(LyapunovError::InvalidWindow { dt, t_end });
    }
    let v0_sym = v0.symmetrized();
    let min_eig = v0_sym
        .as_matrix()
        .symmetric_eigenvalues()
        .iter()
        .fold(f64::INFINITY, |m, x| m.min(*x));
    let scale = v0.as_matrix().norm().max(1.0);
    if !v0.is_symmetric() || min_eig < -1e-9 * scale {
        return Err(LyapunovError::InvalidInitial {
            min_eigenvalue: min_eig,
        });
    }

    let am = *a.as_matrix();
    let dm = *d.as_matrix();
    // V symmetric makes A V + V A^T = S + S^T with S = A V.
    let deriv = |v: &Mat6| -> Mat6 {
        let s = am * v;
        s + s.transpose() + dm
    };

    let full_steps = (t_end / dt).floor() as usize;
    let remainder = t_end - full_steps as f64 * dt;
    let mut v = *v0_sym.as_matrix();
    let step_once = |v: &Mat6, h: f64| -> Mat6 {
        let k1 = deriv(v);
        let k2 = deriv(&(v + k1 * (h / 2.0)));
        let k3 = deriv(&(v + k2 * (h / 2.0)));
        let k4 = deriv(&(v + k3 * h));
        let next = v + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
        (next + next.transpose()) * 0.5
    };
    for step in 0..full_steps {
        v = step_once(&v, dt);
        if !v.iter().all(|x| x.is_finite()) {
            return Err(LyapunovError::Diverged { step: step + 1 });
        }
    }
    if remainder > dt * 1e-12 {
        v = step_once(&v, remainder);
        if !v.iter().all(|x| x.is_finite()) {
            return Err(LyapunovError::Diverged {
                step: full_steps + 1,
            });
        }
    }
    Ok(CovarianceMatrix::from_matrix(v))
}

/// Default integration horizon for reaching the steady state of a Hurwitz
/// drift matrix: [`HORIZON_FACTOR`] decay constants of the slowest scale,
/// taking the slower of the bare decay rates (twice the diagonal magnitudes)
/// and the spectral gap, capped at [`HORIZON_CAP`].
pub fn default_horizon(a: &DriftMatrix) -> Result<f64, LyapunovError> {
    let stability = assess_stability(a)?;
    if !stability.stable {
        return Err(LyapunovError::NotHurwitz {
            spectral_abscissa: stability.spectral_abscissa,
        });
    }
    let gap = -stability.spectral_abscissa;
    let mut slowest = gap;
    for i in 0..6 {
        let rate = -2.0 * a.as_matrix()[(i, i)];
        if rate > 0.0 {
            slowest = slowest.min(rate);
        }
    }
    Ok((HORIZON_FACTOR / slowest).min(HORIZON_CAP))
}
