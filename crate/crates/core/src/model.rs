//! Physical parameters of the linearized three-mode system and construction
//! of the drift and diffusion matrices that govern its quadrature dynamics.
//!
//! The system couples one optical cavity mode to a high-frequency acoustic
//! (Brillouin) mode and to a mechanical oscillator. All rates are expressed
//! in units of the mechanical frequency `omega_m`, which is 1 in scaled
//! units; an optional SI scale is carried along for reporting only.
//!
//! Quadrature ordering is fixed throughout the crate:
//! `(x_opt, y_opt, q_ac, p_ac, q_mech, p_mech)`, with the vacuum variance
//! normalized to 1/2 per quadrature.

use nalgebra::Matrix6;
use num_complex::Complex64;
use thiserror::Error;

/// Dense real 6x6 matrix used by every linear-algebra kernel in this crate.
pub type Mat6 = Matrix6<f64>;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("phonon-phonon hopping is not supported (j_m = {0}, must be 0)")]
    UnsupportedHopping(f64),
    #[error("energy ratio must be positive and finite, got {0}")]
    NonPositiveEnergyRatio(f64),
    #[error("control cavity decay rate must be positive and finite, got {0}")]
    NonPositiveControlDecay(f64),
    #[error("bare Brillouin coupling must be non-negative, got {0}")]
    NegativeBareCoupling(f64),
}

/// All physical rates, couplings and detunings of the linearized model,
/// in units of the mechanical frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    /// Mechanical angular frequency (the reference unit; 1 in scaled units).
    pub omega_m: f64,
    /// Effective optical detuning. Negative values drive the red sideband.
    pub delta_tilde: f64,
    /// Effective acoustic detuning.
    pub delta_a: f64,
    /// Optical decay rate.
    pub kappa: f64,
    /// Acoustic decay rate.
    pub gamma_a: f64,
    /// Mechanical decay rate.
    pub gamma_m: f64,
    /// Effective Brillouin coupling (real, non-negative).
    pub g_coupling_a: f64,
    /// Effective optomechanical coupling (real, non-negative).
    pub g_coupling_m: f64,
    /// Mechanical thermal phonon occupancy.
    pub n_th: f64,
    /// Phonon-phonon hopping rate. Only 0 is supported; see
    /// [`build_drift_matrix`].
    pub j_m: f64,
    /// Hopping phase in radians. Unused while `j_m` is 0.
    pub theta: f64,
    /// Single-photon optomechanical coupling (bookkeeping only).
    pub g_single_m: f64,
    /// Bare Brillouin coupling, consumed by
    /// [`effective_brillouin_coupling`].
    pub g_single_a: f64,
    /// Optional SI value of the mechanical angular frequency (rad/s),
    /// used only to convert scaled results for reporting.
    pub omega_m_si: Option<f64>,
}

impl Default for SystemParams {
    /// Reference parameter set: red-sideband drive, overdamped acoustic
    /// mode, weakly damped mechanical mode at 100 thermal phonons.
    fn default() -> Self {
        Self {
            omega_m: 1.0,
            delta_tilde: -1.0,
            delta_a: 1.0,
            kappa: 0.02,
            gamma_a: 0.4,
            gamma_m: 1.0e-4,
            g_coupling_a: 0.2,
            g_coupling_m: 0.15,
            n_th: 100.0,
            j_m: 0.0,
            theta: 0.0,
            g_single_m: 1.0e-4,
            g_single_a: 0.0,
            omega_m_si: Some(2.0 * std::f64::consts::PI * 1.0e6),
        }
    }
}

impl SystemParams {
    /// Checks every parameter invariant: strictly positive decay rates and
    /// mechanical frequency, non-negative occupancy and couplings, and
    /// finiteness of every field.
    pub fn validate(&self) -> Result<(), ModelError> {
        let fields = [
            ("omega_m", self.omega_m),
            ("delta_tilde", self.delta_tilde),
            ("delta_a", self.delta_a),
            ("kappa", self.kappa),
            ("gamma_a", self.gamma_a),
            ("gamma_m", self.gamma_m),
            ("g_coupling_a", self.g_coupling_a),
            ("g_coupling_m", self.g_coupling_m),
            ("n_th", self.n_th),
            ("j_m", self.j_m),
            ("theta", self.theta),
            ("g_single_m", self.g_single_m),
            ("g_single_a", self.g_single_a),
        ];
        for (name, value) in fields {
            if !value.is_finite() {
                return Err(ModelError::InvalidParameter(format!(
                    "{name} must be finite, got {value}"
                )));
            }
        }
        if self.omega_m <= 0.0 {
            return Err(ModelError::InvalidParameter(format!(
                "omega_m must be > 0, got {}",
                self.omega_m
            )));
        }
        for (name, value) in [
            ("kappa", self.kappa),
            ("gamma_a", self.gamma_a),
            ("gamma_m", self.gamma_m),
        ] {
            if value <= 0.0 {
                return Err(ModelError::InvalidParameter(format!(
                    "{name} must be > 0, got {value}"
                )));
            }
        }
        if self.n_th < 0.0 {
            return Err(ModelError::InvalidParameter(format!(
                "n_th must be >= 0, got {}",
                self.n_th
            )));
        }
        for (name, value) in [
            ("g_coupling_a", self.g_coupling_a),
            ("g_coupling_m", self.g_coupling_m),
        ] {
            if value < 0.0 {
                return Err(ModelError::InvalidParameter(format!(
                    "{name} must be >= 0, got {value}"
                )));
            }
        }
        Ok(())
    }
}

/// Mean thermal phonon occupancy of a bath mode at the given energy ratio
/// `hbar*omega / (k_B T)`: `1 / (exp(ratio) - 1)`.
pub fn thermal_occupancy(energy_ratio: f64) -> Result<f64, ModelError> {
    if !energy_ratio.is_finite() || energy_ratio <= 0.0 {
        return Err(ModelError::NonPositiveEnergyRatio(energy_ratio));
    }
    Ok(1.0 / energy_ratio.exp_m1())
}

/// Classical steady-state amplitude of the strongly driven control mode:
/// `-E2 / (i*delta2' - kappa2/2)`.
pub fn control_amplitude(
    drive_amplitude: f64,
    detuning_prime: f64,
    kappa_2: f64,
) -> Result<Complex64, ModelError> {
    if !kappa_2.is_finite() || kappa_2 <= 0.0 {
        return Err(ModelError::NonPositiveControlDecay(kappa_2));
    }
    Ok(-Complex64::new(drive_amplitude, 0.0) / Complex64::new(-kappa_2 / 2.0, detuning_prime))
}

/// Effective Brillouin coupling obtained by scaling the bare coupling with
/// the control-mode amplitude. Returns the real non-negative magnitude
/// `g_a * |alpha_2|`, consistent with the real-coupling convention used by
/// the drift matrix.
pub fn effective_brillouin_coupling(
    g_single_a: f64,
    alpha_2: Complex64,
) -> Result<f64, ModelError> {
    if !g_single_a.is_finite() || g_single_a < 0.0 {
        return Err(ModelError::NegativeBareCoupling(g_single_a));
    }
    Ok(g_single_a * alpha_2.norm())
}

/// Drift matrix `A` of the linearized quadrature dynamics `z' = A z + z_in`,
/// in the fixed ordering `(x_opt, y_opt, q_ac, p_ac, q_mech, p_mech)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriftMatrix(Mat6);

impl DriftMatrix {
    /// Wraps an arbitrary real 6x6 matrix. Intended for generic linear
    /// systems (e.g. randomized solver checks); [`build_drift_matrix`] is
    /// the physical constructor.
    pub fn from_matrix(entries: Mat6) -> Self {
        Self(entries)
    }

    pub fn as_matrix(&self) -> &Mat6 {
        &self.0
    }

    pub fn into_matrix(self) -> Mat6 {
        self.0
    }
}

/// Diagonal diffusion matrix `D` of the covariance equation
/// `V' = A V + V A^T + D`, fixed by the input-noise correlators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiffusionMatrix(Mat6);

impl DiffusionMatrix {
    /// Wraps an arbitrary matrix; [`build_diffusion_matrix`] is the
    /// physical constructor.
    pub fn from_matrix(entries: Mat6) -> Self {
        Self(entries)
    }

    pub fn from_diagonal(diag: [f64; 6]) -> Self {
        Self(Mat6::from_diagonal(&diag.into()))
    }

    pub fn as_matrix(&self) -> &Mat6 {
        &self.0
    }
}

/// Symmetrized second moments of the quadrature fluctuations,
/// `V_ij = <z_i z_j + z_j z_i> / 2`. Fully characterizes the Gaussian state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CovarianceMatrix(Mat6);

/// Relative tolerance for the symmetry invariant of covariance matrices.
pub const SYMMETRY_REL_TOL: f64 = 1e-10;

impl CovarianceMatrix {
    pub fn from_matrix(entries: Mat6) -> Self {
        Self(entries)
    }

    /// Vacuum product state: variance 1/2 on every quadrature.
    pub fn vacuum() -> Self {
        Self(Mat6::identity() * 0.5)
    }

    /// Vacuum optical and acoustic modes with a thermal mechanical mode of
    /// occupancy `n_th` (variance `n_th + 1/2` per mechanical quadrature).
    pub fn thermal_product(n_th: f64) -> Self {
        Self(Mat6::from_diagonal(
            &[0.5, 0.5, 0.5, 0.5, n_th + 0.5, n_th + 0.5].into(),
        ))
    }

    pub fn as_matrix(&self) -> &Mat6 {
        &self.0
    }

    pub fn into_matrix(self) -> Mat6 {
        self.0
    }

    /// Largest absolute change any entry would undergo under the
    /// symmetrization `(V + V^T) / 2`.
    pub fn max_asymmetry(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..6 {
            for j in (i + 1)..6 {
                worst = worst.max((self.0[(i, j)] - self.0[(j, i)]).abs() / 2.0);
            }
        }
        worst
    }

    /// Symmetry check at relative tolerance [`SYMMETRY_REL_TOL`], scaled by
    /// the largest entry magnitude.
    pub fn is_symmetric(&self) -> bool {
        let scale = self.0.iter().fold(0.0_f64, |m, x| m.max(x.abs())).max(1.0);
        self.max_asymmetry() <= SYMMETRY_REL_TOL * scale
    }

    pub fn symmetrized(&self) -> Self {
        Self((self.0 + self.0.transpose()) * 0.5)
    }
}

/// Builds the drift matrix from the parameters. Rejects `j_m != 0`: the
/// supported dynamics has no direct phonon-phonon block, and silently
/// inserting one would change the model.
pub fn build_drift_matrix(params: &SystemParams) -> Result<DriftMatrix, ModelError> {
    params.validate()?;
    if params.j_m != 0.0 {
        return Err(ModelError::UnsupportedHopping(params.j_m));
    }
    let SystemParams {
        omega_m,
        delta_tilde,
        delta_a,
        kappa,
        gamma_a,
        gamma_m,
        g_coupling_a: ga,
        g_coupling_m: gm,
        ..
    } = *params;
    #[rustfmt::skip]
    let a = Mat6::new(
        -kappa / 2.0, -delta_tilde,  0.0,           -ga,           0.0,           0.0,
        delta_tilde,  -kappa / 2.0,  ga,            0.0,           2.0 * gm,      0.0,
        0.0,          -ga,           -gamma_a / 2.0, delta_a,      0.0,           0.0,
        ga,           0.0,           -delta_a,      -gamma_a / 2.0, 0.0,          0.0,
        0.0,          0.0,           0.0,           0.0,           -gamma_m / 2.0, omega_m,
        2.0 * gm,     0.0,           0.0,           0.0,           -omega_m,      -gamma_m / 2.0,
    );
    Ok(DriftMatrix(a))
}

/// Builds the diffusion matrix: vacuum noise on the optical and acoustic
/// inputs, thermal noise of occupancy `n_th` on the mechanical input. The
/// acoustic bath occupancy is zero because the Brillouin mode frequency far
/// exceeds the mechanical one.
pub fn build_diffusion_matrix(params: &SystemParams) -> Result<DiffusionMatrix, ModelError> {
    params.validate()?;
    let mech = params.gamma_m * (2.0 * params.n_th + 1.0) / 2.0;
    Ok(DiffusionMatrix::from_diagonal([
        params.kappa / 2.0,
        params.kappa / 2.0,
        params.gamma_a / 2.0,
        params.gamma_a / 2.0,
        mech,
        mech,
    ]))
}
