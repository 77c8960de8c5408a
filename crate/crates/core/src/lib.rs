//! Steady-state entanglement of a linearized three-mode optomechanical
//! system: one optical cavity mode coupled to a high-frequency acoustic
//! (Brillouin) mode and to a mechanical oscillator.
//!
//! The pipeline is: build the drift and diffusion matrices from the
//! physical parameters ([`model`]), check Hurwitz stability ([`stability`]),
//! solve the Lyapunov equation for the steady-state covariance
//! ([`lyapunov`]), and quantify bipartite entanglement through the
//! logarithmic negativity ([`entanglement`]). The [`sweep`] module maps the
//! pipeline over parameter grids and [`cli`] exposes it as a command-line
//! tool with figure presets and CSV output.
//!
//! ```
//! use omsim::{
//!     assess_stability, build_diffusion_matrix, build_drift_matrix,
//!     extract_pair_covariance, logarithmic_negativity, solve_steady_covariance,
//!     ModePair, SystemParams,
//! };
//!
//! let params = SystemParams::default();
//! let a = build_drift_matrix(&params)?;
//! let d = build_diffusion_matrix(&params)?;
//! assert!(assess_stability(&a)?.stable);
//!
//! let v = solve_steady_covariance(&a, &d)?.covariance;
//! let chi = extract_pair_covariance(&v, ModePair::optical_mechanical());
//! let result = logarithmic_negativity(&chi)?;
//! assert!(result.entangled && result.log_negativity > 0.0);
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```

pub mod cli;
pub mod entanglement;
pub mod lyapunov;
pub mod model;
pub mod stability;
pub mod sweep;

pub use entanglement::{
    extract_pair_covariance, logarithmic_negativity, min_symplectic_eigenvalue_pt,
    physicality_check, compute_sigma, EntanglementResult, Mode, ModePair, PairCovariance,
};
pub use lyapunov::{
    default_horizon, evolve_covariance, lyapunov_residual, solve_steady_covariance, SolveReport,
};
pub use model::{
    build_diffusion_matrix, build_drift_matrix, control_amplitude, effective_brillouin_coupling,
    thermal_occupancy, CovarianceMatrix, DiffusionMatrix, DriftMatrix, SystemParams,
};
pub use stability::{assess_stability, StabilityReport};
pub use sweep::{run_sweep, SweepAxis, SweepParameter, SweepRecord};
