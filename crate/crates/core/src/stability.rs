//! Hurwitz stability of the drift matrix.
//!
//! The steady-state covariance is only meaningful when every eigenvalue of
//! the drift matrix has a strictly negative real part. The verdict comes
//! from a dense nonsymmetric eigendecomposition rather than Routh-Hurwitz
//! determinant tables: same answer, better conditioned at this size, and
//! the spectrum is reused to estimate integration horizons.

use nalgebra::linalg::Schur;
use num_complex::Complex64;
use thiserror::Error;

use crate::model::DriftMatrix;

/// Margin below zero the spectral abscissa must clear to count as stable.
pub const STABILITY_EPS: f64 = 1e-12;

const SCHUR_MAX_ITER: usize = 10_000;

#[derive(Debug, Error)]
pub enum StabilityError {
    #[error("eigenvalue iteration did not converge for matrix {0:?}")]
    EigenDecomposition(Box<crate::model::Mat6>),
}

/// Spectrum-based stability verdict for a drift matrix.
#[derive(Debug, Clone)]
pub struct StabilityReport {
    /// All six eigenvalues, sorted by descending real part.
    pub eigenvalues: [Complex64; 6],
    /// Largest eigenvalue real part.
    pub spectral_abscissa: f64,
    /// True iff `spectral_abscissa < -`[`STABILITY_EPS`].
    pub stable: bool,
    /// True when the abscissa sits inside the `+-`[`STABILITY_EPS`] band
    /// around zero; such points are reported unstable.
    pub marginal: bool,
}

/// Computes the spectrum of the drift matrix and classifies it.
pub fn assess_stability(a: &DriftMatrix) -> Result<StabilityReport, StabilityError> {
    let schur = Schur::try_new(*a.as_matrix(), f64::EPSILON, SCHUR_MAX_ITER)
        .ok_or_else(|| StabilityError::EigenDecomposition(Box::new(*a.as_matrix())))?;
    let spectrum = schur.complex_eigenvalues();
    let mut eigenvalues = [Complex64::new(0.0, 0.0); 6];
    for (slot, ev) in eigenvalues.iter_mut().zip(spectrum.iter()) {
        *slot = *ev;
    }
    eigenvalues.sort_by(|x, y| {
        (y.re, y.im)
            .partial_cmp(&(x.re, x.im))
            .expect("eigenvalues of a real matrix are finite")
    });
    let spectral_abscissa = eigenvalues[0].re;
    Ok(StabilityReport {
        eigenvalues,
        spectral_abscissa,
        stable: spectral_abscissa < -STABILITY_EPS,
        marginal: spectral_abscissa.abs() <= STABILITY_EPS,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{build_drift_matrix, Mat6, SystemParams};
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use proptest::prelude::*;

    #[test]
    fn scaled_identity_is_stable() {
        let report = assess_stability(&DriftMatrix::from_matrix(Mat6::identity() * -0.5)).unwrap();
        assert!(report.stable);
        assert!(!report.marginal);
        assert_relative_eq!(report.spectral_abscissa, -0.5, max_relative = 1e-12);
        for ev in report.eigenvalues {
            assert_relative_eq!(ev.re, -0.5, max_relative = 1e-12);
            assert_abs_diff_eq!(ev.im, 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn decoupled_blocks_have_exact_eigenvalues() {
        let params = SystemParams {
            g_coupling_a: 0.0,
            g_coupling_m: 0.0,
            ..SystemParams::default()
        };
        let report = assess_stability(&build_drift_matrix(&params).unwrap()).unwrap();
        assert!(report.stable);
        assert_relative_eq!(report.spectral_abscissa, -params.gamma_m / 2.0, max_relative = 1e-9);

        // Expected pairs -rate/2 +- i*detuning from the three blocks.
        let mut expected = vec![
            Complex64::new(-params.kappa / 2.0, params.delta_tilde),
            Complex64::new(-params.kappa / 2.0, -params.delta_tilde),
            Complex64::new(-params.gamma_a / 2.0, params.delta_a),
            Complex64::new(-params.gamma_a / 2.0, -params.delta_a),
            Complex64::new(-params.gamma_m / 2.0, params.omega_m),
            Complex64::new(-params.gamma_m / 2.0, -params.omega_m),
        ];
        for ev in report.eigenvalues {
            let (idx, _) = expected
                .iter()
                .enumerate()
                .min_by(|(_, a), (_, b)| {
                    (ev - *a).norm().partial_cmp(&(ev - *b).norm()).unwrap()
                })
                .unwrap();
            let matched = expected.swap_remove(idx);
            assert_abs_diff_eq!((ev - matched).norm(), 0.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn eigenvalues_sorted_by_descending_real_part() {
        let report =
            assess_stability(&build_drift_matrix(&SystemParams::default()).unwrap()).unwrap();
        for pair in report.eigenvalues.windows(2) {
            assert!(pair[0].re >= pair[1].re);
        }
    }

    #[test]
    fn trace_matches_eigenvalue_sum() {
        let a = build_drift_matrix(&SystemParams::default()).unwrap();
        let report = assess_stability(&a).unwrap();
        let params = SystemParams::default();
        let trace = -(params.kappa + params.gamma_a + params.gamma_m);
        let sum: f64 = report.eigenvalues.iter().map(|ev| ev.re).sum();
        assert_abs_diff_eq!(sum, trace, epsilon = 1e-10);
        assert_abs_diff_eq!(a.as_matrix().trace(), trace, epsilon = 1e-14);
    }

    #[test]
    fn reference_grid_is_stable_everywhere() {
        // Coarse scan of the coupling/detuning region used by the sweeps.
        for i in 0..=6 {
            for j in 0..=6 {
                let params = SystemParams {
                    g_coupling_a: 0.3 * i as f64 / 6.0,
                    delta_a: 0.5 + 1.0 * j as f64 / 6.0,
                    ..SystemParams::default()
                };
                let report =
                    assess_stability(&build_drift_matrix(&params).unwrap()).unwrap();
                assert!(
                    report.stable,
                    "unstable at g_a={}, delta_a={}",
                    params.g_coupling_a, params.delta_a
                );
            }
        }
    }

    #[test]
    fn blue_detuned_strong_coupling_is_unstable() {
        let params = SystemParams {
            delta_tilde: 1.0,
            ..SystemParams::default()
        };
        let report = assess_stability(&build_drift_matrix(&params).unwrap()).unwrap();
        assert!(!report.stable);
        assert!(report.spectral_abscissa > 0.1);
    }

    #[test]
    fn zero_matrix_is_marginal() {
        let report = assess_stability(&DriftMatrix::from_matrix(Mat6::zeros())).unwrap();
        assert!(!report.stable);
        assert!(report.marginal);
    }

    proptest! {
        /// Uniform time rescaling A -> c A (c > 0) scales the abscissa by c
        /// and never flips the verdict.
        #[test]
        fn rescaling_preserves_verdict(c in 1e-3_f64..1e3, ga in 0.0_f64..0.3, dt in -1.5_f64..1.5) {
            let params = SystemParams {
                g_coupling_a: ga,
                delta_tilde: dt,
                ..SystemParams::default()
            };
            let a = build_drift_matrix(&params).unwrap();
            let base = assess_stability(&a).unwrap();
            let scaled =
                assess_stability(&DriftMatrix::from_matrix(a.as_matrix() * c)).unwrap();
            prop_assert!(
                (scaled.spectral_abscissa - c * base.spectral_abscissa).abs()
                    <= 1e-8 * (c * base.spectral_abscissa).abs().max(1e-12)
            );
            if !base.marginal && !scaled.marginal {
                prop_assert_eq!(base.stable, scaled.stable);
            }
        }

        /// With both couplings off, every positive-rate system is stable.
        #[test]
        fn decoupled_always_stable(
            kappa in 1e-6_f64..10.0,
            gamma_a in 1e-6_f64..10.0,
            gamma_m in 1e-6_f64..10.0,
            da in -3.0_f64..3.0,
        ) {
            let params = SystemParams {
                kappa,
                gamma_a,
                gamma_m,
                delta_a: da,
                g_coupling_a: 0.0,
                g_coupling_m: 0.0,
                ..SystemParams::default()
            };
            let report = assess_stability(&build_drift_matrix(&params).unwrap()).unwrap();
            prop_assert!(report.stable);
        }
    }
}
