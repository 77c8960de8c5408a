//! Shared test oracles, independent of the production code paths they
//! check: an analytic two-mode squeezed covariance, a from-scratch
//! partial-transpose symplectic eigenvalue, and random stable systems.

use nalgebra::Matrix4;
use omsim::entanglement::PairCovariance;
use omsim::model::{DiffusionMatrix, DriftMatrix, Mat6};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Two-mode squeezed vacuum with squeezing parameter `r` in the 1/2-vacuum
/// convention: diagonal blocks `cosh(2r)/2 I`, cross block
/// `sinh(2r)/2 diag(1, -1)`.
pub fn tmsv_pair_covariance(r: f64) -> PairCovariance {
    let c = (2.0 * r).cosh() / 2.0;
    let s = (2.0 * r).sinh() / 2.0;
    #[rustfmt::skip]
    let chi = Matrix4::new(
        c,   0.0, s,   0.0,
        0.0, c,   0.0, -s,
        s,   0.0, c,   0.0,
        0.0, -s,  0.0, c,
    );
    PairCovariance::from_matrix(chi)
}

/// General-method minimum symplectic eigenvalue of the partially
/// transposed pair state: flip the second mode's momentum, then take the
/// smallest modulus among the eigenvalues of `Omega * chi_tilde`.
pub fn pt_symplectic_nu_minus(chi: &PairCovariance) -> f64 {
    let flip = Matrix4::from_diagonal(&[1.0, 1.0, 1.0, -1.0].into());
    let tilde = flip * chi.as_matrix() * flip;
    let mut omega = Matrix4::<f64>::zeros();
    omega[(0, 1)] = 1.0;
    omega[(1, 0)] = -1.0;
    omega[(2, 3)] = 1.0;
    omega[(3, 2)] = -1.0;
    (omega * tilde)
        .complex_eigenvalues()
        .iter()
        .map(|ev| ev.norm())
        .fold(f64::INFINITY, f64::min)
}

/// Random Hurwitz matrix `R - (||R||_F + 1) I`: the Frobenius norm bounds
/// the spectral radius, so every eigenvalue real part is at most -1.
pub fn random_hurwitz(rng: &mut ChaCha8Rng) -> DriftMatrix {
    let r = Mat6::from_fn(|_, _| rng.random_range(-1.0..1.0));
    DriftMatrix::from_matrix(r - Mat6::identity() * (r.norm() + 1.0))
}

pub fn random_diagonal_psd(rng: &mut ChaCha8Rng) -> DiffusionMatrix {
    let mut diag = [0.0; 6];
    for entry in &mut diag {
        *entry = rng.random_range(0.01..1.0);
    }
    DiffusionMatrix::from_diagonal(diag)
}
