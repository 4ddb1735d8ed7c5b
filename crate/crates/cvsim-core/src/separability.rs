//! Two-mode separability analysis via the positivity-of-partial-transpose
//! criterion, evaluated through closed-form symplectic eigenvalues.
//!
//! For two-mode Gaussian states the criterion is necessary and sufficient:
//! the state is entangled exactly when the smallest symplectic eigenvalue
//! of the partially transposed covariance matrix drops below 1.

use crate::error::{Error, Result};
use crate::gaussian::{is_physical, CovarianceMatrix};
use crate::matrix::Mat;
use crate::tol;

/// Verdict of [`is_separable_two_mode`].
///
/// `margin` is `min_pt_symplectic_eigenvalue − 1`: negative means the
/// partial transpose violates the uncertainty bound, i.e. entanglement.
/// Verdicts within [`tol::SEPARABILITY_BAND`] of the boundary are
/// classified separable, so a product of vacua (eigenvalue exactly 1)
/// comes out separable rather than hinging on rounding direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeparabilityVerdict {
    /// Whether the partial-transpose criterion certifies entanglement.
    pub entangled: bool,
    /// Smallest symplectic eigenvalue of the partially transposed state.
    pub min_pt_symplectic_eigenvalue: f64,
    /// `min_pt_symplectic_eigenvalue − 1`.
    pub margin: f64,
}

/// Partial transposition of a two-mode state: flips the sign of the chosen
/// mode's `p` quadrature (conjugation by `Λ = diag(1, 1, 1, −1)` for mode
/// 2). Exact — entries are sign-flipped, never recomputed — and involutive.
///
/// # Errors
///
/// - [`Error::UnsupportedModeCount`] if `sigma` is not a two-mode state.
/// - [`Error::ModeIndexOutOfRange`] if `mode` is not 1 or 2.
pub fn partial_transpose_two_mode(
    sigma: &CovarianceMatrix,
    mode: usize,
) -> Result<CovarianceMatrix> {
    if sigma.n_modes() != 2 {
        return Err(Error::UnsupportedModeCount { n_modes: sigma.n_modes(), max_supported: 2 });
    }
    if mode == 0 || mode > 2 {
        return Err(Error::ModeIndexOutOfRange { index: mode, n_modes: 2 });
    }
    let p_idx = 2 * (mode - 1) + 1;
    let mut m = Mat::zeros(4);
    for r in 0..4 {
        for c in 0..4 {
            let flip = (r == p_idx) != (c == p_idx);
            let v = sigma.entry(r, c);
            m.set(r, c, if flip { -v } else { v });
        }
    }
    Ok(CovarianceMatrix::from_mat(2, m))
}

/// Symplectic eigenvalues `(ν₋, ν₊)` of a two-mode covariance matrix by
/// the determinant closed form.
///
/// Writing `σ` in `2×2` blocks `[[A, C], [Cᵀ, B]]` and
/// `Δ = det A + det B + 2 det C`, the squared eigenvalues are
/// `(Δ ± √(Δ² − 4 det σ))/2`.
///
/// The discriminant is a degree-4 polynomial of the entries, so rounding
/// can push an exactly-zero discriminant slightly to either side;
/// magnitudes within `1e-12 · max(1, Δ², max|σ|⁴)` are clamped to an exact
/// double root. This matters for *pure* states, whose eigenvalue pair is
/// degenerate at 1: without the clamp a two-mode squeezed state evaluates
/// to `|ν − 1| ≈ 1e-8` instead of `1e-15`.
///
/// Squared eigenvalues that land slightly negative are clamped to zero;
/// they can only arise from matrices far outside the physical set.
///
/// # Errors
///
/// - [`Error::UnsupportedModeCount`] if `sigma` is not a two-mode state.
/// - [`Error::IndefiniteSpectrum`] if the discriminant is negative beyond
///   its rounding allowance — the input has complex symplectic spectrum
///   and is not a covariance matrix.
pub fn symplectic_eigenvalues_two_mode(sigma: &CovarianceMatrix) -> Result<(f64, f64)> {
    if sigma.n_modes() != 2 {
        return Err(Error::UnsupportedModeCount { n_modes: sigma.n_modes(), max_supported: 2 });
    }
    let m = sigma.mat();
    let det_a = m.at(0, 0) * m.at(1, 1) - m.at(0, 1) * m.at(1, 0);
    let det_b = m.at(2, 2) * m.at(3, 3) - m.at(2, 3) * m.at(3, 2);
    let det_c = m.at(0, 2) * m.at(1, 3) - m.at(0, 3) * m.at(1, 2);
    let delta = det_a + det_b + 2.0 * det_c;
    let mut disc = delta * delta - 4.0 * m.det();
    let tolerance = tol::disc_tolerance(delta, m.max_abs());
    if libm::fabs(disc) <= tolerance {
        disc = 0.0;
    } else if disc < 0.0 {
        return Err(Error::IndefiniteSpectrum { discriminant: disc, tolerance });
    }
    let root = libm::sqrt(disc);
    let nu_minus = libm::sqrt(((delta - root) / 2.0).max(0.0));
    let nu_plus = libm::sqrt(((delta + root) / 2.0).max(0.0));
    Ok((nu_minus, nu_plus))
}

/// Separability of a physical two-mode state by the partial-transpose
/// criterion: entangled exactly when the smallest symplectic eigenvalue of
/// the partial transpose is below `1 − 1e-10`; boundary cases count as
/// separable.
///
/// # Errors
///
/// - [`Error::UnsupportedModeCount`] if `sigma` is not a two-mode state.
/// - [`Error::NonPhysical`] (reporting the physicality margin) if `sigma`
///   violates the uncertainty principle — the criterion is only meaningful
///   for states.
/// - [`Error::IndefiniteSpectrum`] propagated from the eigenvalue closed
///   form (unreachable for inputs that passed the physicality gate).
pub fn is_separable_two_mode(sigma: &CovarianceMatrix) -> Result<SeparabilityVerdict> {
    if sigma.n_modes() != 2 {
        return Err(Error::UnsupportedModeCount { n_modes: sigma.n_modes(), max_supported: 2 });
    }
    let check = is_physical(sigma);
    if !check.physical {
        return Err(Error::NonPhysical { margin: check.margin });
    }
    let pt = partial_transpose_two_mode(sigma, 2)?;
    let (nu_minus, _) = symplectic_eigenvalues_two_mode(&pt)?;
    Ok(SeparabilityVerdict {
        entangled: nu_minus < 1.0 - tol::SEPARABILITY_BAND,
        min_pt_symplectic_eigenvalue: nu_minus,
        margin: nu_minus - 1.0,
    })
}
