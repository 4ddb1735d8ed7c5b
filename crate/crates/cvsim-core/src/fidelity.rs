//! Gaussian fidelity between zero-mean states, in the determinant form
//! used throughout the protocols, plus the closed-form cloning fidelities.
//!
//! The scalar formula is `F = 1/(√(Σ + δ) − √δ)` with
//! `Σ = det(σ_in + σ_out)` and `δ = 4·(det σ_in − ¼)·(det σ_out − ¼)`,
//! determinants taken over the full `2n × 2n` matrices. For one mode this
//! is the standard Gaussian fidelity; for two modes it is applied in the
//! same determinant form, which is how the broadcast figure of merit `F_B`
//! is defined (not the general multimode Uhlmann fidelity).

use crate::cloning::closed_p_m;
use crate::error::{Error, Result};
use crate::gaussian::{is_physical, CovarianceMatrix};

/// A fidelity value together with the two determinant ingredients it was
/// computed from, so callers can audit the arithmetic.
///
/// Invariants for physical inputs: `value ∈ (0, 1]`,
/// `value = 1/(√(det_sum + delta) − √delta)` exactly as stored, and
/// `delta ≥ 0` up to rounding (`≥ −1e-12`), since every physical state has
/// `det σ ≥ 1` in vacuum-unit normalization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FidelityReport {
    /// The fidelity.
    pub value: f64,
    /// `det(σ_in + σ_out)`.
    pub det_sum: f64,
    /// `4·(det σ_in − ¼)·(det σ_out − ¼)`.
    pub delta: f64,
}

/// The raw fidelity scalar `1/(√(det_sum + delta) − √delta)`.
///
/// No validation: a negative argument under either square root propagates
/// as NaN, and a vanishing denominator as infinity. This is deliberate —
/// the closed-form variants evaluated over parameter grids produce
/// matrices that are not always physical, and the honest report for those
/// points is a non-finite value rather than a clamped one.
#[must_use]
pub fn fidelity_value(det_sum: f64, delta: f64) -> f64 {
    1.0 / (libm::sqrt(det_sum + delta) - libm::sqrt(delta))
}

fn report(sigma_in: &CovarianceMatrix, sigma_out: &CovarianceMatrix) -> FidelityReport {
    let sum = sum_cm(sigma_in, sigma_out);
    let det_sum = sum.det();
    let delta = 4.0 * (sigma_in.mat().det() - 0.25) * (sigma_out.mat().det() - 0.25);
    FidelityReport { value: fidelity_value(det_sum, delta), det_sum, delta }
}

fn sum_cm(a: &CovarianceMatrix, b: &CovarianceMatrix) -> crate::matrix::Mat {
    let d = a.dim();
    let mut out = crate::matrix::Mat::zeros(d);
    for r in 0..d {
        for c in 0..d {
            out.set(r, c, a.entry(r, c) + b.entry(r, c));
        }
    }
    out
}

fn check_shapes(sigma_in: &CovarianceMatrix, sigma_out: &CovarianceMatrix) -> Result<()> {
    if sigma_in.n_modes() != sigma_out.n_modes() {
        return Err(Error::ModeCountMismatch {
            left: sigma_in.n_modes(),
            right: sigma_out.n_modes(),
        });
    }
    if sigma_in.n_modes() > 2 {
        return Err(Error::UnsupportedModeCount {
            n_modes: sigma_in.n_modes(),
            max_supported: 2,
        });
    }
    Ok(())
}

/// Fidelity between two physical states of equal mode count (1 or 2
/// modes).
///
/// # Errors
///
/// - [`Error::ModeCountMismatch`] if the states differ in mode count.
/// - [`Error::UnsupportedModeCount`] above two modes — the determinant
///   form is only used for 1- and 2-mode states here.
/// - [`Error::NonPhysical`] (with the offending margin) if either state
///   violates the uncertainty principle.
pub fn gaussian_fidelity(
    sigma_in: &CovarianceMatrix,
    sigma_out: &CovarianceMatrix,
) -> Result<FidelityReport> {
    check_shapes(sigma_in, sigma_out)?;
    for sigma in [sigma_in, sigma_out] {
        let check = is_physical(sigma);
        if !check.physical {
            return Err(Error::NonPhysical { margin: check.margin });
        }
    }
    Ok(report(sigma_in, sigma_out))
}

/// Same computation as [`gaussian_fidelity`] without the physicality
/// gates: shapes are still validated, but unphysical inputs are evaluated
/// as-is and surface as NaN (negative root argument) or a value above 1.
///
/// Exists for diagnostics over closed-form matrices that are known to
/// leave the physical set on part of the parameter plane; prefer
/// [`gaussian_fidelity`] for anything that is supposed to be a state.
pub fn fidelity_report_raw(
    sigma_in: &CovarianceMatrix,
    sigma_out: &CovarianceMatrix,
) -> Result<FidelityReport> {
    check_shapes(sigma_in, sigma_out)?;
    Ok(report(sigma_in, sigma_out))
}

/// Closed-form fidelity of each clone against the squeezed input state:
/// `F = 1/(√((P + e^{2r})(M + e^{−2r}) + 3(PM − ¼)) − √(3(PM − ¼)))` with
/// the clone noise `(P, M)` from [`closed_p_m`].
///
/// The `3(PM − ¼)` term is the general `δ` specialized to a pure input
/// (`det σ_in = 1`), and `(P + e^{2r})(M + e^{−2r})` is `det(σ_in + σ_out)`
/// for the diagonal pair.
///
/// # Panics
///
/// If `r` is negative or either argument is not finite.
#[must_use]
pub fn clone_fidelity_closed(r: f64, phi: f64) -> f64 {
    assert!(r.is_finite() && r >= 0.0, "squeezing parameter must be finite and >= 0");
    assert!(phi.is_finite(), "amplifier phase must be finite");
    let (p, m) = closed_p_m(r, phi);
    let det_sum = (p + libm::exp(2.0 * r)) * (m + libm::exp(-2.0 * r));
    let delta = 3.0 * (p * m - 0.25);
    fidelity_value(det_sum, delta)
}

/// Cloning fidelity specialized to amplifier phase zero:
/// `F = 2/(√(8c² + 12c + 5) − √(3 + 6c))` with `c = cosh 2r`.
///
/// Equals [`clone_fidelity_closed`]`(r, 0.0)` up to rounding; kept as an
/// independent expression so the two routes check each other.
///
/// # Panics
///
/// If `r` is negative or not finite.
#[must_use]
pub fn clone_fidelity_phi0(r: f64) -> f64 {
    assert!(r.is_finite() && r >= 0.0, "squeezing parameter must be finite and >= 0");
    let c = libm::cosh(2.0 * r);
    2.0 / (libm::sqrt(8.0 * c * c + 12.0 * c + 5.0) - libm::sqrt(3.0 + 6.0 * c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::identity_cm;
    use alloc::vec;
    use approx::assert_abs_diff_eq;

    fn squeezed_cm(r: f64) -> CovarianceMatrix {
        CovarianceMatrix::new(1, vec![(2.0 * r).exp(), 0.0, 0.0, (-2.0 * r).exp()]).unwrap()
    }

    #[test]
    fn identical_pure_states_have_unit_fidelity() {
        for r in [0.0, 0.5, 1.5] {
            let sigma = squeezed_cm(r);
            let rep = gaussian_fidelity(&sigma, &sigma).unwrap();
            assert_abs_diff_eq!(rep.value, 1.0, epsilon = 1e-13);
            assert_abs_diff_eq!(rep.det_sum, 4.0, epsilon = 1e-12);
            assert_abs_diff_eq!(rep.delta, 2.25, epsilon = 1e-12);
        }
    }

    #[test]
    fn two_mode_vacuum_pair_evaluates_the_determinant_form() {
        // det(2·I₄) = 16, δ = 4·(3/4)² = 9/4: F = 1/(√18.25 − 1.5).
        let vac = identity_cm(2).unwrap();
        let rep = gaussian_fidelity(&vac, &vac).unwrap();
        let expect = 1.0 / (18.25f64.sqrt() - 1.5);
        assert_eq!(rep.det_sum, 16.0);
        assert_eq!(rep.delta, 2.25);
        assert_abs_diff_eq!(rep.value, expect, epsilon = 1e-15);
        assert_abs_diff_eq!(rep.value, 0.3607501170411729, epsilon = 1e-15);
        // The raw scalar route agrees.
        assert_eq!(rep.value, fidelity_value(16.0, 2.25));
    }

    #[test]
    fn shape_and_physicality_violations_are_rejected() {
        let one = identity_cm(1).unwrap();
        let two = identity_cm(2).unwrap();
        assert!(matches!(
            gaussian_fidelity(&one, &two),
            Err(Error::ModeCountMismatch { left: 1, right: 2 })
        ));
        let three = identity_cm(3).unwrap();
        assert!(matches!(
            gaussian_fidelity(&three, &three),
            Err(Error::UnsupportedModeCount { n_modes: 3, max_supported: 2 })
        ));
        let below = CovarianceMatrix::new(1, vec![0.5, 0.0, 0.0, 0.5]).unwrap();
        assert!(matches!(
            gaussian_fidelity(&below, &one),
            Err(Error::NonPhysical { .. })
        ));
        // The raw route skips only the physicality gate, not the shapes.
        assert!(fidelity_report_raw(&below, &one).is_ok());
        assert!(fidelity_report_raw(&one, &two).is_err());
    }

    #[test]
    fn raw_route_propagates_nan_for_indefinite_determinants() {
        assert!(fidelity_value(-1.0, 0.25).is_nan());
        assert!(fidelity_value(4.0, -0.5).is_nan());
    }

    #[test]
    fn clone_fidelity_is_one_at_zero_squeezing() {
        for phi in [0.0, core::f64::consts::PI / 8.0, core::f64::consts::PI / 4.0] {
            assert_abs_diff_eq!(clone_fidelity_closed(0.0, phi), 1.0, epsilon = 1e-14);
        }
        assert_abs_diff_eq!(clone_fidelity_phi0(0.0), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn clone_fidelity_matches_frozen_reference_points() {
        assert_abs_diff_eq!(clone_fidelity_phi0(0.5), 0.661587544962521, epsilon = 1e-14);
        assert_abs_diff_eq!(
            clone_fidelity_closed(0.5, core::f64::consts::PI / 4.0),
            0.735901422739941,
            epsilon = 1e-14
        );
        assert_abs_diff_eq!(
            clone_fidelity_closed(1.0, core::f64::consts::PI / 8.0),
            0.276190411733482,
            epsilon = 1e-14
        );
    }

    #[test]
    fn phase_zero_specialization_agrees_with_general_form() {
        let mut r = 0.0;
        while r <= 2.0 {
            let general = clone_fidelity_closed(r, 0.0);
            let special = clone_fidelity_phi0(r);
            assert!(
                (general - special).abs() <= 1e-12,
                "phi = 0 routes disagree at r = {r}: {general} vs {special}"
            );
            r += 0.1;
        }
    }

    #[test]
    fn clone_fidelity_decays_monotonically_in_squeezing() {
        for phi in [0.0, core::f64::consts::PI / 4.0] {
            let mut prev = f64::INFINITY;
            let mut r = 0.0;
            while r <= 3.0 {
                let f = clone_fidelity_closed(r, phi);
                assert!(f > 0.0 && f <= 1.0 + 1e-15);
                assert!(f <= prev + 1e-15, "fidelity rises at r = {r}, phi = {phi}");
                prev = f;
                r += 0.05;
            }
        }
        assert!(clone_fidelity_phi0(5.0) < 0.01);
        assert_abs_diff_eq!(clone_fidelity_phi0(5.0), 6.473501e-05, epsilon = 1e-10);
    }

    #[test]
    #[should_panic(expected = "squeezing parameter")]
    fn negative_squeezing_panics() {
        let _ = clone_fidelity_closed(-0.1, 0.0);
    }
}
