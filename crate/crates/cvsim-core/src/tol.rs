//! Tolerance constants and scaled floating-point comparisons.
//!
//! The protocol pipelines produce matrices whose entries grow like
//! `cosh^3(2r)` (about `4e4` at `r = 2`), so equality checks use a *scaled*
//! tolerance: `|a - b| <= tol * max(1, |a|, |b|)`. At vacuum scale this
//! coincides with the absolute reading; at large magnitudes it compares
//! relative error, which is what double precision can actually deliver.

/// Entrywise tolerance for algebraic identities in double precision
/// (closed form vs. pipeline, symmetry, direct matrix equalities).
pub const ALGEBRAIC: f64 = 1e-12;

/// Tolerance for eigenvalue- and factorization-based checks, two orders
/// looser than [`ALGEBRAIC`] to absorb the extra cancellation in
/// discriminants and elimination pivots.
pub const FACTORIZATION: f64 = 1e-9;

/// Half-width of the band around a partial-transpose symplectic eigenvalue
/// of 1 that is classified as the separable boundary.
pub const SEPARABILITY_BAND: f64 = 1e-10;

/// Coefficient of the symplectic-eigenvalue discriminant clamp; see
/// [`disc_tolerance`].
pub const DISC_CLAMP: f64 = 1e-12;

/// Scale factor used by the scaled comparisons: `max(1, |a|, |b|)`.
#[inline]
#[must_use]
pub fn scale_of(a: f64, b: f64) -> f64 {
    let m = libm::fabs(a).max(libm::fabs(b));
    m.max(1.0)
}

/// Scaled closeness test: `|a - b| <= tol * max(1, |a|, |b|)`.
#[inline]
#[must_use]
pub fn within(a: f64, b: f64, tol: f64) -> bool {
    libm::fabs(a - b) <= tol * scale_of(a, b)
}

/// Scaled difference `|a - b| / max(1, |a|, |b|)`, the quantity [`within`]
/// thresholds. Useful for reporting how far apart two values are.
#[inline]
#[must_use]
pub fn scaled_diff(a: f64, b: f64) -> f64 {
    libm::fabs(a - b) / scale_of(a, b)
}

/// Acceptance threshold for physicality verdicts on a matrix whose largest
/// absolute entry is `max_entry`.
///
/// A symplectic eigenvalue (or an elimination pivot of the uncertainty
/// matrix) computed from entries of magnitude `m` carries rounding noise
/// proportional to `m^2` — the defining expressions are quadratic in the
/// entries and suffer catastrophic cancellation exactly at the physicality
/// boundary. A pure two-mode squeezed state at `r = 5` (entries ~1.1e4)
/// cannot evaluate better than `|nu - 1| ~ 1e-7` even from exactly stored
/// entries, so a flat `1e-9` would reject legitimate pure states. The floor
/// of `1e-9` applies at vacuum scale.
#[inline]
#[must_use]
pub fn physicality_threshold(max_entry: f64) -> f64 {
    let m = libm::fabs(max_entry).max(1.0);
    (1e-10 * m * m).max(FACTORIZATION)
}

/// Clamping tolerance for the two-mode symplectic-eigenvalue discriminant
/// `Delta^2 - 4 det(sigma)`.
///
/// The discriminant is a degree-4 polynomial in the entries, so its rounding
/// noise scales with `max_entry^4` (a degenerate pair at entries ~3.5e4 has
/// been observed to produce a raw discriminant of -11 where the exact value
/// is 0). Magnitudes up to this tolerance are treated as an exactly
/// degenerate pair; more negative values indicate a matrix that is not a
/// covariance matrix at all.
#[inline]
#[must_use]
pub fn disc_tolerance(delta: f64, max_entry: f64) -> f64 {
    let m = libm::fabs(max_entry).max(1.0);
    let m2 = m * m;
    DISC_CLAMP * (delta * delta).max(m2 * m2).max(1.0)
}

/// Column-residual threshold used when an `LDLᵀ` sweep meets a numerically
/// zero pivot: the rest of that column must be this small for the matrix to
/// still count as positive semidefinite.
///
/// A zero pivot of a PSD matrix forces a zero column in exact arithmetic,
/// but elimination fill-in leaves residuals that grow with entry size; the
/// geometric mean of the pivot tolerance and the entry scale separates that
/// noise from a genuine indefinite direction (whose column entry is of
/// order the matrix entries themselves).
#[inline]
#[must_use]
pub fn zero_pivot_column_threshold(max_entry: f64) -> f64 {
    let m = libm::fabs(max_entry).max(1.0);
    libm::sqrt(physicality_threshold(max_entry) * m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scaled_comparison_is_absolute_at_small_scale() {
        assert!(within(0.5, 0.5 + 5e-13, ALGEBRAIC));
        assert!(!within(0.5, 0.5 + 5e-12, ALGEBRAIC));
    }

    #[test]
    fn scaled_comparison_is_relative_at_large_scale() {
        // 1e-9 absolute error on values of size 4e4 is well inside a
        // 1e-12 relative band.
        assert!(within(4.0e4, 4.0e4 + 1e-9, ALGEBRAIC));
        assert!(!within(4.0e4, 4.0e4 + 1e-6, ALGEBRAIC));
    }

    #[test]
    fn physicality_threshold_floors_at_vacuum_scale() {
        assert_eq!(physicality_threshold(1.0), FACTORIZATION);
        assert_eq!(physicality_threshold(0.3), FACTORIZATION);
        // Grows quadratically once the matrix is large.
        let thr = physicality_threshold(1.1e4);
        assert!(thr > 1e-3 && thr < 1e-1);
    }

    #[test]
    fn disc_tolerance_tracks_fourth_power() {
        let tol = disc_tolerance(1.9e10_f64.sqrt(), 3.5e4);
        // Must absorb the observed -11 noise case without clamping O(1)
        // genuine negatives at vacuum scale.
        assert!(tol > 11.0);
        assert!(disc_tolerance(2.0, 1.0) < 1e-10);
    }
}
