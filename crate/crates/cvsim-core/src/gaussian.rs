//! Covariance-matrix algebra: the [`CovarianceMatrix`] and
//! [`SymplecticTransform`] types plus the operations that compose, update,
//! reduce, and validate them.
//!
//! Quadrature ordering is `(x₁, p₁, x₂, p₂, …)` throughout, the vacuum
//! covariance matrix is the identity, and a transform `S` updates a state as
//! `σ → S·σ·Sᵀ`.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::matrix::Mat;
use crate::tol;

/// Covariance matrix of an `n`-mode zero-mean Gaussian state.
///
/// Stores a symmetric `2n × 2n` real matrix in quadrature ordering
/// `(x₁, p₁, …, xₙ, pₙ)`, normalized so the vacuum is exactly the identity.
/// Construction symmetrizes the entries (averaging the two triangles), so a
/// stored matrix is always *exactly* symmetric; inputs whose asymmetry
/// exceeds `1e-12` are rejected instead.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceMatrix {
    n_modes: usize,
    m: Mat,
}

impl CovarianceMatrix {
    /// Builds a covariance matrix from row-major entries.
    ///
    /// # Errors
    ///
    /// - [`Error::ZeroModes`] if `n_modes == 0`.
    /// - [`Error::BadEntryCount`] if `entries.len() != (2·n_modes)²`.
    /// - [`Error::NotSymmetric`] if any entry differs from its mirror by
    ///   more than `1e-12`.
    pub fn new(n_modes: usize, entries: Vec<f64>) -> Result<Self> {
        if n_modes == 0 {
            return Err(Error::ZeroModes);
        }
        let d = 2 * n_modes;
        if entries.len() != d * d {
            return Err(Error::BadEntryCount { expected: d * d, got: entries.len() });
        }
        let raw = Mat::from_rows(d, entries);
        let asym = raw.max_asymmetry();
        if asym > tol::ALGEBRAIC {
            return Err(Error::NotSymmetric { max_asymmetry: asym });
        }
        let mut m = raw;
        m.symmetrize();
        Ok(CovarianceMatrix { n_modes, m })
    }

    /// Wraps an internally produced, exactly symmetric matrix.
    pub(crate) fn from_mat(n_modes: usize, m: Mat) -> Self {
        debug_assert_eq!(m.dim(), 2 * n_modes);
        debug_assert_eq!(m.max_asymmetry(), 0.0);
        CovarianceMatrix { n_modes, m }
    }

    pub(crate) fn mat(&self) -> &Mat {
        &self.m
    }

    /// Number of modes.
    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    /// Matrix side length, `2 · n_modes`.
    pub fn dim(&self) -> usize {
        self.m.dim()
    }

    /// Entry at 0-based quadrature indices; mode `m` (1-based) occupies
    /// rows and columns `2(m−1)` and `2(m−1)+1`.
    pub fn entry(&self, row: usize, col: usize) -> f64 {
        self.m.at(row, col)
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[f64] {
        self.m.entries()
    }

    /// Largest entry magnitude.
    pub fn max_abs_entry(&self) -> f64 {
        self.m.max_abs()
    }

    /// Largest entrywise absolute difference from `other`.
    ///
    /// # Errors
    ///
    /// [`Error::ModeCountMismatch`] if the mode counts differ.
    pub fn max_abs_diff(&self, other: &CovarianceMatrix) -> Result<f64> {
        if self.n_modes != other.n_modes {
            return Err(Error::ModeCountMismatch { left: self.n_modes, right: other.n_modes });
        }
        Ok(self.m.max_abs_diff(&other.m))
    }
}

/// Linear symplectic map on `n` modes, stored as a `2n × 2n` real matrix in
/// the same quadrature ordering as [`CovarianceMatrix`].
///
/// Construction checks only the shape. Every builder in
/// [`crate::optics`] produces a matrix satisfying `S·J·Sᵀ = J`; arbitrary
/// matrices can be wrapped and then vetted with [`is_symplectic`], which is
/// also how the builders themselves are validated in the test suite.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticTransform {
    n_modes: usize,
    m: Mat,
}

impl SymplecticTransform {
    /// Wraps row-major entries as a transform on `n_modes` modes.
    ///
    /// # Errors
    ///
    /// - [`Error::ZeroModes`] if `n_modes == 0`.
    /// - [`Error::BadEntryCount`] if `entries.len() != (2·n_modes)²`.
    pub fn new(n_modes: usize, entries: Vec<f64>) -> Result<Self> {
        if n_modes == 0 {
            return Err(Error::ZeroModes);
        }
        let d = 2 * n_modes;
        if entries.len() != d * d {
            return Err(Error::BadEntryCount { expected: d * d, got: entries.len() });
        }
        Ok(SymplecticTransform { n_modes, m: Mat::from_rows(d, entries) })
    }

    pub(crate) fn from_mat(n_modes: usize, m: Mat) -> Self {
        debug_assert_eq!(m.dim(), 2 * n_modes);
        SymplecticTransform { n_modes, m }
    }

    pub(crate) fn mat(&self) -> &Mat {
        &self.m
    }

    /// Number of modes.
    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    /// Matrix side length, `2 · n_modes`.
    pub fn dim(&self) -> usize {
        self.m.dim()
    }

    /// Entry at 0-based quadrature indices.
    pub fn entry(&self, row: usize, col: usize) -> f64 {
        self.m.at(row, col)
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[f64] {
        self.m.entries()
    }

    /// Largest entry magnitude.
    pub fn max_abs_entry(&self) -> f64 {
        self.m.max_abs()
    }

    /// The symplectic inverse `S⁻¹ = −J·Sᵀ·J`.
    ///
    /// Because `J` is a signed mode-block permutation, each output entry is
    /// one input entry with a possible sign flip — the inverse is exact in
    /// floating point. The formula inverts `S` precisely when `S` is
    /// symplectic; for other matrices it has no inverse meaning.
    pub fn inverse(&self) -> SymplecticTransform {
        let j = SymplecticForm::new(self.n_modes).expect("n_modes is nonzero").to_mat();
        let prod = j.mul(&self.m.transpose()).mul(&j);
        let d = prod.dim();
        let mut out = Mat::zeros(d);
        for r in 0..d {
            for c in 0..d {
                out.set(r, c, -prod.at(r, c));
            }
        }
        SymplecticTransform { n_modes: self.n_modes, m: out }
    }
}

/// The standard symplectic form `J` on `n` modes: block-diagonal with
/// `[[0, 1], [−1, 0]]` per mode. Antisymmetric, with `J² = −I`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticForm {
    n_modes: usize,
}

impl SymplecticForm {
    /// The form on `n_modes` modes.
    ///
    /// # Errors
    ///
    /// [`Error::ZeroModes`] if `n_modes == 0`.
    pub fn new(n_modes: usize) -> Result<Self> {
        if n_modes == 0 {
            return Err(Error::ZeroModes);
        }
        Ok(SymplecticForm { n_modes })
    }

    /// Number of modes.
    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    /// Matrix side length, `2 · n_modes`.
    pub fn dim(&self) -> usize {
        2 * self.n_modes
    }

    /// Entry at 0-based quadrature indices: `+1` at `(2m, 2m+1)`, `−1` at
    /// `(2m+1, 2m)`, `0` elsewhere.
    pub fn entry(&self, row: usize, col: usize) -> f64 {
        if row / 2 != col / 2 {
            0.0
        } else if row % 2 == 0 && col % 2 == 1 {
            1.0
        } else if row % 2 == 1 && col % 2 == 0 {
            -1.0
        } else {
            0.0
        }
    }

    /// Row-major entries as a dense matrix.
    pub fn entries(&self) -> Vec<f64> {
        self.to_mat().entries().to_vec()
    }

    pub(crate) fn to_mat(&self) -> Mat {
        let d = self.dim();
        let mut m = Mat::zeros(d);
        for mode in 0..self.n_modes {
            m.set(2 * mode, 2 * mode + 1, 1.0);
            m.set(2 * mode + 1, 2 * mode, -1.0);
        }
        m
    }
}

/// Ordered list of distinct 1-based mode indices, used to select modes in
/// [`reduce`] and to reorder them in [`permute`].
///
/// Construction checks that the list is non-empty and duplicate-free; range
/// checks against a target's mode count happen where the selection is used.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeSelection {
    indices: Vec<usize>,
}

impl ModeSelection {
    /// Builds a selection from 1-based mode indices.
    ///
    /// # Errors
    ///
    /// - [`Error::ZeroModes`] if `indices` is empty.
    /// - [`Error::DuplicateModeIndex`] if an index repeats.
    pub fn new(indices: &[usize]) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::ZeroModes);
        }
        for (i, &a) in indices.iter().enumerate() {
            if indices[..i].contains(&a) {
                return Err(Error::DuplicateModeIndex { index: a });
            }
        }
        Ok(ModeSelection { indices: indices.to_vec() })
    }

    /// The identity selection `[1, 2, …, n_modes]`.
    ///
    /// # Errors
    ///
    /// [`Error::ZeroModes`] if `n_modes == 0`.
    pub fn identity(n_modes: usize) -> Result<Self> {
        if n_modes == 0 {
            return Err(Error::ZeroModes);
        }
        Ok(ModeSelection { indices: (1..=n_modes).collect() })
    }

    /// The 1-based indices, in selection order.
    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    /// Validates every index against a target with `n_modes` modes.
    fn check_in_range(&self, n_modes: usize) -> Result<()> {
        for &idx in &self.indices {
            if idx == 0 || idx > n_modes {
                return Err(Error::ModeIndexOutOfRange { index: idx, n_modes });
            }
        }
        Ok(())
    }

    /// 0-based block indices for the matrix kernel.
    fn zero_based(&self) -> Vec<usize> {
        self.indices.iter().map(|&i| i - 1).collect()
    }
}

/// Result of [`is_symplectic`]: the verdict plus the residual it was based
/// on, `max |S·J·Sᵀ − J|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymplecticCheck {
    /// Whether the residual is within tolerance.
    pub symplectic: bool,
    /// Largest entry magnitude of `S·J·Sᵀ − J`.
    pub residual: f64,
}

/// Result of [`is_physical`]: the verdict plus a signed margin.
///
/// The margin is the smallest symplectic eigenvalue minus one (1- and
/// 2-mode states) or the smallest factorization pivot seen (3 modes and
/// up); zero means the state exactly saturates the uncertainty bound, as
/// the vacuum does.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalityCheck {
    /// Whether the state satisfies the uncertainty principle within
    /// tolerance.
    pub physical: bool,
    /// Distance from the acceptance boundary; negative means violation.
    pub margin: f64,
}

/// The `2n × 2n` identity as an `n`-mode covariance matrix — the vacuum.
///
/// # Errors
///
/// [`Error::ZeroModes`] if `n_modes == 0`.
pub fn identity_cm(n_modes: usize) -> Result<CovarianceMatrix> {
    if n_modes == 0 {
        return Err(Error::ZeroModes);
    }
    Ok(CovarianceMatrix::from_mat(n_modes, Mat::identity(2 * n_modes)))
}

// The trait signatures mention `Mat` on purpose: the raw matrix type is
// crate-private plumbing, and the sealed pattern keeps these methods
// unreachable from outside even though they are nominally `pub`.
#[allow(private_interfaces)]
mod sealed {
    use crate::matrix::Mat;

    pub trait ModeMatrixImpl: Sized {
        fn n_modes_impl(&self) -> usize;
        fn mat_impl(&self) -> &Mat;
        fn from_mat_impl(n_modes: usize, m: Mat) -> Self;
    }

    impl ModeMatrixImpl for super::CovarianceMatrix {
        fn n_modes_impl(&self) -> usize {
            self.n_modes()
        }
        fn mat_impl(&self) -> &Mat {
            self.mat()
        }
        fn from_mat_impl(n_modes: usize, m: Mat) -> Self {
            super::CovarianceMatrix::from_mat(n_modes, m)
        }
    }

    impl ModeMatrixImpl for super::SymplecticTransform {
        fn n_modes_impl(&self) -> usize {
            self.n_modes()
        }
        fn mat_impl(&self) -> &Mat {
            self.mat()
        }
        fn from_mat_impl(n_modes: usize, m: Mat) -> Self {
            super::SymplecticTransform::from_mat(n_modes, m)
        }
    }
}

/// Matrix kinds that share mode-block plumbing: [`CovarianceMatrix`] and
/// [`SymplecticTransform`]. Sealed; [`direct_sum`] and [`permute`] are
/// generic over it so that the two kinds can never be mixed in one call.
pub trait ModeMatrix: sealed::ModeMatrixImpl {}

impl ModeMatrix for CovarianceMatrix {}
impl ModeMatrix for SymplecticTransform {}

/// Block-diagonal composition: `a`'s modes first, then `b`'s.
///
/// Both arguments must be the same kind (two states, or two transforms);
/// the signature makes mixing kinds unrepresentable.
pub fn direct_sum<T: ModeMatrix>(a: &T, b: &T) -> T {
    let m = a.mat_impl().direct_sum(b.mat_impl());
    T::from_mat_impl(a.n_modes_impl() + b.n_modes_impl(), m)
}

/// Updates a state by a symplectic map: `σ → S·σ·Sᵀ`.
///
/// The product is symmetrized (the two float summation orders of a
/// symmetric sandwich differ at rounding level), so the output satisfies
/// the covariance-matrix symmetry invariant exactly.
///
/// # Errors
///
/// [`Error::ModeCountMismatch`] if `s` and `sigma` act on different mode
/// counts.
pub fn apply(s: &SymplecticTransform, sigma: &CovarianceMatrix) -> Result<CovarianceMatrix> {
    if s.n_modes() != sigma.n_modes() {
        return Err(Error::ModeCountMismatch { left: s.n_modes(), right: sigma.n_modes() });
    }
    let m = s.mat().sandwich_symmetrized(sigma.mat());
    Ok(CovarianceMatrix::from_mat(sigma.n_modes(), m))
}

/// Keeps only the selected modes of a state (the partial trace over the
/// rest), in the order the selection lists them.
///
/// # Errors
///
/// [`Error::ModeIndexOutOfRange`] if an index exceeds the state's mode
/// count (or is 0; indices are 1-based).
pub fn reduce(sigma: &CovarianceMatrix, keep: &ModeSelection) -> Result<CovarianceMatrix> {
    keep.check_in_range(sigma.n_modes())?;
    let m = sigma.mat().select_blocks(&keep.zero_based(), 2);
    Ok(CovarianceMatrix::from_mat(keep.indices().len(), m))
}

/// Relabels modes: output mode `t` is input mode `order.indices()[t−1]`.
///
/// `order` must list every mode of `x` exactly once. Applying the inverse
/// ordering restores the input exactly — entries are moved, never
/// recomputed.
///
/// # Errors
///
/// [`Error::NotAPermutation`] if `order` is not a permutation of
/// `1..=n_modes`.
pub fn permute<T: ModeMatrix>(x: &T, order: &ModeSelection) -> Result<T> {
    let n = x.n_modes_impl();
    if order.indices().len() != n || order.check_in_range(n).is_err() {
        return Err(Error::NotAPermutation);
    }
    let m = x.mat_impl().select_blocks(&order.zero_based(), 2);
    Ok(T::from_mat_impl(n, m))
}

/// Checks whether `s` preserves the symplectic form, reporting the residual
/// `max |S·J·Sᵀ − J|`.
///
/// The verdict compares the residual against `1e-12` scaled by
/// `max(1, max|S|²)`: the product `S·J·Sᵀ` rounds in units of its entry
/// magnitudes squared, so an absolute threshold would misclassify
/// high-gain transforms that are symplectic to full working precision.
/// All builders in [`crate::optics`] stay below the absolute `1e-12` for
/// moderate parameters (`r ≤ 2`).
pub fn is_symplectic(s: &SymplecticTransform) -> SymplecticCheck {
    let j = SymplecticForm::new(s.n_modes()).expect("n_modes is nonzero").to_mat();
    let sjst = s.mat().mul(&j).mul(&s.mat().transpose());
    let residual = sjst.max_abs_diff(&j);
    let scale = s.max_abs_entry();
    let threshold = tol::ALGEBRAIC * (scale * scale).max(1.0);
    SymplecticCheck { symplectic: residual <= threshold, residual }
}

/// Checks the uncertainty principle: is `σ + i·J` positive semidefinite?
///
/// For 1- and 2-mode states the test is the closed-form symplectic
/// eigenvalue spectrum (all eigenvalues ≥ 1 within tolerance), preceded by
/// a plain positive-semidefiniteness sweep of `σ` itself, which the
/// eigenvalue formula alone cannot see (it squares away overall sign). For
/// 3 modes and up the test is an `LDLᵀ` factorization of the real embedding
/// `[[σ, −J], [J, σ]]`, which is positive semidefinite exactly when
/// `σ + i·J` is.
///
/// The pivot tolerance is `1e-9` scaled up by `max|σ|²` when entries are
/// large (factorization noise grows quadratically with entry size); the
/// margin is the smallest symplectic eigenvalue minus one (small systems)
/// or the smallest pivot (large systems). The vacuum sits exactly on the
/// boundary with margin `0` and counts as physical.
pub fn is_physical(sigma: &CovarianceMatrix) -> PhysicalityCheck {
    let thr = tol::physicality_threshold(sigma.max_abs_entry());
    let col_tol = tol::zero_pivot_column_threshold(sigma.max_abs_entry());
    if sigma.n_modes() <= 2 {
        // Reject matrices that are not even positive semidefinite: the
        // eigenvalue formula squares the spectrum and would pass, e.g., −I.
        let sweep = sigma.mat().ldl_psd_sweep(thr, col_tol);
        if !sweep.psd {
            return PhysicalityCheck { physical: false, margin: sweep.margin };
        }
        if let Some(nu_min) = small_system_min_symplectic_eigenvalue(sigma) {
            let margin = nu_min - 1.0;
            return PhysicalityCheck { physical: margin >= -thr, margin };
        }
        // Defensive fallback: the closed form only fails on an indefinite
        // discriminant, which a positive-semidefinite σ cannot produce
        // beyond rounding; delegate to the factorization route.
    }
    let sweep = embedding(sigma).ldl_psd_sweep(thr, col_tol);
    PhysicalityCheck { physical: sweep.psd, margin: sweep.margin }
}

/// Smallest symplectic eigenvalue of a 1- or 2-mode state by the
/// determinant closed forms; `None` if the 2-mode discriminant is negative
/// beyond its rounding allowance.
fn small_system_min_symplectic_eigenvalue(sigma: &CovarianceMatrix) -> Option<f64> {
    let m = sigma.mat();
    match sigma.n_modes() {
        1 => {
            let det = m.det();
            Some(libm::sqrt(det.max(0.0)))
        }
        2 => {
            let det_a = m.at(0, 0) * m.at(1, 1) - m.at(0, 1) * m.at(1, 0);
            let det_b = m.at(2, 2) * m.at(3, 3) - m.at(2, 3) * m.at(3, 2);
            let det_c = m.at(0, 2) * m.at(1, 3) - m.at(0, 3) * m.at(1, 2);
            let delta = det_a + det_b + 2.0 * det_c;
            let disc = delta * delta - 4.0 * m.det();
            let clamp = tol::disc_tolerance(delta, m.max_abs());
            let disc = if libm::fabs(disc) <= clamp {
                0.0
            } else if disc < 0.0 {
                return None;
            } else {
                disc
            };
            let nu2 = (delta - libm::sqrt(disc)) / 2.0;
            Some(libm::sqrt(nu2.max(0.0)))
        }
        _ => unreachable!("small-system route is gated on n_modes <= 2"),
    }
}

/// The real embedding `[[σ, −J], [J, σ]]` of the Hermitian matrix
/// `σ + i·J`; positive semidefinite exactly when `σ + i·J` is, and exactly
/// symmetric by construction.
fn embedding(sigma: &CovarianceMatrix) -> Mat {
    let d = sigma.dim();
    let s = sigma.mat();
    let mut out = Mat::zeros(2 * d);
    for r in 0..d {
        for c in 0..d {
            let v = s.at(r, c);
            out.set(r, c, v);
            out.set(d + r, d + c, v);
        }
    }
    for mode in 0..sigma.n_modes() {
        let (x, p) = (2 * mode, 2 * mode + 1);
        // Top-right block −J, bottom-left block J.
        out.set(x, d + p, -1.0);
        out.set(p, d + x, 1.0);
        out.set(d + x, p, 1.0);
        out.set(d + p, x, -1.0);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use approx::assert_abs_diff_eq;

    fn cm(n: usize, entries: Vec<f64>) -> CovarianceMatrix {
        CovarianceMatrix::new(n, entries).unwrap()
    }

    fn st(n: usize, entries: Vec<f64>) -> SymplecticTransform {
        SymplecticTransform::new(n, entries).unwrap()
    }

    fn squeezer(r: f64) -> SymplecticTransform {
        st(1, vec![libm::exp(r), 0.0, 0.0, libm::exp(-r)])
    }

    #[test]
    fn identity_cm_is_vacuum() {
        let v1 = identity_cm(1).unwrap();
        assert_eq!(v1.entries(), &[1.0, 0.0, 0.0, 1.0]);
        let v2 = identity_cm(2).unwrap();
        assert_eq!(v2.dim(), 4);
        for r in 0..4 {
            for c in 0..4 {
                assert_eq!(v2.entry(r, c), if r == c { 1.0 } else { 0.0 });
            }
        }
        assert_eq!(identity_cm(0), Err(Error::ZeroModes));
    }

    #[test]
    fn construction_validates_shape_and_symmetry() {
        assert!(matches!(
            CovarianceMatrix::new(1, vec![1.0, 0.0, 0.0]),
            Err(Error::BadEntryCount { expected: 4, got: 3 })
        ));
        assert!(matches!(
            CovarianceMatrix::new(1, vec![1.0, 0.5, -0.5, 1.0]),
            Err(Error::NotSymmetric { .. })
        ));
        // Asymmetry within tolerance is symmetrized away.
        let eps = 5e-13;
        let c = cm(1, vec![1.0, eps, 0.0, 1.0]);
        assert_eq!(c.entry(0, 1), c.entry(1, 0));
        assert_abs_diff_eq!(c.entry(0, 1), eps / 2.0);
    }

    #[test]
    fn direct_sum_stacks_blocks_in_argument_order() {
        let e = libm::exp(1.0);
        let sq = squeezer(1.0);
        let id = st(1, vec![1.0, 0.0, 0.0, 1.0]);
        let s = direct_sum(&sq, &id);
        assert_eq!(s.n_modes(), 2);
        assert_eq!(s.entry(0, 0), e);
        assert_eq!(s.entry(1, 1), libm::exp(-1.0));
        assert_eq!(s.entry(2, 2), 1.0);
        assert_eq!(s.entry(3, 3), 1.0);
        assert_eq!(s.entry(0, 2), 0.0);

        let both = direct_sum(&identity_cm(1).unwrap(), &identity_cm(1).unwrap());
        assert_eq!(both, identity_cm(2).unwrap());
    }

    #[test]
    fn apply_identity_is_noop_and_squeezer_scales_vacuum() {
        let sigma = cm(1, vec![2.0, 0.5, 0.5, 3.0]);
        let id = st(1, vec![1.0, 0.0, 0.0, 1.0]);
        assert_eq!(apply(&id, &sigma).unwrap(), sigma);

        let r = 0.7;
        let out = apply(&squeezer(r), &identity_cm(1).unwrap()).unwrap();
        assert_abs_diff_eq!(out.entry(0, 0), libm::exp(2.0 * r), epsilon = 1e-15);
        assert_abs_diff_eq!(out.entry(1, 1), libm::exp(-2.0 * r), epsilon = 1e-15);
        assert_eq!(out.entry(0, 1), 0.0);
    }

    #[test]
    fn apply_rejects_mode_count_mismatch() {
        let s = squeezer(0.3);
        let sigma = identity_cm(2).unwrap();
        assert_eq!(
            apply(&s, &sigma),
            Err(Error::ModeCountMismatch { left: 1, right: 2 })
        );
    }

    #[test]
    fn reduce_selects_modes_in_requested_order() {
        let vac = identity_cm(2).unwrap();
        let first = reduce(&vac, &ModeSelection::new(&[1]).unwrap()).unwrap();
        assert_eq!(first, identity_cm(1).unwrap());

        // Three modes with distinct diagonal markers 2, 3, 4.
        let mut entries = vec![0.0; 36];
        for m in 0..3 {
            entries[(2 * m) * 6 + 2 * m] = (m + 2) as f64;
            entries[(2 * m + 1) * 6 + 2 * m + 1] = (m + 2) as f64;
        }
        let sigma = cm(3, entries);
        let picked = reduce(&sigma, &ModeSelection::new(&[3, 1]).unwrap()).unwrap();
        assert_eq!(picked.entry(0, 0), 4.0);
        assert_eq!(picked.entry(2, 2), 2.0);

        assert_eq!(
            reduce(&sigma, &ModeSelection::new(&[4]).unwrap()),
            Err(Error::ModeIndexOutOfRange { index: 4, n_modes: 3 })
        );
    }

    #[test]
    fn permute_swap_exchanges_direct_sum_blocks() {
        let a = cm(1, vec![2.0, 0.0, 0.0, 2.0]);
        let b = cm(1, vec![3.0, 0.0, 0.0, 3.0]);
        let ab = direct_sum(&a, &b);
        let swapped = permute(&ab, &ModeSelection::new(&[2, 1]).unwrap()).unwrap();
        assert_eq!(swapped, direct_sum(&b, &a));
    }

    #[test]
    fn permute_roundtrip_is_exact() {
        // A full 3-mode CM with correlations, permuted by [3, 1, 2] then
        // by its inverse [2, 3, 1].
        let mut entries = vec![0.0; 36];
        for r in 0..6 {
            for c in 0..6 {
                entries[r * 6 + c] = ((r * c + r + c) as f64) * 0.01;
            }
        }
        for r in 0..6 {
            for c in 0..r {
                entries[r * 6 + c] = entries[c * 6 + r];
            }
        }
        let sigma = cm(3, entries);
        let fwd = permute(&sigma, &ModeSelection::new(&[3, 1, 2]).unwrap()).unwrap();
        let back = permute(&fwd, &ModeSelection::new(&[2, 3, 1]).unwrap()).unwrap();
        assert_eq!(back, sigma);

        let id_order = ModeSelection::identity(3).unwrap();
        assert_eq!(permute(&sigma, &id_order).unwrap(), sigma);
    }

    #[test]
    fn permute_rejects_non_permutations() {
        let sigma = identity_cm(3).unwrap();
        let short = ModeSelection::new(&[1, 2]).unwrap();
        assert_eq!(permute(&sigma, &short), Err(Error::NotAPermutation));
        let out_of_range = ModeSelection::new(&[1, 2, 4]).unwrap();
        assert_eq!(permute(&sigma, &out_of_range), Err(Error::NotAPermutation));
    }

    #[test]
    fn mode_selection_rejects_duplicates_and_empty() {
        assert_eq!(ModeSelection::new(&[]), Err(Error::ZeroModes));
        assert_eq!(
            ModeSelection::new(&[1, 2, 1]),
            Err(Error::DuplicateModeIndex { index: 1 })
        );
        assert_eq!(ModeSelection::identity(3).unwrap().indices(), &[1, 2, 3]);
    }

    #[test]
    fn symplectic_form_squares_to_minus_identity() {
        let j = SymplecticForm::new(2).unwrap();
        assert_eq!(j.entry(0, 1), 1.0);
        assert_eq!(j.entry(1, 0), -1.0);
        assert_eq!(j.entry(0, 2), 0.0);
        let jm = j.to_mat();
        let j2 = jm.mul(&jm);
        for r in 0..4 {
            for c in 0..4 {
                assert_eq!(j2.at(r, c), if r == c { -1.0 } else { 0.0 });
            }
        }
    }

    #[test]
    fn is_symplectic_accepts_squeezer_and_rejects_uneven_scaling() {
        let id = st(1, vec![1.0, 0.0, 0.0, 1.0]);
        let check = is_symplectic(&id);
        assert!(check.symplectic);
        assert_eq!(check.residual, 0.0);

        let sq = is_symplectic(&squeezer(1.0));
        assert!(sq.symplectic);
        assert!(sq.residual <= 1e-15);

        // diag(2, 1) scales x without compensating p: area not preserved.
        let bad = is_symplectic(&st(1, vec![2.0, 0.0, 0.0, 1.0]));
        assert!(!bad.symplectic);
        assert_abs_diff_eq!(bad.residual, 1.0);
    }

    #[test]
    fn symplectic_inverse_is_exact() {
        // A generic 2-mode symplectic: squeezers on both modes, then a
        // rotation-free mixing via explicit balanced-splitter entries.
        let h = libm::sqrt(0.5);
        let bs = st(2, vec![
            h, 0.0, h, 0.0,
            0.0, h, 0.0, h,
            h, 0.0, -h, 0.0,
            0.0, h, 0.0, -h,
        ]);
        let s = direct_sum(&squeezer(0.8), &squeezer(-0.3));
        let combined = SymplecticTransform::from_mat(2, bs.mat().mul(s.mat()));
        let inv = combined.inverse();
        let prod = combined.mat().mul(inv.mat());
        let mut worst = 0.0_f64;
        for r in 0..4 {
            for c in 0..4 {
                let want = if r == c { 1.0 } else { 0.0 };
                worst = worst.max(libm::fabs(prod.at(r, c) - want));
            }
        }
        assert!(worst <= 1e-15, "S·S⁻¹ deviates from identity by {worst:e}");
    }

    #[test]
    fn vacuum_sits_exactly_on_the_physicality_boundary() {
        for n in 1..=3 {
            let check = is_physical(&identity_cm(n).unwrap());
            assert!(check.physical, "vacuum on {n} modes flagged unphysical");
            assert_eq!(check.margin, 0.0, "vacuum margin on {n} modes");
        }
    }

    #[test]
    fn squeezed_vacuum_is_physical_for_any_strength() {
        for r in [0.0, 0.5, 2.0, 5.0] {
            let sigma = cm(1, vec![libm::exp(2.0 * r), 0.0, 0.0, libm::exp(-2.0 * r)]);
            let check = is_physical(&sigma);
            assert!(check.physical, "r = {r} flagged unphysical, margin {}", check.margin);
        }
    }

    #[test]
    fn below_vacuum_noise_is_rejected_with_margin() {
        let sigma = cm(1, vec![0.5, 0.0, 0.0, 0.5]);
        let check = is_physical(&sigma);
        assert!(!check.physical);
        assert_abs_diff_eq!(check.margin, -0.5, epsilon = 1e-15);
    }

    #[test]
    fn negated_identity_is_rejected_despite_unit_eigenvalue_formula() {
        // det(−I₄) gives symplectic eigenvalues 1; the semidefiniteness
        // precheck must catch the sign.
        let sigma = cm(2, vec![
            -1.0, 0.0, 0.0, 0.0,
            0.0, -1.0, 0.0, 0.0,
            0.0, 0.0, -1.0, 0.0,
            0.0, 0.0, 0.0, -1.0,
        ]);
        let check = is_physical(&sigma);
        assert!(!check.physical);
        assert!(check.margin <= -1.0 + 1e-15);
    }

    #[test]
    fn three_mode_route_accepts_squeezed_and_rejects_shrunk() {
        let mut entries = vec![0.0; 36];
        for m in 0..3 {
            let r = 0.3 * (m as f64 + 1.0);
            entries[(2 * m) * 6 + 2 * m] = libm::exp(2.0 * r);
            entries[(2 * m + 1) * 6 + 2 * m + 1] = libm::exp(-2.0 * r);
        }
        let sigma = cm(3, entries.clone());
        assert!(is_physical(&sigma).physical);

        for v in entries.iter_mut() {
            *v *= 0.9;
        }
        let shrunk = cm(3, entries);
        let check = is_physical(&shrunk);
        assert!(!check.physical);
        assert!(check.margin < 0.0);
    }
}
