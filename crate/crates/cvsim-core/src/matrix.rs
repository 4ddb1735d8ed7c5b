//! Internal dense square-matrix kernel.
//!
//! Everything in the crate is a small square matrix (at most `24 x 24`, the
//! physicality embedding of a 6-mode state), stored row-major. This module
//! is deliberately minimal: multiply, transpose, direct sum, mode
//! permutation/selection, an LU determinant, and the symmetric `LDL^T`
//! positive-semidefiniteness sweep used by the physicality check.

use alloc::vec;
use alloc::vec::Vec;

/// Row-major square matrix of `f64`.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Mat {
    /// Side length.
    d: usize,
    /// Row-major entries, `a[r * d + c]`.
    a: Vec<f64>,
}

impl Mat {
    pub(crate) fn zeros(d: usize) -> Self {
        Mat { d, a: vec![0.0; d * d] }
    }

    pub(crate) fn identity(d: usize) -> Self {
        let mut m = Mat::zeros(d);
        for i in 0..d {
            m.a[i * d + i] = 1.0;
        }
        m
    }

    pub(crate) fn from_rows(d: usize, entries: Vec<f64>) -> Self {
        debug_assert_eq!(entries.len(), d * d);
        Mat { d, a: entries }
    }

    #[inline]
    pub(crate) fn dim(&self) -> usize {
        self.d
    }

    #[inline]
    pub(crate) fn at(&self, r: usize, c: usize) -> f64 {
        self.a[r * self.d + c]
    }

    #[inline]
    pub(crate) fn set(&mut self, r: usize, c: usize, v: f64) {
        self.a[r * self.d + c] = v;
    }

    pub(crate) fn entries(&self) -> &[f64] {
        &self.a
    }

    pub(crate) fn mul(&self, rhs: &Mat) -> Mat {
        debug_assert_eq!(self.d, rhs.d);
        let d = self.d;
        let mut out = Mat::zeros(d);
        for r in 0..d {
            for k in 0..d {
                let lhs_rk = self.a[r * d + k];
                if lhs_rk == 0.0 {
                    continue;
                }
                for c in 0..d {
                    out.a[r * d + c] += lhs_rk * rhs.a[k * d + c];
                }
            }
        }
        out
    }

    pub(crate) fn transpose(&self) -> Mat {
        let d = self.d;
        let mut out = Mat::zeros(d);
        for r in 0..d {
            for c in 0..d {
                out.a[c * d + r] = self.a[r * d + c];
            }
        }
        out
    }

    /// `S * M * S^T`, symmetrized by averaging with its transpose.
    ///
    /// For symmetric `M` the product is symmetric in exact arithmetic; the
    /// two float summation orders differ at rounding level, and averaging
    /// restores exact symmetry without biasing either triangle.
    pub(crate) fn sandwich_symmetrized(&self, m: &Mat) -> Mat {
        let prod = self.mul(m).mul(&self.transpose());
        let d = prod.d;
        let mut out = Mat::zeros(d);
        for r in 0..d {
            out.a[r * d + r] = prod.a[r * d + r];
            for c in (r + 1)..d {
                let v = 0.5 * (prod.a[r * d + c] + prod.a[c * d + r]);
                out.a[r * d + c] = v;
                out.a[c * d + r] = v;
            }
        }
        out
    }

    pub(crate) fn direct_sum(&self, rhs: &Mat) -> Mat {
        let d = self.d + rhs.d;
        let mut out = Mat::zeros(d);
        for r in 0..self.d {
            for c in 0..self.d {
                out.a[r * d + c] = self.at(r, c);
            }
        }
        for r in 0..rhs.d {
            for c in 0..rhs.d {
                out.a[(self.d + r) * d + (self.d + c)] = rhs.at(r, c);
            }
        }
        out
    }

    /// Reorders rows and columns so that output block `t` is input block
    /// `source_blocks[t]` (0-based), with blocks of `block` consecutive
    /// indices. Also implements selection: `source_blocks` may name fewer
    /// blocks than the input has, producing a smaller matrix.
    pub(crate) fn select_blocks(&self, source_blocks: &[usize], block: usize) -> Mat {
        let d = source_blocks.len() * block;
        let mut out = Mat::zeros(d);
        for (rt, &rs) in source_blocks.iter().enumerate() {
            for i in 0..block {
                for (ct, &cs) in source_blocks.iter().enumerate() {
                    for j in 0..block {
                        out.a[(rt * block + i) * d + (ct * block + j)] =
                            self.at(rs * block + i, cs * block + j);
                    }
                }
            }
        }
        out
    }

    pub(crate) fn max_abs(&self) -> f64 {
        self.a.iter().fold(0.0, |m, &v| m.max(libm::fabs(v)))
    }

    pub(crate) fn max_abs_diff(&self, rhs: &Mat) -> f64 {
        debug_assert_eq!(self.d, rhs.d);
        self.a
            .iter()
            .zip(rhs.a.iter())
            .fold(0.0, |m, (&x, &y)| m.max(libm::fabs(x - y)))
    }

    /// Replaces each off-diagonal pair by its average, making the matrix
    /// exactly symmetric.
    pub(crate) fn symmetrize(&mut self) {
        let d = self.d;
        for r in 0..d {
            for c in (r + 1)..d {
                let v = 0.5 * (self.a[r * d + c] + self.a[c * d + r]);
                self.a[r * d + c] = v;
                self.a[c * d + r] = v;
            }
        }
    }

    pub(crate) fn max_asymmetry(&self) -> f64 {
        let d = self.d;
        let mut worst = 0.0_f64;
        for r in 0..d {
            for c in (r + 1)..d {
                worst = worst.max(libm::fabs(self.a[r * d + c] - self.a[c * d + r]));
            }
        }
        worst
    }

    /// Determinant via LU decomposition with partial pivoting.
    pub(crate) fn det(&self) -> f64 {
        let d = self.d;
        let mut lu = self.a.clone();
        let mut det = 1.0_f64;
        for k in 0..d {
            // Pick the largest pivot in column k at or below the diagonal.
            let mut piv_row = k;
            let mut piv_abs = libm::fabs(lu[k * d + k]);
            for r in (k + 1)..d {
                let v = libm::fabs(lu[r * d + k]);
                if v > piv_abs {
                    piv_abs = v;
                    piv_row = r;
                }
            }
            if piv_abs == 0.0 {
                return 0.0;
            }
            if piv_row != k {
                for c in 0..d {
                    lu.swap(k * d + c, piv_row * d + c);
                }
                det = -det;
            }
            let piv = lu[k * d + k];
            det *= piv;
            for r in (k + 1)..d {
                let factor = lu[r * d + k] / piv;
                if factor == 0.0 {
                    continue;
                }
                for c in (k + 1)..d {
                    lu[r * d + c] -= factor * lu[k * d + c];
                }
            }
        }
        det
    }

    /// Outcome of [`Mat::ldl_psd_sweep`].
    ///
    /// `margin` is the smallest diagonal pivot encountered. `psd` reports
    /// whether the matrix is positive semidefinite within the given pivot
    /// tolerance: no pivot below `-pivot_tol`, and any pivot within
    /// `±pivot_tol` (a numerically zero direction) must have the rest of its
    /// column negligible too, otherwise the matrix is indefinite despite
    /// never showing a negative pivot.
    pub(crate) fn ldl_psd_sweep(&self, pivot_tol: f64, column_tol: f64) -> LdlOutcome {
        debug_assert!(self.max_asymmetry() == 0.0, "LDL sweep expects exact symmetry");
        let d = self.d;
        let mut a = self.a.clone();
        let mut margin = f64::INFINITY;
        let mut psd = true;
        for k in 0..d {
            let piv = a[k * d + k];
            margin = margin.min(piv);
            if piv > pivot_tol {
                // Eliminate column k below the diagonal (symmetric update of
                // the trailing block).
                for r in (k + 1)..d {
                    let f = a[r * d + k] / piv;
                    if f == 0.0 {
                        continue;
                    }
                    for c in (k + 1)..=r {
                        let v = a[r * d + c] - f * a[k * d + c];
                        a[r * d + c] = v;
                        a[c * d + r] = v;
                    }
                }
            } else if piv < -pivot_tol {
                psd = false;
                break;
            } else {
                // Numerically zero pivot: a PSD matrix must have a (near-)
                // zero column here; residual column mass is an indefinite
                // direction that plain elimination would never surface.
                for r in (k + 1)..d {
                    if libm::fabs(a[r * d + k]) > column_tol {
                        psd = false;
                    }
                }
                if !psd {
                    break;
                }
            }
        }
        LdlOutcome { psd, margin }
    }
}

pub(crate) struct LdlOutcome {
    pub(crate) psd: bool,
    pub(crate) margin: f64,
}
