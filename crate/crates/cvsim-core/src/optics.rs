//! Builders for the optical elements and canonical states the simulator
//! composes: single-mode squeezers, balanced beam splitters (two- and
//! three-mode), phase-sensitive amplifiers, and the two-mode squeezed
//! vacuum.
//!
//! Every builder returns an exactly laid-out matrix — entries are closed
//! forms of the parameters, never the result of matrix products — so the
//! test suite can verify pipeline compositions against them as independent
//! references.

use alloc::vec;

use crate::error::{Error, Result};
use crate::gaussian::{CovarianceMatrix, SymplecticTransform};
use crate::matrix::Mat;

/// Squeezing strength `r ≥ 0` with its cached hyperbolic functions
/// `c = cosh 2r`, `s = sinh 2r` — the combination every covariance-level
/// closed form is written in.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezeParams {
    r: f64,
    c: f64,
    s: f64,
}

impl SqueezeParams {
    /// Validates and caches a squeezing parameter.
    ///
    /// # Errors
    ///
    /// [`Error::InvalidParameter`] if `r` is negative or not finite.
    pub fn new(r: f64) -> Result<Self> {
        if !r.is_finite() || r < 0.0 {
            return Err(Error::InvalidParameter { name: "r", value: r });
        }
        Ok(SqueezeParams { r, c: libm::cosh(2.0 * r), s: libm::sinh(2.0 * r) })
    }

    /// The squeezing parameter `r`.
    pub fn r(&self) -> f64 {
        self.r
    }

    /// `cosh 2r`; always ≥ 1.
    pub fn c(&self) -> f64 {
        self.c
    }

    /// `sinh 2r`; always ≥ 0.
    pub fn s(&self) -> f64 {
        self.s
    }
}

/// Phase-sensitive amplifier parameters: gain `r_amp ≥ 0` and phase `φ`,
/// with the cached combinations `h = cos 2φ`, `k = sin 2φ`.
///
/// The amplifier matrix depends on `φ` only through `2φ`, so the phase is
/// `π`-periodic; `[0, π)` covers every distinct amplifier, but any finite
/// phase is accepted and reduced implicitly by the trigonometry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmplifierParams {
    r_amp: f64,
    phi: f64,
    c: f64,
    s: f64,
    h: f64,
    k: f64,
}

impl AmplifierParams {
    /// Validates and caches amplifier gain and phase.
    ///
    /// # Errors
    ///
    /// [`Error::InvalidParameter`] if `r_amp` is negative or not finite,
    /// or if `phi` is not finite.
    pub fn new(r_amp: f64, phi: f64) -> Result<Self> {
        if !r_amp.is_finite() || r_amp < 0.0 {
            return Err(Error::InvalidParameter { name: "r_amp", value: r_amp });
        }
        if !phi.is_finite() {
            return Err(Error::InvalidParameter { name: "phi", value: phi });
        }
        Ok(AmplifierParams {
            r_amp,
            phi,
            c: libm::cosh(2.0 * r_amp),
            s: libm::sinh(2.0 * r_amp),
            h: libm::cos(2.0 * phi),
            k: libm::sin(2.0 * phi),
        })
    }

    /// The gain parameter `r_amp`.
    pub fn r_amp(&self) -> f64 {
        self.r_amp
    }

    /// The phase `φ` exactly as given (not reduced modulo `π`).
    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// `cosh 2r_amp`.
    pub fn c(&self) -> f64 {
        self.c
    }

    /// `sinh 2r_amp`.
    pub fn s(&self) -> f64 {
        self.s
    }

    /// `cos 2φ`.
    pub fn h(&self) -> f64 {
        self.h
    }

    /// `sin 2φ`.
    pub fn k(&self) -> f64 {
        self.k
    }
}

/// Single-mode squeezer `diag(e^r, e^{−r})`: shrinks the `p` quadrature,
/// stretches `x`.
///
/// Acting on vacuum it produces `diag(e^{2r}, e^{−2r})`. The opposite
/// squeezer (stretched `p`) is [`SymplecticTransform::inverse`] of this
/// one.
pub fn single_mode_squeezer(p: SqueezeParams) -> SymplecticTransform {
    let er = libm::exp(p.r());
    SymplecticTransform::new(1, vec![er, 0.0, 0.0, 1.0 / er])
        .expect("4 entries on 1 mode")
}

/// Balanced 50:50 beam splitter on two modes.
///
/// Output mode 1 carries the sum `(mode 1 + mode 2)/√2` in both
/// quadratures, output mode 2 the difference. The matrix is symmetric and
/// orthogonal, hence its own inverse.
pub fn balanced_bs_2mode() -> SymplecticTransform {
    let h = libm::sqrt(0.5);
    SymplecticTransform::new(2, vec![
        h, 0.0, h, 0.0,
        0.0, h, 0.0, h,
        h, 0.0, -h, 0.0,
        0.0, h, 0.0, -h,
    ])
    .expect("16 entries on 2 modes")
}

/// Balanced beam splitter on three modes `(signal, ancilla, blank)` that
/// mixes the first and third modes and leaves the middle (ancilla) mode
/// untouched.
///
/// Output mode 1 is `(mode 1 + mode 3)/√2`, output mode 3 is
/// `(mode 1 − mode 3)/√2`, mode 2 passes through as identity. Symmetric
/// and orthogonal.
pub fn three_mode_bs() -> SymplecticTransform {
    let h = libm::sqrt(0.5);
    let mut m = Mat::zeros(6);
    m.set(0, 0, h);
    m.set(0, 4, h);
    m.set(1, 1, h);
    m.set(1, 5, h);
    m.set(2, 2, 1.0);
    m.set(3, 3, 1.0);
    m.set(4, 0, h);
    m.set(4, 4, -h);
    m.set(5, 1, h);
    m.set(5, 5, -h);
    SymplecticTransform::new(3, m.entries().to_vec()).expect("36 entries on 3 modes")
}

/// Phase-sensitive amplifier coupling a signal mode to an ancilla mode
/// (signal first in the ordering).
///
/// With `c = cosh 2r_amp`, `s = sinh 2r_amp`, `h = cos 2φ`, `k = sin 2φ`
/// the matrix is
///
/// ```text
/// ⎡ c−hs   0     ks    0  ⎤
/// ⎢  0    c+hs   0    −ks ⎥
/// ⎢  ks    0    c+hs   0  ⎥
/// ⎣  0    −ks    0    c−hs⎦
/// ```
///
/// At `φ = 0` it deamplifies the signal's `x` and amplifies its `p`
/// (`diag(e^{−2r}, e^{2r})` on the signal block) with no signal–ancilla
/// coupling; the determinant identity `(c−hs)(c+hs) − k²s² = 1` holds for
/// every parameter choice.
pub fn amplifier(p: AmplifierParams) -> SymplecticTransform {
    let (c, s, h, k) = (p.c(), p.s(), p.h(), p.k());
    SymplecticTransform::new(2, vec![
        c - h * s, 0.0, k * s, 0.0,
        0.0, c + h * s, 0.0, -k * s,
        k * s, 0.0, c + h * s, 0.0,
        0.0, -k * s, 0.0, c - h * s,
    ])
    .expect("16 entries on 2 modes")
}

/// Covariance matrix of the two-mode squeezed vacuum:
///
/// ```text
/// ⎡ c  0  s  0 ⎤
/// ⎢ 0  c  0 −s ⎥        c = cosh 2r, s = sinh 2r.
/// ⎢ s  0  c  0 ⎥
/// ⎣ 0 −s  0  c ⎦
/// ```
///
/// Equals the pipeline that feeds a squeezer on mode 1 and the *opposite*
/// squeezer on mode 2 into a balanced beam splitter — mixing two equally
/// squeezed modes (same sign) gives an uncorrelated product state instead,
/// as the unit tests pin down.
pub fn two_mode_squeezed_cm(p: SqueezeParams) -> CovarianceMatrix {
    let (c, s) = (p.c(), p.s());
    CovarianceMatrix::new(2, vec![
        c, 0.0, s, 0.0,
        0.0, c, 0.0, -s,
        s, 0.0, c, 0.0,
        0.0, -s, 0.0, c,
    ])
    .expect("16 symmetric entries on 2 modes")
}
