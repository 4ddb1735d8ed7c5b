//! Covariance-matrix toolkit for continuous-variable Gaussian optics.
//!
//! Everything here works on second moments only: an n-mode Gaussian state is
//! a `2n x 2n` covariance matrix in the interleaved quadrature ordering
//! `(x1, p1, x2, p2, ...)`, normalized so the vacuum is exactly the identity
//! matrix, and Gaussian unitaries act as symplectic congruences
//! `sigma -> S sigma S^T`.
//!
//! The crate provides:
//!
//! * [`gaussian`] — the core types ([`CovarianceMatrix`], [`SymplecticTransform`],
//!   [`SymplecticForm`], [`ModeSelection`]) and the algebra on them
//!   (direct sums, mode permutations, reductions, symplectic application,
//!   symplecticity and physicality checks).
//! * [`optics`] — builders for the optical elements used by the protocols:
//!   single-mode squeezers, balanced two- and three-mode beam splitters,
//!   phase-sensitive amplifiers, and the two-mode squeezed vacuum.
//! * [`separability`] — the partial-transpose (PPT) separability test for
//!   two-mode states via closed-form symplectic eigenvalues.
//! * [`fidelity`] — determinant-based Gaussian fidelity plus closed-form
//!   cloning fidelities.
//! * [`cloning`] — the phase-sensitive 1-to-2 cloning network
//!   (amplifier + three-mode beam splitter) and its closed-form noise terms.
//! * [`broadcasting`] — the two-site entanglement-broadcasting pipeline,
//!   its reduced output pairs, closed-form variants (as printed in the source
//!   description vs. reconciled against the pipeline), and the separability
//!   parameter `R`.
//!
//! The crate is `no_std` (with `alloc`); transcendentals come from [`libm`].
//!
//! # Numerical conventions
//!
//! Comparisons on matrix entries use a scaled tolerance
//! `|a - b| <= tol * max(1, |a|, |b|)` (see [`tol`]): protocol matrices grow
//! like `cosh^3(2r)`, so absolute thresholds calibrated at vacuum scale are
//! meaningless for them. Physicality and eigenvalue thresholds likewise scale
//! with the matrix magnitude; the rationale is documented on each constant.

#![no_std]
#![deny(unsafe_code)]
#![warn(missing_docs)]

extern crate alloc;

#[cfg(test)]
extern crate std;

mod matrix;

pub mod broadcasting;
pub mod cloning;
pub mod error;
pub mod fidelity;
pub mod gaussian;
pub mod optics;
pub mod separability;
pub mod tol;

pub use broadcasting::{
    initial_state_with_ancillas, is_broadcast_successful, joint_amplifier, joint_bs,
    local_reduced_closed, nonlocal_reduced_closed, run_broadcast, separability_parameter_r,
    BroadcastResult, ClosedFormEgh, Variant,
};
pub use cloning::{clone_transform, closed_p_m, run_clone, CloneResult};
pub use error::{Error, Result};
pub use fidelity::{
    clone_fidelity_closed, clone_fidelity_phi0, fidelity_report_raw, fidelity_value,
    gaussian_fidelity, FidelityReport,
};
pub use gaussian::{
    apply, direct_sum, identity_cm, is_physical, is_symplectic, permute, reduce, CovarianceMatrix,
    ModeSelection, PhysicalityCheck, SymplecticCheck, SymplecticForm, SymplecticTransform,
};
pub use optics::{
    amplifier, balanced_bs_2mode, single_mode_squeezer, three_mode_bs, two_mode_squeezed_cm,
    AmplifierParams, SqueezeParams,
};
pub use separability::{
    is_separable_two_mode, partial_transpose_two_mode, symplectic_eigenvalues_two_mode,
    SeparabilityVerdict,
};
