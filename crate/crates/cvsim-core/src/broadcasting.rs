//! The entanglement-broadcasting pipeline: each half of a two-mode
//! squeezed state is cloned locally (amplifier plus beam splitter, as in
//! [`crate::cloning`]), and the question is whether entanglement survives
//! between clones at *different* sites while clones at the *same* site
//! stay separable.
//!
//! Mode ordering of the full six-mode output is `(i, a, b, j, a′, b′)`:
//! signal `i` with ancilla `a` and blank `b` at the first site, signal `j`
//! with `a′`, `b′` at the second. The nonlocal pair is `(i, b′)`, the
//! local pair `(i, b)`.
//!
//! Two families of closed forms exist for the reduced pairs, selected by
//! [`Variant`]: `Reconciled` matches the matrix pipeline entrywise to
//! rounding everywhere, while `AsPrinted` is a compact variant that
//! coincides with it only on the `φ = π/4` line (where `cos 2φ = 0`); the
//! CLI's `verify` subcommand quantifies their divergence. Both are
//! implemented so the divergence is a measured fact rather than a silent
//! substitution.

use crate::error::Result;
use crate::fidelity::{gaussian_fidelity, FidelityReport};
use crate::gaussian::{
    apply, direct_sum, identity_cm, permute, reduce, CovarianceMatrix, ModeSelection,
    SymplecticTransform,
};
use crate::optics::{
    amplifier, three_mode_bs, two_mode_squeezed_cm, AmplifierParams, SqueezeParams,
};
use crate::separability::{is_separable_two_mode, SeparabilityVerdict};

/// Which closed-form family to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    /// The compact forms: one shared cross scalar `E` for both
    /// quadratures and a `k·s²` noise term in `G` and `H`. Disagrees with
    /// the pipeline off the `φ = π/4` line.
    AsPrinted,
    /// The pipeline-derived forms: quadrature-dependent cross terms and a
    /// `k²·s²` noise term. Agrees with the pipeline entrywise to rounding.
    Reconciled,
}

/// The scalar triple `(E, G, H)` a reduced-pair covariance matrix is built
/// from: `G` and `H` are the `x` and `p` diagonal scalars, `E` the
/// `x`-quadrature cross scalar.
///
/// With `c = cosh 2r`, `s = sinh 2r`, `h = cos 2φ`, `k = sin 2φ`:
///
/// ```text
/// E = s(c − hs)²                    (both variants)
/// G = c(c − hs)² + k·s²   (printed)   c(c − hs)² + k²s²   (reconciled)
/// H = c(c + hs)² + k·s²   (printed)   c(c + hs)² + k²s²   (reconciled)
/// ```
///
/// For the reconciled variant the `p`-quadrature cross scalar is *not*
/// `E` but the same expression with the sign of `h` flipped, `s(c + hs)²`;
/// the matrix builders apply that internally. The printed variant uses `E`
/// for both quadratures.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedFormEgh {
    /// Cross scalar `E` (`x` quadrature).
    pub e: f64,
    /// Diagonal scalar `G` (`x` quadrature).
    pub g: f64,
    /// Diagonal scalar `H` (`p` quadrature).
    pub h: f64,
    /// Which formula family produced these values.
    pub variant: Variant,
}

impl ClosedFormEgh {
    /// Evaluates the scalar triple at `(r, φ)`.
    ///
    /// # Panics
    ///
    /// If `r` is negative or either argument is not finite.
    #[must_use]
    pub fn new(r: f64, phi: f64, variant: Variant) -> Self {
        let ap = amplifier_params(r, phi);
        let (c, s, h, k) = (ap.c(), ap.s(), ap.h(), ap.k());
        let down = c - h * s;
        let up = c + h * s;
        let noise = match variant {
            Variant::AsPrinted => k * s * s,
            Variant::Reconciled => k * k * s * s,
        };
        ClosedFormEgh {
            e: s * down * down,
            g: c * down * down + noise,
            h: c * up * up + noise,
            variant,
        }
    }
}

/// Everything the broadcasting pipeline produces for one `(r, φ)` point.
#[derive(Debug, Clone, PartialEq)]
pub struct BroadcastResult {
    /// Output state of all six modes `(i, a, b, j, a′, b′)`.
    pub full_cm: CovarianceMatrix,
    /// Reduced state of the cross-site clone pair `(i, b′)`.
    pub nonlocal_cm: CovarianceMatrix,
    /// Reduced state of the same-site clone pair `(i, b)`.
    pub local_cm: CovarianceMatrix,
    /// Partial-transpose verdict for the nonlocal pair.
    pub nonlocal_verdict: SeparabilityVerdict,
    /// Partial-transpose verdict for the local pair.
    pub local_verdict: SeparabilityVerdict,
    /// Local-pair separability parameter, compact form.
    pub r_printed: f64,
    /// Local-pair separability parameter `(G − 1)(H − 1)`, reconciled
    /// form; positive means the local pair is separable.
    pub r_reconciled: f64,
    /// Fidelity of the nonlocal pair against the input two-mode squeezed
    /// state.
    pub fb: FidelityReport,
    /// Whether broadcasting succeeded: nonlocal pair entangled *and*
    /// local pair separable.
    pub success: bool,
}

fn squeeze_params(r: f64) -> SqueezeParams {
    SqueezeParams::new(r).expect("squeezing parameter must be finite and >= 0")
}

fn amplifier_params(r: f64, phi: f64) -> AmplifierParams {
    AmplifierParams::new(r, phi).expect("amplifier parameters must be finite with r >= 0")
}

/// The four-mode input state `(i, a, j, a′)`: a two-mode squeezed pair on
/// `(i, j)` with vacuum ancillas interleaved at each site.
///
/// # Panics
///
/// If `r` is negative or not finite.
#[must_use]
pub fn initial_state_with_ancillas(r: f64) -> CovarianceMatrix {
    let pair = two_mode_squeezed_cm(squeeze_params(r));
    let with_ancillas = direct_sum(&pair, &identity_cm(2).expect("2 > 0")); // (i, j, a, a′)
    let order = ModeSelection::new(&[1, 3, 2, 4]).expect("valid permutation");
    permute(&with_ancillas, &order).expect("permutation of 4 modes")
}

/// The two local amplifiers as one four-mode transform: identical
/// amplifier blocks on `(i, a)` and `(j, a′)`.
///
/// # Panics
///
/// If `r` is negative or either argument is not finite.
#[must_use]
pub fn joint_amplifier(r: f64, phi: f64) -> SymplecticTransform {
    let a = amplifier(amplifier_params(r, phi));
    direct_sum(&a, &a)
}

/// The two local beam splitters as one six-mode transform: identical
/// three-mode blocks on `(i, a, b)` and `(j, a′, b′)`, ancillas untouched.
#[must_use]
pub fn joint_bs() -> SymplecticTransform {
    let b = three_mode_bs();
    direct_sum(&b, &b)
}

/// Runs the broadcasting pipeline at `(r, φ)` and evaluates every derived
/// quantity: reduced pairs, separability verdicts, both closed-form
/// separability parameters, the broadcast fidelity, and the success
/// predicate.
///
/// # Errors
///
/// None in practice — the pipeline output is physical by construction and
/// all selections are static; any internal error would indicate a bug and
/// is propagated rather than unwrapped.
///
/// # Panics
///
/// If `r` is negative or either argument is not finite.
pub fn run_broadcast(r: f64, phi: f64) -> Result<BroadcastResult> {
    let amplified = apply(&joint_amplifier(r, phi), &initial_state_with_ancillas(r))?;
    // Append the two blank modes, then interleave them to their sites:
    // (i, a, j, a′, b, b′) → (i, a, b, j, a′, b′).
    let extended = direct_sum(&amplified, &identity_cm(2)?);
    let order = ModeSelection::new(&[1, 2, 5, 3, 4, 6])?;
    let arranged = permute(&extended, &order)?;
    let full_cm = apply(&joint_bs(), &arranged)?;

    let nonlocal_cm = reduce(&full_cm, &ModeSelection::new(&[1, 6])?)?;
    let local_cm = reduce(&full_cm, &ModeSelection::new(&[1, 3])?)?;
    let nonlocal_verdict = is_separable_two_mode(&nonlocal_cm)?;
    let local_verdict = is_separable_two_mode(&local_cm)?;

    let fb = gaussian_fidelity(&two_mode_squeezed_cm(squeeze_params(r)), &nonlocal_cm)?;
    let success = nonlocal_verdict.entangled && !local_verdict.entangled;
    Ok(BroadcastResult {
        full_cm,
        nonlocal_cm,
        local_cm,
        nonlocal_verdict,
        local_verdict,
        r_printed: separability_parameter_r(r, phi, Variant::AsPrinted),
        r_reconciled: separability_parameter_r(r, phi, Variant::Reconciled),
        fb,
        success,
    })
}

/// Closed-form covariance matrix of the nonlocal pair `(i, b′)`:
/// diagonal `((G+1)/2, (H+1)/2)` per mode, cross block
/// `diag(E_x/2, −E_p/2)`.
///
/// The reconciled variant uses `E_x = s(c−hs)²`, `E_p = s(c+hs)²`; the
/// printed variant uses `E = s(c−hs)²` for both quadratures.
///
/// # Panics
///
/// If `r` is negative or either argument is not finite.
#[must_use]
pub fn nonlocal_reduced_closed(r: f64, phi: f64, variant: Variant) -> CovarianceMatrix {
    let egh = ClosedFormEgh::new(r, phi, variant);
    let e_x = egh.e;
    let e_p = match variant {
        Variant::AsPrinted => egh.e,
        Variant::Reconciled => {
            let ap = amplifier_params(r, phi);
            let up = ap.c() + ap.h() * ap.s();
            ap.s() * up * up
        }
    };
    let a1 = (egh.g + 1.0) / 2.0;
    let a2 = (egh.h + 1.0) / 2.0;
    CovarianceMatrix::new(2, alloc::vec![
        a1, 0.0, e_x / 2.0, 0.0,
        0.0, a2, 0.0, -e_p / 2.0,
        e_x / 2.0, 0.0, a1, 0.0,
        0.0, -e_p / 2.0, 0.0, a2,
    ])
    .expect("symmetric by construction")
}

/// Closed-form covariance matrix of the local pair `(i, b)`: diagonal
/// `((G+1)/2, (H+1)/2)` per mode, cross block
/// `diag((G−1)/2, (H−1)/2)`. The variants differ only through `G` and `H`.
///
/// # Panics
///
/// If `r` is negative or either argument is not finite.
#[must_use]
pub fn local_reduced_closed(r: f64, phi: f64, variant: Variant) -> CovarianceMatrix {
    let egh = ClosedFormEgh::new(r, phi, variant);
    let a1 = (egh.g + 1.0) / 2.0;
    let a2 = (egh.h + 1.0) / 2.0;
    let c1 = (egh.g - 1.0) / 2.0;
    let c2 = (egh.h - 1.0) / 2.0;
    CovarianceMatrix::new(2, alloc::vec![
        a1, 0.0, c1, 0.0,
        0.0, a2, 0.0, c2,
        c1, 0.0, a1, 0.0,
        0.0, c2, 0.0, a2,
    ])
    .expect("symmetric by construction")
}

/// The local-pair separability parameter `R`; positive values mean the
/// local clones are separable.
///
/// The reconciled variant is `(G − 1)(H − 1)` with the reconciled scalars
/// — exactly the product of the local pair's partial-transpose
/// determinant factors, so its sign tracks the verdict of
/// [`is_separable_two_mode`] on the local pair. The printed variant is the
/// compact expression
/// `[(c−hs)²c + (ks²−1)]·[(c+hs²)c + (ks²−1)]` evaluated verbatim,
/// including its unsquared `hs²` term; on the `φ = π/4` line it reduces to
/// `(c³+s²−1)(c²+s²−1)` where the reconciled form gives `(c³+s²−1)²`.
///
/// # Panics
///
/// If `r` is negative or either argument is not finite.
#[must_use]
pub fn separability_parameter_r(r: f64, phi: f64, variant: Variant) -> f64 {
    match variant {
        Variant::AsPrinted => {
            let ap = amplifier_params(r, phi);
            let (c, s, h, k) = (ap.c(), ap.s(), ap.h(), ap.k());
            let down = c - h * s;
            let shared = k * s * s - 1.0;
            (down * down * c + shared) * ((c + h * s * s) * c + shared)
        }
        Variant::Reconciled => {
            let egh = ClosedFormEgh::new(r, phi, Variant::Reconciled);
            (egh.g - 1.0) * (egh.h - 1.0)
        }
    }
}

/// The success predicate on a finished run: the cross-site pair must be
/// entangled while the same-site pair is separable.
#[must_use]
pub fn is_broadcast_successful(res: &BroadcastResult) -> bool {
    res.nonlocal_verdict.entangled && !res.local_verdict.entangled
}
