//! Library half of the `cvsim` command-line tool: quantity evaluation over
//! `(r, φ)` grids, deterministic CSV emission, single-point protocol
//! reports, and the reconciliation report that quantifies where the
//! compact ("as printed") closed forms depart from the matrix pipeline.
//!
//! The binary in `main.rs` is a thin argument-parsing shell over these
//! functions; everything here is directly testable.

use std::fmt;
use std::io::{self, Write};

use cvsim_core::{
    clone_fidelity_closed, clone_fidelity_phi0, fidelity_report_raw, local_reduced_closed,
    nonlocal_reduced_closed, partial_transpose_two_mode, run_broadcast, run_clone,
    separability_parameter_r, symplectic_eigenvalues_two_mode, two_mode_squeezed_cm,
    BroadcastResult, CloneResult, ClosedFormEgh, CovarianceMatrix, SeparabilityVerdict,
    SqueezeParams, Variant,
};

/// Scaled difference used throughout the reports:
/// `|a − b| / max(1, |a|, |b|)` — absolute at vacuum scale, relative for
/// the `cosh³(2r)`-sized protocol values.
fn scaled_diff(a: f64, b: f64) -> f64 {
    (a - b).abs() / 1.0_f64.max(a.abs()).max(b.abs())
}

fn scaled_cm_gap(a: &CovarianceMatrix, b: &CovarianceMatrix) -> f64 {
    a.entries()
        .iter()
        .zip(b.entries())
        .map(|(&x, &y)| scaled_diff(x, y))
        .fold(0.0, f64::max)
}

/// Pipeline-vs-closed-form residual beyond which a single-point command
/// reports an internal consistency failure (exit code 1). Grid tests pin
/// the true agreement near 1e−15; this is a circuit breaker, not a
/// tolerance for correctness claims.
pub const CONSISTENCY_LIMIT: f64 = 1e-9;

/// Errors a CLI operation can produce, each mapping to a documented exit
/// code: usage and I/O problems exit 2, internal consistency failures
/// exit 1.
#[derive(Debug)]
pub enum CliError {
    /// Malformed or out-of-domain arguments.
    Usage(String),
    /// The pipeline and a closed form disagreed where agreement is
    /// required, or a value that must be finite was not.
    Consistency(String),
    /// The output path could not be created or written.
    Io(io::Error),
}

impl CliError {
    /// The process exit code this error maps to.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => 2,
            CliError::Consistency(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "{msg}"),
            CliError::Consistency(msg) => write!(f, "internal consistency failure: {msg}"),
            CliError::Io(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

/// Validates a single-point parameter pair. `r` must be finite and
/// non-negative, `phi` finite.
pub fn validate_point(r: f64, phi: f64) -> Result<(), CliError> {
    if !r.is_finite() || r < 0.0 {
        return Err(CliError::Usage(format!(
            "squeezing parameter r must be finite and >= 0, got {r}"
        )));
    }
    if !phi.is_finite() {
        return Err(CliError::Usage(format!("phase phi must be finite, got {phi}")));
    }
    Ok(())
}

/// The sweepable quantities. Names match the `--quantity` flag exactly.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    /// Local-pair separability parameter, compact closed form.
    RPrinted,
    /// Local-pair separability parameter `(G−1)(H−1)`, reconciled form.
    RReconciled,
    /// Broadcast fidelity from the matrix pipeline.
    FbPipeline,
    /// Broadcast fidelity against the as-printed nonlocal closed form
    /// (may be NaN where that form leaves the formula's domain).
    FbPrinted,
    /// Clone fidelity from the cloning pipeline.
    CloneF,
    /// Smallest partial-transpose symplectic eigenvalue of the nonlocal
    /// pair (variant-selectable).
    NuNonlocal,
    /// Smallest partial-transpose symplectic eigenvalue of the local pair
    /// (variant-selectable).
    NuLocal,
}

impl Quantity {
    /// All quantities, in flag-name order.
    pub const ALL: [Quantity; 7] = [
        Quantity::RPrinted,
        Quantity::RReconciled,
        Quantity::FbPipeline,
        Quantity::FbPrinted,
        Quantity::CloneF,
        Quantity::NuNonlocal,
        Quantity::NuLocal,
    ];

    /// The exact flag-value spelling.
    pub fn name(self) -> &'static str {
        match self {
            Quantity::RPrinted => "R_printed",
            Quantity::RReconciled => "R_reconciled",
            Quantity::FbPipeline => "FB_pipeline",
            Quantity::FbPrinted => "FB_printed",
            Quantity::CloneF => "clone_F",
            Quantity::NuNonlocal => "nu_nonlocal",
            Quantity::NuLocal => "nu_local",
        }
    }

    /// Parses the exact flag-value spelling.
    pub fn parse(s: &str) -> Option<Quantity> {
        Quantity::ALL.into_iter().find(|q| q.name() == s)
    }

    /// Whether `--variant` applies: only the ν quantities leave the
    /// closed-form family open; every other quantity pins its own.
    pub fn supports_variant(self) -> bool {
        matches!(self, Quantity::NuNonlocal | Quantity::NuLocal)
    }

    /// Whether a non-finite value is an internal error (exit 1) rather
    /// than a reportable data point. The as-printed forms are allowed to
    /// leave their formulas' domains; pipeline-backed quantities are not.
    pub fn requires_finite(self, variant: Variant) -> bool {
        match self {
            Quantity::FbPrinted => false,
            Quantity::NuNonlocal | Quantity::NuLocal => variant == Variant::Reconciled,
            _ => true,
        }
    }
}

/// Evaluates one quantity at one grid point. `variant` is consulted only
/// for the ν quantities (see [`Quantity::supports_variant`]).
///
/// # Panics
///
/// If `r` is negative or either argument is not finite; validate with
/// [`validate_point`] first.
pub fn eval_quantity(q: Quantity, variant: Variant, r: f64, phi: f64) -> f64 {
    match q {
        Quantity::RPrinted => separability_parameter_r(r, phi, Variant::AsPrinted),
        Quantity::RReconciled => separability_parameter_r(r, phi, Variant::Reconciled),
        Quantity::FbPipeline => pipeline(r, phi).fb.value,
        Quantity::FbPrinted => {
            let input = two_mode_squeezed_cm(squeeze(r));
            let printed = nonlocal_reduced_closed(r, phi, Variant::AsPrinted);
            fidelity_report_raw(&input, &printed)
                .expect("both states are two-mode")
                .value
        }
        Quantity::CloneF => run_clone(r, phi).expect("static pipeline").fidelity.value,
        Quantity::NuNonlocal | Quantity::NuLocal => match variant {
            Variant::Reconciled => {
                let res = pipeline(r, phi);
                let verdict = if q == Quantity::NuNonlocal {
                    res.nonlocal_verdict
                } else {
                    res.local_verdict
                };
                verdict.min_pt_symplectic_eigenvalue
            }
            Variant::AsPrinted => {
                let cm = if q == Quantity::NuNonlocal {
                    nonlocal_reduced_closed(r, phi, Variant::AsPrinted)
                } else {
                    local_reduced_closed(r, phi, Variant::AsPrinted)
                };
                partial_transpose_two_mode(&cm, 2)
                    .and_then(|pt| symplectic_eigenvalues_two_mode(&pt))
                    .map_or(f64::NAN, |(lo, _)| lo)
            }
        },
    }
}

fn squeeze(r: f64) -> SqueezeParams {
    SqueezeParams::new(r).expect("r validated upstream")
}

fn pipeline(r: f64, phi: f64) -> BroadcastResult {
    run_broadcast(r, phi).expect("static pipeline")
}

/// A rectangular sweep: `(r_steps + 1) × (phi_steps + 1)` points, unless
/// an axis is degenerate (`min == max`), which collapses it to one point.
#[derive(Debug, Clone)]
pub struct SweepConfig {
    /// Inclusive squeezing range start, `>= 0`.
    pub r_min: f64,
    /// Inclusive squeezing range end.
    pub r_max: f64,
    /// Number of steps along r (points − 1 on a non-degenerate axis).
    pub r_steps: usize,
    /// Inclusive phase range start, radians.
    pub phi_min: f64,
    /// Inclusive phase range end, radians.
    pub phi_max: f64,
    /// Number of steps along φ.
    pub phi_steps: usize,
    /// What to evaluate at each point.
    pub quantity: Quantity,
    /// Closed-form family for the ν quantities.
    pub variant: Variant,
}

impl SweepConfig {
    /// Checks the domain invariants, mapping violations to usage errors.
    pub fn validate(&self) -> Result<(), CliError> {
        let usage = |msg: String| Err(CliError::Usage(msg));
        if !self.r_min.is_finite() || !self.r_max.is_finite() || self.r_min < 0.0 {
            return usage(format!(
                "r range must be finite with r-min >= 0, got [{}, {}]",
                self.r_min, self.r_max
            ));
        }
        if self.r_min > self.r_max {
            return usage(format!("r-min {} exceeds r-max {}", self.r_min, self.r_max));
        }
        if !self.phi_min.is_finite() || !self.phi_max.is_finite() {
            return usage(format!(
                "phi range must be finite, got [{}, {}]",
                self.phi_min, self.phi_max
            ));
        }
        if self.phi_min > self.phi_max {
            return usage(format!(
                "phi-min {} exceeds phi-max {}",
                self.phi_min, self.phi_max
            ));
        }
        if self.r_steps == 0 || self.phi_steps == 0 {
            return usage("step counts must be >= 1".to_string());
        }
        Ok(())
    }
}

impl Default for SweepConfig {
    /// The default grid: `r ∈ [0, 2]`, `φ ∈ [0, π/2]`, 101 × 101 points,
    /// broadcast fidelity from the pipeline.
    fn default() -> Self {
        SweepConfig {
            r_min: 0.0,
            r_max: 2.0,
            r_steps: 100,
            phi_min: 0.0,
            phi_max: std::f64::consts::FRAC_PI_2,
            phi_steps: 100,
            quantity: Quantity::FbPipeline,
            variant: Variant::Reconciled,
        }
    }
}

/// The coordinates of one axis: `steps + 1` evenly spaced points, or a
/// single point when the range is degenerate.
pub fn axis_points(min: f64, max: f64, steps: usize) -> Vec<f64> {
    if min == max {
        return vec![min];
    }
    let h = (max - min) / steps as f64;
    (0..=steps).map(|i| min + i as f64 * h).collect()
}

/// Writes the sweep as CSV: header `r,phi,value`, one row per grid point,
/// r as the outer loop, values at 12 significant digits. Output is
/// deterministic byte-for-byte for identical configs.
///
/// # Errors
///
/// [`CliError::Usage`] for invalid configs, [`CliError::Io`] for write
/// failures, and [`CliError::Consistency`] if a pipeline-backed quantity
/// evaluates to a non-finite value.
pub fn write_sweep_csv<W: Write>(cfg: &SweepConfig, mut out: W) -> Result<(), CliError> {
    cfg.validate()?;
    let needs_finite = cfg.quantity.requires_finite(cfg.variant);
    writeln!(out, "r,phi,value")?;
    for &r in &axis_points(cfg.r_min, cfg.r_max, cfg.r_steps) {
        for &phi in &axis_points(cfg.phi_min, cfg.phi_max, cfg.phi_steps) {
            let value = eval_quantity(cfg.quantity, cfg.variant, r, phi);
            if needs_finite && !value.is_finite() {
                return Err(CliError::Consistency(format!(
                    "{} must be finite but is {value} at r = {r}, phi = {phi}",
                    cfg.quantity.name()
                )));
            }
            writeln!(out, "{},{},{:.11e}", r, phi, value)?;
        }
    }
    Ok(())
}

/// Everything `cvsim clone` prints, plus the residuals it checked.
#[derive(Debug, Clone)]
pub struct CloneReport {
    /// Parameters of the run.
    pub r: f64,
    /// Amplifier phase of the run.
    pub phi: f64,
    /// The full pipeline output.
    pub result: CloneResult,
    /// Scaled gap between the clone covariance diagonal and `(P, M)`.
    pub noise_residual: f64,
    /// Scaled gap between pipeline fidelity and the closed form.
    pub fidelity_residual: f64,
}

/// Runs the cloning pipeline at one point and cross-checks it against the
/// closed forms.
///
/// # Errors
///
/// [`CliError::Usage`] for out-of-domain parameters;
/// [`CliError::Consistency`] if pipeline and closed forms disagree beyond
/// [`CONSISTENCY_LIMIT`].
pub fn clone_report(r: f64, phi: f64) -> Result<CloneReport, CliError> {
    validate_point(r, phi)?;
    let result = run_clone(r, phi).expect("parameters validated");
    let noise_residual = scaled_diff(result.clone_cm.entry(0, 0), result.closed_form_p)
        .max(scaled_diff(result.clone_cm.entry(1, 1), result.closed_form_m));
    let fidelity_residual = scaled_diff(result.fidelity.value, clone_fidelity_closed(r, phi));
    let report = CloneReport { r, phi, result, noise_residual, fidelity_residual };
    if report.noise_residual > CONSISTENCY_LIMIT || report.fidelity_residual > CONSISTENCY_LIMIT {
        return Err(CliError::Consistency(format!(
            "clone pipeline vs closed forms: noise residual {:e}, fidelity residual {:e}",
            report.noise_residual, report.fidelity_residual
        )));
    }
    Ok(report)
}

impl fmt::Display for CloneReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "clone at r = {}, phi = {}", self.r, self.phi)?;
        writeln!(
            f,
            "  clone CM diag (x, p): ({}, {})",
            self.result.clone_cm.entry(0, 0),
            self.result.clone_cm.entry(1, 1)
        )?;
        writeln!(
            f,
            "  closed form (P, M):   ({}, {})   residual {:.2e}",
            self.result.closed_form_p, self.result.closed_form_m, self.noise_residual
        )?;
        writeln!(f, "  fidelity (pipeline):  {}", self.result.fidelity.value)?;
        write!(
            f,
            "  fidelity (closed):    {}   residual {:.2e}",
            clone_fidelity_closed(self.r, self.phi),
            self.fidelity_residual
        )
    }
}

/// Everything `cvsim broadcast` prints, plus the residual it checked.
#[derive(Debug, Clone)]
pub struct BroadcastReport {
    /// Parameters of the run.
    pub r: f64,
    /// Amplifier phase of the run.
    pub phi: f64,
    /// The full pipeline output.
    pub result: BroadcastResult,
    /// Scaled gap between the pipeline's reduced pairs and the reconciled
    /// closed forms.
    pub closed_form_residual: f64,
}

/// Runs the broadcasting pipeline at one point and cross-checks the
/// reduced pairs against the reconciled closed forms.
///
/// # Errors
///
/// [`CliError::Usage`] for out-of-domain parameters;
/// [`CliError::Consistency`] if the reconciled closed forms disagree with
/// the pipeline beyond [`CONSISTENCY_LIMIT`], or the fidelity is not
/// finite.
pub fn broadcast_report(r: f64, phi: f64) -> Result<BroadcastReport, CliError> {
    validate_point(r, phi)?;
    let result = run_broadcast(r, phi).expect("parameters validated");
    let closed_form_residual = scaled_cm_gap(
        &result.nonlocal_cm,
        &nonlocal_reduced_closed(r, phi, Variant::Reconciled),
    )
    .max(scaled_cm_gap(
        &result.local_cm,
        &local_reduced_closed(r, phi, Variant::Reconciled),
    ));
    if closed_form_residual > CONSISTENCY_LIMIT {
        return Err(CliError::Consistency(format!(
            "broadcast pipeline vs reconciled closed forms: residual {closed_form_residual:e}"
        )));
    }
    if !result.fb.value.is_finite() {
        return Err(CliError::Consistency(format!(
            "broadcast fidelity is not finite: {}",
            result.fb.value
        )));
    }
    Ok(BroadcastReport { r, phi, result, closed_form_residual })
}

fn verdict_line(v: &SeparabilityVerdict) -> String {
    format!(
        "{} (nu_min = {}, margin = {})",
        if v.entangled { "entangled" } else { "separable" },
        v.min_pt_symplectic_eigenvalue,
        v.margin
    )
}

impl fmt::Display for BroadcastReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "broadcast at r = {}, phi = {}", self.r, self.phi)?;
        writeln!(f, "  nonlocal pair: {}", verdict_line(&self.result.nonlocal_verdict))?;
        writeln!(f, "  local pair:    {}", verdict_line(&self.result.local_verdict))?;
        writeln!(f, "  R (as printed): {}", self.result.r_printed)?;
        writeln!(f, "  R (reconciled): {}", self.result.r_reconciled)?;
        writeln!(f, "  F_B = {}", self.result.fb.value)?;
        writeln!(f, "  closed-form residual = {:.2e}", self.closed_form_residual)?;
        write!(f, "  success = {}", self.result.success)
    }
}

/// One row of the reconciliation report: a closed form compared against
/// the pipeline (or against its reconciled counterpart), with the maximum
/// scaled discrepancy overall and on the two distinguished phase lines.
#[derive(Debug, Clone)]
pub struct VerifyRow {
    /// What is being compared.
    pub label: &'static str,
    /// Maximum scaled discrepancy over the grid.
    pub overall: f64,
    /// Grid point where the overall maximum occurs.
    pub at: (f64, f64),
    /// Maximum over the `φ = π/4` line (None where the comparison is
    /// defined only at `φ = 0`).
    pub quarter_pi_line: Option<f64>,
    /// Maximum over the `φ = 0` line.
    pub phi0_line: Option<f64>,
}

/// The full reconciliation report over the default grid.
#[derive(Debug, Clone)]
pub struct VerifyReport {
    /// Per-comparison rows, clone forms first.
    pub rows: Vec<VerifyRow>,
    /// Grid resolution along r.
    pub r_points: usize,
    /// Grid resolution along φ.
    pub phi_points: usize,
}

impl VerifyReport {
    /// Looks a row up by its label prefix.
    pub fn row(&self, prefix: &str) -> Option<&VerifyRow> {
        self.rows.iter().find(|row| row.label.starts_with(prefix))
    }
}

struct RowTracker {
    label: &'static str,
    overall: f64,
    at: (f64, f64),
    quarter_pi: Option<f64>,
    phi0: Option<f64>,
}

impl RowTracker {
    fn new(label: &'static str) -> Self {
        RowTracker { label, overall: 0.0, at: (0.0, 0.0), quarter_pi: None, phi0: None }
    }

    fn update(&mut self, r: f64, phi: f64, diff: f64) {
        if diff > self.overall {
            self.overall = diff;
            self.at = (r, phi);
        }
        if phi == 0.0 {
            let slot = self.phi0.get_or_insert(0.0);
            *slot = slot.max(diff);
        }
    }

    fn update_quarter_pi(&mut self, diff: f64) {
        let slot = self.quarter_pi.get_or_insert(0.0);
        *slot = slot.max(diff);
    }

    fn finish(self) -> VerifyRow {
        VerifyRow {
            label: self.label,
            overall: self.overall,
            at: self.at,
            quarter_pi_line: self.quarter_pi,
            phi0_line: self.phi0,
        }
    }
}

/// The seven comparison values at one grid point. Index 2 (the `φ = 0`
/// specialization) is `None` away from that line.
fn point_diffs(r: f64, phi: f64) -> [Option<f64>; 7] {
    let clone = run_clone(r, phi).expect("static pipeline");
    let broadcast = pipeline(r, phi);

    let noise = scaled_diff(clone.clone_cm.entry(0, 0), clone.closed_form_p)
        .max(scaled_diff(clone.clone_cm.entry(1, 1), clone.closed_form_m));
    let fid = scaled_diff(clone.fidelity.value, clone_fidelity_closed(r, phi));
    let fid_phi0 = (phi == 0.0)
        .then(|| scaled_diff(clone.fidelity.value, clone_fidelity_phi0(r)));

    let nl_printed = nonlocal_reduced_closed(r, phi, Variant::AsPrinted);
    let nl = scaled_cm_gap(&broadcast.nonlocal_cm, &nl_printed);

    let egh = ClosedFormEgh::new(r, phi, Variant::AsPrinted);
    let e_x = 2.0 * broadcast.nonlocal_cm.entry(0, 2);
    let e_p = -2.0 * broadcast.nonlocal_cm.entry(1, 3);
    let g = 2.0 * broadcast.local_cm.entry(0, 0) - 1.0;
    let h = 2.0 * broadcast.local_cm.entry(1, 1) - 1.0;
    let scalars = scaled_diff(egh.e, e_x)
        .max(scaled_diff(egh.e, e_p))
        .max(scaled_diff(egh.g, g))
        .max(scaled_diff(egh.h, h));

    let loc_printed = local_reduced_closed(r, phi, Variant::AsPrinted);
    let loc = scaled_cm_gap(&broadcast.local_cm, &loc_printed);

    let r_gap = scaled_diff(broadcast.r_printed, broadcast.r_reconciled);

    [Some(noise), Some(fid), fid_phi0, Some(nl), Some(scalars), Some(loc), Some(r_gap)]
}

/// Runs the printed-vs-pipeline comparison over the default grid
/// (`r ∈ [0, 2]`, `φ ∈ [0, π/2]`, 101 × 101 points) plus a dedicated pass
/// along the exact `φ = π/4` line, and reports the maximum scaled
/// discrepancy per closed form. Discrepancies are findings, not failures.
pub fn run_verify() -> VerifyReport {
    let rs = axis_points(0.0, 2.0, 100);
    let phis = axis_points(0.0, std::f64::consts::FRAC_PI_2, 100);
    let mut trackers = [
        RowTracker::new("clone noise (P, M): closed form vs pipeline"),
        RowTracker::new("clone fidelity: closed form vs pipeline"),
        RowTracker::new("clone fidelity at phi = 0: specialized form vs pipeline"),
        RowTracker::new("nonlocal pair CM: as-printed form vs pipeline"),
        RowTracker::new("cross/noise scalars (E, G, H): as-printed vs pipeline-derived"),
        RowTracker::new("local pair CM: as-printed form vs pipeline"),
        RowTracker::new("separability parameter R: as-printed vs reconciled"),
    ];

    for &r in &rs {
        for &phi in &phis {
            for (tracker, diff) in trackers.iter_mut().zip(point_diffs(r, phi)) {
                if let Some(diff) = diff {
                    tracker.update(r, phi, diff);
                }
            }
        }
        // The π/4 line is sampled exactly, not through the grid spacing.
        for (tracker, diff) in trackers
            .iter_mut()
            .zip(point_diffs(r, std::f64::consts::FRAC_PI_4))
        {
            if let Some(diff) = diff {
                tracker.update_quarter_pi(diff);
            }
        }
    }

    VerifyReport {
        rows: trackers.into_iter().map(RowTracker::finish).collect(),
        r_points: rs.len(),
        phi_points: phis.len(),
    }
}

fn line_cell(v: Option<f64>) -> String {
    v.map_or_else(|| "n/a".to_string(), |d| format!("{d:.3e}"))
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "reconciliation over r in [0, 2] x phi in [0, pi/2] ({} x {} points, plus the exact phi = pi/4 line)",
            self.r_points, self.phi_points
        )?;
        writeln!(f, "max scaled discrepancy |a - b| / max(1, |a|, |b|):")?;
        for row in &self.rows {
            writeln!(f)?;
            writeln!(f, "  {}", row.label)?;
            writeln!(
                f,
                "    overall {:.3e} at (r, phi) = ({:.4}, {:.4})",
                row.overall, row.at.0, row.at.1
            )?;
            writeln!(
                f,
                "    phi = pi/4 line: {:<12} phi = 0 line: {}",
                line_cell(row.quarter_pi_line),
                line_cell(row.phi0_line)
            )?;
        }
        Ok(())
    }
}
