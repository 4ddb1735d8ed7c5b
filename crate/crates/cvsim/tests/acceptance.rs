//! The acceptance suite: one test per acceptance criterion, each printing
//! a single `ACCEPTANCE <n> PASS/FAIL` line (visible with
//! `--nocapture`, and in the failure output otherwise) and enforcing the
//! criterion's tolerance and runtime budget.
//!
//! Three criteria (6, 7, and the R clause of 10) encode behavioral claims
//! that the implemented pipelines demonstrably do not satisfy; they are
//! asserted as stated and fail with the measured counterexamples rather
//! than being weakened to pass. The analysis lives in each failure
//! message.

use std::time::{Duration, Instant};

use cvsim::{run_verify, Quantity, SweepConfig};
use cvsim_core::{
    amplifier, balanced_bs_2mode, clone_fidelity_phi0, is_broadcast_successful, is_physical,
    is_symplectic, reduce, run_broadcast, run_clone, separability_parameter_r,
    single_mode_squeezer, three_mode_bs, AmplifierParams, CovarianceMatrix, ModeSelection,
    SqueezeParams, Variant,
};

const PI: f64 = std::f64::consts::PI;

fn scaled_diff(a: f64, b: f64) -> f64 {
    (a - b).abs() / 1.0_f64.max(a.abs()).max(b.abs())
}

/// Runs one criterion body, prints its verdict line, and enforces the
/// runtime budget.
fn criterion(number: usize, budget: Duration, desc: &str, body: impl FnOnce() -> Result<(), String>) {
    let start = Instant::now();
    let outcome = body();
    let elapsed = start.elapsed();
    let in_budget = elapsed <= budget;
    let status = if outcome.is_ok() && in_budget { "PASS" } else { "FAIL" };
    println!("ACCEPTANCE {number:2} {status} ({elapsed:?}) - {desc}");
    if let Err(msg) = outcome {
        panic!("criterion {number}: {msg}");
    }
    assert!(
        in_budget,
        "criterion {number}: runtime {elapsed:?} exceeded budget {budget:?}"
    );
}

#[test]
fn a01_clone_fidelity_is_one_at_zero_squeezing() {
    criterion(1, Duration::from_secs(1), "clone fidelity 1 at r = 0 for four phases", || {
        for phi in [0.0, PI / 8.0, PI / 4.0, 3.0 * PI / 8.0] {
            let res = run_clone(0.0, phi).map_err(|e| e.to_string())?;
            let gap = (res.fidelity.value - 1.0).abs();
            if gap > 1e-12 {
                return Err(format!("fidelity at (0, {phi}) off 1 by {gap:e}"));
            }
        }
        Ok(())
    });
}

#[test]
fn a02_phase_zero_closed_fidelity_matches_pipeline() {
    criterion(2, Duration::from_secs(1), "phi = 0 closed-form fidelity vs pipeline", || {
        for i in 0..=20 {
            let r = i as f64 * 0.1;
            let pipeline = run_clone(r, 0.0).map_err(|e| e.to_string())?.fidelity.value;
            let closed = clone_fidelity_phi0(r);
            if (pipeline - closed).abs() > 1e-9 {
                return Err(format!(
                    "at r = {r}: pipeline {pipeline} vs closed {closed}"
                ));
            }
        }
        Ok(())
    });
}

#[test]
fn a03_clone_cm_equals_closed_noise_diag() {
    criterion(3, Duration::from_secs(1), "clone CM equals diag(P, M) on a 21x11 grid", || {
        for i in 0..=20 {
            let r = i as f64 * 0.1;
            for j in 0..=10 {
                let phi = j as f64 * (PI / 2.0) / 10.0;
                let res = run_clone(r, phi).map_err(|e| e.to_string())?;
                let gap = scaled_diff(res.clone_cm.entry(0, 0), res.closed_form_p)
                    .max(scaled_diff(res.clone_cm.entry(1, 1), res.closed_form_m))
                    .max(res.clone_cm.entry(0, 1).abs());
                if gap > 1e-12 {
                    return Err(format!("clone CM off diag(P, M) by {gap:e} at ({r}, {phi})"));
                }
            }
        }
        Ok(())
    });
}

#[test]
fn a04_broadcast_fidelity_limit_at_zero_squeezing() {
    criterion(4, Duration::from_secs(1), "F_B(0, 0) equals 1/(sqrt(18.25) - 1.5)", || {
        let value = run_broadcast(0.0, 0.0).map_err(|e| e.to_string())?.fb.value;
        let exact = 1.0 / (18.25_f64.sqrt() - 1.5);
        if (value - exact).abs() > 1e-12 {
            return Err(format!("F_B(0,0) = {value}, expected {exact}"));
        }
        if (value - 0.36).abs() > 0.005 {
            return Err(format!("F_B(0,0) = {value} not within 0.005 of 0.36"));
        }
        Ok(())
    });
}

#[test]
fn a05_broadcast_fidelity_decays_monotonically() {
    criterion(5, Duration::from_secs(1), "F_B below 0.01 at r = 5 and monotone in r", || {
        for phi in [0.0, PI / 4.0] {
            let mut prev = f64::INFINITY;
            for i in 0..=50 {
                let r = i as f64 * 0.1;
                let value = run_broadcast(r, phi).map_err(|e| e.to_string())?.fb.value;
                if value > prev + 1e-12 {
                    return Err(format!(
                        "F_B increased from {prev} to {value} at (r = {r}, phi = {phi})"
                    ));
                }
                prev = value;
            }
        }
        let tail = run_broadcast(5.0, 0.0).map_err(|e| e.to_string())?.fb.value;
        if tail >= 0.01 {
            return Err(format!("F_B(5, 0) = {tail}, expected < 0.01"));
        }
        Ok(())
    });
}

#[test]
fn a06_nonlocal_pair_entangled_across_the_grid() {
    criterion(
        6,
        Duration::from_secs(2),
        "nonlocal pair entangled at every (r, phi) with r in 0.1..2.0",
        || {
            let mut separable = Vec::new();
            let mut total = 0usize;
            for i in 1..=20 {
                let r = i as f64 * 0.1;
                for j in 0..=10 {
                    let phi = j as f64 * (PI / 2.0) / 10.0;
                    total += 1;
                    let res = run_broadcast(r, phi).map_err(|e| e.to_string())?;
                    if !res.nonlocal_verdict.entangled {
                        separable.push((r, phi, res.nonlocal_verdict.min_pt_symplectic_eigenvalue));
                    }
                }
            }
            if separable.is_empty() {
                return Ok(());
            }
            let (r0, p0, nu0) = separable[0];
            Err(format!(
                "the cross-site pair is NOT always entangled: {}/{} grid points are separable \
                 (first at r = {r0:.1}, phi = {p0:.4}, where nu_min = {nu0:.6} >= 1). \
                 Entanglement survives the amplifier/beam-splitter chain only below a \
                 phase-dependent squeezing threshold, measured at r* = 0.229201 for \
                 phi = pi/4 and r* = 0.520346 for phi = 0; every sampled r above the \
                 threshold yields a separable cross-site pair. The criterion is stated \
                 over r up to 2.0 and is therefore unsatisfiable by this pipeline; the \
                 pipeline itself is validated against closed forms and an independent \
                 oracle elsewhere in the suite.",
                separable.len(),
                total
            ))
        },
    );
}

#[test]
fn a07_broadcast_succeeds_for_all_r_at_quarter_pi() {
    criterion(
        7,
        Duration::from_secs(1),
        "broadcast success for every r in 0.1..3.0 at phi = pi/4",
        || {
            let mut failures = Vec::new();
            for i in 1..=30 {
                let r = i as f64 * 0.1;
                let res = run_broadcast(r, PI / 4.0).map_err(|e| e.to_string())?;
                if !is_broadcast_successful(&res) {
                    failures.push((r, res));
                }
            }
            if failures.is_empty() {
                return Ok(());
            }
            let (r0, res0) = &failures[0];
            Err(format!(
                "broadcast does NOT succeed for all r at phi = pi/4: {}/30 sampled r values \
                 fail (first at r = {r0:.1}: nonlocal nu_min = {:.6}, local nu_min = {:.6}). \
                 At phi = pi/4 the local pair is always separable (R > 0), but the nonlocal \
                 pair stays entangled only for r < r* = 0.229201; success therefore holds \
                 exactly for the sampled r in {{0.1, 0.2}} and fails everywhere above. \
                 Success at small r is covered by passing tests elsewhere in the suite.",
                failures.len(),
                res0.nonlocal_verdict.min_pt_symplectic_eigenvalue,
                res0.local_verdict.min_pt_symplectic_eigenvalue,
            ))
        },
    );
}

#[test]
fn a08_reconciled_r_sign_matches_local_ppt_verdict() {
    criterion(
        8,
        Duration::from_secs(5),
        "sign of reconciled R matches local PPT verdict on the 101x101 grid",
        || {
            for i in 0..=100 {
                let r = i as f64 * 0.02;
                for j in 0..=100 {
                    let phi = j as f64 * (PI / 2.0) / 100.0;
                    let res = run_broadcast(r, phi).map_err(|e| e.to_string())?;
                    let r_value = separability_parameter_r(r, phi, Variant::Reconciled);
                    // Boundary band: |R| <= 1e-10 counts as separable.
                    let predicts_entangled = r_value < -1e-10;
                    if predicts_entangled != res.local_verdict.entangled {
                        return Err(format!(
                            "R = {r_value:e} vs local verdict entangled = {} at ({r}, {phi})",
                            res.local_verdict.entangled
                        ));
                    }
                }
            }
            Ok(())
        },
    );
}

#[test]
fn a09_structural_properties_of_builders_and_pipeline() {
    criterion(
        9,
        Duration::from_secs(5),
        "builders symplectic, pipeline output physical, site symmetry",
        || {
            for i in 0..=20 {
                let r = i as f64 * 0.1;
                let sq = single_mode_squeezer(SqueezeParams::new(r).unwrap());
                let check = is_symplectic(&sq);
                if check.residual > 1e-12 {
                    return Err(format!("squeezer residual {:e} at r = {r}", check.residual));
                }
                for j in 0..=10 {
                    let phi = j as f64 * (PI / 2.0) / 10.0;
                    let amp = amplifier(AmplifierParams::new(r, phi).unwrap());
                    let check = is_symplectic(&amp);
                    if check.residual > 1e-12 {
                        return Err(format!(
                            "amplifier residual {:e} at ({r}, {phi})",
                            check.residual
                        ));
                    }
                }
            }
            for fixed in [balanced_bs_2mode(), three_mode_bs()] {
                let check = is_symplectic(&fixed);
                if check.residual > 1e-12 {
                    return Err(format!("beam splitter residual {:e}", check.residual));
                }
            }

            let nonlocal_sel = ModeSelection::new(&[1, 6]).unwrap();
            let local_sel = ModeSelection::new(&[1, 3]).unwrap();
            let mirror_nl_sel = ModeSelection::new(&[4, 3]).unwrap();
            let mirror_loc_sel = ModeSelection::new(&[4, 6]).unwrap();
            let gap = |a: &CovarianceMatrix, b: &CovarianceMatrix| {
                a.entries()
                    .iter()
                    .zip(b.entries())
                    .map(|(&x, &y)| scaled_diff(x, y))
                    .fold(0.0, f64::max)
            };
            for i in 0..=100 {
                let r = i as f64 * 0.02;
                for j in 0..=100 {
                    let phi = j as f64 * (PI / 2.0) / 100.0;
                    let res = run_broadcast(r, phi).map_err(|e| e.to_string())?;
                    let check = is_physical(&res.full_cm);
                    if !check.physical {
                        return Err(format!(
                            "six-mode output unphysical at ({r}, {phi}), margin {:e}",
                            check.margin
                        ));
                    }
                    let nl = reduce(&res.full_cm, &nonlocal_sel).unwrap();
                    let nl_mirror = reduce(&res.full_cm, &mirror_nl_sel).unwrap();
                    let loc = reduce(&res.full_cm, &local_sel).unwrap();
                    let loc_mirror = reduce(&res.full_cm, &mirror_loc_sel).unwrap();
                    let worst = gap(&nl, &nl_mirror).max(gap(&loc, &loc_mirror));
                    if worst > 1e-12 {
                        return Err(format!("site asymmetry {worst:e} at ({r}, {phi})"));
                    }
                }
            }
            Ok(())
        },
    );
}

#[test]
fn a10_reconciliation_report_clauses() {
    criterion(
        10,
        Duration::from_secs(5),
        "verify rows: clone forms clean everywhere, printed forms clean on pi/4",
        || {
            let report = run_verify();
            let row = |prefix: &str| {
                report
                    .row(prefix)
                    .unwrap_or_else(|| panic!("missing verify row {prefix:?}"))
            };

            for prefix in ["clone noise", "clone fidelity:", "clone fidelity at phi = 0"] {
                let r = row(prefix);
                if r.overall > 1e-12 {
                    return Err(format!(
                        "{} discrepancy {:e} exceeds 1e-12",
                        r.label, r.overall
                    ));
                }
            }

            // The as-printed nonlocal form must diverge from the pipeline
            // somewhere off the pi/4 line: that divergence is the finding
            // the report exists to document.
            let nl = row("nonlocal pair CM");
            let phi0 = nl.phi0_line.unwrap_or(0.0);
            if phi0 <= 1e-12 {
                return Err(format!(
                    "expected a documented nonzero discrepancy for the as-printed \
                     nonlocal form at phi = 0, measured only {phi0:e}"
                ));
            }

            let mut failures = Vec::new();
            for prefix in [
                "nonlocal pair CM",
                "cross/noise scalars",
                "local pair CM",
                "separability parameter R",
            ] {
                let r = row(prefix);
                let line = r.quarter_pi_line.unwrap_or(f64::INFINITY);
                if line > 1e-12 {
                    failures.push(format!("{}: pi/4-line max {line:e}", r.label));
                }
            }
            if failures.is_empty() {
                return Ok(());
            }
            Err(format!(
                "printed closed forms do NOT all coincide with the pipeline on the \
                 phi = pi/4 line: {}. The covariance-matrix forms do coincide there \
                 (cos 2phi = 0 kills every term the variants disagree on), but the \
                 compact separability parameter R keeps two quirks that survive at \
                 phi = pi/4: its noise term enters unsquared (k*s^2 instead of \
                 (k*s)^2 is immaterial on the line since k = 1 there, so this one \
                 vanishes) and its second factor carries (c + h*s^2)*c in place of \
                 (c + h*s)^2*c + noise, which at h = 0 leaves c^2 + k*s^2 - 1 where \
                 the reconciled form has c^3 + k^2*s^2 - 1. At r = 1 the two evaluate \
                 to 1.7207e3 (printed) vs 4.2778e3 (reconciled), a scaled gap of \
                 0.9294, so the clause is unsatisfiable as stated for the R row; the \
                 sign of both variants still agrees everywhere on the grid, which is \
                 what the separability conclusions rest on.",
                failures.join("; ")
            ))
        },
    );
}

#[test]
fn a11_sweep_output_is_byte_identical_across_runs() {
    criterion(11, Duration::from_secs(10), "two identical sweeps produce identical CSV", || {
        let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
        let out_a = dir.path().join("a.csv");
        let out_b = dir.path().join("b.csv");
        let exe = env!("CARGO_BIN_EXE_cvsim");
        for out in [&out_a, &out_b] {
            let status = std::process::Command::new(exe)
                .args([
                    "sweep",
                    "--quantity",
                    "FB_pipeline",
                    "--out",
                    out.to_str().unwrap(),
                ])
                .status()
                .map_err(|e| e.to_string())?;
            if !status.success() {
                return Err(format!("sweep run failed with {status}"));
            }
        }
        let a = std::fs::read(&out_a).map_err(|e| e.to_string())?;
        let b = std::fs::read(&out_b).map_err(|e| e.to_string())?;
        if a != b {
            return Err("two identical sweep invocations produced different bytes".to_string());
        }
        if a.is_empty() || !a.starts_with(b"r,phi,value\n") {
            return Err("sweep CSV missing the expected header".to_string());
        }
        // 101 x 101 grid plus header.
        let lines = a.iter().filter(|&&b| b == b'\n').count();
        if lines != 101 * 101 + 1 {
            return Err(format!("expected 10202 lines, got {lines}"));
        }
        Ok(())
    });
}

/// The default sweep quantity grid is what criterion 8 reasons over; keep
/// the config the acceptance suite assumes in sync with the library
/// default.
#[test]
fn default_config_matches_the_acceptance_grid() {
    let cfg = SweepConfig::default();
    assert_eq!(cfg.r_steps, 100);
    assert_eq!(cfg.phi_steps, 100);
    assert_eq!(cfg.r_min, 0.0);
    assert_eq!(cfg.r_max, 2.0);
    assert_eq!(cfg.phi_min, 0.0);
    assert!((cfg.phi_max - PI / 2.0).abs() < 1e-15);
    assert_eq!(cfg.quantity, Quantity::FbPipeline);
}
