//! `cvsim` — evaluate the cloning and entanglement-broadcasting pipelines
//! from the command line: single-point reports, rectangular `(r, φ)` CSV
//! sweeps, and a reconciliation report for the compact closed forms.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use cvsim::{
    broadcast_report, clone_report, run_verify, write_sweep_csv, CliError, Quantity, SweepConfig,
};
use cvsim_core::Variant;

const PI: f64 = std::f64::consts::PI;

#[derive(Parser)]
#[command(
    name = "cvsim",
    version,
    about = "Continuous-variable cloning and entanglement-broadcasting simulator",
    after_help = "Exit codes: 0 success, 1 internal consistency failure, 2 usage error."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the cloning pipeline at one point; print clone noise and fidelity
    Clone(PointArgs),
    /// Run the broadcasting pipeline at one point; print verdicts, R, and F_B
    Broadcast(PointArgs),
    /// Evaluate a quantity over an (r, phi) grid and emit CSV
    Sweep(SweepArgs),
    /// Compare the as-printed closed forms against the pipeline over the default grid
    Verify,
}

#[derive(Args)]
struct PointArgs {
    /// Squeezing parameter (>= 0)
    #[arg(long, allow_negative_numbers = true)]
    r: f64,
    /// Amplifier phase, radians
    #[arg(long, default_value_t = 0.0, conflicts_with = "phi_pi", allow_negative_numbers = true)]
    phi: f64,
    /// Amplifier phase, units of pi
    #[arg(long, allow_negative_numbers = true)]
    phi_pi: Option<f64>,
}

impl PointArgs {
    fn phi(&self) -> f64 {
        self.phi_pi.map_or(self.phi, |x| x * PI)
    }
}

#[derive(Args)]
struct SweepArgs {
    /// Start of the squeezing range (>= 0)
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    r_min: f64,
    /// End of the squeezing range
    #[arg(long, default_value_t = 2.0, allow_negative_numbers = true)]
    r_max: f64,
    /// Steps along r (points = steps + 1 unless the range is degenerate)
    #[arg(long, default_value_t = 100)]
    r_steps: usize,
    /// Start of the phase range, radians
    #[arg(long, default_value_t = 0.0, conflicts_with = "phi_min_pi", allow_negative_numbers = true)]
    phi_min: f64,
    /// End of the phase range, radians (default pi/2)
    #[arg(long, conflicts_with = "phi_max_pi", allow_negative_numbers = true)]
    phi_max: Option<f64>,
    /// Start of the phase range, units of pi
    #[arg(long, allow_negative_numbers = true)]
    phi_min_pi: Option<f64>,
    /// End of the phase range, units of pi
    #[arg(long, allow_negative_numbers = true)]
    phi_max_pi: Option<f64>,
    /// Steps along phi (points = steps + 1 unless the range is degenerate)
    #[arg(long, default_value_t = 100)]
    phi_steps: usize,
    /// Quantity to evaluate at each grid point
    #[arg(long, value_parser = parse_quantity)]
    quantity: Quantity,
    /// Closed-form family for the nu quantities: printed | reconciled
    #[arg(long, value_parser = parse_variant)]
    variant: Option<Variant>,
    /// Output CSV path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_quantity(s: &str) -> Result<Quantity, String> {
    Quantity::parse(s).ok_or_else(|| {
        let names: Vec<&str> = Quantity::ALL.iter().map(|q| q.name()).collect();
        format!("unknown quantity {s:?}; expected one of: {}", names.join(", "))
    })
}

fn parse_variant(s: &str) -> Result<Variant, String> {
    match s {
        "printed" => Ok(Variant::AsPrinted),
        "reconciled" => Ok(Variant::Reconciled),
        other => Err(format!("unknown variant {other:?}; expected printed or reconciled")),
    }
}

impl SweepArgs {
    fn into_config(self) -> Result<(SweepConfig, Option<PathBuf>), CliError> {
        if let Some(variant) = self.variant {
            if !self.quantity.supports_variant() {
                return Err(CliError::Usage(format!(
                    "--variant does not apply to {}: that quantity pins its own closed-form \
                     family; only nu_nonlocal and nu_local accept it",
                    self.quantity.name()
                )));
            }
            let _ = variant;
        }
        let cfg = SweepConfig {
            r_min: self.r_min,
            r_max: self.r_max,
            r_steps: self.r_steps,
            phi_min: self.phi_min_pi.map_or(self.phi_min, |x| x * PI),
            phi_max: self
                .phi_max_pi
                .map(|x| x * PI)
                .or(self.phi_max)
                .unwrap_or(PI / 2.0),
            phi_steps: self.phi_steps,
            quantity: self.quantity,
            variant: self.variant.unwrap_or(Variant::Reconciled),
        };
        Ok((cfg, self.out))
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Clone(args) => {
            let report = clone_report(args.r, args.phi())?;
            println!("{report}");
        }
        Command::Broadcast(args) => {
            let report = broadcast_report(args.r, args.phi())?;
            println!("{report}");
        }
        Command::Sweep(args) => {
            let (cfg, out) = args.into_config()?;
            match out {
                Some(path) => {
                    let file = File::create(&path).map_err(|e| {
                        CliError::Usage(format!("cannot write {}: {e}", path.display()))
                    })?;
                    let mut writer = BufWriter::new(file);
                    write_sweep_csv(&cfg, &mut writer)?;
                    writer.flush()?;
                }
                None => {
                    let stdout = std::io::stdout();
                    let mut lock = stdout.lock();
                    write_sweep_csv(&cfg, &mut lock)?;
                    lock.flush()?;
                }
            }
        }
        Command::Verify => {
            print!("{}", run_verify());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
