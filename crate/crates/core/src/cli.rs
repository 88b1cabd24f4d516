//! Command-line front end. The `fracstab` binary is a thin wrapper around
//! [`run`].
//!
//! Exit codes: 0 success, 1 bad input, 2 Mittag-Leffler evaluation failure,
//! 3 inconclusive, 4 spectrum outside the sector, 5 ill-conditioned transform,
//! 6 blowup, 7 no contraction, 8 audit did not stabilize.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fde_solver::{solve_pc, solve_voc};
use crate::flaw_audit::{run_audit, AuditCase, AuditReport, DEFAULT_T_MAX};
use crate::io::{read_init, read_system, write_margin_csv, write_trajectory_csv};
use crate::ml_scalar::{ml_derivative, MlParams};
use crate::perron::{build_constants, iterate_perron};
use crate::spectral_stability::{classify, ComplexJson, StabilityClass};

#[derive(Parser, Debug)]
#[command(name = "fracstab", version, about = "Stability tools for Caputo systems of order 1 < α < 2")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate E_{α,β}(z) (or a derivative) and print JSON
    Ml {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        beta: f64,
        #[arg(long, allow_negative_numbers = true)]
        re: f64,
        #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
        im: f64,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        /// Derivative order
        #[arg(long, default_value_t = 0)]
        order: usize,
    },
    /// Sector test of the linear part; prints the report as JSON
    Stability {
        #[arg(long)]
        system: PathBuf,
    },
    /// Integrate the system and write the trajectory as CSV
    Solve {
        #[arg(long)]
        system: PathBuf,
        #[arg(long)]
        init: PathBuf,
        #[arg(long, value_enum)]
        method: SolveMethod,
        #[arg(long)]
        h: f64,
        #[arg(long)]
        t_end: f64,
        /// Output file; stdout when omitted
        #[arg(long)]
        out: Option<PathBuf>,
        /// Operator applications for the perron method
        #[arg(long, default_value_t = 30)]
        iters: usize,
    },
    /// Constants of the contraction argument as JSON
    Constants {
        #[arg(long)]
        system: PathBuf,
    },
    /// Algebraic-versus-exponential decay audit as JSON
    Audit {
        #[arg(long)]
        alpha: f64,
        #[arg(long, default_value_t = 1.0)]
        lambda: f64,
        #[arg(long, default_value_t = DEFAULT_T_MAX)]
        t_max: f64,
        /// Directory for the per-case `margin_beta_<β>.csv` files
        #[arg(long)]
        csv_dir: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SolveMethod {
    Pc,
    Voc,
    Perron,
}

#[derive(Serialize)]
struct MlOutput {
    alpha: f64,
    beta: f64,
    z: ComplexJson,
    order: usize,
    value: ComplexJson,
    abs_error_estimate: f64,
    regime: &'static str,
}

#[derive(Serialize)]
struct AuditCaseSummary<'a> {
    beta: f64,
    algebraic: &'a crate::flaw_audit::AlgebraicLower,
    exponential: &'a crate::flaw_audit::ExpComparison,
    verdict: bool,
}

#[derive(Serialize)]
struct AuditOutput<'a> {
    alpha: f64,
    lambda: f64,
    t_max: f64,
    verdict: bool,
    beta_cases: Vec<AuditCaseSummary<'a>>,
}

fn io_err(e: std::io::Error) -> Error {
    Error::InvalidInput(e.to_string())
}

fn print_json<T: Serialize>(out: &mut dyn Write, v: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(v).map_err(|e| Error::InvalidInput(e.to_string()))?;
    writeln!(out, "{text}").map_err(io_err)
}

fn margin_file_name(case: &AuditCase) -> String {
    format!("margin_beta_{}.csv", case.beta)
}

fn write_audit(report: &AuditReport, out: &mut dyn Write, dir: Option<&PathBuf>) -> Result<()> {
    if let Some(dir) = dir {
        std::fs::create_dir_all(dir).map_err(io_err)?;
        for case in &report.beta_cases {
            let f = File::create(dir.join(margin_file_name(case))).map_err(io_err)?;
            write_margin_csv(case, BufWriter::new(f))?;
        }
    }
    let summary = AuditOutput {
        alpha: report.alpha,
        lambda: report.lambda,
        t_max: report.t_max,
        verdict: report.verdict(),
        beta_cases: report
            .beta_cases
            .iter()
            .map(|c| AuditCaseSummary {
                beta: c.beta,
                algebraic: &c.algebraic,
                exponential: &c.exponential,
                verdict: c.verdict,
            })
            .collect(),
    };
    print_json(out, &summary)
}

fn execute(cmd: Command, out: &mut dyn Write) -> Result<i32> {
    match cmd {
        Command::Ml { alpha, beta, re, im, tol, order } => {
            let p = MlParams::new(alpha, beta)?;
            let z = Complex64::new(re, im);
            let r = ml_derivative(p, z, order, tol)?;
            if r.abs_error_estimate > tol {
                log::warn!(
                    "error estimate {:e} exceeds the requested tolerance {tol:e}",
                    r.abs_error_estimate
                );
            }
            print_json(
                out,
                &MlOutput {
                    alpha,
                    beta,
                    z: z.into(),
                    order,
                    value: r.value.into(),
                    abs_error_estimate: r.abs_error_estimate,
                    regime: r.regime.as_str(),
                },
            )?;
            Ok(0)
        }
        Command::Stability { system } => {
            let s = read_system(&system)?;
            let report = classify(&s.a, s.order)?;
            print_json(out, &report)?;
            Ok(match report.overall {
                StabilityClass::AsymptoticallyStable => 0,
                StabilityClass::Inconclusive => 3,
                StabilityClass::HasUnstableMode => 4,
            })
        }
        Command::Solve { system, init, method, h, t_end, out: path, iters } => {
            let s = read_system(&system)?;
            let init = read_init(&init)?;
            let tr = match method {
                SolveMethod::Pc => solve_pc(&s, &init, h, t_end)?,
                SolveMethod::Voc => solve_voc(&s, &init, h, t_end)?,
                SolveMethod::Perron => {
                    let pc = build_constants(&s)?;
                    let run = iterate_perron(&s, &init, &pc, h, t_end, iters)?;
                    log::info!(
                        "perron: q = {:.4}, delta = {:e}, final increment {:e}",
                        pc.q,
                        pc.delta,
                        run.residual()
                    );
                    run.trajectory
                }
            };
            match path {
                Some(p) => write_trajectory_csv(&tr, BufWriter::new(File::create(p).map_err(io_err)?))?,
                None => write_trajectory_csv(&tr, &mut *out)?,
            }
            Ok(0)
        }
        Command::Constants { system } => {
            let s = read_system(&system)?;
            print_json(out, &build_constants(&s)?)?;
            Ok(0)
        }
        Command::Audit { alpha, lambda, t_max, csv_dir } => {
            let report = run_audit(alpha, lambda, t_max)?;
            write_audit(&report, out, csv_dir.as_ref())?;
            Ok(if report.verdict() { 0 } else { 8 })
        }
    }
}

/// Parse `args` (including the program name) and run one subcommand.
/// Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            match &e {
                Error::Blowup { time, .. } => eprintln!("error: {e} (escape time {time})"),
                _ => eprintln!("error: {e}"),
            }
            e.exit_code()
        }
    }
}
