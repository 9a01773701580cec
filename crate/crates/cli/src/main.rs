//! `qcocycle`: batch experiments over the cocycle library with JSON or CSV
//! output.
//!
//! Exit codes: 0 all checks pass, 2 a numerical check failed, 3 precision
//! exhausted (rerun with the suggested `--digits`), 64 bad usage, 1 I/O error.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use qcocycle::verify::Fault;

#[derive(Parser, Debug)]
#[command(name = "qcocycle", version, about = "Spectra, invariant forms and growth of the Podleś-sphere cocycle")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
enum Command {
    /// Eigenvalues of √-1·B_t on spins 0..=smax against [a+2i].
    Spectrum,
    /// Invariant form g_n of the ladder module at --lambda on the window.
    Gram,
    /// Closed and numeric growth per n with zero diagnostics.
    Growth,
    /// Growth scan gated on the three divergence flags.
    Scan,
    /// Every module's invariant suite.
    Verify,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug)]
struct Opts {
    /// Deformation parameter, 0 < q < 1.
    #[arg(long, global = true, default_value = "0.5")]
    q: String,
    /// Coideal parameter a.
    #[arg(long, global = true, default_value = "1.3")]
    a: String,
    /// A-eigenvalue for `gram`: a number in (0, q+1/q] or `discrete` for q+1/q
    /// with its exact kernel.
    #[arg(long, global = true)]
    lambda: Option<String>,
    /// Significant decimal digits (at least 30).
    #[arg(long, global = true, default_value_t = 50)]
    digits: u32,
    /// Largest polynomial degree for `growth`, `scan` and `verify` (at most 200).
    #[arg(long, global = true, default_value_t = 40)]
    nmax: usize,
    /// Window radius N for `gram`: basis vectors e_{b+2n} with |n| ≤ N.
    #[arg(long, global = true, default_value_t = 10)]
    window: i64,
    /// Largest spin for `spectrum`, a multiple of 1/2.
    #[arg(long, global = true, default_value = "3")]
    smax: String,
    /// Step of the growth difference quotient.
    #[arg(long, global = true, default_value = "1e-8")]
    eps: String,
    /// Seed for the random words of `verify`.
    #[arg(long, global = true, default_value_t = 24301)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Corrupt one quantity inside `verify` (spectrum, gram, recurrence, cocycle).
    #[arg(long, global = true, hide = true, value_parser = parse_fault)]
    inject_fault: Option<Fault>,
}

fn parse_fault(s: &str) -> Result<Fault, String> {
    s.parse().map_err(|e: qcocycle::Error| e.to_string())
}

/// Everything that determines an output file, echoed into it.
#[derive(Serialize, Debug)]
struct RunConfig {
    version: &'static str,
    command: Command,
    q: String,
    a: String,
    lambda: Option<String>,
    digits: u32,
    nmax: usize,
    window: i64,
    smax: String,
    eps: String,
    seed: u64,
    format: Format,
    #[serde(skip_serializing_if = "Option::is_none")]
    inject_fault: Option<Fault>,
}

impl RunConfig {
    fn new(command: Command, o: &Opts) -> Self {
        RunConfig {
            version: qcocycle::VERSION,
            command,
            q: o.q.clone(),
            a: o.a.clone(),
            lambda: o.lambda.clone(),
            digits: o.digits,
            nmax: o.nmax,
            window: o.window,
            smax: o.smax.clone(),
            eps: o.eps.clone(),
            seed: o.seed,
            format: o.format,
            inject_fault: o.inject_fault,
        }
    }
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Lib(#[from] qcocycle::Error),
    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
    #[error("cannot encode CSV: {0}")]
    Csv(#[from] csv::Error),
    #[error("cannot encode JSON: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        use qcocycle::Error as E;
        match self {
            CliError::Lib(E::InvalidParameter(_) | E::Domain(_) | E::WindowOverflow { .. }) => 64,
            CliError::Lib(E::PrecisionExhausted { .. }) => 3,
            CliError::Lib(_) => 2,
            _ => 1,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 64 } else { 0 });
        }
    };
    match commands::run(cli.command, &cli.opts) {
        Ok(pass) => ExitCode::from(if pass { 0 } else { 2 }),
        Err(e) => {
            eprintln!("qcocycle: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
