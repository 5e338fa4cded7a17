//! `ballbound` command-line front end.
//!
//! Exit codes: 0 success, 1 a certification or verification check failed
//! (the report says which), 2 bad input.

mod selftest;
mod verify;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use ballbound::bounds::{self, Theorem};
use ballbound::instance::InstanceFile;
use ballbound::pipeline::{self, BallCertificate, Mode, Options, SaMode, SaOutcome};
use ballbound::Error;
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "ballbound", version, about = "Radii of balls containing or meeting the components of real algebraic and semi-algebraic sets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form radius from the parameters or from an instance file.
    Bound(BoundArgs),
    /// Per-instance certified radius.
    Certify(CertifyArgs),
    /// Check a radius against brute-force oracles (k = 1 or 2).
    Verify(VerifyArgs),
    /// Run the built-in golden examples.
    Selftest,
}

#[derive(Clone, Copy, ValueEnum)]
enum CliMode {
    Contain,
    Meet,
}

impl From<CliMode> for Mode {
    fn from(m: CliMode) -> Mode {
        match m {
            CliMode::Contain => Mode::Contain,
            CliMode::Meet => Mode::Meet,
        }
    }
}

#[derive(Args)]
struct BoundArgs {
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=4))]
    theorem: u8,
    #[arg(long, conflicts_with_all = ["k", "d", "tau", "s"])]
    input: Option<PathBuf>,
    #[arg(short = 'k')]
    k: Option<u64>,
    #[arg(short = 'd')]
    d: Option<u64>,
    #[arg(long)]
    tau: Option<u64>,
    #[arg(long)]
    s: Option<u64>,
}

#[derive(Args)]
struct CertifyArgs {
    #[arg(long, value_enum)]
    mode: CliMode,
    #[arg(long)]
    input: PathBuf,
    /// Skip the pipeline and report the closed form.
    #[arg(long)]
    closed_form_only: bool,
    /// Above this many nonempty subsets, fall back to the closed form.
    #[arg(long, default_value_t = 4096)]
    max_subsets: usize,
    /// Wall-clock budget in seconds; exceeding it downgrades to the closed form.
    #[arg(long)]
    time_budget: Option<u64>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_enum)]
    mode: CliMode,
    #[arg(long)]
    input: PathBuf,
    /// Radius squared to check, as `NUM` or `NUM/DEN`.
    #[arg(long)]
    radius_sq: String,
    /// Grid resolution for two-variable inputs.
    #[arg(long, default_value_t = 512)]
    grid: usize,
    /// Half-width of the grid box, or AUTO for 1.25 times the radius.
    #[arg(long = "box", default_value = "AUTO")]
    box_half_width: String,
}

/// Failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: 2,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

fn load(path: &Path) -> Result<InstanceFile, Failure> {
    let text = fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    InstanceFile::from_json(&text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn print_json<T: serde::Serialize>(value: &T) {
    println!("{}", serde_json::to_string_pretty(value).expect("reports serialize"));
}

fn run_bound(a: &BoundArgs) -> Result<u8, Failure> {
    let theorem = Theorem::from_number(a.theorem)?;
    let (k, d, tau, s) = match &a.input {
        Some(path) => {
            let m = load(path)?.measured()?;
            (m.k, m.d, m.tau, Some(m.s))
        }
        None => {
            let need = |v: Option<u64>, flag: &str| v.ok_or_else(|| usage(format!("missing {flag} (or give --input)")));
            (need(a.k, "-k")?, need(a.d, "-d")?, need(a.tau, "--tau")?, a.s)
        }
    };
    let s = match theorem {
        Theorem::T3 | Theorem::T4 => Some(s.ok_or_else(|| usage("theorems 3 and 4 need --s"))?),
        _ => None,
    };
    print_json(&bounds::radius(theorem, k, d, tau, s)?);
    Ok(0)
}

fn run_certify(a: &CertifyArgs) -> Result<u8, Failure> {
    let file = load(&a.input)?;
    let family = file.polys()?;
    let mode: Mode = a.mode.into();
    if family.iter().any(|p| p.is_zero()) {
        return Err(Error::ZeroInput.into());
    }
    let cert: BallCertificate = if a.closed_form_only {
        pipeline::closed_form_certificate(mode, &family)?
    } else {
        let opts = Options {
            deadline: a.time_budget.map(|s| Instant::now() + Duration::from_secs(s)),
            max_subsets: a.max_subsets,
            ..Options::default()
        };
        match (mode, family.len()) {
            (Mode::Contain, 1) => pipeline::bounded_ball_certificate(&family[0], &opts)?,
            (Mode::Meet, 1) => pipeline::meeting_ball_certificate(&family[0], &opts)?,
            _ => {
                let run = match mode {
                    Mode::Contain => pipeline::sa_contain,
                    Mode::Meet => pipeline::sa_meet,
                };
                match run(&family, SaMode::Certificate, &opts)? {
                    SaOutcome::Certificate(c) => *c,
                    SaOutcome::Closed(_) => unreachable!("certificate mode requested"),
                }
            }
        }
    };
    print_json(&cert);
    Ok(if cert.valid { 0 } else { 1 })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Bound(a) => run_bound(a),
        Command::Certify(a) => run_certify(a),
        Command::Verify(a) => verify::run(a),
        Command::Selftest => Ok(selftest::run()),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
