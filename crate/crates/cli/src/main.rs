use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use pcs_cli::{exit, parse_angle, verify, CliError, SweepSpec};
use pcs_core::NegativityConvention;

#[derive(Parser)]
#[command(
    name = "pcs",
    version,
    about = "Entanglement of pair coherent states: figure sweeps and checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Negativity of |zeta,0> against |zeta|
    Negativity(SweepArgs),
    /// Entropy of entanglement of |zeta,0> against |zeta|
    Entropy(SweepArgs),
    /// E(S1), E(S_steps) and the full entropy against |zeta|
    Trace(SweepArgs),
    /// Entropy and gain of |zeta,0> superposed with |m,m>
    Gamma(SweepArgs),
    /// Run the invariant suite over the grid
    Verify(SweepArgs),
}

#[derive(Args, Clone)]
struct SweepArgs {
    #[arg(long, default_value_t = 0.0)]
    zeta_min: f64,
    #[arg(long, default_value_t = 3.0)]
    zeta_max: f64,
    #[arg(long, default_value_t = 121)]
    points: usize,
    /// Number-state index
    #[arg(long, default_value_t = 0)]
    m: usize,
    /// Superposition angle in radians; accepts forms like "pi/4"
    #[arg(long, default_value = "pi/4", value_parser = parse_angle, allow_hyphen_values = true)]
    theta: f64,
    /// Superposition steps for `trace`
    #[arg(long, default_value_t = 3)]
    steps: usize,
    /// Tail weight allowed to be dropped when truncating the Fock ladder
    #[arg(long, default_value_t = 1e-16)]
    tol: f64,
    /// ordered-pairs or unordered-pairs
    #[arg(long, default_value = "ordered-pairs", value_parser = parse_convention)]
    convention: NegativityConvention,
    /// Write to this file instead of standard output
    #[arg(long)]
    output: Option<PathBuf>,
}

fn parse_convention(s: &str) -> Result<NegativityConvention, String> {
    s.parse().map_err(|e: pcs_core::Error| e.to_string())
}

impl SweepArgs {
    fn spec(&self) -> SweepSpec {
        SweepSpec {
            zeta_min: self.zeta_min,
            zeta_max: self.zeta_max,
            points: self.points,
            m: self.m,
            theta: self.theta,
            n_steps: self.steps,
            tolerance: self.tol,
            convention: self.convention,
        }
    }

    fn emit(&self, text: &str) -> Result<(), CliError> {
        match &self.output {
            Some(path) => fs::write(path, text)?,
            None => io::stdout().lock().write_all(text.as_bytes())?,
        }
        Ok(())
    }
}

fn run(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Negativity(args) => args.emit(&pcs_cli::sweep_negativity(&args.spec())?)?,
        Command::Entropy(args) => args.emit(&pcs_cli::sweep_entropy(&args.spec())?)?,
        Command::Trace(args) => args.emit(&pcs_cli::trace_iterative(&args.spec())?)?,
        Command::Gamma(args) => {
            let csv = pcs_cli::sweep_gamma(&args.spec(), &mut io::stderr().lock())?;
            args.emit(&csv)?;
        }
        Command::Verify(args) => {
            let report = verify::run(&args.spec())?;
            args.emit(&report.render())?;
            if !report.passed() {
                for c in report.checks.iter().filter(|c| !c.passed()) {
                    eprintln!(
                        "check {} failed: worst {:e} > {:e} at {}",
                        c.name, c.worst, c.tolerance, c.at
                    );
                    if let Some(e) = &c.error {
                        eprintln!("  {e}");
                    }
                }
                return Ok(exit::CHECK_FAILED);
            }
        }
    }
    Ok(exit::OK)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    ExitCode::from(code as u8)
}
