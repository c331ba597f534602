//! Command-line front end for the slow-decay solver library.
//!
//! Subcommands cover the critical-exponent atlas (`exponents`), construction
//! of individual solutions (`profile`, `phase`), bulk parameter sweeps
//! (`sweep`), exterior-domain solution families (`exterior`), and a quick
//! closed-form self-check battery (`verify`).
//!
//! Exit codes: 0 on success, 1 when `verify` finds a failing check, 2 on
//! invalid input, 3 when an iteration or integration fails to converge.
//! Emitted floats use the shortest representation that parses back to the
//! identical value, so repeated runs produce byte-identical files.

mod config;
mod emit;
mod exponents;
mod exterior_cmd;
mod phase;
mod profile_cmd;
mod sweep;
mod verify;

use clap::{Parser, Subcommand};

/// Slow-decay positive radial solutions of the supercritical Hardy equation.
#[derive(Parser)]
#[command(name = "slowdecay", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Critical-exponent atlas for one (N, nu) pair
    Exponents(exponents::Args),
    /// One slow-decay profile U_lambda with diagnostics
    Profile(profile_cmd::Args),
    /// The phase-plane trajectory behind the profile family
    Phase(phase::Args),
    /// Evaluate a parameter grid into a CSV atlas
    Sweep(sweep::Args),
    /// Exterior-domain solution family with certificates
    Exterior(exterior_cmd::Args),
    /// Closed-form self-checks; exits 1 on any failure
    Verify(verify::Args),
}

/// A command failure carrying its process exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    /// Invalid input or unusable configuration (exit code 2).
    pub fn invalid(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<slowdecay::Error> for Failure {
    fn from(err: slowdecay::Error) -> Self {
        use slowdecay::Error as E;
        let code = match err {
            E::NonConvergence { .. }
            | E::StepLimit(_)
            | E::StepUnderflow(_)
            | E::MaxIterations(_)
            | E::InequalityViolated { .. }
            | E::MonotonicityBroken { .. }
            | E::AmbiguousApproach(_) => 3,
            _ => 2,
        };
        Failure {
            code,
            message: err.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(err: std::io::Error) -> Self {
        Failure {
            code: 2,
            message: err.to_string(),
        }
    }
}

fn main() {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Exponents(args) => exponents::run(args),
        Command::Profile(args) => profile_cmd::run(args),
        Command::Phase(args) => phase::run(args),
        Command::Sweep(args) => sweep::run(args),
        Command::Exterior(args) => exterior_cmd::run(args),
        Command::Verify(args) => verify::run(args),
    };
    match outcome {
        Ok(code) => std::process::exit(code),
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            std::process::exit(failure.code);
        }
    }
}
