//! hardyforge: verify Hardy-type identities, check Bessel pairs and scan
//! sharpness quotients.
//!
//! Exit codes: 0 everything passed, 1 a mathematical check failed, 2 the
//! invocation or configuration was invalid.

mod catalog;
mod config;
mod output;
mod pair;
mod sharpness;
mod verify;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "hardyforge", version, about = "Numerical verification of Hardy-type identities on model manifolds")]
struct Cli {
    /// key=value config file with [verify], [pair], [sharpness] and
    /// [catalog] sections; flags given on the command line win.
    #[arg(long, global = true)]
    config: Option<std::path::PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Verify catalog identities over a case x dimension x profile grid.
    Verify(verify::VerifyArgs),
    /// Decide whether user weights (V, W) form a Bessel pair.
    Pair(pair::PairArgs),
    /// Rayleigh-quotient scan along a concentrating trial family.
    Sharpness(sharpness::SharpnessArgs),
    /// List identity cases and catalog pairs.
    Catalog(catalog::CatalogArgs),
}

/// Outcome of a command that ran to completion.
pub enum Outcome {
    Pass,
    Fail,
}

fn run() -> anyhow::Result<Outcome> {
    let args = config::merged_args(std::env::args_os().collect())?;
    let cli = Cli::try_parse_from(args).unwrap_or_else(|e| e.exit());
    let pool = config::thread_pool()?;
    pool.install(|| match cli.command {
        Command::Verify(a) => verify::run(a),
        Command::Pair(a) => pair::run(a),
        Command::Sharpness(a) => sharpness::run(a),
        Command::Catalog(a) => catalog::run(a),
    })
}

fn main() -> ExitCode {
    match run() {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
