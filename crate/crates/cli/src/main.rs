//! `rlcongest`: generate graphs, run WL refinements and CONGEST simulations,
//! build equality gadgets and reproduce the resistance-locality experiment.
//!
//! Every run writes its outputs and a `manifest.json` into the output
//! directory (`--out`, default `$RLCONGEST_OUT_DIR` or `.`). Exit status is
//! 0 on success, 1 on invalid input or flags, 2 when a run violates a model
//! constraint, times out, or fails an asserted bound.

mod experiments;
mod graphs;
mod output;
mod report;
mod simulate;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use output::Outputs;

#[derive(Debug, Parser)]
#[command(name = "rlcongest", version, about = "CONGEST-model WL refinement toolkit")]
pub struct Cli {
    /// Output directory.
    #[arg(long, global = true, env = "RLCONGEST_OUT_DIR", default_value = ".")]
    pub out: PathBuf,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a graph file.
    Gen(graphs::GenArgs),
    /// Run a centralized WL-style refinement.
    Wl(graphs::WlArgs),
    /// Run a distributed algorithm in the round simulator.
    Sim(simulate::SimArgs),
    /// Build, verify or scan equality gadgets.
    Gadget {
        #[command(subcommand)]
        action: experiments::GadgetCmd,
    },
    /// Resistance-based biconnectivity experiment.
    Locality(experiments::LocalityArgs),
    /// Summarize a CSV file per group.
    Report(report::ReportArgs),
    /// Round-count grid for wl or vnode with a fitted linear model.
    Scan(report::ScanArgs),
    /// Rerun the command recorded in a manifest.
    Replay(ReplayArgs),
}

#[derive(Debug, Args)]
pub struct ReplayArgs {
    #[arg(long)]
    pub manifest: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BackendArg {
    Tree,
    Direct,
}

impl From<BackendArg> for rlcongest::algos::Backend {
    fn from(b: BackendArg) -> Self {
        match b {
            BackendArg::Tree => rlcongest::algos::Backend::Tree,
            BackendArg::Direct => rlcongest::algos::Backend::Direct,
        }
    }
}

/// Run finished and wrote its outputs, but an asserted property failed.
#[derive(Debug)]
pub struct Violation(pub String);

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Violation {}

pub type CmdResult = anyhow::Result<()>;

fn dispatch(cli: Cli, args: Vec<String>) -> CmdResult {
    if let Command::Replay(replay) = &cli.command {
        return output::replay(&replay.manifest, &cli.out);
    }
    let name = match &cli.command {
        Command::Gen(_) => "gen",
        Command::Wl(_) => "wl",
        Command::Sim(_) => "sim",
        Command::Gadget { .. } => "gadget",
        Command::Locality(_) => "locality",
        Command::Report(_) => "report",
        Command::Scan(_) => "scan",
        Command::Replay(_) => unreachable!("handled above"),
    };
    let mut out = Outputs::new(&cli.out, name, args)?;
    let result = match cli.command {
        Command::Gen(a) => graphs::gen(&a, &mut out),
        Command::Wl(a) => graphs::wl(&a, &mut out),
        Command::Sim(a) => simulate::sim(&a, &mut out),
        Command::Gadget { action } => experiments::gadget(&action, &mut out),
        Command::Locality(a) => experiments::locality(&a, &mut out),
        Command::Report(a) => report::report(&a, &mut out),
        Command::Scan(a) => report::scan(&a, &mut out),
        Command::Replay(_) => unreachable!("handled above"),
    };
    out.finish(&result)?;
    result
}

fn exit_code(err: &anyhow::Error) -> u8 {
    let violation = err.chain().any(|cause| {
        cause.is::<Violation>() || cause.downcast_ref::<rlcongest::Error>().is_some_and(rlcongest::Error::is_violation)
    });
    if violation {
        2
    } else {
        1
    }
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match dispatch(cli, args[1..].to_vec()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
