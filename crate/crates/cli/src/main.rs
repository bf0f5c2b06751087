use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgAction, Parser, Subcommand};

use mhd1d_cli::commands::{execution_from_env, THREADS_ENV};
use mhd1d_cli::config::DEFAULTS_HELP;
use mhd1d_cli::{cmd_layer, cmd_solve, cmd_sweep, cmd_verify, CliError, Options, Outcome};

#[derive(Parser)]
#[command(
    name = "mhd1d",
    version,
    about = "1D compressible isentropic MHD: solver, vanishing-resistivity sweeps and layer studies"
)]
#[command(after_help = format!("{DEFAULTS_HELP}\n\nEnvironment:\n  {THREADS_ENV}  worker threads for ladder runs (default: all cores)\n\nExit codes: 0 ok, 1 usage/config, 2 numerical failure, 3 verification failure"))]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Reject unknown config keys.
    #[arg(long, global = true, default_value_t = true, action = ArgAction::Set, value_name = "BOOL")]
    strict: bool,

    /// Print nothing on success.
    #[arg(long, short, global = true)]
    quiet: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate one scenario; writes snapshots and invariants.csv.
    Solve {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Vanishing-resistivity sweep; writes sweep_report.csv.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Boundary-layer study; writes layer_report.csv and b profiles.
    Layer {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the verification suite; exits 3 if any check fails.
    Verify {
        /// Optional solve config whose self-convergence is added to the suite.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
}

fn dispatch(cli: &Cli) -> Result<Outcome, CliError> {
    let opts = Options {
        strict: cli.strict,
        quiet: cli.quiet,
        exec: execution_from_env()?,
    };
    match &cli.command {
        Command::Solve { config, out } => cmd_solve(config, out, &opts),
        Command::Sweep { config, out } => cmd_sweep(config, out, &opts),
        Command::Layer { config, out } => cmd_layer(config, out, &opts),
        Command::Verify { config, out } => cmd_verify(config.as_deref(), out, &opts),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match dispatch(&cli) {
        Ok(outcome) => {
            for w in &outcome.warnings {
                eprintln!("warning: {w}");
            }
            if !cli.quiet {
                for line in &outcome.summary {
                    println!("{line}");
                }
                println!(
                    "wrote {} file(s) to {}",
                    outcome.manifest.files.len(),
                    outcome.manifest.output_dir.display()
                );
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
