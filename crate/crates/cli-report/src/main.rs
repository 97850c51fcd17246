use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use cli_report::{commands, RunOptions, EXIT_CONFIG, SUITES};

#[derive(Parser)]
#[command(name = "fock-verify", version, about = "Run verification suites and write reports")]
struct Cli {
    /// Print the suite registry and exit.
    #[arg(long)]
    list_suites: bool,
    /// Override the seed from the config.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    config: PathBuf,
    /// Report path (defaults to the config's output.report).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Run every check of a suite.
    Verify(Common),
    /// Run a suite over its grid ladder and write convergence CSVs.
    Converge(Common),
    /// Diagonalize a model and write its lowest eigenvalues.
    Spectrum(Common),
    /// Monte Carlo driver for the Poisson functional.
    Sample(Common),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_CONFIG as u8 } else { 0 });
        }
    };
    if cli.list_suites {
        for s in SUITES {
            println!("{:<24} {}", s.name, s.description);
        }
        return ExitCode::SUCCESS;
    }
    let Some(command) = cli.command else {
        eprintln!("no subcommand given; see --help");
        return ExitCode::from(EXIT_CONFIG as u8);
    };
    let (run, common): (fn(&RunOptions) -> cli_report::Result<commands::CommandOutcome>, Common) = match command {
        Command::Verify(c) => (commands::verify, c),
        Command::Converge(c) => (commands::converge, c),
        Command::Spectrum(c) => (commands::spectrum, c),
        Command::Sample(c) => (commands::sample, c),
    };
    let opts = RunOptions { config: common.config, out: common.out, seed: cli.seed };
    match run(&opts) {
        Ok(outcome) => {
            let _ = commands::summarize(&outcome, &mut std::io::stdout());
            ExitCode::from(outcome.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
