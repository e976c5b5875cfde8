use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use delayctl::commands;

/// Relative controllability, steering synthesis and simulation for
/// y(r+1) = A y(r) + B y(r-p) + C u(r).
#[derive(Parser)]
#[command(name = "delayctl", version, about)]
struct Cli {
    /// Use binary floating point instead of exact rationals.
    #[arg(long, global = true)]
    float: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Rank of the Kalman-type matrix, minimal horizon and verdict.
    Analyze {
        spec: PathBuf,
        /// Print the report as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Build the steering control and write plan.json and trajectory.csv.
    Synthesize {
        spec: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the spec's control sequence and write the trajectory CSV.
    Simulate {
        spec: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Also write an SVG plot of the trajectory.
        #[arg(long)]
        plot: Option<PathBuf>,
    },
    /// Print the kernel blocks Q(r, i) and Y(r) over a range of r.
    Kernel {
        spec: PathBuf,
        #[arg(long, allow_negative_numbers = true)]
        from: i64,
        #[arg(long, allow_negative_numbers = true)]
        to: i64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Analyze { spec, json } => commands::analyze(spec, cli.float, *json),
        Command::Synthesize { spec, out } => commands::synthesize(spec, cli.float, out),
        Command::Simulate { spec, out, plot } => commands::simulate(spec, cli.float, out, plot.as_deref()),
        Command::Kernel { spec, from, to } => commands::kernel(spec, cli.float, *from, *to),
    };
    match result {
        Ok(outcome) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(outcome.stdout.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::from(4);
            }
            ExitCode::from(outcome.code as u8)
        }
        Err(e) => {
            eprintln!("delayctl: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
