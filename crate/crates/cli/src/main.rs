use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use accelflow_cli::{run, Command, Format, RunConfig};
use clap::{Args, Parser, Subcommand, ValueEnum};

/// Exact least solutions of integer and interval constraint systems.
#[derive(Parser)]
#[command(name = "accelflow", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Solve an integer constraint system (.ics).
    SolveInt(Opts),
    /// Solve an interval constraint system (.ivs, or a .wl program).
    SolveInterval(Opts),
    /// Interval analysis of a while-language program (.wl), by program point.
    Analyze(Opts),
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Json,
}

#[derive(Args)]
struct Opts {
    input: PathBuf,
    #[arg(long, value_enum, default_value = "text")]
    format: FormatArg,
    /// Cross-check against round-robin Kleene iteration.
    #[arg(long)]
    oracle: bool,
    /// Round cap of the oracle.
    #[arg(long, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(1..))]
    max_iters: u64,
    /// Print acceleration events to stderr.
    #[arg(long)]
    trace: bool,
    /// Only report this program point.
    #[arg(long, value_name = "NAME")]
    point: Option<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, o) = match cli.command {
        Cmd::SolveInt(o) => (Command::SolveInt, o),
        Cmd::SolveInterval(o) => (Command::SolveInterval, o),
        Cmd::Analyze(o) => (Command::Analyze, o),
    };
    let config = RunConfig {
        command,
        input: o.input,
        format: match o.format {
            FormatArg::Text => Format::Text,
            FormatArg::Json => Format::Json,
        },
        oracle: o.oracle,
        max_iters: o.max_iters,
        trace: o.trace,
        point: o.point,
    };
    let outcome = run(&config);
    print!("{}", outcome.stdout);
    eprint!("{}", outcome.stderr);
    let _ = std::io::stdout().flush();
    ExitCode::from(outcome.code as u8)
}
