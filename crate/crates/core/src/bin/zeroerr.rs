use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use zeroerr::cli::{self, CliError, CommandOutput, Evaluation, Family, OutputOptions};

#[derive(Parser)]
#[command(name = "zeroerr", version, about = "Zero-error channel coding with and without nonlocal assistance")]
struct Cli {
    /// Print probabilities as decimals with 12 significant digits.
    #[arg(long, global = true)]
    float: bool,
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    json: bool,
    /// CSV output for behavior and channel tables.
    #[arg(long, global = true)]
    csv: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a channel and write it as JSON (or CSV).
    Channel {
        /// Nm, Mm, identity or custom.
        #[arg(long)]
        family: String,
        #[arg(long)]
        m: Option<usize>,
        /// Channel file to validate and re-emit, for the custom family.
        #[arg(long)]
        from: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a box, named or computed from a quantum model file.
    Behavior {
        /// Box file or family (pm:3, pr, rtilde:3, cglmp, i3322-table, ...).
        #[arg(required_unless_present = "quantum")]
        spec: Option<String>,
        #[arg(long, conflicts_with = "spec")]
        quantum: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// One-shot zero-error capacity of a channel.
    Capacity {
        /// Channel file or family (nm:3, mm:3, identity:8).
        channel: String,
    },
    /// Confusability graph of a channel.
    Graph {
        channel: String,
        #[arg(long)]
        dimacs: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Success probability of an assisted protocol.
    Success(SuccessArgs),
    /// Best unassisted code for K messages.
    SearchClassical {
        #[arg(long)]
        channel: String,
        #[arg(long, short = 'k')]
        messages: usize,
    },
    /// Exhaustive search for a zero-error assisted protocol.
    SearchAssisted {
        #[arg(long)]
        channel: String,
        #[arg(long = "box")]
        boxb: String,
        #[arg(long, short = 'k')]
        messages: usize,
        /// Where to write the protocol if one is found.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run every reproduction check; exits 1 if any fails.
    VerifyPaper {
        /// Include the exhaustive protocol searches.
        #[arg(long)]
        slow: bool,
    },
}

#[derive(Args)]
struct SuccessArgs {
    #[arg(long)]
    channel: String,
    #[arg(long = "box")]
    boxb: String,
    /// Protocol file or builder (nm-protocol:3, mm-protocol:3).
    #[arg(long)]
    protocol: String,
    /// Exact evaluation (the default).
    #[arg(long, conflicts_with = "mc")]
    exact: bool,
    /// Monte-Carlo estimate: TRIALS SEED.
    #[arg(long, num_args = 2, value_names = ["TRIALS", "SEED"])]
    mc: Option<Vec<u64>>,
}

fn run(cli: Cli) -> Result<CommandOutput, CliError> {
    let opts = OutputOptions { float: cli.float, json: cli.json, csv: cli.csv };
    match cli.command {
        Command::Channel { family, m, from, out } => {
            let family: Family = family.parse()?;
            cli::cmd_channel(family, m, from.as_deref(), out.as_deref(), opts)
        }
        Command::Behavior { spec, quantum, out } => {
            cli::cmd_behavior(spec.as_deref(), quantum.as_deref(), out.as_deref(), opts)
        }
        Command::Capacity { channel } => cli::cmd_capacity(&channel, opts),
        Command::Graph { channel, dimacs, out } => cli::cmd_graph(&channel, dimacs, out.as_deref()),
        Command::Success(a) => {
            let eval = match a.mc.as_deref() {
                Some(&[trials, seed]) => Evaluation::MonteCarlo { trials, seed },
                _ => Evaluation::Exact,
            };
            cli::cmd_success(&a.channel, &a.boxb, &a.protocol, eval, opts)
        }
        Command::SearchClassical { channel, messages } => cli::cmd_search_classical(&channel, messages, opts),
        Command::SearchAssisted { channel, boxb, messages, out } => {
            cli::cmd_search_assisted(&channel, &boxb, messages, out.as_deref(), opts)
        }
        Command::VerifyPaper { slow } => cli::cmd_verify_paper(slow, opts),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            eprint!("{}", out.stderr);
            // A closed pipe is not an error worth reporting.
            let _ = std::io::stdout().write_all(out.stdout.as_bytes());
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
