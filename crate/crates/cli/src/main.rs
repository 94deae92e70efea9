use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use ordjoin::join::DEFAULT_BUDGET;
use ordjoin_cli::{run, CliError, Command, Options};

#[derive(Parser)]
#[command(name = "ordjoin", version, about = "Analyses of ordered joins of impartial games")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    /// Print the report as JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Position budget for expansions.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: usize,
}

#[derive(Subcommand)]
enum Cmd {
    /// Grundy number of a game or join.
    Grundy { input: Option<PathBuf> },
    /// Grundy set of a game or join.
    GrundySet { input: Option<PathBuf> },
    /// Nested Grundy value of depth k.
    GrundyK {
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 2)]
        k: u32,
        /// Allow k above the default cap.
        #[arg(long)]
        allow_deep: bool,
    },
    /// Outcome class; with --against, also search a distinguishing context.
    Outcome {
        input: Option<PathBuf>,
        #[arg(long)]
        against: Option<PathBuf>,
        /// Largest heap size tried in the context search.
        #[arg(long)]
        bound: Option<u64>,
    },
    /// Grundy set of a shape from leaf Grundy sets.
    Evaluate { input: Option<PathBuf> },
    /// Modular decomposition of a poset.
    Decompose { input: Option<PathBuf> },
    /// Zero-upper-set and symmetry reductions of a join.
    Reduce {
        input: Option<PathBuf>,
        /// Involution to apply first, as label swaps such as "1:3,2:4".
        #[arg(long)]
        sigma: Option<String>,
    },
    /// Weakly order-preserving involutions of a poset.
    Involutions { input: Option<PathBuf> },
    /// Naive expansion against decomposition-based evaluation.
    Bench { input: Option<PathBuf> },
}

fn read_input(path: &Option<PathBuf>) -> Result<String, CliError> {
    match path {
        Some(p) => std::fs::read_to_string(p).map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
        None => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).map_err(|e| CliError::Io(format!("stdin: {e}")))?;
            Ok(s)
        }
    }
}

fn main_inner(cli: Cli) -> Result<String, CliError> {
    let mut opts = Options { budget: cli.budget, ..Options::default() };
    let (command, input) = match cli.command {
        Cmd::Grundy { input } => (Command::Grundy, input),
        Cmd::GrundySet { input } => (Command::GrundySet, input),
        Cmd::GrundyK { input, k, allow_deep } => {
            opts.k = k;
            opts.allow_deep = allow_deep;
            (Command::GrundyK, input)
        }
        Cmd::Outcome { input, against, bound } => {
            opts.against = against.map(|p| read_input(&Some(p))).transpose()?;
            opts.bound = bound;
            (Command::Outcome, input)
        }
        Cmd::Evaluate { input } => (Command::Evaluate, input),
        Cmd::Decompose { input } => (Command::Decompose, input),
        Cmd::Reduce { input, sigma } => {
            opts.sigma = sigma;
            (Command::Reduce, input)
        }
        Cmd::Involutions { input } => (Command::Involutions, input),
        Cmd::Bench { input } => (Command::Bench, input),
    };
    let text = read_input(&input)?;
    let report = run(command, &text, &opts)?;
    Ok(if cli.json { report.to_json() } else { report.to_text() })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match main_inner(cli) {
        Ok(out) => {
            println!("{}", out.trim_end());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
