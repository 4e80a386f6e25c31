mod commands;
mod error;
mod input;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::error::CliError;

#[derive(Parser, Debug)]
#[command(
    name = "nilkilling",
    version,
    about = "Symmetric Killing 2-tensors on 2-step nilpotent metric Lie algebras"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Source {
    /// Algebra file.
    #[arg(conflicts_with = "example")]
    pub path: Option<PathBuf>,
    /// Built-in example instead of a file (see `examples list`); `double(GENFILE)` builds a double.
    #[arg(long)]
    pub example: Option<String>,
}

#[derive(Args, Debug, Clone, Default)]
pub struct TensorSelection {
    /// Named tensor from the algebra file (repeatable).
    #[arg(long = "tensor")]
    pub tensors: Vec<String>,
    /// File with `dim N` followed by `tensor NAME` blocks.
    #[arg(long)]
    pub tensor_file: Option<PathBuf>,
    /// Every Killing-space basis element, plus the named tensors (all tensors in the file if none are named).
    #[arg(long)]
    pub all_killing_basis: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check antisymmetry, Jacobi, 2-step and non-abelian conditions.
    Validate {
        #[command(flatten)]
        source: Source,
    },
    /// Center split, j-maps, derivations, Killing and parallel bases, nonsingularity.
    Analyze {
        #[command(flatten)]
        source: Source,
        /// Random samples for the nonsingularity test.
        #[arg(long, default_value_t = nilkilling::liealg::DEFAULT_NONSINGULARITY_SAMPLES)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Decide decomposability of Killing tensors, with certificates.
    Classify {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        tensors: TensorSelection,
    },
    /// Brute-force decomposability by polynomial span membership.
    Oracle {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        tensors: TensorSelection,
        /// Largest algebra dimension the oracle accepts.
        #[arg(long, default_value_t = nilkilling::oracle::DEFAULT_SIZE_CAP)]
        oracle_cap: usize,
    },
    /// Integrate the geodesic flow and report first-integral drift.
    Flow {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        tensors: TensorSelection,
        #[arg(long, default_value_t = 20.0)]
        t_max: f64,
        #[arg(long, default_value_t = 20_000)]
        steps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of seeded initial states.
        #[arg(long, default_value_t = 10)]
        states: usize,
    },
    /// Built-in example catalog.
    Examples {
        #[command(subcommand)]
        action: ExamplesAction,
    },
    /// Compare classifier and oracle on the Killing basis and random combinations.
    Crosscheck {
        #[command(flatten)]
        source: Source,
        /// Extra tensor from the algebra file (repeatable); default is every tensor in the file.
        #[arg(long = "tensor")]
        tensors: Vec<String>,
        #[arg(long)]
        tensor_file: Option<PathBuf>,
        /// Random Killing combinations to add.
        #[arg(long, default_value_t = 20)]
        random: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = nilkilling::oracle::DEFAULT_SIZE_CAP)]
        oracle_cap: usize,
    },
}

#[derive(Subcommand, Debug)]
enum ExamplesAction {
    List,
    /// Print an example in the text format.
    Emit {
        name: String,
    },
}

fn run(cli: Cli) -> Result<String, CliError> {
    let report = match cli.command {
        Command::Validate { source } => return commands::validate(&source),
        Command::Analyze {
            source,
            samples,
            seed,
        } => commands::analyze(&source, samples, seed)?,
        Command::Classify { source, tensors } => commands::classify(&source, &tensors)?,
        Command::Oracle {
            source,
            tensors,
            oracle_cap,
        } => commands::oracle(&source, &tensors, oracle_cap)?,
        Command::Flow {
            source,
            tensors,
            t_max,
            steps,
            seed,
            states,
        } => commands::flow(
            &source,
            &tensors,
            &commands::FlowParams {
                t_max,
                steps,
                seed,
                states,
            },
        )?,
        Command::Examples { action } => match action {
            ExamplesAction::List => commands::examples_list(),
            ExamplesAction::Emit { name } => return commands::examples_emit(&name),
        },
        Command::Crosscheck {
            source,
            tensors,
            tensor_file,
            random,
            seed,
            oracle_cap,
        } => {
            // With no names given, the file's own tensors become the extras.
            let extras = TensorSelection {
                all_killing_basis: tensors.is_empty(),
                tensors,
                tensor_file,
            };
            commands::crosscheck(&source, &extras, random, seed, oracle_cap)?
        }
    };
    Ok(report::render(&report))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(CliError::Rejected { report, message }) => {
            print!("{}", report::render(&report));
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
