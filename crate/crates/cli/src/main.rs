mod commands;
mod output;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use hyperci::polyengine::DEFAULT_PAIR_BUDGET;
use hyperci::switchable::DEFAULT_CELL_BUDGET;

pub const SCHEMA_VERSION: u32 = 1;

pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 1;
pub const EXIT_RESOURCE: u8 = 2;
pub const EXIT_FAILED: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "hyperci", version, about = "Conditional-independence ideals of generic hypermatrices")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct GlobalArgs {
    /// Dimensions r1,...,rn.
    #[arg(long, global = true, value_delimiter = ',')]
    pub shape: Option<Vec<usize>>,
    /// Number of switchable components; defaults to n.
    #[arg(short = 't', global = true)]
    pub t: Option<usize>,
    /// lex-diag[:perm], revlex-diag[:perm], lex or degrevlex.
    #[arg(long, global = true)]
    pub order: Option<String>,
    /// Largest total degree tried by the witness search.
    #[arg(long, global = true, default_value_t = 4)]
    pub degree_bound: u32,
    /// Largest grid for subset enumeration.
    #[arg(long, global = true, env = "HYPERCI_CELL_BUDGET", default_value_t = DEFAULT_CELL_BUDGET)]
    pub cell_budget: usize,
    /// Largest number of S-pairs per Groebner basis.
    #[arg(long, global = true, env = "HYPERCI_PAIR_BUDGET", default_value_t = DEFAULT_PAIR_BUDGET)]
    pub pair_budget: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<String>,
    /// Echoed in the config; results do not depend on it.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Include runtimes in the output.
    #[arg(long, global = true)]
    pub timings: bool,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// List the maximal t-switchable sets.
    Enumerate,
    /// Run one verification.
    Verify {
        #[arg(value_enum)]
        check: Check,
    },
    /// Counts, checks and radicality verdicts for several instances.
    Report,
    /// Reduced Groebner basis of an ideal file ("-" reads stdin).
    Gb { file: String },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Check {
    Saturation,
    Gb,
    Quotient,
    Radical,
    Identities,
}

impl Command {
    pub fn name(&self) -> String {
        match self {
            Command::Enumerate => "enumerate".into(),
            Command::Verify { check } => format!("verify {}", check.to_possible_value().unwrap().get_name()),
            Command::Report => "report".into(),
            Command::Gb { .. } => "gb".into(),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    ExitCode::from(commands::run(&cli))
}
