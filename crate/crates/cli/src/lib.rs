//! Command-line front end: argument handling, input files and reports.
//!
//! Exit codes: 0 success, 1 incompatible input or a reported violation,
//! 2 input error (bad flags, unreadable or malformed file), 3 budget
//! exceeded.
//!
//! Budgets can be overridden with `SPLITCOMPAT_CENSUS_LIMIT`,
//! `SPLITCOMPAT_ORACLE_MAX_SPLITS`, `SPLITCOMPAT_ORACLE_MAX_SIZE` and
//! `SPLITCOMPAT_SUBSET_MAX_SPLITS`.

pub mod document;
pub mod report;

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use splitcompat::Error;

pub use document::{parse_document, print_document, Document, ParseError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FOUND: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "splitcompat", version, about = "Compatibility of split systems on multisets")]
struct Cli {
    /// Output format: human-readable text, Graphviz DOT or JSON.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Dot,
    Structured,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide compatibility and print a representation or a minimal witness.
    Check { file: PathBuf },
    /// Print a representing tree, or all of them with --all.
    Represent {
        file: PathBuf,
        #[arg(long)]
        all: bool,
    },
    /// Count consistent thin subgraphs and non-isomorphic representations.
    Census { file: PathBuf },
    /// Terminal sets, subset bounds and structural checks.
    Analyze { file: PathBuf },
    /// The split-containment graph.
    Graph { file: PathBuf },
    /// Brute-force verdict over all small trees.
    Oracle { file: PathBuf },
    /// Run every structural check over all small systems.
    Scan {
        #[arg(long)]
        max_delta: usize,
        #[arg(long)]
        max_size: usize,
        #[arg(long)]
        max_splits: usize,
        /// Allowed split sizes, comma separated.
        #[arg(long, value_delimiter = ',')]
        sizes: Option<Vec<usize>>,
        #[arg(long)]
        equal_size: bool,
        /// Skip systems with repeated splits.
        #[arg(long)]
        distinct: bool,
        #[arg(long)]
        jobs: Option<usize>,
    },
}

/// Result of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(code: i32, stdout: String) -> Outcome {
        Outcome {
            code,
            stdout,
            stderr: String::new(),
        }
    }

    fn fail(code: i32, stderr: String) -> Outcome {
        Outcome {
            code,
            stdout: String::new(),
            stderr,
        }
    }
}

/// Budgets read from the environment, with defaults.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budgets {
    pub census_limit: usize,
    pub oracle: splitcompat::oracle::OracleBudget,
    pub subset_max_splits: usize,
}

impl Budgets {
    pub fn from_env() -> Result<Budgets, String> {
        fn var(name: &str, default: usize) -> Result<usize, String> {
            match std::env::var(name) {
                Ok(v) => v
                    .trim()
                    .parse()
                    .map_err(|_| format!("{name} must be a non-negative integer, got `{v}`")),
                Err(_) => Ok(default),
            }
        }
        let defaults = splitcompat::oracle::OracleBudget::default();
        Ok(Budgets {
            census_limit: var("SPLITCOMPAT_CENSUS_LIMIT", splitcompat::engine::DEFAULT_CENSUS_LIMIT)?,
            oracle: splitcompat::oracle::OracleBudget {
                max_splits: var("SPLITCOMPAT_ORACLE_MAX_SPLITS", defaults.max_splits)?,
                max_ground: var("SPLITCOMPAT_ORACLE_MAX_SIZE", defaults.max_ground)?,
            },
            subset_max_splits: var("SPLITCOMPAT_SUBSET_MAX_SPLITS", 20)?,
        })
    }
}

fn load(file: &PathBuf) -> Result<Document, Outcome> {
    let text = std::fs::read_to_string(file)
        .map_err(|e| Outcome::fail(EXIT_INPUT, format!("error: cannot read {}: {e}\n", file.display())))?;
    parse_document(&text).map_err(|e| Outcome::fail(EXIT_INPUT, format!("error: {}: {e}\n", file.display())))
}

fn engine_failure(e: Error) -> Outcome {
    let code = match e {
        Error::BudgetExceeded(_) | Error::TooManySplits { .. } => EXIT_BUDGET,
        Error::Internal(_) => EXIT_FOUND,
        _ => EXIT_INPUT,
    };
    Outcome::fail(code, format!("error: {e}\n"))
}

fn unsupported(format: Format, command: &str) -> Outcome {
    Outcome::fail(
        EXIT_INPUT,
        format!("error: --format {} is not available for `{command}`\n", format_name(format)),
    )
}

fn format_name(f: Format) -> &'static str {
    match f {
        Format::Text => "text",
        Format::Dot => "dot",
        Format::Structured => "structured",
    }
}

/// Runs the command line given as `args` (including the program name).
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                Outcome::ok(code, text)
            } else {
                Outcome::fail(code, text)
            };
        }
    };
    let budgets = match Budgets::from_env() {
        Ok(b) => b,
        Err(msg) => return Outcome::fail(EXIT_INPUT, format!("error: {msg}\n")),
    };
    match dispatch(cli, &budgets) {
        Ok(o) | Err(o) => o,
    }
}

fn dispatch(cli: Cli, budgets: &Budgets) -> Result<Outcome, Outcome> {
    let format = cli.format;
    match cli.command {
        Command::Check { file } => {
            if format == Format::Dot {
                return Err(unsupported(format, "check"));
            }
            let doc = load(&file)?;
            report::check(&doc, format, budgets).map_err(engine_failure)
        }
        Command::Represent { file, all } => {
            let doc = load(&file)?;
            report::represent(&doc, all, format, budgets).map_err(engine_failure)
        }
        Command::Census { file } => {
            if format == Format::Dot {
                return Err(unsupported(format, "census"));
            }
            let doc = load(&file)?;
            report::census(&doc, format, budgets).map_err(engine_failure)
        }
        Command::Analyze { file } => {
            if format == Format::Dot {
                return Err(unsupported(format, "analyze"));
            }
            let doc = load(&file)?;
            report::analyze(&doc, format, budgets).map_err(engine_failure)
        }
        Command::Graph { file } => {
            let doc = load(&file)?;
            report::graph(&doc, format).map_err(engine_failure)
        }
        Command::Oracle { file } => {
            if format == Format::Dot {
                return Err(unsupported(format, "oracle"));
            }
            let doc = load(&file)?;
            report::oracle(&doc, format, budgets).map_err(engine_failure)
        }
        Command::Scan {
            max_delta,
            max_size,
            max_splits,
            sizes,
            equal_size,
            distinct,
            jobs,
        } => {
            if format == Format::Dot {
                return Err(unsupported(format, "scan"));
            }
            if jobs == Some(0) {
                return Err(Outcome::fail(EXIT_INPUT, "error: --jobs must be positive\n".into()));
            }
            let budget = splitcompat::scan::ScanBudget {
                max_delta,
                max_ground_size: max_size,
                max_splits,
                sizes,
                equal_size,
                distinct,
                jobs,
                census_limit: budgets.census_limit.min(1_000),
            };
            report::scan(&budget, format).map_err(engine_failure)
        }
    }
}
