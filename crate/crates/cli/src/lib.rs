//! Command-line front end: argument parsing, corpus ingestion and report
//! emission for every analysis in `seqcomplex`.

mod commands;
mod verify;

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use seqcomplex::{parse_corpus, Error, Modulus, PeriodicSequence, DEFAULT_CAP};

pub const SCHEMA: &str = "seqcomplex/1";

pub mod exit {
    pub const OK: i32 = 0;
    pub const INPUT: i32 = 1;
    pub const MISMATCH: i32 = 2;
    pub const BUDGET: i32 = 3;
}

#[derive(Debug, Parser)]
#[command(name = "seqcomplex", version, about = "Linear complexity analysis of p^n-periodic binary sequences")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Formula,
    Brute,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    LcOracle,
    McritExhaustive,
    Counting,
    Decomposition,
    Bounds,
    Stability,
}

#[derive(Debug, Clone, Args)]
pub struct ModulusArgs {
    /// Prime p (2 or an odd prime with 2 primitive modulo p^2).
    #[arg(long)]
    pub p: u64,
    /// Exponent n, so the period is p^n.
    #[arg(long)]
    pub n: u32,
}

impl ModulusArgs {
    fn modulus(&self) -> Result<Modulus, Failure> {
        Modulus::new(self.p, self.n).map_err(Failure::from)
    }
}

#[derive(Debug, Clone, Args)]
pub struct InputArgs {
    /// One period as a 0/1 literal; whitespace is ignored.
    #[arg(long, conflicts_with = "file")]
    pub seq: Option<String>,
    /// Corpus file with one literal per line; `#` comments and blank lines are skipped.
    #[arg(long)]
    pub file: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads; defaults to the number of CPUs.
    #[arg(long)]
    pub jobs: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    #[command(flatten)]
    pub modulus: ModulusArgs,
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Linear complexity.
    Lc {
        #[command(flatten)]
        common: Common,
    },
    /// k-error linear complexity by exhaustive search.
    Klc {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: u64,
    },
    /// Critical points of the k-error spectrum.
    Celcs {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = Mode::Brute)]
        mode: Mode,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: u64,
    },
    /// Standard hypercube decomposition.
    Decompose {
        #[command(flatten)]
        common: Common,
    },
    /// Hypercube (or cube, for p = 2) structure.
    Structure {
        #[command(flatten)]
        common: Common,
    },
    /// First and second critical points.
    Mcrit {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = Mode::Both)]
        mode: Mode,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: u64,
    },
    /// Closed-form counts, optionally checked by enumeration.
    Count {
        #[command(flatten)]
        modulus: ModulusArgs,
        #[command(flatten)]
        output: OutputArgs,
        /// Count all sequences with this linear complexity.
        #[arg(long, conflicts_with_all = ["edges", "eps", "l"])]
        lc: Option<u64>,
        /// Comma-separated edge exponents of the hypercube.
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        edges: Option<Vec<u32>>,
        /// 1 for an element vertex, 0 for a tuple vertex of length 0.
        #[arg(long, default_value_t = 1)]
        eps: u8,
        /// Nonzeros of the tuple vertex when eps = 0.
        #[arg(long)]
        l: Option<usize>,
        /// Also enumerate the class and compare.
        #[arg(long)]
        enumerate: bool,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: u64,
    },
    /// A sequence with the largest possible k-error complexity.
    ConstructStable {
        #[command(flatten)]
        modulus: ModulusArgs,
        #[command(flatten)]
        output: OutputArgs,
        #[arg(long)]
        k: u64,
    },
    /// Check closed forms against oracles over exhaustive or sampled inputs.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        suite: Suite,
        /// Random inputs when the period is too large for an exhaustive sweep.
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: u64,
    },
}

/// A failed run: message and exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    pub fn input(message: impl Into<String>) -> Self {
        Self { code: exit::INPUT, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::BudgetExceeded { .. } => exit::BUDGET,
            _ => exit::INPUT,
        };
        Self { code, message: e.to_string() }
    }
}

/// An input sequence with its 1-based corpus line (1 for `--seq`).
#[derive(Debug, Clone)]
pub struct Record {
    pub line: usize,
    pub sequence: PeriodicSequence,
}

pub(crate) fn read_inputs(input: &InputArgs, modulus: Modulus) -> Result<Vec<Record>, Failure> {
    match (&input.seq, &input.file) {
        (Some(text), None) => {
            let sequence = PeriodicSequence::parse(text, modulus).map_err(|e| Failure::input(format!("--seq: {e}")))?;
            Ok(vec![Record { line: 1, sequence }])
        }
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
            let entries = parse_corpus(&text, modulus)
                .map_err(|e| Failure::input(format!("{}:{}: {}", path.display(), e.line, e.error)))?;
            Ok(entries.into_iter().map(|e| Record { line: e.line, sequence: e.sequence }).collect())
        }
        _ => Err(Failure::input("give exactly one of --seq or --file")),
    }
}

/// Parses `argv` (program name first), runs, and writes the report.
pub fn run_with(argv: &[String], stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { exit::INPUT } else { exit::OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() { stderr.write_all(rendered.as_bytes()) } else { stdout.write_all(rendered.as_bytes()) };
            return code;
        }
    };
    let output = commands::output_args(&cli.command).clone();
    if output.jobs == Some(0) {
        let _ = writeln!(stderr, "error: --jobs must be at least 1");
        return exit::INPUT;
    }
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(output.jobs.unwrap_or(0)).build() {
        Ok(pool) => pool,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return exit::INPUT;
        }
    };
    let result = pool.install(|| commands::dispatch(&cli.command));
    match result {
        Ok(report) => {
            if let Some(path) = &output.out {
                if let Err(e) = std::fs::write(path, report.body.as_bytes()) {
                    let _ = writeln!(stderr, "error: {}: {e}", path.display());
                    return exit::INPUT;
                }
            } else if stdout.write_all(report.body.as_bytes()).is_err() {
                return exit::INPUT;
            }
            report.code
        }
        Err(failure) => {
            let _ = writeln!(stderr, "error: {}", failure.message);
            failure.code
        }
    }
}

/// Runs with the process's standard streams.
pub fn run(argv: &[String]) -> i32 {
    run_with(argv, &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}
