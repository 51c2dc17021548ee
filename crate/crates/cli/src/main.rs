//! Command-line front end: classification, solving, reductions, generation
//! and property checks over the text formats of the `maxprod` library.
//!
//! Exit codes: 0 success, 1 property failure, 2 usage or parse error.

mod commands;
mod render;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "maxprod", version, about = "Product-measured Boolean CSP toolkit")]
pub struct Cli {
    #[command(flatten)]
    pub config: RunConfig,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct RunConfig {
    /// Relative tolerance for fitted certificates.
    #[arg(long = "tol", global = true, default_value_t = 1e-9)]
    pub tolerance: f64,
    /// Seed for every randomized path.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Variable cap for exhaustive search.
    #[arg(long = "max-n", global = true, default_value_t = 24)]
    pub max_n: usize,
    /// Refuse methods without an exactness guarantee.
    #[arg(long = "exact", global = true)]
    pub exact_only: bool,
    /// Print one `key: value` pair per line.
    #[arg(long, global = true)]
    pub machine: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Class memberships, certificates and the complexity category of a
    /// constraint set (a constraint file, or the constraints of an instance).
    Classify {
        file: String,
        /// Also search for binary witnesses inside each failing constraint.
        #[arg(long)]
        witnesses: bool,
    },
    /// Maximize the product measure of an instance or a graph.
    Solve {
        file: String,
        #[arg(long, value_enum, default_value_t = SolveMethod::Auto)]
        method: SolveMethod,
        /// Tolerance exponent for `hill`: the target ratio is 2^eps.
        #[arg(long, default_value = "1/10")]
        eps: String,
        /// Restarts for `hill`.
        #[arg(long, default_value_t = 16)]
        restarts: usize,
        /// Let `tractable` fall back to brute force when certificates are missing.
        #[arg(long)]
        fallback: bool,
    },
    /// Transform an instance or graph.
    Reduce {
        #[arg(value_enum)]
        reduction: ReductionKind,
        file: String,
        /// Construction script (rewrite only).
        #[arg(long)]
        script: Option<String>,
        /// Name of the constraint to rewrite (rewrite only).
        #[arg(long)]
        target: Option<String>,
        /// Extra constraint file for script sources (rewrite only).
        #[arg(long)]
        lib: Option<String>,
        /// Write the transformed instance here instead of stdout.
        #[arg(long, short)]
        out: Option<String>,
    },
    /// Replace every application of a constraint by its construction script.
    Rewrite {
        file: String,
        #[arg(long)]
        script: String,
        #[arg(long)]
        target: String,
        #[arg(long)]
        lib: Option<String>,
        #[arg(long, short)]
        out: Option<String>,
    },
    /// Generate a random instance or graph.
    Gen {
        #[arg(long, value_enum)]
        kind: GenKind,
        #[arg(long)]
        n: usize,
        /// Applications (CSP kinds).
        #[arg(long, default_value_t = 10)]
        m: usize,
        /// Edge probability (graph kinds).
        #[arg(long, default_value_t = 0.4)]
        p: f64,
        /// Allow zero factors (imopt).
        #[arg(long)]
        zeros: bool,
    },
    /// Measure of one assignment, for an instance or a graph.
    Eval { file: String, assignment: String },
    /// Run property suites; exits 1 if any property fails.
    Check {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 10)]
        cases: usize,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum SolveMethod {
    Auto,
    Brute,
    Tractable,
    Hill,
    Flow,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum ReductionKind {
    Is2csp,
    Complement,
    Bis2csp,
    Csp2flow,
    Rewrite,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum GenKind {
    Is,
    Bis,
    Flow,
    Cut,
    Csp,
    Ed,
    Imopt,
}

/// A command failure and its exit code.
#[derive(Debug)]
pub enum Failure {
    Usage(anyhow::Error),
    Property(String),
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Usage(e.into())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match commands::run(&cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Property(out)) => {
            print!("{out}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
