//! Command-line frontend.
//!
//! Exit codes: 0 success, 1 internal error or failed verification,
//! 2 violated precondition, 64 usage error.

mod commands;
mod render;
pub mod verify;

use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::Error;
pub use render::{Block, Report};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_DOMAIN: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

#[derive(Parser, Debug)]
#[command(name = "cfsum", version, about = "Exact error sums of periodic continued fractions")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalOpts {
    /// Working precision in bits for numeric output.
    #[arg(long, global = true, default_value_t = 128, value_parser = clap::value_parser!(u32).range(16..=1_000_000))]
    pub prec: u32,
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    pub format: Format,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Table,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Continued fraction of a quadratic surd or digit word.
    Expand {
        /// `(a+b*sqrt(D))/c` or `[a0;p0,p1,...]`.
        input: String,
        /// Also list convergents h_n/k_n for n = -2..=N.
        #[arg(long)]
        convergents: Option<i64>,
    },
    /// Weighted error sum f(s) of a purely periodic xi.
    Errorsum {
        xi: String,
        /// Exponent: a positive integer (exact) or a rational > 1 (numeric).
        #[arg(long, default_value = "2")]
        s: String,
    },
    /// Unit k_{N-1} xi + k_{N-2} attached to the period.
    Unit {
        xi: String,
        /// Periods folded into the unit; defaults to the repetition of an input word.
        #[arg(long)]
        repetition: Option<usize>,
    },
    /// Pell solutions x_n + y_n sqrt(D) = u^n.
    Pell {
        #[arg(long)]
        xi: String,
        #[arg(long, default_value_t = 4)]
        n: u32,
    },
    /// Squared-error identities of Euler-type continued fractions.
    Euler {
        #[arg(long, value_enum)]
        instance: Instance,
        #[arg(long, default_value_t = 1000)]
        terms: u64,
        /// Partial numerators a_n for `custom`: `const:c` or `poly:(c0,c1,..)`.
        #[arg(long)]
        a: Option<String>,
        /// Partial denominators b_n for `custom`.
        #[arg(long)]
        b: Option<String>,
    },
    /// Jacobi-Perron expansion of a real algebraic number.
    Jpa {
        /// Integer coefficients, highest degree first, comma separated.
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
        /// Index among the real roots, ascending.
        #[arg(long, default_value_t = 0)]
        root_index: usize,
        #[arg(long, default_value_t = 20)]
        steps: usize,
        /// Check the eigenvector relation on the detected period.
        #[arg(long)]
        verify: bool,
        #[arg(long, default_value_t = 8)]
        m_max: u32,
    },
    /// Randomized invariant suites.
    Verify {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        cases: usize,
        /// Run only the named suite.
        #[arg(long)]
        suite: Option<String>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Instance {
    Pi,
    Ln2,
    Custom,
}

/// Outcome of a command before rendering.
pub enum Outcome {
    Ok(Report),
    /// The command ran but found failures.
    Failed(Report),
}

pub fn execute(cli: &Cli) -> Result<Outcome, Error> {
    let g = &cli.global;
    match &cli.command {
        Command::Expand { input, convergents } => commands::expand(input, *convergents, g).map(Outcome::Ok),
        Command::Errorsum { xi, s } => commands::errorsum(xi, s, g).map(Outcome::Ok),
        Command::Unit { xi, repetition } => commands::unit(xi, *repetition, g).map(Outcome::Ok),
        Command::Pell { xi, n } => commands::pell(xi, *n, g).map(Outcome::Ok),
        Command::Euler { instance, terms, a, b } => {
            commands::euler(*instance, *terms, a.as_deref(), b.as_deref(), g).map(Outcome::Ok)
        }
        Command::Jpa { poly, root_index, steps, verify, m_max } => {
            commands::jpa(poly, *root_index, *steps, *verify, *m_max, g).map(Outcome::Ok)
        }
        Command::Verify { seed, cases, suite } => {
            let report = verify::run_suites(*seed, *cases, suite.as_deref())?;
            let ok = report.passed();
            let r = report.to_report();
            Ok(if ok { Outcome::Ok(r) } else { Outcome::Failed(r) })
        }
    }
}

/// Parses `args` (including the program name), runs, and writes to the given
/// streams. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{text}");
                    EXIT_USAGE
                }
            };
        }
    };
    let format = cli.global.format;
    let (report, code) = match execute(&cli) {
        Ok(Outcome::Ok(r)) => (r, EXIT_OK),
        Ok(Outcome::Failed(r)) => (r, EXIT_FAILURE),
        Err(e) => {
            let code = match e {
                Error::Internal(_) => EXIT_FAILURE,
                _ => EXIT_DOMAIN,
            };
            let _ = writeln!(err, "error: {e}");
            if format == Format::Json {
                let _ = writeln!(out, "{}", render::error_json(&cli, &e));
            }
            return code;
        }
    };
    let text = match format {
        Format::Json => report.to_json_string(),
        Format::Table => report.to_table(),
    };
    let _ = writeln!(out, "{text}");
    code
}

pub fn subcommand_name(cli: &Cli) -> &'static str {
    match cli.command {
        Command::Expand { .. } => "expand",
        Command::Errorsum { .. } => "errorsum",
        Command::Unit { .. } => "unit",
        Command::Pell { .. } => "pell",
        Command::Euler { .. } => "euler",
        Command::Jpa { .. } => "jpa",
        Command::Verify { .. } => "verify",
    }
}
