//! Command-line front end: build operator families, check commutation, find
//! companions, extract spectral curves and certify ranks.
//!
//! Exit codes: 0 when every check passed, 1 when a mathematical check failed,
//! 2 for bad input or usage.

pub mod commands;
pub mod document;
pub mod error;
pub mod expr;
pub mod report;

use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use error::CliError;
pub use report::RunReport;

#[derive(Debug, Parser)]
#[command(name = "bcpair", version, about = "Exact arithmetic for commuting differential operators")]
pub struct Cli {
    /// Print the report as JSON
    #[arg(long, global = true)]
    pub json: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Family {
    DixmierR2,
    DixmierR3,
    MironovR2,
    MironovR3,
    #[value(name = "rank-2k")]
    RankTwoK,
    #[value(name = "rank-3k")]
    RankThreeK,
    ChebZ,
    ChebCanonical,
}

#[derive(Debug, Args)]
pub struct BuildArgs {
    pub family: Family,
    #[arg(long, default_value_t = 2, allow_hyphen_values = true)]
    pub r: i64,
    #[arg(long, default_value_t = 1)]
    pub g: u32,
    #[arg(long, default_value_t = 2)]
    pub k: u32,
    /// Constant `a`: a rational or a polynomial in named parameters
    #[arg(long, default_value = "a", allow_hyphen_values = true)]
    pub a: String,
    #[arg(long, default_value = "b", allow_hyphen_values = true)]
    pub b: String,
    #[arg(long, default_value = "alpha", allow_hyphen_values = true)]
    pub alpha: String,
    /// Where to write L
    #[arg(short = 'o', long = "out")]
    pub out: Option<PathBuf>,
    /// Where to write the closed-form companion M, if the family has one
    #[arg(long = "m-out")]
    pub m_out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build an operator from one of the explicit families
    Build(BuildArgs),
    /// Print the Chebyshev polynomial T_r
    Cheb {
        #[arg(allow_hyphen_values = true)]
        r: i64,
    },
    /// Print [A, B]; exit 0 iff it vanishes
    Commutator {
        a: PathBuf,
        b: PathBuf,
        #[arg(short = 'o', long = "out")]
        out: Option<PathBuf>,
    },
    /// Print the formal adjoint
    Adjoint {
        a: PathBuf,
        #[arg(short = 'o', long = "out")]
        out: Option<PathBuf>,
    },
    /// Check monic leading and vanishing subleading coefficient
    CanonicalCheck { a: PathBuf },
    /// Apply the Weyl algebra automorphism x -> D, D -> -x
    WeylAuto {
        a: PathBuf,
        #[arg(short = 'o', long = "out")]
        out: Option<PathBuf>,
    },
    /// Find the companion M of the given order commuting with L
    FindM {
        l: PathBuf,
        #[arg(long)]
        order: usize,
        /// Initial x-degree bound of the ansatz
        #[arg(long)]
        degree: Option<usize>,
        #[arg(long, default_value_t = bcpair_core::centralizer::DEFAULT_DEGREE_CAP)]
        cap: usize,
        #[arg(short = 'o', long = "out")]
        out: Option<PathBuf>,
    },
    /// Extract the spectral curve M^2 = f(L)
    Curve { l: PathBuf, m: PathBuf },
    /// Check [L, M] = 0 and M^2 = f(L)
    VerifyPair { l: PathBuf, m: PathBuf },
    /// Check the Q(x, lambda) relation for L = (D^2 + V)^2 + W
    MironovVerify {
        #[arg(long = "V", visible_alias = "v", allow_hyphen_values = true)]
        v: String,
        #[arg(long = "W", visible_alias = "w", allow_hyphen_values = true)]
        w: String,
        /// Monic polynomial in lambda with coefficients in x
        #[arg(long = "Q", visible_alias = "q", allow_hyphen_values = true)]
        q: String,
        /// f(lambda), monic of odd degree
        #[arg(long, allow_hyphen_values = true)]
        curve: String,
    },
    /// Solve the Q(x, lambda) relation at genus 1
    MironovSolveG1 {
        #[arg(long = "V", visible_alias = "v", allow_hyphen_values = true)]
        v: String,
        #[arg(long = "W", visible_alias = "w", allow_hyphen_values = true)]
        w: String,
    },
    /// Certify the common eigenspace dimension at a rational spectral point
    CertifyRank {
        l: PathBuf,
        m: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        /// Series terms kept beyond ord L + ord M
        #[arg(long, default_value_t = bcpair_core::eigenspace::TRUNCATION_MARGIN)]
        margin: usize,
    },
}

/// Runs the command line `argv` (including the program name), writing the
/// report to `out`. Returns the exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = write!(out, "{}", e.render());
            return code;
        }
    };
    let start = Instant::now();
    let mut report = RunReport::new(commands::name(&cli.command));
    if let Err(e) = commands::execute(&cli.command, &mut report) {
        report.fail(e.exit_code(), e.to_string());
    }
    report.elapsed = start.elapsed();
    let text = if cli.json { report.render_json() } else { report.render_human() };
    if out.write_all(text.as_bytes()).is_err() {
        return 2;
    }
    report.exit_code
}
