mod commands;
mod output;

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use output::Format;

/// High-precision variational resummation of the D-dimensional quartic oscillator.
#[derive(Debug, Parser)]
#[command(name = "vpt", version, about)]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Working precision in decimal digits (default depends on the subcommand).
    #[arg(long, global = true, env = "VPT_PRECISION", value_parser = clap::value_parser!(u32).range(32..))]
    pub precision: Option<u32>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Weak-coupling coefficients epsilon_k, symbolic in D or at fixed D.
    Coeffs(CoeffsArgs),
    /// Resummed strong-coupling coefficient b0 (or the finite-coupling energy).
    Resum(ResumArgs),
    /// The sequence b0^(N), N = 1..nmax.
    Sequence(SequenceArgs),
    /// Fit of the exponential convergence law.
    Fit(FitArgs),
    /// Large-D coefficients B_k^(N) and their extrapolated limits.
    #[command(name = "large-d")]
    LargeD(LargeDArgs),
    /// Effective potential on a grid of the background field.
    Effpot(EffpotArgs),
    /// Radial Schroedinger ground state.
    Oracle(OracleArgs),
    /// Convergence-law data: N^(1/3) against the log relative deviation.
    Fig1(Fig1Args),
    /// b0(D) from the large-D expansion, with the high-precision points.
    Fig2(Fig2Args),
    /// Log relative deviations of B_k^(N).
    Fig5(Fig5Args),
    /// Every stored reference table with pass/fail annotations.
    Tables(TablesArgs),
}

#[derive(Debug, Args)]
pub struct CoeffsArgs {
    #[arg(long, default_value_t = 5)]
    pub order: usize,
    /// Exact polynomials in D (the default when no dimension is given).
    #[arg(long, conflicts_with = "dimension")]
    pub symbolic: bool,
    #[arg(long)]
    pub dimension: Option<String>,
}

#[derive(Debug, Args)]
pub struct ResumArgs {
    #[arg(long)]
    pub order: usize,
    #[arg(long)]
    pub dimension: String,
    /// Finite coupling g; omitted for the strong-coupling limit.
    #[arg(long)]
    pub coupling: Option<String>,
    #[arg(long, default_value = "1")]
    pub frequency: String,
}

#[derive(Debug, Args)]
pub struct SequenceArgs {
    #[arg(long)]
    pub dimension: String,
    #[arg(long, default_value_t = 70)]
    pub nmax: usize,
    /// Skip the re-run at 1.5x precision.
    #[arg(long)]
    pub no_escalate: bool,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    #[arg(long)]
    pub dimension: String,
    #[arg(long, default_value_t = 70)]
    pub nmax: usize,
    #[arg(long, default_value_t = vpt_core::convergence::DEFAULT_FIT_RANGE.0)]
    pub nmin: usize,
    /// Order whose b0 serves as the exact value.
    #[arg(long, default_value_t = 80)]
    pub reference_order: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Epsilon,
    TailFit,
}

#[derive(Debug, Args)]
pub struct LargeDArgs {
    #[arg(long, default_value_t = 100)]
    pub order_max: usize,
    #[arg(long, default_value_t = 6)]
    pub m_max: usize,
    #[arg(long, value_enum, default_value_t = Method::Epsilon)]
    pub method: Method,
}

#[derive(Debug, Args)]
pub struct EffpotArgs {
    #[arg(long)]
    pub dimension: String,
    /// Coupling g; the potential uses g_tilde = D g.
    #[arg(long, default_value = "1")]
    pub coupling: String,
    #[arg(long, default_value = "1")]
    pub frequency: String,
    /// Grid bounds for s (default: half and 1.5 times the stationary point).
    #[arg(long)]
    pub s_min: Option<String>,
    #[arg(long)]
    pub s_max: Option<String>,
    #[arg(long, default_value_t = 20)]
    pub steps: usize,
    /// Also fit the weak-coupling saddle coefficients s_1..s_5.
    #[arg(long)]
    pub weak_check: bool,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[arg(long)]
    pub dimension: f64,
    #[arg(long, default_value_t = 1.0)]
    pub coupling: f64,
    #[arg(long, default_value_t = 0.0)]
    pub frequency: f64,
    #[arg(long)]
    pub grid: Option<usize>,
    #[arg(long)]
    pub xmax: Option<f64>,
    #[arg(long, default_value_t = 10)]
    pub target_digits: u32,
}

#[derive(Debug, Args)]
pub struct Fig1Args {
    #[arg(long, value_delimiter = ',', default_value = "2,3,10")]
    pub dimensions: Vec<String>,
    #[arg(long, default_value_t = 70)]
    pub nmax: usize,
    #[arg(long, default_value_t = 80)]
    pub reference_order: usize,
}

#[derive(Debug, Args)]
pub struct Fig2Args {
    #[arg(long, default_value_t = 1.0)]
    pub d_min: f64,
    #[arg(long, default_value_t = 12.0)]
    pub d_max: f64,
    #[arg(long, default_value_t = 44)]
    pub steps: usize,
}

#[derive(Debug, Args)]
pub struct Fig5Args {
    #[arg(long, default_value_t = 100)]
    pub order_max: usize,
    #[arg(long, default_value_t = 6)]
    pub m_max: usize,
}

#[derive(Debug, Args)]
pub struct TablesArgs {
    /// Large-D table from N <= 60 with tenfold brackets.
    #[arg(long)]
    pub quick: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = cli.format;
    let is_tables = matches!(cli.command, Command::Tables(_));
    match commands::run(cli) {
        Ok(doc) => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            if let Err(e) = doc.write(format, &mut lock).and_then(|_| lock.flush()) {
                eprintln!("error: writing output: {e}");
                return ExitCode::FAILURE;
            }
            if is_tables && !doc.all_passed() {
                eprintln!("error: {} reference comparison(s) failed", doc.checks.iter().filter(|c| !c.passed).count());
                return ExitCode::FAILURE;
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
