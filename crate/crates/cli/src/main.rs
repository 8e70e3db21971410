//! `depthlab` command-line front end.
//!
//! Data goes to standard output (or `--output`), diagnostics to standard
//! error. Exit codes: 0 success, 1 bound violated, 2 usage or domain error,
//! 3 resource cap exceeded.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use depthlab::exact_depth::DEFAULT_N_CAP;
use depthlab::verify::Suite;
use depthlab::Route;

#[derive(Parser, Debug)]
#[command(name = "depthlab", version, about = "Node depths in random binary search trees")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Json)]
    format: Format,

    /// Write data to this file instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact depth law of key l with its mean and variance.
    Exact(ExactArgs),
    /// Poisson (--l) or limiting mixed Poisson (--t) approximation report.
    Approx(ApproxArgs),
    /// Run verification suites; exits 1 if any check fails.
    Verify(VerifyArgs),
    /// Monte Carlo sampling of the depth along one route.
    Simulate(SimulateArgs),
    /// Depth of every key in the tree grown from one permutation.
    DepthPlot(DepthPlotArgs),
}

#[derive(Args, Debug)]
pub struct ExactArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    l: usize,
    /// Largest n accepted by the exact computation.
    #[arg(long, default_value_t = DEFAULT_N_CAP)]
    n_cap: usize,
}

#[derive(Args, Debug)]
#[command(group = clap::ArgGroup::new("key").required(true).args(["l", "t"]))]
pub struct ApproxArgs {
    #[arg(long)]
    n: usize,
    /// Key for the Poisson report.
    #[arg(long)]
    l: Option<usize>,
    /// Relative key position in (0, 1) for the mixed Poisson report.
    #[arg(long)]
    t: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_N_CAP)]
    n_cap: usize,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Suite to run, or `all`.
    #[arg(long, default_value = "all", value_parser = parse_suite)]
    suite: SuiteSelection,
    /// Run size-gridded suites at this n only.
    #[arg(long)]
    n: Option<usize>,
    /// Upper end of swept n ranges.
    #[arg(long)]
    n_max: Option<usize>,
    /// Random cases for randomized suites.
    #[arg(long)]
    trials: Option<usize>,
    /// Samples per route for simulation suites.
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long, env = "DEPTHLAB_SEED", default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, Debug)]
pub enum SuiteSelection {
    All,
    One(Suite),
}

fn parse_suite(s: &str) -> Result<SuiteSelection, String> {
    if s == "all" {
        return Ok(SuiteSelection::All);
    }
    s.parse().map(SuiteSelection::One).map_err(|e: depthlab::Error| e.to_string())
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    /// bst, representation, find or random-key.
    #[arg(long, value_parser = |s: &str| s.parse::<Route>().map_err(|e| e.to_string()))]
    route: Route,
    #[arg(long)]
    n: usize,
    /// Key; required except for the random-key route.
    #[arg(long)]
    l: Option<usize>,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    samples: u64,
    #[arg(long, env = "DEPTHLAB_SEED", default_value_t = 0)]
    seed: u64,
    /// Also write the raw samples, one per line, to this file.
    #[arg(long)]
    samples_out: Option<PathBuf>,
    /// Compare with the exact law only up to this n.
    #[arg(long, default_value_t = DEFAULT_N_CAP)]
    n_cap: usize,
}

#[derive(Args, Debug)]
#[command(group = clap::ArgGroup::new("source").required(true).args(["perm_file", "n"]))]
pub struct DepthPlotArgs {
    /// File holding one permutation of 1..n, whitespace separated.
    #[arg(long)]
    perm_file: Option<PathBuf>,
    /// Size of a random permutation drawn from --seed.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, env = "DEPTHLAB_SEED", default_value_t = 0)]
    seed: u64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Exact(a) => commands::exact(a),
        Command::Approx(a) => commands::approx(a),
        Command::Verify(a) => commands::verify(a),
        Command::Simulate(a) => commands::simulate(a),
        Command::DepthPlot(a) => commands::depth_plot(a),
    }
    .and_then(|out| {
        output::emit(&out.doc, cli.format, cli.output.as_deref())?;
        Ok(out.status)
    });
    match result {
        Ok(status) => ExitCode::from(status as u8),
        Err(e) => {
            eprintln!("depthlab: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
