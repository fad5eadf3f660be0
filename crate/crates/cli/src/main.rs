//! Command-line entry point. Exit codes: 0 success, 2 parse/input error,
//! 3 hypothesis-range error.

use clap::{Args, Parser, Subcommand};
use mcmetric_cli::commands::{analyze, bernoulli, min_curve, reduced, rip, transition};
use mcmetric_cli::{exit_code_for, grid, ConfigFile};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "mcmetric",
    about = "Complexity-metric experiments for rank-1 weighted matrix completion",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Diagnostic report for one instance file
    Analyze(AnalyzeArgs),
    /// Minimum-metric curves over a weight grid
    MinCurve(MinCurveArgs),
    /// Gradient-descent success-rate transitions for the one-parameter family
    Transition(TransitionArgs),
    /// Bernoulli sampling study at the theoretical rate threshold
    Bernoulli(BernoulliArgs),
    /// Exact metric versus the restricted-isometry bounds
    Rip(RipArgs),
    /// Critical-point census of the reduced problem
    Reduced(ReducedArgs),
    /// Run any command from a JSON config file mirroring the CLI flags
    Run(RunArgs),
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Instance file (JSON: n, C, u_star, optional meta)
    #[arg(long)]
    instance: PathBuf,
    #[arg(long)]
    alpha: f64,
    /// Skip the symmetrize-and-normalize pass (file must be normalized)
    #[arg(long)]
    raw: bool,
    /// Report destination (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct MinCurveArgs {
    /// Dimensions, comma-separated (each at least 5)
    #[arg(long)]
    n: String,
    /// Weight grid, start:step:end or comma list
    #[arg(long)]
    alpha_grid: String,
    /// Record the n-scaled curve as primary in the header
    #[arg(long)]
    scaled: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct TransitionArgs {
    /// Dimensions, comma-separated
    #[arg(long)]
    n: String,
    /// Scaled-parameter grid, start:step:end or comma list
    #[arg(long)]
    eta: String,
    #[arg(long)]
    trials: usize,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Optional per-trial CSV
    #[arg(long)]
    detail_out: Option<PathBuf>,
    #[arg(long)]
    max_iters: Option<usize>,
    #[arg(long)]
    success_tol: Option<f64>,
    #[arg(long)]
    grad_tol: Option<f64>,
}

#[derive(Args)]
struct BernoulliArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    mu: f64,
    /// Probability exponent (must exceed 2)
    #[arg(long)]
    eta: f64,
    #[arg(long)]
    trials: usize,
    #[arg(long)]
    seed: u64,
    /// Metric weight (defaults to the star weight)
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RipArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    alpha_grid: String,
    #[arg(long)]
    delta_grid: String,
    /// Incoherence targets for the lower-bound rows (comma list)
    #[arg(long)]
    mu: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ReducedArgs {
    #[arg(long)]
    m: usize,
    #[arg(long)]
    eps_grid: String,
    #[arg(long)]
    starts: usize,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    /// JSON config file with a "command" tag plus that command's parameters
    #[arg(long)]
    config: PathBuf,
}

fn write_or_print(out: &Option<PathBuf>, text: &str) -> Result<(), mcmetric::Error> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(Into::into),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn dispatch(config: ConfigFile) -> Result<(), mcmetric::Error> {
    match config {
        ConfigFile::Analyze(params) => {
            let out = analyze::run(&params)?;
            write_or_print(&params.out, &out.report)
        }
        ConfigFile::MinCurve(params) => {
            let out = min_curve::run(&params)?;
            write_or_print(&params.out, &out.csv)
        }
        ConfigFile::Transition(params) => {
            let out = transition::run(&params)?;
            if let Some(path) = &params.detail_out {
                std::fs::write(path, &out.detail_csv)?;
            }
            write_or_print(&params.out, &out.csv)
        }
        ConfigFile::Bernoulli(params) => {
            let out = bernoulli::run(&params)?;
            write_or_print(&params.out, &out.csv)
        }
        ConfigFile::Rip(params) => {
            let out = rip::run(&params)?;
            write_or_print(&params.out, &out.csv)
        }
        ConfigFile::Reduced(params) => {
            let out = reduced::run(&params)?;
            write_or_print(&params.out, &out.csv)
        }
    }
}

fn build_config(command: Command) -> Result<ConfigFile, mcmetric::Error> {
    Ok(match command {
        Command::Analyze(a) => ConfigFile::Analyze(analyze::Params {
            instance: a.instance,
            alpha: a.alpha,
            raw: a.raw,
            out: a.out,
        }),
        Command::MinCurve(a) => ConfigFile::MinCurve(min_curve::Params {
            n_list: grid::parse_usize_list(&a.n)?,
            alpha_grid: grid::parse_grid(&a.alpha_grid)?,
            scaled: a.scaled,
            out: a.out,
        }),
        Command::Transition(a) => ConfigFile::Transition(transition::Params {
            n_list: grid::parse_usize_list(&a.n)?,
            eta_grid: grid::parse_grid(&a.eta)?,
            trials: a.trials,
            seed: a.seed,
            out: a.out,
            detail_out: a.detail_out,
            max_iters: a.max_iters,
            success_tol: a.success_tol,
            grad_tol: a.grad_tol,
        }),
        Command::Bernoulli(a) => ConfigFile::Bernoulli(bernoulli::Params {
            n: a.n,
            mu: a.mu,
            eta: a.eta,
            trials: a.trials,
            seed: a.seed,
            alpha: a.alpha,
            out: a.out,
        }),
        Command::Rip(a) => ConfigFile::Rip(rip::Params {
            n: a.n,
            alpha_grid: grid::parse_grid(&a.alpha_grid)?,
            delta_grid: grid::parse_grid(&a.delta_grid)?,
            mu_list: match a.mu {
                Some(spec) => grid::parse_grid(&spec)?,
                None => vec![1.0, 2.0],
            },
            out: a.out,
        }),
        Command::Reduced(a) => ConfigFile::Reduced(reduced::Params {
            m: a.m,
            eps_grid: grid::parse_grid(&a.eps_grid)?,
            starts: a.starts,
            seed: a.seed,
            out: a.out,
        }),
        Command::Run(a) => {
            let text = std::fs::read_to_string(&a.config)?;
            serde_json::from_str(&text)?
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let config = match build_config(cli.command) {
        Ok(c) => c,
        Err(err) => {
            eprintln!("error: {err}");
            return ExitCode::from(exit_code_for(&err));
        }
    };
    match dispatch(config) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}
