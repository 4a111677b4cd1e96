//! `autoconv`: solve, certify and inspect autoconvolution minimizers.

mod commands;
mod exit;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use exit::Failure;

#[derive(Parser, Debug)]
#[command(name = "autoconv", version, about = "Bounds on the minimal L2 norm of an autoconvolution")]
struct Cli {
    /// Timestamp written into outputs (default: SOURCE_DATE_EPOCH, then now).
    #[arg(long, global = true, value_name = "RFC3339")]
    timestamp: Option<String>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Minimize the truncated objective and write a solution file.
    Solve(SolveArgs),
    /// Compute upper and lower certificates for a solution.
    Certify(CertifyArgs),
    /// Scan and optimize the arcsine-type family.
    Family(FamilyArgs),
    /// Emit (x, f(x), f*f(x)) samples for plotting.
    PlotData(PlotArgs),
    /// Check the additive-energy inequality on random weights.
    Energy(EnergyArgs),
}

#[derive(clap::Args, Debug)]
struct SolveArgs {
    /// Degree of the trigonometric polynomial.
    #[arg(long = "T", value_name = "T")]
    t: usize,
    /// Number of odd channels kept in the objective.
    #[arg(long = "R", value_name = "R")]
    r: usize,
    /// Gradient tolerance (max-norm).
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    #[arg(long, default_value_t = 1e-12)]
    rel_obj_tol: f64,
    #[arg(long, default_value_t = 100_000)]
    max_iter: usize,
    #[arg(long, default_value_t = 10)]
    memory: usize,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    report: Option<PathBuf>,
    /// Solution file to start from (padded with zeros).
    #[arg(long)]
    warm_start: Option<PathBuf>,
}

#[derive(clap::Args, Debug)]
struct CertifyArgs {
    #[arg(long)]
    solution: PathBuf,
    /// Truncation of the certification sums.
    #[arg(long = "N", value_name = "N", default_value_t = 1_000_000)]
    n: usize,
    /// Dual parameter; ignored with --optimize-alpha.
    #[arg(long, conflicts_with = "optimize_alpha")]
    alpha: Option<f64>,
    #[arg(long)]
    optimize_alpha: bool,
    #[arg(long, default_value_t = autoconv::certify::DEFAULT_ALPHA_INTERVAL.0)]
    alpha_min: f64,
    #[arg(long, default_value_t = autoconv::certify::DEFAULT_ALPHA_INTERVAL.1)]
    alpha_max: f64,
    /// Accumulate the long sums in double-double.
    #[arg(long)]
    double_double: bool,
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(clap::Args, Debug)]
struct FamilyArgs {
    #[arg(long, default_value_t = 0.45)]
    c_min: f64,
    #[arg(long, default_value_t = 0.55)]
    c_max: f64,
    #[arg(long, default_value_t = 11)]
    steps: usize,
    /// Series truncation; by default chosen from --tail-target for the final
    /// value and capped for the scan.
    #[arg(long = "K", value_name = "K")]
    k: Option<usize>,
    #[arg(long, default_value_t = autoconv::family::DEFAULT_TAIL_TARGET)]
    tail_target: f64,
    #[arg(long)]
    out_csv: Option<PathBuf>,
}

#[derive(clap::Args, Debug)]
struct PlotArgs {
    #[arg(long)]
    solution: PathBuf,
    #[arg(long, default_value_t = 1000)]
    grid_points: usize,
    #[arg(long)]
    out_csv: Option<PathBuf>,
    #[arg(long)]
    out_svg: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum WeightKind {
    Uniform,
    Nonnegative,
    Signed,
}

#[derive(clap::Args, Debug)]
struct EnergyArgs {
    #[arg(long = "N", value_name = "N")]
    n: usize,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = autoconv::reference::MU2_SQUARED_LOWER)]
    mu2_lower: f64,
    #[arg(long, value_enum, default_value_t = WeightKind::Nonnegative)]
    weights: WeightKind,
    #[arg(long)]
    out_csv: Option<PathBuf>,
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var("AUTOCONV_THREADS") else {
        return Ok(());
    };
    let n: usize =
        raw.trim().parse().map_err(|_| Failure::Invalid(format!("AUTOCONV_THREADS={raw:?} is not a thread count")))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| Failure::Other(e.to_string()))
}

fn run(cli: Cli) -> Result<(), Failure> {
    configure_threads()?;
    let stamp = commands::timestamp(cli.timestamp)?;
    match cli.command {
        Command::Solve(a) => commands::solve(a, &stamp),
        Command::Certify(a) => commands::certify(a, &stamp),
        Command::Family(a) => commands::family(a),
        Command::PlotData(a) => commands::plot_data(a),
        Command::Energy(a) => commands::energy(a),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).format_timestamp(None).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { exit::USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.code())
        }
    }
}
