mod commands;
mod format;
mod manifest;
mod svg;

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "szego", version, about = "Multiple Szegő curves and planar orthogonal polynomials")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
pub struct ConfigArg {
    /// Configuration JSON: {"a": [[re, im], ...], "c": [...], "n": int, "N": number}
    #[arg(long)]
    pub config: PathBuf,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Region,
    Uniform,
    Local,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Auto,
    Exact,
    Quad,
}

#[derive(Subcommand)]
enum Command {
    /// Check a configuration and write its normalised form.
    Validate {
        #[command(flatten)]
        config: ConfigArg,
        #[arg(long, default_value = "validate.json")]
        out: PathBuf,
    },
    /// Levels L, lifts ℓ, chains, chain constants and genericity as JSON.
    Levels {
        #[command(flatten)]
        config: ConfigArg,
        #[arg(long, default_value = "levels.json")]
        out: PathBuf,
    },
    /// Trace the multiple Szegő curve to CSV and optionally SVG.
    Curve {
        #[command(flatten)]
        config: ConfigArg,
        #[arg(long, default_value_t = 400)]
        grid: usize,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, default_value = "curve.csv")]
        out: PathBuf,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Evaluate the strong asymptotics at given points or on a grid.
    Asymp {
        #[command(flatten)]
        config: ConfigArg,
        /// CSV of points, one `re,im` per line
        #[arg(long, conflicts_with = "grid", required_unless_present = "grid")]
        points: Option<PathBuf>,
        /// Number of grid nodes per side on [-extent, extent]²
        #[arg(long)]
        grid: Option<usize>,
        #[arg(long, default_value_t = 1.5)]
        extent: f64,
        #[arg(long, value_enum, default_value_t = Mode::Uniform)]
        mode: Mode,
        #[arg(long, default_value_t = szego_core::asym::DEFAULT_TAU)]
        tau: f64,
        #[arg(long, default_value = "asymp.csv")]
        out: PathBuf,
    },
    /// Tabulate f_c and |E_c| on a square grid.
    Fc {
        #[arg(long, allow_hyphen_values = true)]
        c: f64,
        #[arg(long, default_value_t = 101)]
        grid: usize,
        #[arg(long, default_value_t = 10.0)]
        radius: f64,
        #[arg(long, default_value = "fc.csv")]
        out: PathBuf,
    },
    /// Zeros of E_c inside a box `re0,re1,im0,im1`.
    FcZeros {
        #[arg(long, allow_hyphen_values = true)]
        c: f64,
        #[arg(long = "box", allow_hyphen_values = true, default_value = "-30,30,-30,30")]
        rect: String,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, default_value = "fc_zeros.csv")]
        out: PathBuf,
    },
    /// Exact orthogonal polynomial of the given degree and its roots.
    Oracle {
        #[command(flatten)]
        config: ConfigArg,
        #[arg(long)]
        degree: usize,
        #[arg(long, value_enum, default_value_t = Method::Auto)]
        method: Method,
        #[arg(long, default_value = "roots.csv")]
        out: PathBuf,
        /// Also dump the moment matrix as JSON
        #[arg(long)]
        moments: Option<PathBuf>,
    },
    /// Asymptotics against the oracle, plus the root-to-curve distance.
    Compare {
        #[command(flatten)]
        config: ConfigArg,
        #[arg(long)]
        degree: usize,
        #[arg(long, value_enum, default_value_t = Method::Auto)]
        method: Method,
        #[arg(long, value_enum, default_value_t = Mode::Region)]
        mode: Mode,
        #[arg(long, default_value_t = 400)]
        grid: usize,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, default_value = "compare.csv")]
        out: PathBuf,
        #[arg(long, default_value = "compare_summary.json")]
        summary: PathBuf,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Validate { config, out } => commands::validate(&config, &out),
        Command::Levels { config, out } => commands::levels(&config, &out),
        Command::Curve {
            config,
            grid,
            tol,
            out,
            svg,
        } => commands::curve(&config, grid, tol, &out, svg.as_deref()),
        Command::Asymp {
            config,
            points,
            grid,
            extent,
            mode,
            tau,
            out,
        } => commands::asymp(&config, points.as_deref(), grid, extent, mode, tau, &out),
        Command::Fc { c, grid, radius, out } => commands::fc(c, grid, radius, &out),
        Command::FcZeros { c, rect, tol, out } => commands::fc_zeros(c, &rect, tol, &out),
        Command::Oracle {
            config,
            degree,
            method,
            out,
            moments,
        } => commands::oracle(&config, degree, method, &out, moments.as_deref()),
        Command::Compare {
            config,
            degree,
            method,
            mode,
            grid,
            tol,
            out,
            summary,
            svg,
        } => commands::compare(&config, degree, method, mode, grid, tol, &out, &summary, svg.as_deref()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
