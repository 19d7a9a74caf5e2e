//! `semicubic`: certificates, tracing, extrema, oracle scans and plots for the
//! semi-cubic hyponormality region.

mod commands;
mod config;
mod output;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{Overrides, RunConfig};

/// Threads for the parallel stages; unset means one per core.
pub const THREADS_ENV: &str = "SEMICUBIC_THREADS";

#[derive(Debug)]
pub enum CliError {
    /// Bad arguments or configuration (exit 2).
    Usage(String),
    /// A certificate or computation failed (exit 1).
    Failure(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Failure(_) => 1,
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "semicubic", version, about = "Semi-cubic hyponormality region of 1,(1,sqrt x,sqrt y)^ weighted shifts")]
struct Cli {
    /// `key = value` file with defaults for tol, t_min, t_max, samples, dim,
    /// s_min, s_max, s_steps and format.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Coefficient tables to use instead of the built-in ones.
    #[arg(long, global = true)]
    tables: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Args, Debug, Clone, Default)]
pub struct FormatArg {
    /// Output format: text, csv or json (not every command has all three).
    #[arg(long)]
    format: Option<String>,
}

#[derive(Args, Debug, Clone, Default)]
pub struct OracleArgs {
    /// Truncation size N.
    #[arg(long)]
    dim: Option<String>,
    #[arg(long)]
    s_min: Option<String>,
    #[arg(long)]
    s_max: Option<String>,
    #[arg(long)]
    s_steps: Option<String>,
    /// Skip the golden-section search between grid points.
    #[arg(long)]
    no_refine: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the certificate suite and the region checks.
    Verify {
        /// Comma-separated certificate names.
        #[arg(long, value_delimiter = ',')]
        only: Vec<String>,
        #[command(flatten)]
        format: FormatArg,
    },
    /// First squared weights of the completed sequence.
    Weights {
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, allow_hyphen_values = true)]
        y: String,
        #[arg(long, default_value_t = 10)]
        n: usize,
        #[command(flatten)]
        format: FormatArg,
    },
    /// Exact membership of (h, k).
    Classify {
        #[arg(long, allow_hyphen_values = true)]
        h: String,
        #[arg(long, allow_hyphen_values = true)]
        k: String,
        #[command(flatten)]
        format: FormatArg,
    },
    /// Boundary samples along k = t h.
    Trace {
        #[arg(long)]
        t_min: Option<String>,
        #[arg(long)]
        t_max: Option<String>,
        #[arg(long)]
        samples: Option<String>,
        #[arg(long)]
        tol: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        format: FormatArg,
    },
    /// Boundary roots on a vertical (--h) or horizontal (--k) line.
    Slice {
        #[arg(long, conflicts_with = "k", required_unless_present = "k")]
        h: Option<String>,
        #[arg(long)]
        k: Option<String>,
        #[arg(long)]
        tol: Option<String>,
        #[command(flatten)]
        format: FormatArg,
    },
    /// Coefficient signs of p(h, .).
    Profile {
        #[arg(long)]
        h: String,
        #[command(flatten)]
        format: FormatArg,
    },
    /// h_M and k_M by grid scan and by the stationarity system.
    Extrema {
        #[arg(long)]
        tol: Option<String>,
        #[command(flatten)]
        format: FormatArg,
    },
    /// Search for a negative eigenvalue of the self-commutator of T + s T^m.
    Oracle {
        #[arg(long)]
        h: f64,
        #[arg(long)]
        k: f64,
        #[arg(long, default_value_t = 3)]
        power: usize,
        #[command(flatten)]
        oracle: OracleArgs,
        #[command(flatten)]
        format: FormatArg,
    },
    /// m = 2 against m = 3 along a vertical segment, as CSV.
    Compare {
        #[arg(long, default_value_t = 0.01)]
        h: f64,
        #[arg(long)]
        k_min: f64,
        #[arg(long)]
        k_max: f64,
        #[arg(long, default_value_t = 20)]
        k_steps: usize,
        /// Spacing of the k grid: linear or log.
        #[arg(long, default_value = "linear")]
        spacing: String,
        #[command(flatten)]
        oracle: OracleArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// SVG picture of the region.
    Plot {
        #[arg(long)]
        out: Option<PathBuf>,
        /// Extra layers; `extrema` marks h_M and k_M.
        #[arg(long, value_delimiter = ',')]
        annotate: Vec<String>,
        /// Draw the reference ticks on the vertical segment at this h.
        #[arg(long)]
        segment: Option<f64>,
        #[arg(long)]
        samples: Option<String>,
        #[arg(long, default_value_t = 640.0)]
        width: f64,
        #[arg(long, default_value_t = 640.0)]
        height: f64,
        /// Inside-sampling grid per axis; 0 turns shading off.
        #[arg(long, default_value_t = 48)]
        shade: usize,
    },
    /// JSON summary of the headline numbers.
    Report {
        #[arg(long)]
        out: Option<PathBuf>,
        /// Points per side for the oracle agreement counts.
        #[arg(long, default_value_t = 50)]
        oracle_points: usize,
    },
}

fn configure_threads() -> Result<(), CliError> {
    if let Ok(v) = std::env::var(THREADS_ENV) {
        let n: usize = v
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| CliError::Usage(format!("{THREADS_ENV} must be a positive integer, got {v:?}")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Failure(format!("thread pool: {e}")))?;
    }
    Ok(())
}

fn overrides(cmd: &Command) -> Overrides {
    let mut o = Overrides::default();
    let oracle = |o: &mut Overrides, a: &OracleArgs| {
        o.set("dim", a.dim.clone());
        o.set("s_min", a.s_min.clone());
        o.set("s_max", a.s_max.clone());
        o.set("s_steps", a.s_steps.clone());
    };
    match cmd {
        Command::Verify { format, .. }
        | Command::Weights { format, .. }
        | Command::Classify { format, .. }
        | Command::Profile { format, .. } => o.set("format", format.format.clone()),
        Command::Trace { t_min, t_max, samples, tol, format, .. } => {
            o.set("t_min", t_min.clone());
            o.set("t_max", t_max.clone());
            o.set("samples", samples.clone());
            o.set("tol", tol.clone());
            o.set("format", format.format.clone());
        }
        Command::Slice { tol, format, .. } | Command::Extrema { tol, format } => {
            o.set("tol", tol.clone());
            o.set("format", format.format.clone());
        }
        Command::Oracle { oracle: a, format, .. } => {
            oracle(&mut o, a);
            o.set("format", format.format.clone());
        }
        Command::Compare { oracle: a, .. } => oracle(&mut o, a),
        Command::Plot { samples, .. } => o.set("samples", samples.clone()),
        Command::Report { .. } => {}
    }
    o
}

fn run(cli: Cli) -> Result<(), CliError> {
    configure_threads()?;
    let cfg = RunConfig::resolve(cli.config.as_deref(), &overrides(&cli.cmd))?;
    let ctx = commands::Context::new(cfg, cli.tables)?;
    match cli.cmd {
        Command::Verify { only, .. } => commands::verify(&ctx, &only),
        Command::Weights { x, y, n, .. } => commands::weights(&ctx, &x, &y, n),
        Command::Classify { h, k, .. } => commands::classify(&ctx, &h, &k),
        Command::Trace { out, .. } => commands::trace(&ctx, out.as_deref()),
        Command::Slice { h, k, .. } => commands::slice(&ctx, h.as_deref(), k.as_deref()),
        Command::Profile { h, .. } => commands::profile(&ctx, &h),
        Command::Extrema { .. } => commands::extrema(&ctx),
        Command::Oracle { h, k, power, oracle, .. } => commands::oracle(&ctx, h, k, power, oracle.no_refine),
        Command::Compare { h, k_min, k_max, k_steps, spacing, oracle, out } => {
            commands::compare(&ctx, h, (k_min, k_max, k_steps), &spacing, oracle.no_refine, out.as_deref())
        }
        Command::Plot { out, annotate, segment, width, height, shade, .. } => {
            commands::plot(&ctx, out.as_deref(), &annotate, segment, (width, height), shade)
        }
        Command::Report { out, oracle_points } => commands::report(&ctx, out.as_deref(), oracle_points),
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
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            match &e {
                CliError::Usage(m) => eprintln!("error: {m}"),
                CliError::Failure(m) => eprintln!("failure: {m}"),
            }
            ExitCode::from(e.code())
        }
    }
}
