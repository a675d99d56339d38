use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use lanczos_trace_cli::{
    cmd_bilinear_curve, cmd_calibrate_delta, cmd_rational_check, cmd_trace, CliError, ExperimentConfig,
};

#[derive(Parser)]
#[command(name = "lanczos-trace", version, about = "Certified stochastic Lanczos trace estimation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Uniform error of the rational surrogate over a K schedule (CSV).
    RationalCheck(Overrides),
    /// Per-step true error and error estimates of one Lanczos run (CSV).
    BilinearCurve(Overrides),
    /// Trace estimate with confidence interval (JSON or text).
    Trace(Overrides),
    /// Per-sample tolerance from a pilot run.
    CalibrateDelta(Overrides),
}

#[derive(Args)]
struct Overrides {
    /// TOML experiment config; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Write the effective config to this path.
    #[arg(long)]
    save_config: Option<PathBuf>,
    #[arg(long)]
    testbed: Option<String>,
    #[arg(long)]
    n1: Option<usize>,
    #[arg(long)]
    n2: Option<usize>,
    #[arg(long)]
    sample_fraction: Option<f64>,
    #[arg(long)]
    l1: Option<f64>,
    #[arg(long)]
    l2: Option<f64>,
    #[arg(long)]
    nu: Option<f64>,
    #[arg(long)]
    tau: Option<f64>,
    #[arg(long)]
    site_seed: Option<u64>,
    #[arg(long, short = 'f')]
    function: Option<String>,
    #[arg(long, short = 'N')]
    samples: Option<usize>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    pilot_samples: Option<usize>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    t: Option<f64>,
    #[arg(long)]
    reorth: Option<String>,
    #[arg(long)]
    m_max: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    k_min: Option<usize>,
    #[arg(long)]
    k_max: Option<usize>,
    #[arg(long)]
    interval_lo: Option<f64>,
    #[arg(long)]
    interval_hi: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, short = 'o')]
    output: Option<String>,
    #[arg(long)]
    format: Option<String>,
}

macro_rules! apply {
    ($cfg:ident, $o:ident; $($field:ident),*) => { $(if let Some(v) = $o.$field.clone() { $cfg.$field = v; })* };
    ($cfg:ident, $o:ident; opt $($field:ident),*) => { $(if let Some(v) = $o.$field { $cfg.$field = Some(v); })* };
}

impl Overrides {
    fn resolve(&self) -> Result<ExperimentConfig, CliError> {
        let mut cfg = match &self.config {
            Some(path) => ExperimentConfig::load(path)?,
            None => ExperimentConfig::default(),
        };
        if let Some(s) = &self.testbed {
            cfg.testbed = s.parse()?;
        }
        if let Some(s) = &self.format {
            cfg.format = s.parse()?;
        }
        apply!(cfg, self; n1, n2, sample_fraction, nu, tau, site_seed, function, samples, alpha, beta,
            pilot_samples, t, reorth, m_max, k_min, k_max, seed);
        apply!(cfg, self; opt l1, l2, delta, k, interval_lo, interval_hi);
        if let Some(o) = &self.output {
            cfg.output = Some(o.clone());
        }
        if let Some(path) = &self.save_config {
            std::fs::write(path, cfg.to_toml()?)?;
        }
        Ok(cfg)
    }
}

fn run(cli: Cli) -> Result<i32, CliError> {
    let (overrides, cmd): (&Overrides, fn(&ExperimentConfig) -> _) = match &cli.command {
        Command::RationalCheck(o) => (o, cmd_rational_check),
        Command::BilinearCurve(o) => (o, cmd_bilinear_curve),
        Command::Trace(o) => (o, cmd_trace),
        Command::CalibrateDelta(o) => (o, cmd_calibrate_delta),
    };
    let cfg = overrides.resolve()?;
    let report = cmd(&cfg)?;
    if let Some(body) = report.emit(&cfg)? {
        print!("{body}");
    }
    if report.outcome != lanczos_trace_cli::Outcome::Certified {
        eprintln!("warning: some samples did not reach the tolerance; interval is not certified");
    }
    Ok(report.outcome.exit_code())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
