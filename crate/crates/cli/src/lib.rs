//! Experiment runner: rational-approximation checks, bilinear error curves, certified
//! trace estimates and tolerance calibration, all driven by one flat config file.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;

use std::fmt::Write as _;
use std::path::Path;

use lanczos_trace::oracles::{self, LaplacianSpectrum, DENSE_CAP};
use lanczos_trace::rational::{self, uniform_error};
use lanczos_trace::trace::{self, Calibration, TraceConfig};
use lanczos_trace::{FunctionKind, LanczosConfig, RationalApproximant, TraceEstimate};
use serde::{Deserialize, Serialize};

pub use config::{ExperimentConfig, Operator, OutputFormat, Testbed};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("config: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] lanczos_trace::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// Result status that maps to the process exit code.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Certified,
    Uncertified,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Self::Certified => 0,
            Self::Uncertified => 2,
        }
    }
}

/// Output of a subcommand: the rendered document and its status.
pub struct Report {
    pub body: String,
    pub outcome: Outcome,
}

impl Report {
    /// Writes to `config.output` when set, else returns the body for stdout.
    pub fn emit(&self, config: &ExperimentConfig) -> Result<Option<&str>, CliError> {
        match &config.output {
            Some(path) => {
                std::fs::write(Path::new(path), &self.body)?;
                Ok(None)
            }
            None => Ok(Some(&self.body)),
        }
    }
}

fn spectrum_interval(config: &ExperimentConfig, op: &Operator) -> Result<[f64; 2], CliError> {
    if let Some(iv) = config.explicit_interval()? {
        return Ok(iv);
    }
    Ok(match op {
        Operator::Laplacian(_) => LaplacianSpectrum::new(config.n1, config.n2).interval(),
        Operator::Matern(m) => trace::estimate_spectrum_interval(m, Some(m.params().tau), 60, config.seed)?,
    })
}

/// Oracle value of `tr f(A)` when one is affordable.
pub fn truth(config: &ExperimentConfig, op: &Operator, f: FunctionKind) -> Result<Option<f64>, CliError> {
    let eval = |x: f64| f.eval(x);
    Ok(match op {
        Operator::Laplacian(_) => Some(oracles::exact_trace_laplacian(eval, config.n1, config.n2)?),
        Operator::Matern(m) if m.sites().len() <= DENSE_CAP => {
            let dense = oracles::matern_dense(m)?;
            let n = m.sites().len();
            Some(match f {
                FunctionKind::Log => oracles::dense_logdet(n, &dense)?,
                _ => oracles::DenseSpectral::new(n, &dense)?.trace(eval)?,
            })
        }
        Operator::Matern(_) => None,
    })
}

/// CSV of `(function, K, interval, uniform error)` over `K = k_min..=k_max`.
pub fn cmd_rational_check(config: &ExperimentConfig) -> Result<Report, CliError> {
    if config.k_min == 0 || config.k_min > config.k_max {
        return Err(CliError::Usage(format!("empty K schedule {}..={}", config.k_min, config.k_max)));
    }
    let f = config.function_kind()?;
    let interval = match config.explicit_interval()? {
        Some(iv) => iv,
        None => spectrum_interval(config, &config.build_operator()?)?,
    };
    let mut body = String::from("function,k,interval_lo,interval_hi,uniform_error\n");
    for k in config.k_min..=config.k_max {
        let r = rational::build(f, k, interval)?;
        let err = uniform_error(&r, |x| f.eval(x))?;
        writeln!(body, "{},{k},{:e},{:e},{err:e}", f.name(), interval[0], interval[1]).unwrap();
    }
    Ok(Report { body, outcome: Outcome::Certified })
}

fn curve_approximant(config: &ExperimentConfig, f: FunctionKind, interval: [f64; 2], n: usize) -> Result<RationalApproximant, CliError> {
    let iv = if f == FunctionKind::ExpNeg { [0.0, interval[1]] } else { interval };
    if config.k.is_some() || config.delta.is_some() {
        return Ok(trace::select_approximant(f, interval, config.delta.unwrap_or(0.0), n, config.k)?);
    }
    match rational::choose_k(f, iv, 1e-10) {
        Err(lanczos_trace::Error::UnreachableAccuracy { best_k, .. }) => Ok(rational::build(f, best_k, iv)?),
        other => Ok(other?),
    }
}

/// CSV per Lanczos step of the true quadrature error, `|d_m^K|` and the forward-window
/// cumulative estimate, for a normalized Rademacher start vector.
pub fn cmd_bilinear_curve(config: &ExperimentConfig) -> Result<Report, CliError> {
    if config.testbed != Testbed::Laplacian {
        return Err(CliError::Usage("bilinear-curve needs the laplacian testbed (oracle required)".into()));
    }
    let f = config.function_kind()?;
    let op = config.build_operator()?;
    let n = op.as_dyn().dim();
    let interval = spectrum_interval(config, &op)?;
    let r = curve_approximant(config, f, interval, n)?;
    let mut u = trace::rademacher_vector(n, config.seed, 0);
    let scale = 1.0 / (n as f64).sqrt();
    u.iter_mut().for_each(|x| *x *= scale);
    let exact = oracles::exact_bilinear_laplacian(|x| f.eval(x), config.n1, config.n2, &u)?;
    let lanczos = lanczos_config(config, n)?;
    let rows = trace::bilinear_curve(op.as_dyn(), f, &r, &u, config.m_max, config.t, lanczos)?;

    let mut body = String::from("step,value,true_error,abs_increment,window_end,abs_window_error\n");
    for row in rows {
        let inc = row.increment.map(|d| format!("{:e}", d.abs())).unwrap_or_default();
        let (end, win) = row
            .window
            .map(|(m2, d)| (m2.to_string(), format!("{:e}", d.abs())))
            .unwrap_or_default();
        writeln!(body, "{},{:e},{:e},{inc},{end},{win}", row.step, row.value, (exact - row.value).abs()).unwrap();
    }
    Ok(Report { body, outcome: Outcome::Certified })
}

fn lanczos_config(config: &ExperimentConfig, n: usize) -> Result<LanczosConfig, CliError> {
    Ok(match config.reorth_mode()? {
        Some(mode) => LanczosConfig::new(mode, config.m_max),
        None => LanczosConfig::auto(n, config.m_max),
    })
}

fn trace_config(config: &ExperimentConfig, op: &Operator, delta: f64) -> Result<TraceConfig, CliError> {
    Ok(TraceConfig {
        samples: config.samples,
        alpha: config.alpha,
        delta,
        t: config.t,
        seed: config.seed,
        reorth: config.reorth_mode()?,
        m_max: config.m_max,
        k: config.k,
        interval: Some(spectrum_interval(config, op)?),
        lower_hint: None,
    })
}

fn calibrate(config: &ExperimentConfig, op: &Operator, f: FunctionKind) -> Result<Calibration, CliError> {
    let cfg = trace_config(config, op, 0.0)?;
    Ok(trace::calibrate_delta(op.as_dyn(), f, config.pilot_samples, config.beta, &cfg)?)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceReport {
    pub config: ExperimentConfig,
    pub calibration: Option<Calibration>,
    pub truth: Option<f64>,
    pub truth_in_interval: Option<bool>,
    pub estimate: TraceEstimate,
}

/// Runs the trace estimator; `δ` comes from the config or from a pilot calibration.
pub fn run_trace(config: &ExperimentConfig) -> Result<TraceReport, CliError> {
    let f = config.function_kind()?;
    let op = config.build_operator()?;
    let calibration = match config.delta {
        Some(_) => None,
        None => Some(calibrate(config, &op, f)?),
    };
    let delta = config.delta.or(calibration.as_ref().map(|c| c.delta)).expect("delta resolved");
    let estimate = trace::estimate_trace(op.as_dyn(), f, &trace_config(config, &op, delta)?)?;
    let truth = truth(config, &op, f)?;
    Ok(TraceReport {
        config: config.clone(),
        calibration,
        truth_in_interval: truth.map(|v| estimate.contains(v)),
        truth,
        estimate,
    })
}

pub fn render_trace(report: &TraceReport, format: OutputFormat) -> Result<String, CliError> {
    if format == OutputFormat::Json {
        return Ok(serde_json::to_string_pretty(report)? + "\n");
    }
    let e = &report.estimate;
    let mut s = String::new();
    let rows: Vec<(&str, String)> = vec![
        ("operator", e.operator.clone()),
        ("function", e.function.name()),
        ("n", e.n.to_string()),
        ("K", e.k.to_string()),
        ("rational eps", format!("{:.3e}", e.rational_eps)),
        ("delta", format!("{:.4}", e.delta)),
        ("N", e.samples.to_string()),
        ("average m", format!("{:.2}", e.mean_retired)),
        ("average steps", format!("{:.2}", e.mean_steps)),
        ("truth", report.truth.map(|v| format!("{v:.6}")).unwrap_or_else(|| "n/a".into())),
        ("estimate", format!("{:.6}", e.mean)),
        ("half-width", format!("±{:.4} ({:.2}%)", e.half_width, 100.0 * e.p_alpha)),
        ("certified", e.certified.to_string()),
        ("time approximation [s]", format!("{:.3}", e.timings.approximation)),
        ("time error estimate [s]", format!("{:.3}", e.timings.error_estimate)),
    ];
    let width = rows.iter().map(|(k, _)| k.chars().count()).max().unwrap_or(0);
    for (k, v) in rows {
        writeln!(s, "{k:<width$}  {v}").unwrap();
    }
    Ok(s)
}

pub fn cmd_trace(config: &ExperimentConfig) -> Result<Report, CliError> {
    let report = run_trace(config)?;
    let outcome = if report.estimate.certified { Outcome::Certified } else { Outcome::Uncertified };
    Ok(Report { body: render_trace(&report, config.format)?, outcome })
}

pub fn cmd_calibrate_delta(config: &ExperimentConfig) -> Result<Report, CliError> {
    let f = config.function_kind()?;
    let op = config.build_operator()?;
    let cal = calibrate(config, &op, f)?;
    let body = match config.format {
        OutputFormat::Json => serde_json::to_string_pretty(&cal)? + "\n",
        OutputFormat::Text => format!(
            "delta {:.6}\npilot samples {}\npilot delta {:.6}\npilot mean {:.6}\npilot std {:.6}\n",
            cal.delta, cal.pilot_samples, cal.pilot_delta, cal.pilot_mean, cal.pilot_std
        ),
    };
    Ok(Report { body, outcome: Outcome::Certified })
}
