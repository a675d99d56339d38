use std::path::Path;
use std::str::FromStr;

use lanczos_trace::operators::{sample_sites, LinearOperator, MaternOperator, MaternParams};
use lanczos_trace::{FunctionKind, Laplacian2D, ReorthMode};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Testbed {
    Laplacian,
    Matern,
}

impl FromStr for Testbed {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "laplacian" => Ok(Self::Laplacian),
            "matern" => Ok(Self::Matern),
            _ => Err(CliError::Usage(format!("unknown testbed `{s}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Json,
    Text,
}

impl FromStr for OutputFormat {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "json" => Ok(Self::Json),
            "text" => Ok(Self::Text),
            _ => Err(CliError::Usage(format!("unknown output format `{s}`"))),
        }
    }
}

/// Flat experiment description; every default mirrors the reference setup.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub testbed: Testbed,
    pub n1: usize,
    pub n2: usize,
    /// Fraction of grid points kept as Matérn sites.
    pub sample_fraction: f64,
    /// Matérn lengthscales; absent means `ℓ1 = 0.4·n2`, `ℓ2 = 0.4·n1`.
    pub l1: Option<f64>,
    pub l2: Option<f64>,
    pub nu: f64,
    pub tau: f64,
    pub site_seed: u64,
    /// `exp`, `sqrt`, `log`, `tanh` or `const:<value>`.
    pub function: String,
    pub samples: usize,
    pub alpha: f64,
    /// Calibration factor used when `delta` is absent.
    pub beta: f64,
    pub pilot_samples: usize,
    pub delta: Option<f64>,
    pub t: f64,
    /// `auto`, `full`, `partial` or `none`.
    pub reorth: String,
    pub m_max: usize,
    pub k: Option<usize>,
    pub k_min: usize,
    pub k_max: usize,
    /// Explicit approximation interval; absent means the testbed's spectrum interval.
    pub interval_lo: Option<f64>,
    pub interval_hi: Option<f64>,
    pub seed: u64,
    pub output: Option<String>,
    pub format: OutputFormat,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            testbed: Testbed::Laplacian,
            n1: 90,
            n2: 120,
            sample_fraction: 0.1,
            l1: None,
            l2: None,
            nu: 1.5,
            tau: 1e-5,
            site_seed: 0,
            function: "log".into(),
            samples: 100,
            alpha: 3.0,
            beta: 1.0,
            pilot_samples: 20,
            delta: None,
            t: 0.1,
            reorth: "auto".into(),
            m_max: lanczos_trace::lanczos::DEFAULT_M_MAX,
            k: None,
            k_min: 1,
            k_max: 20,
            interval_lo: None,
            interval_hi: None,
            seed: 0,
            output: None,
            format: OutputFormat::Json,
        }
    }
}

/// A constructed testbed operator.
pub enum Operator {
    Laplacian(Laplacian2D),
    Matern(MaternOperator),
}

impl Operator {
    pub fn as_dyn(&self) -> &dyn LinearOperator {
        match self {
            Self::Laplacian(op) => op,
            Self::Matern(op) => op,
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn to_toml(&self) -> Result<String, CliError> {
        toml::to_string(self).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    pub fn function_kind(&self) -> Result<FunctionKind, CliError> {
        Ok(self.function.parse::<FunctionKind>()?)
    }

    /// `None` for `auto`.
    pub fn reorth_mode(&self) -> Result<Option<ReorthMode>, CliError> {
        match self.reorth.as_str() {
            "auto" => Ok(None),
            s => Ok(Some(s.parse()?)),
        }
    }

    pub fn explicit_interval(&self) -> Result<Option<[f64; 2]>, CliError> {
        match (self.interval_lo, self.interval_hi) {
            (Some(a), Some(b)) => Ok(Some([a, b])),
            (None, None) => Ok(None),
            _ => Err(CliError::Usage("interval_lo and interval_hi must be given together".into())),
        }
    }

    pub fn matern_params(&self) -> MaternParams {
        let std = MaternParams::standard(self.n1, self.n2);
        MaternParams {
            l1: self.l1.unwrap_or(std.l1),
            l2: self.l2.unwrap_or(std.l2),
            nu: self.nu,
            tau: self.tau,
            ..std
        }
    }

    pub fn build_operator(&self) -> Result<Operator, CliError> {
        Ok(match self.testbed {
            Testbed::Laplacian => Operator::Laplacian(Laplacian2D::new(self.n1, self.n2)?),
            Testbed::Matern => {
                let sites = sample_sites(self.n1, self.n2, self.sample_fraction, self.site_seed)?;
                Operator::Matern(MaternOperator::new(self.matern_params(), sites)?)
            }
        })
    }
}
