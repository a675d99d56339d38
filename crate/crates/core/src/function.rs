use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The scalar functions whose matrix traces are supported.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FunctionKind {
    /// `exp(-x)`
    ExpNeg,
    Sqrt,
    Log,
    /// `tanh(sqrt(x))`
    TanhSqrt,
    /// `x -> c`; its rational surrogate has no poles.
    Constant(f64),
}

impl FunctionKind {
    pub const STANDARD_KINDS: [FunctionKind; 4] = [
        FunctionKind::ExpNeg,
        FunctionKind::Sqrt,
        FunctionKind::Log,
        FunctionKind::TanhSqrt,
    ];

    /// Evaluates `f(x)`, failing with a domain error where `f` is undefined or non-finite.
    pub fn eval(&self, x: f64) -> Result<f64> {
        let v = match *self {
            FunctionKind::ExpNeg => (-x).exp(),
            FunctionKind::Sqrt if x >= 0.0 => x.sqrt(),
            FunctionKind::Log if x > 0.0 => x.ln(),
            FunctionKind::TanhSqrt if x >= 0.0 => x.sqrt().tanh(),
            FunctionKind::Constant(c) => c,
            _ => return Err(Error::Domain { theta: x }),
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Domain { theta: x })
        }
    }

    pub fn name(&self) -> String {
        match self {
            FunctionKind::ExpNeg => "exp_neg".into(),
            FunctionKind::Sqrt => "sqrt".into(),
            FunctionKind::Log => "log".into(),
            FunctionKind::TanhSqrt => "tanh_sqrt".into(),
            FunctionKind::Constant(c) => format!("const:{c}"),
        }
    }
}

impl fmt::Display for FunctionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for FunctionKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exp" | "exp_neg" => Ok(FunctionKind::ExpNeg),
            "sqrt" => Ok(FunctionKind::Sqrt),
            "log" => Ok(FunctionKind::Log),
            "tanh_sqrt" | "tanh" => Ok(FunctionKind::TanhSqrt),
            _ => s
                .strip_prefix("const:")
                .and_then(|c| c.parse().ok())
                .map(FunctionKind::Constant)
                .ok_or_else(|| Error::Unsupported(format!("function `{s}`"))),
        }
    }
}
