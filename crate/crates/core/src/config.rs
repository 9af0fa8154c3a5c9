//! Decoder configuration shared by the binary and quaternary decoders.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Schedule {
    /// All checks update, then all variables (flooding).
    Parallel,
    /// Sweep variables in index order, each using the freshest messages.
    Serial,
}

impl fmt::Display for Schedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Schedule::Parallel => "parallel",
            Schedule::Serial => "serial",
        })
    }
}

impl FromStr for Schedule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "parallel" => Ok(Schedule::Parallel),
            "serial" => Ok(Schedule::Serial),
            other => Err(Error::InvalidConfig(format!("unknown schedule {other:?}"))),
        }
    }
}

/// Message strength suppression. At most one is active per decoder.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub enum Modifier {
    #[default]
    None,
    /// Check-to-variable messages `r` are raised to `1/α_c`.
    CheckNormalization(f64),
    /// Regrouped variable-to-check beliefs are raised to `1/α_v`.
    VariableNormalization(f64),
    /// Linear-domain offset of check-to-variable messages by `e^β`.
    Offset(f64),
}

impl Modifier {
    /// Build from the three optional parameters, rejecting combinations.
    pub fn from_options(alpha_c: Option<f64>, alpha_v: Option<f64>, beta: Option<f64>) -> Result<Self> {
        let modifier = match (alpha_c, alpha_v, beta) {
            (None, None, None) => Modifier::None,
            (Some(a), None, None) => Modifier::CheckNormalization(a),
            (None, Some(a), None) => Modifier::VariableNormalization(a),
            (None, None, Some(b)) => Modifier::Offset(b),
            _ => {
                return Err(Error::InvalidConfig(
                    "at most one of alpha_c, alpha_v, beta may be set".into(),
                ))
            }
        };
        modifier.validate()?;
        Ok(modifier)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Modifier::None => Ok(()),
            Modifier::CheckNormalization(a) | Modifier::VariableNormalization(a) => {
                if a.is_finite() && a > 0.0 {
                    Ok(())
                } else {
                    Err(Error::InvalidConfig(format!("normalization factor {a} must be positive")))
                }
            }
            Modifier::Offset(b) => {
                if b.is_finite() && b >= 0.0 {
                    Ok(())
                } else {
                    Err(Error::InvalidConfig(format!("offset {b} must be nonnegative")))
                }
            }
        }
    }

    pub fn alpha_c(&self) -> Option<f64> {
        match *self {
            Modifier::CheckNormalization(a) => Some(a),
            _ => None,
        }
    }

    pub fn alpha_v(&self) -> Option<f64> {
        match *self {
            Modifier::VariableNormalization(a) => Some(a),
            _ => None,
        }
    }

    pub fn beta(&self) -> Option<f64> {
        match *self {
            Modifier::Offset(b) => Some(b),
            _ => None,
        }
    }
}

/// Which variables get per-iteration marginals recorded.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum TraceSelection {
    #[default]
    Off,
    All,
    Only(Vec<usize>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecoderConfig {
    pub schedule: Schedule,
    pub max_iter: usize,
    pub modifier: Modifier,
    /// `r` values are clamped to `[clamp_eps, 1 − clamp_eps]` and
    /// renormalized. Zero disables clamping.
    pub clamp_eps: f64,
    /// Halt as soon as the hard decision matches the syndrome. When false the
    /// decoder always runs `max_iter` iterations.
    pub early_stop: bool,
    pub trace: TraceSelection,
}

pub const DEFAULT_MAX_ITER: usize = 90;
pub const DEFAULT_CLAMP_EPS: f64 = 1e-12;

impl DecoderConfig {
    pub fn new(schedule: Schedule) -> Self {
        DecoderConfig {
            schedule,
            max_iter: DEFAULT_MAX_ITER,
            modifier: Modifier::None,
            clamp_eps: DEFAULT_CLAMP_EPS,
            early_stop: true,
            trace: TraceSelection::Off,
        }
    }

    pub fn parallel() -> Self {
        Self::new(Schedule::Parallel)
    }

    pub fn serial() -> Self {
        Self::new(Schedule::Serial)
    }

    pub fn with_max_iter(mut self, max_iter: usize) -> Self {
        self.max_iter = max_iter;
        self
    }

    pub fn with_modifier(mut self, modifier: Modifier) -> Self {
        self.modifier = modifier;
        self
    }

    pub fn with_trace(mut self, trace: TraceSelection) -> Self {
        self.trace = trace;
        self
    }

    pub fn with_early_stop(mut self, early_stop: bool) -> Self {
        self.early_stop = early_stop;
        self
    }

    pub fn with_clamp_eps(mut self, clamp_eps: f64) -> Self {
        self.clamp_eps = clamp_eps;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_iter == 0 {
            return Err(Error::InvalidConfig("max_iter must be at least 1".into()));
        }
        if !(0.0..0.5).contains(&self.clamp_eps) {
            return Err(Error::InvalidConfig(format!(
                "clamp_eps {} must be in [0, 0.5)",
                self.clamp_eps
            )));
        }
        self.modifier.validate()
    }

    /// Short human-readable label, e.g. `serial`, `serial alpha_c=1.5`.
    pub fn label(&self) -> String {
        match self.modifier {
            Modifier::None => self.schedule.to_string(),
            Modifier::CheckNormalization(a) => format!("{} alpha_c={a}", self.schedule),
            Modifier::VariableNormalization(a) => format!("{} alpha_v={a}", self.schedule),
            Modifier::Offset(b) => format!("{} beta={b}", self.schedule),
        }
    }
}
