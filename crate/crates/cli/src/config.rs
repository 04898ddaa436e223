//! Run configuration: JSON ingestion and validation.

use std::collections::BTreeMap;
use std::path::PathBuf;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use tau2_core::hamiltonians::{clock_limit, ClockSpecialParams};
use tau2_core::ModelParams;
use thiserror::Error;

use crate::suite::CheckId;

/// Largest Hilbert-space dimension `N^L` accepted.
pub const MAX_DIM: usize = 4096;

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("invalid JSON at {path}: {message}")]
    Json { path: String, message: String },
    #[error("{path}: {message}")]
    Field { path: String, message: String },
    #[error("N^L = {n}^{len} exceeds the {max} dimension limit")]
    Size { n: usize, len: usize, max: usize },
}

impl ConfigError {
    pub fn path(&self) -> Option<&str> {
        match self {
            ConfigError::Json { path, .. } | ConfigError::Field { path, .. } => Some(path),
            ConfigError::Size { .. } => None,
        }
    }

    fn field(path: impl Into<String>, message: impl Into<String>) -> Self {
        ConfigError::Field {
            path: path.into(),
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Explicit,
    Random,
    Clock,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCouplings {
    a: Option<Vec<[f64; 2]>>,
    b: Option<Vec<[f64; 2]>>,
    c: Option<Vec<[f64; 2]>>,
    d: Option<Vec<[f64; 2]>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawClock {
    alpha: Option<Vec<[f64; 2]>>,
    gamma: Option<Vec<[f64; 2]>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    #[serde(rename = "N")]
    n: usize,
    #[serde(rename = "L")]
    len: usize,
    mode: Mode,
    #[serde(default)]
    seed: u64,
    couplings: Option<RawCouplings>,
    clock: Option<RawClock>,
    #[serde(default)]
    tolerances: BTreeMap<String, f64>,
    checks: Option<Vec<String>>,
    output: Option<PathBuf>,
    #[serde(default = "default_true")]
    timing: bool,
}

fn default_true() -> bool {
    true
}

/// A validated run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub n: usize,
    pub len: usize,
    pub mode: Mode,
    pub seed: u64,
    pub params: ModelParams,
    /// Present in clock mode.
    pub clock: Option<ClockSpecialParams>,
    pub tolerances: BTreeMap<CheckId, f64>,
    /// `None` runs every check.
    pub checks: Option<Vec<CheckId>>,
    pub output: Option<PathBuf>,
    /// When false, every wall-time field is written as zero.
    pub timing: bool,
}

impl RunConfig {
    pub fn dim(&self) -> usize {
        self.params.dim()
    }

    /// Applies a `NAME=VALUE` override from the command line.
    pub fn set_tolerance(&mut self, spec: &str) -> Result<(), ConfigError> {
        let (name, value) = spec
            .split_once('=')
            .ok_or_else(|| ConfigError::field("--tolerance", format!("expected NAME=VALUE, got {spec:?}")))?;
        let id = parse_check(name.trim(), &format!("--tolerance {name}"))?;
        let value: f64 = value
            .trim()
            .parse()
            .map_err(|_| ConfigError::field(format!("--tolerance {name}"), format!("not a number: {value:?}")))?;
        check_tolerance(value, &format!("--tolerance {name}"))?;
        self.tolerances.insert(id, value);
        Ok(())
    }

    /// Replaces the check selection with a comma-separated list.
    pub fn set_checks(&mut self, list: &str) -> Result<(), ConfigError> {
        let ids = list
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| parse_check(s, &format!("--checks {s}")))
            .collect::<Result<Vec<_>, _>>()?;
        self.checks = Some(ids);
        Ok(())
    }
}

fn parse_check(name: &str, path: &str) -> Result<CheckId, ConfigError> {
    CheckId::from_name(name).ok_or_else(|| ConfigError::field(path, format!("unknown check {name:?}")))
}

fn check_tolerance(value: f64, path: &str) -> Result<(), ConfigError> {
    if value.is_finite() && value >= 0.0 {
        Ok(())
    } else {
        Err(ConfigError::field(path, "tolerance must be finite and non-negative"))
    }
}

fn complex_array(raw: &Option<Vec<[f64; 2]>>, path: &str, expected: usize) -> Result<Vec<Complex64>, ConfigError> {
    let values = raw.as_ref().ok_or_else(|| ConfigError::field(path, "missing"))?;
    if values.len() != expected {
        return Err(ConfigError::field(
            path,
            format!("expected {expected} [re, im] pairs, got {}", values.len()),
        ));
    }
    for (i, [re, im]) in values.iter().enumerate() {
        if !re.is_finite() || !im.is_finite() {
            return Err(ConfigError::field(format!("{path}[{i}]"), "not finite"));
        }
    }
    Ok(values.iter().map(|&[re, im]| Complex64::new(re, im)).collect())
}

pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let raw: RawConfig = serde_path_to_error::deserialize(de).map_err(|e| ConfigError::Json {
        path: e.path().to_string(),
        message: e.inner().to_string(),
    })?;

    let (n, len) = (raw.n, raw.len);
    if n < 2 {
        return Err(ConfigError::field("N", "must be at least 2"));
    }
    if len < 1 {
        return Err(ConfigError::field("L", "must be at least 1"));
    }
    let too_big = (0..len).try_fold(1usize, |acc, _| acc.checked_mul(n).filter(|&d| d <= MAX_DIM));
    if too_big.is_none() {
        return Err(ConfigError::Size { n, len, max: MAX_DIM });
    }

    let mut clock = None;
    let params = match raw.mode {
        Mode::Random => ModelParams::random(n, len, raw.seed),
        Mode::Explicit => {
            let cp = raw
                .couplings
                .as_ref()
                .ok_or_else(|| ConfigError::field("couplings", "required in explicit mode"))?;
            let a = complex_array(&cp.a, "couplings.a", 2 * len)?;
            let b = complex_array(&cp.b, "couplings.b", 2 * len)?;
            let c = complex_array(&cp.c, "couplings.c", 2 * len)?;
            let d = complex_array(&cp.d, "couplings.d", 2 * len)?;
            if let Some(i) = b.iter().position(|z| z.norm() == 0.0) {
                return Err(ConfigError::field(format!("couplings.b[{i}]"), "b couplings must be nonzero"));
            }
            ModelParams::new(n, len, a, b, c, d)
        }
        Mode::Clock => {
            let ck = raw
                .clock
                .as_ref()
                .ok_or_else(|| ConfigError::field("clock", "required in clock mode"))?;
            let alpha = complex_array(&ck.alpha, "clock.alpha", len)?;
            let gamma = complex_array(&ck.gamma, "clock.gamma", len - 1)?;
            let special =
                ClockSpecialParams::new(alpha, gamma).map_err(|e| ConfigError::field("clock", e.to_string()))?;
            let params = clock_limit(n, &special);
            clock = Some(special);
            params
        }
    }
    .map_err(|e| ConfigError::field("model", e.to_string()))?;

    let mut tolerances = BTreeMap::new();
    for (name, &value) in &raw.tolerances {
        let path = format!("tolerances.{name}");
        let id = parse_check(name, &path)?;
        check_tolerance(value, &path)?;
        tolerances.insert(id, value);
    }
    let checks = raw
        .checks
        .as_ref()
        .map(|list| {
            list.iter()
                .enumerate()
                .map(|(i, name)| parse_check(name, &format!("checks[{i}]")))
                .collect::<Result<Vec<_>, _>>()
        })
        .transpose()?;

    Ok(RunConfig {
        n,
        len,
        mode: raw.mode,
        seed: raw.seed,
        params,
        clock,
        tolerances,
        checks,
        output: raw.output,
        timing: raw.timing,
    })
}
