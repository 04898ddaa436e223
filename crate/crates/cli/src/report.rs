//! Machine-readable verification report and its text rendering.

use std::fmt::Write as _;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use tau2_core::SpectralData;

use crate::config::Mode;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// The computation feeding the check raised an error.
    Error,
    /// Not run because a stage it depends on failed.
    Skipped,
    /// Informational value with no threshold.
    Reported,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Comparison {
    /// Pass when `residual <= threshold`.
    AtMost,
    /// Pass when `residual > threshold`.
    Above,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub status: Status,
    pub residual: Option<f64>,
    pub threshold: Option<f64>,
    pub comparison: Comparison,
    pub pass: bool,
    pub wall_time_s: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageRecord {
    pub name: String,
    pub ok: bool,
    pub wall_time_s: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelEcho {
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "L")]
    pub len: usize,
    pub mode: Mode,
    pub seed: u64,
    pub a0: Option<[f64; 2]>,
    pub s: Option<Vec<[f64; 2]>>,
    pub r: Option<Vec<[f64; 2]>>,
}

impl ModelEcho {
    pub fn with_spectrum(mut self, spec: &SpectralData) -> Self {
        self.a0 = Some(pair(spec.a0));
        self.s = Some(spec.s.iter().copied().map(pair).collect());
        self.r = Some(spec.r.iter().copied().map(pair).collect());
        self
    }
}

pub fn pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub model: ModelEcho,
    pub stages: Vec<StageRecord>,
    pub checks: Vec<CheckRecord>,
    pub overall_pass: bool,
}

impl VerificationReport {
    pub fn check(&self, name: &str) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// 0 when every asserted check passed, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.overall_pass {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report serializes");
        text.push('\n');
        text
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let m = &self.model;
        let _ = writeln!(out, "model: N={} L={} mode={:?} seed={}", m.n, m.len, m.mode, m.seed);
        if let Some([re, im]) = m.a0 {
            let _ = writeln!(out, "A0 = {re:+.6e} {im:+.6e}i");
        }
        if let Some(r) = &m.r {
            for (k, [re, im]) in r.iter().enumerate() {
                let _ = writeln!(out, "r_{} = {re:+.6e} {im:+.6e}i", k + 1);
            }
        }
        for s in self.stages.iter().filter(|s| !s.ok) {
            let _ = writeln!(out, "stage {} failed: {}", s.name, s.error.as_deref().unwrap_or(""));
        }
        let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
        for c in &self.checks {
            let status = match c.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Error => "ERROR",
                Status::Skipped => "SKIP",
                Status::Reported => "INFO",
            };
            let residual = c.residual.map_or("-".to_string(), |r| format!("{r:.3e}"));
            let threshold = match (c.threshold, c.comparison) {
                (Some(t), Comparison::AtMost) => format!("<= {t:.1e}"),
                (Some(t), Comparison::Above) => format!(">  {t:.1e}"),
                (None, _) => String::new(),
            };
            let _ = write!(out, "{status:5} {:width$}  {residual:>10} {threshold:>10}", c.name);
            if let Some(d) = &c.detail {
                let _ = write!(out, "  ({d})");
            }
            out.push('\n');
        }
        let _ = writeln!(out, "overall: {}", if self.overall_pass { "PASS" } else { "FAIL" });
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> VerificationReport {
        VerificationReport {
            model: ModelEcho {
                n: 2,
                len: 1,
                mode: Mode::Random,
                seed: 3,
                a0: Some([1.0, 0.5]),
                s: None,
                r: Some(vec![[0.5, 0.0]]),
            },
            stages: vec![],
            checks: vec![CheckRecord {
                name: "commuting_family".into(),
                status: Status::Pass,
                residual: Some(1e-16),
                threshold: Some(1e-10),
                comparison: Comparison::AtMost,
                pass: true,
                wall_time_s: 0.0,
                detail: None,
            }],
            overall_pass: true,
        }
    }

    #[test]
    fn json_round_trip() {
        let r = sample();
        let back: VerificationReport = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back, r);
        assert_eq!(r.exit_code(), 0);
    }

    #[test]
    fn text_lists_every_check() {
        let text = sample().render_text();
        assert!(text.contains("PASS  commuting_family"));
        assert!(text.contains("overall: PASS"));
        assert!(text.contains("r_1"));
    }
}
