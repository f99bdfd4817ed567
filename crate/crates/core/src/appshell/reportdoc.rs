//! JSON report format and the exit-code policy.

use serde::{Deserialize, Serialize};

use crate::d4orbit::Orbit;
use crate::report::{Check, Report, Status};
use crate::scalars::Field;
use crate::splitparam::ParameterArray;

pub const REPORT_FORMAT: &str = "tdlab-report/1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParameterArrayDoc {
    pub theta: Vec<String>,
    pub theta_star: Vec<String>,
    pub zeta: Vec<String>,
}

impl ParameterArrayDoc {
    pub fn new<F: Field>(field: &F, pa: &ParameterArray<F>) -> Self {
        let [theta, theta_star, zeta] = pa.to_text(field);
        ParameterArrayDoc { theta, theta_star, zeta }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelativeDoc {
    pub relative: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shape: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parameter_array: Option<ParameterArrayDoc>,
}

pub fn orbit_doc<F: Field>(field: &F, orbit: &Orbit<F>) -> Vec<RelativeDoc> {
    orbit
        .members
        .iter()
        .map(|m| RelativeDoc {
            relative: m.element.name(),
            shape: m.shape.as_ref().map(|s| s.rho.clone()),
            parameter_array: m.array.as_ref().map(|pa| ParameterArrayDoc::new(field, pa)),
        })
        .collect()
}

/// Per-trial summary in a fuzz report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialDoc {
    pub index: usize,
    pub seed: u64,
    pub d: usize,
    pub strategy: String,
    pub attempts: usize,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parameter_array: Option<ParameterArrayDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub failed: Vec<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub format: String,
    pub checks: Vec<Check>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parameter_array: Option<ParameterArrayDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orbit: Option<Vec<RelativeDoc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gram: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub config: Option<serde_json::Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trials: Option<Vec<TrialDoc>>,
}

impl ReportDocument {
    pub fn new(report: Report) -> Self {
        ReportDocument { format: REPORT_FORMAT.into(), checks: report.checks, ..Default::default() }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn exit_code(&self) -> i32 {
        exit_code(&self.checks)
    }

    /// One line per check, for terminal output.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            out.push_str(&format!("{:<13} {}", c.status.to_string().to_uppercase(), c.id));
            if let Some(w) = &c.witness {
                out.push_str(&format!("  ({w})"));
            }
            out.push('\n');
        }
        out
    }
}

/// 1 on any failure, 3 when the remaining non-pass statuses are skips or
/// inconclusive results, 0 otherwise.
pub fn exit_code(checks: &[Check]) -> i32 {
    if checks.iter().any(|c| c.status == Status::Fail) {
        1
    } else if checks.iter().any(|c| c.status != Status::Pass) {
        3
    } else {
        0
    }
}
