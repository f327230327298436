use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::Error;
use crate::tolerance::Tolerances;

use super::input::Caps;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Comparison {
    /// Pass when `value ≤ tolerance`.
    Le,
    /// Pass when `value ≥ tolerance`.
    Ge,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub comparison: Comparison,
    pub pass: bool,
}

impl Check {
    pub fn le(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Check {
            name: name.into(),
            value,
            tolerance,
            comparison: Comparison::Le,
            pass: value <= tolerance,
        }
    }

    pub fn ge(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Check {
            name: name.into(),
            value,
            tolerance,
            comparison: Comparison::Ge,
            pass: value >= tolerance,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorRecord {
    pub kind: String,
    pub message: String,
}

impl From<&Error> for ErrorRecord {
    fn from(e: &Error) -> Self {
        ErrorRecord {
            kind: e.kind().to_string(),
            message: e.to_string(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Error,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaskRecord {
    pub index: usize,
    pub name: String,
    #[serde(rename = "type")]
    pub task_type: String,
    pub parameters: Value,
    pub seed: u64,
    pub checks: Vec<Check>,
    pub results: Map<String, Value>,
    pub verdict: Verdict,
    pub error: Option<ErrorRecord>,
    pub wall_time_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Environment {
    pub tool: String,
    pub version: String,
    pub seed: u64,
    pub tolerances: Tolerances,
    pub depth: u32,
    pub precision_bits: u32,
    pub caps: Caps,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub errors: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub scenario: Option<String>,
    pub environment: Environment,
    /// Failures while building the representation or the system.
    pub setup_errors: Vec<ErrorRecord>,
    pub tasks: Vec<TaskRecord>,
    pub summary: Summary,
    pub verdict: Verdict,
}

impl Report {
    pub(crate) fn finish(
        scenario: Option<String>,
        environment: Environment,
        setup_errors: Vec<ErrorRecord>,
        tasks: Vec<TaskRecord>,
    ) -> Self {
        let mut summary = Summary {
            total: tasks.len(),
            ..Summary::default()
        };
        for t in &tasks {
            match t.verdict {
                Verdict::Pass => summary.passed += 1,
                Verdict::Fail => summary.failed += 1,
                Verdict::Error => summary.errors += 1,
            }
        }
        let verdict = if !setup_errors.is_empty() || summary.errors > 0 {
            Verdict::Error
        } else if summary.failed > 0 {
            Verdict::Fail
        } else {
            Verdict::Pass
        };
        Report {
            scenario,
            environment,
            setup_errors,
            tasks,
            summary,
            verdict,
        }
    }

    /// 0 when every verdict passes, 1 on a failed verdict, 3 on a
    /// computation error.
    pub fn exit_code(&self) -> i32 {
        match self.verdict {
            Verdict::Pass => 0,
            Verdict::Fail => 1,
            Verdict::Error => 3,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}
