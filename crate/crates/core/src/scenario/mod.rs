//! JSON scenarios: declare factors, a representation and optionally a
//! dynamical system, then run a list of verification tasks into a report.

mod input;
mod report;
mod run;

pub use input::{
    Caps, Coeffs, Entry, FactorInput, MatrixSpec, NicaQuad, RepresentationInput, Scenario, SigmaInput, SupportInput,
    SystemInput, TaskInput, TermInput, VerifyCheck,
};
pub use report::{Check, Comparison, Environment, ErrorRecord, Report, Summary, TaskRecord, Verdict};
pub use run::{run_scenario, run_scenario_text, RunOptions, SchemaError};

/// JSON Schema of scenario files.
pub const SCENARIO_SCHEMA: &str = include_str!("../../schema/scenario.schema.json");

/// JSON Schema of reports.
pub const REPORT_SCHEMA: &str = include_str!("../../schema/report.schema.json");
