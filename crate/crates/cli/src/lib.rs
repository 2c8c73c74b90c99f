//! Scenario runner: config parsing, command drivers, and deterministic
//! machine-readable reports over the stability kernel.

// `!(x > 0.0)` is a NaN guard: `x <= 0.0` is false for NaN and would admit it
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod report;

pub use commands::{cmd_approx, cmd_constants, cmd_defect, cmd_selftest, cmd_threshold};
pub use config::{AxisSpec, FunctionKind, OutputFormat, ScenarioConfig};
pub use report::{Cell, Report, ReportMeta};
