//! Deterministic report rendering. CSV carries the run metadata in leading
//! `#` comment lines and prints floats with 17 significant digits so values
//! round-trip exactly; JSON is a plain array of row objects.

use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use serde_json::{Map, Value};

use crate::config::OutputFormat;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Text(String),
    Float(f64),
    Int(i64),
    Bool(bool),
    Empty,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Text(s) => s.clone(),
            Cell::Float(x) => format!("{x:.16e}"),
            Cell::Int(i) => i.to_string(),
            Cell::Bool(b) => b.to_string(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Text(s) => Value::from(s.as_str()),
            Cell::Float(x) => Value::from(*x),
            Cell::Int(i) => Value::from(*i),
            Cell::Bool(b) => Value::from(*b),
            Cell::Empty => Value::Null,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ReportMeta {
    pub tool: String,
    pub command: String,
    pub config_hash: String,
    pub seed: u64,
    pub rng: String,
    /// Notes about known closed-form discrepancies and corrected readings
    /// that apply to this run; never silently dropped.
    pub flags: Vec<String>,
}

impl ReportMeta {
    pub fn new(command: &str, config_hash: String, seed: u64) -> Self {
        ReportMeta {
            tool: format!("hyers-lab {}", env!("CARGO_PKG_VERSION")),
            command: command.to_string(),
            config_hash,
            seed,
            rng: hyers_lab_core::RNG_NAME.to_string(),
            flags: Vec::new(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Report {
    pub meta: ReportMeta,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    /// Trailing summary lines (worst slack, constant comparisons, ...).
    pub summary: Vec<String>,
}

impl Report {
    pub fn new(meta: ReportMeta, columns: Vec<impl Into<String>>) -> Self {
        Report {
            meta,
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
            summary: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// Rows whose `pass` column is false.
    pub fn failure_count(&self) -> usize {
        let Some(pass_at) = self.columns.iter().position(|c| c == "pass") else {
            return 0;
        };
        self.rows.iter().filter(|r| matches!(r[pass_at], Cell::Bool(false))).count()
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Csv => self.render_csv(),
            OutputFormat::Json => self.render_json(),
        }
    }

    fn render_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("# tool: {}\n", self.meta.tool));
        out.push_str(&format!("# command: {}\n", self.meta.command));
        out.push_str(&format!("# config: {}\n", self.meta.config_hash));
        out.push_str(&format!("# seed: {}\n", self.meta.seed));
        out.push_str(&format!("# rng: {}\n", self.meta.rng));
        for flag in &self.meta.flags {
            out.push_str(&format!("# flag: {flag}\n"));
        }
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::csv).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        for line in &self.summary {
            out.push_str(&format!("# summary: {line}\n"));
        }
        out
    }

    fn render_json(&self) -> String {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let mut object = Map::new();
                for (name, cell) in self.columns.iter().zip(row) {
                    object.insert((*name).to_string(), cell.json());
                }
                Value::Object(object)
            })
            .collect();
        let mut text =
            serde_json::to_string_pretty(&Value::Array(rows)).expect("rows serialize");
        text.push('\n');
        text
    }

    /// Write to the path (or stdout when absent) in the given format.
    pub fn write_to(&self, out: Option<&Path>, format: OutputFormat) -> Result<()> {
        let text = self.render(format);
        match out {
            Some(path) => std::fs::write(path, text)
                .with_context(|| format!("cannot write report to {}", path.display()))?,
            None => std::io::stdout().write_all(text.as_bytes()).context("cannot write stdout")?,
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_report() -> Report {
        let mut report =
            Report::new(ReportMeta::new("defect", "abcd".into(), 7), vec!["x", "pass"]);
        report.push(vec![Cell::Float(0.1), Cell::Bool(true)]);
        report.push(vec![Cell::Float(-2.0), Cell::Bool(false)]);
        report.summary.push("worst = -2".into());
        report
    }

    #[test]
    fn csv_shape() {
        let text = sample_report().render(OutputFormat::Csv);
        assert!(text.starts_with("# tool: hyers-lab"));
        assert!(text.contains("# seed: 7\n"));
        assert!(text.contains("x,pass\n"));
        assert!(text.contains("1.0000000000000001e-1,true\n"));
        assert!(text.ends_with("# summary: worst = -2\n"));
    }

    #[test]
    fn float_cells_round_trip() {
        for &x in &[0.1, -2.0, 1.0 / 3.0, 6.02e23, 1e-300] {
            let printed = Cell::Float(x).csv();
            let back: f64 = printed.parse().unwrap();
            assert_eq!(back.to_bits(), x.to_bits(), "{printed}");
        }
    }

    #[test]
    fn failure_counting() {
        assert_eq!(sample_report().failure_count(), 1);
    }

    #[test]
    fn json_is_an_array_of_rows() {
        let text = sample_report().render(OutputFormat::Json);
        let parsed: Vec<serde_json::Value> = serde_json::from_str(&text).unwrap();
        assert_eq!(parsed.len(), 2);
        assert_eq!(parsed[0]["pass"], serde_json::Value::Bool(true));
        assert_eq!(parsed[1]["x"], serde_json::json!(-2.0));
    }
}
