//! Report assembly and serialization.
//!
//! JSON reports carry the fixed top-level keys `experiment`, `inputs`,
//! `outputs`, `references`, `errors`, `diagnostics`, `runtime_ms`;
//! serialization is deterministic (object keys sorted, shortest
//! round-trip float formatting), so identical configs yield
//! byte-identical files once the runtime field is masked.

use serde_json::{json, Map, Value};

use std::io::Write;
use std::path::Path;

/// One line of a sweep table, the unit of CSV output.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub parameter: String,
    pub value: f64,
    pub reference: f64,
    pub abs_err: f64,
    pub rel_err: f64,
}

impl SweepRow {
    pub fn new(parameter: impl Into<String>, value: f64, reference: f64) -> Self {
        let abs_err = (value - reference).abs();
        let rel_err = if reference.abs() < 1e-300 {
            abs_err
        } else {
            abs_err / reference.abs()
        };
        Self {
            parameter: parameter.into(),
            value,
            reference,
            abs_err,
            rel_err,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Report {
    pub experiment: String,
    pub inputs: Value,
    pub outputs: Value,
    pub references: Value,
    pub errors: Value,
    pub diagnostics: Value,
    pub runtime_ms: f64,
    /// Rows for the CSV rendering; may be empty for scalar experiments.
    pub rows: Vec<SweepRow>,
    /// Whether every declared tolerance held; drives `--assert`.
    pub within_tolerance: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

impl Report {
    pub fn to_json(&self) -> Value {
        // serde_json's default map is ordered, so keys come out sorted.
        let mut map = Map::new();
        map.insert("experiment".into(), json!(self.experiment));
        map.insert("inputs".into(), self.inputs.clone());
        map.insert("outputs".into(), self.outputs.clone());
        map.insert("references".into(), self.references.clone());
        map.insert("errors".into(), self.errors.clone());
        map.insert("diagnostics".into(), self.diagnostics.clone());
        map.insert("runtime_ms".into(), json!(self.runtime_ms));
        Value::Object(map)
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut text = serde_json::to_string_pretty(&self.to_json())
                    .expect("report serialization cannot fail");
                text.push('\n');
                text
            }
            Format::Csv => {
                let mut text = String::from("parameter,value,reference,abs_err,rel_err\n");
                for row in &self.rows {
                    text.push_str(&format!(
                        "{},{},{},{},{}\n",
                        row.parameter, row.value, row.reference, row.abs_err, row.rel_err
                    ));
                }
                text
            }
        }
    }

    /// Writes the rendered report; `None` writes to stdout.
    pub fn emit(&self, format: Format, out: Option<&Path>) -> std::io::Result<()> {
        let text = self.render(format);
        match out {
            Some(path) => std::fs::write(path, text),
            None => std::io::stdout().write_all(text.as_bytes()),
        }
    }
}

/// Rows rendered into the `outputs` block of the JSON report.
pub fn rows_to_json(rows: &[SweepRow]) -> Value {
    Value::Array(
        rows.iter()
            .map(|r| {
                json!({
                    "parameter": r.parameter,
                    "value": r.value,
                    "reference": r.reference,
                    "abs_err": r.abs_err,
                    "rel_err": r.rel_err,
                })
            })
            .collect(),
    )
}
