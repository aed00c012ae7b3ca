//! The JSON report and CSV traces.
//!
//! Schema `sumkit-report/1`; see `docs/report-schema.md`. Maps are
//! `BTreeMap`s and traces keep schedule order, so identical inputs print
//! identical bytes.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};
use sumkit_core::evidence::TracePoint;
use sumkit_core::{ConditionVerdict, Scalar, Status};

use crate::error::CliError;
use crate::literal::decimal;

pub const SCHEMA: &str = "sumkit-report/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Outcome {
    Success,
    HoldsAtTruncation,
    DivergenceEvidence,
    Inconclusive,
    /// Two sides of an identity disagree.
    Mismatch,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Success | Outcome::HoldsAtTruncation => 0,
            Outcome::DivergenceEvidence => 2,
            Outcome::Inconclusive => 3,
            Outcome::Mismatch => 4,
        }
    }
}

impl From<Status> for Outcome {
    fn from(s: Status) -> Self {
        match s {
            Status::HoldsAtTruncation => Outcome::HoldsAtTruncation,
            Status::DivergenceEvidence => Outcome::DivergenceEvidence,
            Status::Inconclusive => Outcome::Inconclusive,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CommandEcho {
    pub name: String,
    pub args: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReportDocument {
    pub schema: &'static str,
    pub command: CommandEcho,
    pub inputs: BTreeMap<String, Value>,
    pub outputs: BTreeMap<String, Value>,
    pub status: Outcome,
    pub exit_code: i32,
    /// Which results the computation relied on, by name.
    pub provenance: Vec<String>,
    pub warnings: Vec<String>,
}

impl ReportDocument {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report values are always serializable");
        s.push('\n');
        s
    }
}

/// `{"exact": "p/q", "decimal": "..."}` in exact mode, `{"decimal": "..."}` in float mode.
pub fn scalar<T: Scalar>(v: &T) -> Value {
    if T::EXACT {
        let exact = sumkit_core::scalar::parse_exact(&v.render()).expect("exact render parses back");
        json!({ "exact": v.render(), "decimal": decimal(&exact) })
    } else {
        json!({ "decimal": v.render() })
    }
}

pub fn scalars<T: Scalar>(vs: &[T]) -> Value {
    Value::Array(vs.iter().map(scalar).collect())
}

/// Trace files queued for `--csv-dir`, keyed by file stem.
#[derive(Debug, Default)]
pub struct CsvSink {
    files: BTreeMap<String, String>,
}

fn stem(name: &str) -> String {
    name.chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '.' { c } else { '_' })
        .collect()
}

fn trace_csv(trace: &[TracePoint]) -> String {
    let mut out = String::from("N,statistic\n");
    for p in trace {
        match &p.exact {
            Some(e) => writeln!(out, "{},\"{}\"", p.size, e),
            None => writeln!(out, "{},{:?}", p.size, p.value),
        }
        .expect("writing to a String");
    }
    out
}

impl CsvSink {
    pub fn trace(&mut self, name: &str, trace: &[TracePoint]) {
        self.files.insert(stem(name), trace_csv(trace));
    }

    /// The verdict's trace, its lower-bound trace and every component, recursively.
    pub fn verdict(&mut self, name: &str, v: &ConditionVerdict) {
        self.trace(name, &v.trace);
        if let Some(lower) = &v.lower_trace {
            self.trace(&format!("{name}.lower"), lower);
        }
        for part in &v.components {
            self.verdict(&format!("{name}.{}", part.name), &part.verdict);
        }
    }

    pub fn matrix<T: Scalar>(&mut self, name: &str, block: &[Vec<T>]) {
        let mut out = String::new();
        for row in block {
            let cells: Vec<String> = row
                .iter()
                .map(|v| if T::EXACT { format!("\"{}\"", v.render()) } else { v.render() })
                .collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        self.files.insert(stem(name), out);
    }

    pub fn names(&self) -> impl Iterator<Item = &String> {
        self.files.keys()
    }

    pub fn write(&self, dir: &Path) -> Result<(), CliError> {
        let io = |source, p: &Path| CliError::Io { path: p.display().to_string(), source };
        std::fs::create_dir_all(dir).map_err(|e| io(e, dir))?;
        for (name, body) in &self.files {
            let path = dir.join(format!("{name}.csv"));
            std::fs::write(&path, body).map_err(|e| io(e, &path))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use sumkit_core::Exact;

    use super::*;

    #[test]
    fn scalar_renderings() {
        assert_eq!(scalar(&Exact::from_frac(1, 2)), json!({"exact": "1/2", "decimal": "0.5"}));
        assert_eq!(scalar(&0.5f64), json!({"decimal": "0.5"}));
    }

    #[test]
    fn exit_codes() {
        assert_eq!(Outcome::from(Status::HoldsAtTruncation).exit_code(), 0);
        assert_eq!(Outcome::from(Status::DivergenceEvidence).exit_code(), 2);
        assert_eq!(Outcome::from(Status::Inconclusive).exit_code(), 3);
        assert_eq!(Outcome::Mismatch.exit_code(), 4);
    }

    #[test]
    fn trace_files_quote_exact_values() {
        let trace = vec![TracePoint::of(16, &Exact::from_frac(3, 4)), TracePoint::of(32, &Exact::from_int(1))];
        assert_eq!(trace_csv(&trace), "N,statistic\n16,\"3/4\"\n32,\"1\"\n");
        let trace = vec![TracePoint::of(16, &0.75f64)];
        assert_eq!(trace_csv(&trace), "N,statistic\n16,0.75\n");
        let mut sink = CsvSink::default();
        sink.trace("C11 row 3", &trace);
        assert_eq!(sink.names().collect::<Vec<_>>(), vec!["C11_row_3"]);
    }
}
