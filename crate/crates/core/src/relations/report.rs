//! Verification rows and reports.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RowKind {
    /// A relation that must hold.
    Relation,
    /// One reading of an ambiguous relation; informational.
    Reading,
    /// Group-likeness, presentation and table checks.
    Structural,
}

/// One checked identity.
#[derive(Clone, Debug, Serialize)]
pub struct RelationRow {
    pub name: String,
    pub kind: RowKind,
    pub algebra: String,
    pub degree: usize,
    pub precision_bits: usize,
    pub terms: usize,
    pub residual_by_degree: Vec<f64>,
    pub residual: f64,
    pub tolerance: f64,
    /// Largest a-priori Taylor tail bound among the inputs.
    pub tail_bound: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl RelationRow {
    /// Row with `pass` set from the residual.
    pub fn new(name: &str, kind: RowKind, algebra: &str, residual_by_degree: Vec<f64>, tolerance: f64) -> Self {
        let residual = residual_by_degree.iter().copied().fold(0.0, f64::max);
        let degree = residual_by_degree.len().saturating_sub(1);
        Self {
            name: name.to_string(),
            kind,
            algebra: algebra.to_string(),
            degree,
            precision_bits: 0,
            terms: 0,
            residual_by_degree,
            residual,
            tolerance,
            tail_bound: 0.0,
            pass: residual <= tolerance,
            note: None,
            error: None,
        }
    }

    /// Row for a check that could not be evaluated.
    pub fn failed(name: &str, kind: RowKind, tolerance: f64, error: String) -> Self {
        let mut r = Self::new(name, kind, "", Vec::new(), tolerance);
        r.residual = f64::INFINITY;
        r.pass = false;
        r.error = Some(error);
        r
    }

    pub fn with_run(mut self, prec: usize, terms: usize, tail_bound: f64) -> Self {
        self.precision_bits = prec;
        self.terms = terms;
        self.tail_bound = tail_bound;
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

/// Rows sorted by name; wall times are kept apart so the rows are
/// reproducible.
#[derive(Clone, Debug, Default, Serialize)]
pub struct VerificationReport {
    pub rows: Vec<RelationRow>,
    #[serde(skip)]
    pub timings: BTreeMap<String, f64>,
}

impl VerificationReport {
    pub fn new(mut rows: Vec<RelationRow>, timings: BTreeMap<String, f64>) -> Self {
        rows.sort_by(|a, b| a.name.cmp(&b.name));
        Self { rows, timings }
    }

    /// True iff every non-reading row passes.
    pub fn passed(&self) -> bool {
        self.rows.iter().filter(|r| r.kind != RowKind::Reading).all(|r| r.pass)
    }

    pub fn row(&self, name: &str) -> Option<&RelationRow> {
        self.rows.iter().find(|r| r.name == name)
    }

    pub fn to_json(&self) -> Value {
        let mut v = serde_json::to_value(self).expect("report serializes");
        v["pass"] = Value::Bool(self.passed());
        v
    }

    /// JSON with the wall times under `timings_seconds`.
    pub fn to_json_with_timings(&self) -> Value {
        let mut v = self.to_json();
        v["timings_seconds"] = serde_json::to_value(&self.timings).expect("timings serialize");
        v
    }

    pub fn to_text(&self) -> String {
        let w = self.rows.iter().map(|r| r.name.len()).max().unwrap_or(4).max(4);
        let mut out = String::new();
        let _ = writeln!(out, "{:<w$}  {:>3}  {:>10}  {:>10}  {:>10}  status", "name", "deg", "residual", "tolerance", "tail");
        for r in &self.rows {
            let status = match (r.kind, r.pass) {
                (RowKind::Reading, true) => "holds",
                (RowKind::Reading, false) => "fails",
                (_, true) => "PASS",
                (_, false) => "FAIL",
            };
            let _ = write!(
                out,
                "{:<w$}  {:>3}  {:>10.3e}  {:>10.1e}  {:>10.1e}  {status}",
                r.name, r.degree, r.residual, r.tolerance, r.tail_bound
            );
            if let Some(n) = &r.note {
                let _ = write!(out, "  ({n})");
            }
            if let Some(e) = &r.error {
                let _ = write!(out, "  error: {e}");
            }
            out.push('\n');
        }
        let _ = writeln!(out, "{}", if self.passed() { "all checks passed" } else { "some checks FAILED" });
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_follows_tolerance_and_readings_do_not_count() {
        let a = RelationRow::new("b", RowKind::Relation, "f2", vec![0.0, 1e-30], 1e-20);
        assert!(a.pass);
        assert_eq!(a.degree, 1);
        let r = RelationRow::new("a@x", RowKind::Reading, "f2", vec![0.0, 1.0], 1e-20);
        assert!(!r.pass);
        let rep = VerificationReport::new(vec![a, r], BTreeMap::new());
        assert_eq!(rep.rows[0].name, "a@x");
        assert!(rep.passed());
        assert!(rep.to_text().contains("fails"));
        assert_eq!(rep.to_json()["pass"], Value::Bool(true));
        assert!(rep.to_json().get("timings_seconds").is_none());
    }

    #[test]
    fn empty_report_passes() {
        let rep = VerificationReport::default();
        assert!(rep.passed());
        assert_eq!(rep.to_json()["rows"], serde_json::json!([]));
    }

    #[test]
    fn errors_fail() {
        let r = RelationRow::failed("x", RowKind::Relation, 1.0, "boom".into());
        assert!(!r.pass && r.residual.is_infinite());
    }
}
