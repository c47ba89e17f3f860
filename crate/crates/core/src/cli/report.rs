use std::collections::BTreeMap;
use std::fmt::Write;

use serde::Serialize;
use serde_json::Value;

use super::config::RunConfig;
use crate::oracle::SpectrumReport;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub inputs: BTreeMap<String, Value>,
    /// Residual or difference; absent when the check errored.
    pub value: Option<f64>,
    pub tolerance: f64,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<f64>,
}

impl CheckRecord {
    /// Passes when `value ≤ tolerance`.
    pub fn measured(
        name: String,
        inputs: BTreeMap<String, Value>,
        value: f64,
        tolerance: f64,
    ) -> Self {
        let status = if value <= tolerance {
            Status::Pass
        } else {
            Status::Fail
        };
        CheckRecord {
            name,
            inputs,
            value: Some(value),
            tolerance,
            status,
            error: None,
            wall_ms: None,
        }
    }

    pub fn errored(
        name: String,
        inputs: BTreeMap<String, Value>,
        tolerance: f64,
        error: String,
    ) -> Self {
        CheckRecord {
            name,
            inputs,
            value: None,
            tolerance,
            status: Status::Error,
            error: Some(error),
            wall_ms: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub errors: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolverFailureRecord {
    #[serde(rename = "M")]
    pub m: usize,
    pub guess: usize,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub toolkit_version: String,
    pub command: String,
    pub config: RunConfig,
    pub checks: Vec<CheckRecord>,
    pub summary: Summary,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub spectra: Vec<SpectrumReport>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub solver_failures: Vec<SolverFailureRecord>,
}

impl Report {
    /// Sorts checks by name and fills in the summary.
    pub fn new(command: &str, config: RunConfig, mut checks: Vec<CheckRecord>) -> Self {
        checks.sort_by(|a, b| a.name.cmp(&b.name));
        let count = |s: Status| checks.iter().filter(|c| c.status == s).count();
        let summary = Summary {
            total: checks.len(),
            passed: count(Status::Pass),
            failed: count(Status::Fail),
            errors: count(Status::Error),
        };
        Report {
            schema_version: SCHEMA_VERSION,
            toolkit_version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            config,
            checks,
            summary,
            spectra: Vec::new(),
            solver_failures: Vec::new(),
        }
    }

    pub fn all_passed(&self) -> bool {
        self.summary.passed == self.summary.total
    }

    /// Pretty JSON with keys sorted at every level.
    pub fn to_json(&self) -> String {
        // serde_json's map is ordered by key, so a round trip through Value sorts.
        let value = serde_json::to_value(self).expect("report is serializable");
        let mut text = serde_json::to_string_pretty(&value).expect("value is serializable");
        text.push('\n');
        text
    }

    pub fn to_table(&self) -> String {
        let rows: Vec<[String; 4]> = self
            .checks
            .iter()
            .map(|c| {
                let status = match c.status {
                    Status::Pass => "pass",
                    Status::Fail => "FAIL",
                    Status::Error => "ERROR",
                };
                let value = match (&c.value, &c.error) {
                    (Some(v), _) => format!("{v:.3e}"),
                    (None, Some(e)) => e.clone(),
                    (None, None) => "-".into(),
                };
                [
                    c.name.clone(),
                    status.into(),
                    value,
                    format!("{:.0e}", c.tolerance),
                ]
            })
            .collect();
        let header = ["check", "status", "value", "tolerance"].map(String::from);
        let mut widths = header.clone().map(|h| h.chars().count());
        for row in &rows {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.chars().count());
            }
        }
        let mut out = String::new();
        for row in std::iter::once(&header).chain(&rows) {
            let line = row
                .iter()
                .zip(widths)
                .map(|(cell, w)| format!("{cell:<w$}"))
                .collect::<Vec<_>>()
                .join("  ");
            let _ = writeln!(out, "{}", line.trim_end());
        }
        // Solve reports carry one spectrum per M; only list them for `spectrum`.
        for spectrum in self.spectra.iter().filter(|_| self.command == "spectrum") {
            let _ = writeln!(out, "\nspectrum at mu = {}", spectrum.probe_mu);
            for (value, sector) in spectrum.eigenvalues.iter().zip(&spectrum.sector_labels) {
                let _ = writeln!(out, "  M={sector}  {value}");
            }
        }
        for failure in &self.solver_failures {
            let _ = writeln!(
                out,
                "solver M={} guess {}: {}",
                failure.m, failure.guess, failure.error
            );
        }
        let s = &self.summary;
        let _ = writeln!(
            out,
            "\n{} checks: {} passed, {} failed, {} errors",
            s.total, s.passed, s.failed, s.errors
        );
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config() -> RunConfig {
        RunConfig::from_json(r#"{"model":"xxx","N":1,"homogeneous":0}"#).unwrap()
    }

    #[test]
    fn sorted_and_summarized() {
        let checks = vec![
            CheckRecord::measured("b".into(), BTreeMap::new(), 0.0, 0.0),
            CheckRecord::measured("a".into(), BTreeMap::new(), 1.0, 0.0),
            CheckRecord::errored("c".into(), BTreeMap::new(), 0.0, "boom".into()),
        ];
        let report = Report::new("verify", config(), checks);
        assert_eq!(report.checks[0].name, "a");
        assert_eq!(
            report.summary,
            Summary {
                total: 3,
                passed: 1,
                failed: 1,
                errors: 1
            }
        );
        assert!(!report.all_passed());
        let json = report.to_json();
        let keys: Vec<_> = [
            "checks",
            "command",
            "config",
            "schema_version",
            "summary",
            "toolkit_version",
        ]
        .iter()
        .map(|k| json.find(&format!("\"{k}\"")).unwrap())
        .collect();
        assert!(keys.windows(2).all(|w| w[0] < w[1]));
        assert!(report.to_table().contains("FAIL"));
    }
}
