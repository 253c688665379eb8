//! Run reports (JSON) and point tables (CSV).

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::Context;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Tolerance {
    AtMost(f64),
    AtLeast(f64),
    Within { lo: f64, hi: f64 },
}

impl Tolerance {
    pub fn admits(&self, v: f64) -> bool {
        match *self {
            Self::AtMost(t) => v <= t,
            Self::AtLeast(t) => v >= t,
            Self::Within { lo, hi } => v >= lo && v <= hi,
        }
    }
}

impl std::fmt::Display for Tolerance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match *self {
            Self::AtMost(t) => write!(f, "<= {t:e}"),
            Self::AtLeast(t) => write!(f, ">= {t:e}"),
            Self::Within { lo, hi } => write!(f, "in [{lo}, {hi}]"),
        }
    }
}

/// One pass/fail verdict together with the tolerance that decided it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub tolerance: Tolerance,
    pub passed: bool,
}

impl Check {
    pub fn new(name: impl Into<String>, value: f64, tolerance: Tolerance) -> Self {
        Self {
            name: name.into(),
            value,
            tolerance,
            passed: value.is_finite() && tolerance.admits(value),
        }
    }

    pub fn at_most(name: impl Into<String>, value: f64, tol: f64) -> Self {
        Self::new(name, value, Tolerance::AtMost(tol))
    }

    pub fn at_least(name: impl Into<String>, value: f64, tol: f64) -> Self {
        Self::new(name, value, Tolerance::AtLeast(tol))
    }

    pub fn within(name: impl Into<String>, value: f64, lo: f64, hi: f64) -> Self {
        Self::new(name, value, Tolerance::Within { lo, hi })
    }

    pub fn line(&self) -> String {
        format!(
            "{} {}: {:.6e} (tolerance {})",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.value,
            self.tolerance
        )
    }
}

/// Point data: `#`-prefixed metadata lines, a header row, and rows in
/// scientific notation.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    pub metadata: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self {
            metadata: Vec::new(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn meta(&mut self, key: &str, value: impl std::fmt::Display) {
        self.metadata.push((key.to_string(), value.to_string()));
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let j = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[j]).collect())
    }

    pub fn to_csv(&self) -> anyhow::Result<String> {
        let mut out = String::new();
        for (k, v) in &self.metadata {
            writeln!(out, "# {k}: {v}")?;
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns)?;
        for r in &self.rows {
            w.write_record(r.iter().map(|v| format!("{v:.16e}")))?;
        }
        out.push_str(std::str::from_utf8(&w.into_inner()?)?);
        Ok(out)
    }

    fn records(&self) -> Vec<BTreeMap<String, f64>> {
        self.rows
            .iter()
            .map(|r| {
                self.columns
                    .iter()
                    .cloned()
                    .zip(r.iter().copied())
                    .collect()
            })
            .collect()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Summary {
    pub max_error: Option<f64>,
    pub fitted_rate: Option<f64>,
    pub checks: Vec<Check>,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunReport {
    pub experiment: String,
    pub version: String,
    pub parameters: serde_json::Value,
    pub records: Vec<BTreeMap<String, f64>>,
    pub summary: Summary,
    pub wall_clock_seconds: f64,
    #[serde(skip)]
    pub table: Option<Table>,
    /// Extra artifact written next to the CSV (the convention verdict).
    #[serde(skip)]
    pub artifact: Option<String>,
}

impl RunReport {
    pub fn new(experiment: &str, parameters: serde_json::Value) -> Self {
        Self {
            experiment: experiment.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            parameters,
            records: Vec::new(),
            summary: Summary {
                passed: true,
                ..Summary::default()
            },
            wall_clock_seconds: 0.0,
            table: None,
            artifact: None,
        }
    }

    pub fn push(&mut self, check: Check) {
        self.summary.passed &= check.passed;
        self.summary.checks.push(check);
    }

    pub fn set_table(&mut self, table: Table) {
        self.records = table.records();
        self.table = Some(table);
    }

    pub fn passed(&self) -> bool {
        self.summary.passed
    }

    pub fn to_json(&self) -> anyhow::Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    pub fn write_csv(&self, path: &Path) -> anyhow::Result<()> {
        let body = match (&self.table, &self.artifact) {
            (Some(t), _) => t.to_csv()?,
            (None, Some(a)) => a.clone(),
            (None, None) => anyhow::bail!("experiment {} produces no point data", self.experiment),
        };
        fs::write(path, body).with_context(|| format!("writing {}", path.display()))
    }

    pub fn write_json(&self, path: &Path) -> anyhow::Result<()> {
        fs::write(path, self.to_json()?).with_context(|| format!("writing {}", path.display()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let mut t = Table::new(&["u", "value"]);
        t.meta("hbar", 0.5);
        t.rows.push(vec![-1.0, 0.25]);
        let s = t.to_csv().unwrap();
        assert_eq!(
            s,
            "# hbar: 0.5\nu,value\n-1.0000000000000000e0,2.5000000000000000e-1\n"
        );
    }

    #[test]
    fn checks_cite_their_tolerance() {
        let c = Check::within("peak", 0.22, 0.2, 0.24);
        assert!(c.passed);
        assert!(c.line().contains("in [0.2, 0.24]"));
        assert!(!Check::at_most("nan", f64::NAN, 1.0).passed);
        let mut r = RunReport::new("x", serde_json::json!({}));
        r.push(Check::at_most("a", 2.0, 1.0));
        assert!(!r.passed());
    }
}
