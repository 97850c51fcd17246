//! Report records, the JSON report and CSV tables.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::config::SuiteConfig;
use crate::error::{CliError, Result};

pub const SCHEMA_VERSION: u32 = 1;
pub const TOOL_NAME: &str = "fock-verify";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// JSON Schema of [`VerificationReport`].
pub const REPORT_SCHEMA: &str = include_str!("../schema/report.schema.json");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckKind {
    /// pass iff residual <= tolerance.
    Bound,
    /// pass iff the fitted order >= the threshold (stored in `tolerance`).
    Order,
    /// pass iff the recorded sequence strictly decreases; residual is the last entry.
    Decreasing,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckRecord {
    pub name: String,
    /// Short descriptive name of the identity under test.
    pub anchor: String,
    pub kind: CheckKind,
    pub residual: f64,
    pub tolerance: f64,
    pub order: Option<f64>,
    pub pass: bool,
    pub wall_time_s: f64,
}

impl CheckRecord {
    pub fn bound(name: impl Into<String>, anchor: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            anchor: anchor.into(),
            kind: CheckKind::Bound,
            residual,
            tolerance,
            order: None,
            pass: residual <= tolerance,
            wall_time_s: 0.0,
        }
    }

    pub fn order(name: impl Into<String>, anchor: impl Into<String>, finest: f64, order: Option<f64>, threshold: f64) -> Self {
        Self {
            name: name.into(),
            anchor: anchor.into(),
            kind: CheckKind::Order,
            residual: finest,
            tolerance: threshold,
            order,
            pass: order.is_some_and(|p| p >= threshold),
            wall_time_s: 0.0,
        }
    }

    pub fn decreasing(name: impl Into<String>, anchor: impl Into<String>, sequence: &[f64]) -> Self {
        Self {
            name: name.into(),
            anchor: anchor.into(),
            kind: CheckKind::Decreasing,
            residual: sequence.last().copied().unwrap_or(f64::NAN),
            tolerance: 0.0,
            order: None,
            pass: !sequence.is_empty() && sequence.windows(2).all(|w| w[1] < w[0]),
            wall_time_s: 0.0,
        }
    }

    pub fn timed(mut self, seconds: f64) -> Self {
        self.wall_time_s = seconds;
        self
    }

    /// Recomputes `pass` from the other fields.
    pub fn consistent(&self) -> bool {
        let expect = match self.kind {
            CheckKind::Bound => self.residual <= self.tolerance,
            CheckKind::Order => self.order.is_some_and(|p| p >= self.tolerance),
            CheckKind::Decreasing => self.pass,
        };
        expect == self.pass
    }
}

/// A CSV table produced by a suite, e.g. a convergence study.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub headers: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    /// Fitted order, written as a final `fitted_order` row when present.
    pub fitted_order: Option<f64>,
}

impl Table {
    pub fn new(name: impl Into<String>, headers: &[&str]) -> Self {
        Self { name: name.into(), headers: headers.iter().map(|h| h.to_string()).collect(), rows: vec![], fitted_order: None }
    }

    pub fn convergence(name: impl Into<String>, spacings: &[f64], residuals: &[f64], order: Option<f64>) -> Self {
        let mut t = Self::new(name, &["spacing", "residual"]);
        t.rows = spacings.iter().zip(residuals).map(|(h, r)| vec![*h, *r]).collect();
        t.fitted_order = order;
        t
    }

    pub fn write_csv(&self, dir: &Path) -> Result<std::path::PathBuf> {
        std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir.display().to_string(), e))?;
        let path = dir.join(format!("{}.csv", self.name));
        let mut w = csv::Writer::from_path(&path).map_err(|e| CliError::Runtime(format!("{}: {e}", path.display())))?;
        let csv_err = |e: csv::Error| CliError::Runtime(format!("{}: {e}", path.display()));
        w.write_record(&self.headers).map_err(csv_err)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|v| format_cell(*v))).map_err(csv_err)?;
        }
        if let Some(p) = self.fitted_order {
            let mut last = vec!["fitted_order".to_string(), format!("{p}")];
            last.resize(self.headers.len().max(2), String::new());
            w.write_record(&last).map_err(csv_err)?;
        }
        w.flush().map_err(|e| CliError::io(path.display().to_string(), e))?;
        Ok(path)
    }
}

/// Integers print plainly, everything else in round-trip exponent form.
fn format_cell(v: f64) -> String {
    if v.fract() == 0.0 && v.abs() < 1e15 {
        format!("{}", v as i64)
    } else {
        format!("{v:e}")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerificationReport {
    pub schema_version: u32,
    pub tool: String,
    pub tool_version: String,
    pub command: String,
    pub seed: u64,
    pub config: SuiteConfig,
    pub checks: Vec<CheckRecord>,
    pub passed: bool,
    /// Notes on how the checks were set up (finite boxes, conventions).
    pub notes: Vec<String>,
    pub generated_unix_s: u64,
}

impl VerificationReport {
    pub fn new(command: &str, config: &SuiteConfig, checks: Vec<CheckRecord>, notes: Vec<String>) -> Self {
        let generated_unix_s =
            std::time::SystemTime::now().duration_since(std::time::UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        Self {
            schema_version: SCHEMA_VERSION,
            tool: TOOL_NAME.into(),
            tool_version: TOOL_VERSION.into(),
            command: command.into(),
            seed: config.seed,
            config: config.clone(),
            passed: checks.iter().all(|c| c.pass),
            checks,
            notes,
            generated_unix_s,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| CliError::Runtime(e.to_string()))
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
            std::fs::create_dir_all(parent).map_err(|e| CliError::io(parent.display().to_string(), e))?;
        }
        std::fs::write(path, self.to_json()? + "\n").map_err(|e| CliError::io(path.display().to_string(), e))
    }
}
