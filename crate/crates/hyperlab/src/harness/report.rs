use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use std::path::Path;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ReportRow {
    pub experiment: String,
    pub model: String,
    /// Human-readable inputs / witness description.
    pub detail: String,
    pub lower: Option<f64>,
    pub upper: Option<f64>,
    pub bound: Option<f64>,
    /// bound - |value|; negative margins fail.
    pub margin: Option<f64>,
    pub pass: bool,
}

impl ReportRow {
    pub fn new(experiment: &str, model: &str, detail: impl Into<String>) -> Self {
        ReportRow {
            experiment: experiment.into(),
            model: model.into(),
            detail: detail.into(),
            lower: None,
            upper: None,
            bound: None,
            margin: None,
            pass: true,
        }
    }

    pub fn value(mut self, v: &crate::interval::IntervalValue) -> Self {
        self.lower = Some(v.lower);
        self.upper = Some(v.upper);
        self
    }

    pub fn scalar(mut self, v: f64) -> Self {
        self.lower = Some(v);
        self.upper = Some(v);
        self
    }

    /// Records the bound and derives pass/margin from |midpoint| <= bound.
    pub fn check(mut self, bound: f64) -> Self {
        let mid = (self.lower.unwrap_or(0.0) + self.upper.unwrap_or(0.0)) / 2.0;
        self.bound = Some(bound);
        self.margin = Some(bound - mid.abs());
        self.pass = mid.abs() <= bound;
        self
    }

    pub fn verdict(mut self, pass: bool) -> Self {
        self.pass = pass;
        self
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize, PartialEq)]
pub struct Report {
    pub rows: Vec<ReportRow>,
}

impl Report {
    pub fn passed(&self) -> usize {
        self.rows.iter().filter(|r| r.pass).count()
    }

    pub fn failed(&self) -> usize {
        self.rows.len() - self.passed()
    }

    pub fn all_pass(&self) -> bool {
        self.failed() == 0
    }

    /// 0 = all pass, 1 = some property check failed.
    pub fn exit_code(&self) -> i32 {
        if self.all_pass() {
            0
        } else {
            1
        }
    }

    pub fn push(&mut self, row: ReportRow) {
        self.rows.push(row);
    }

    pub fn merge(&mut self, other: Report) {
        self.rows.extend(other.rows);
    }
}

/// 12 significant digits, stable across runs.
fn fmt_f(v: Option<f64>) -> String {
    match v {
        None => String::new(),
        Some(x) => format!("{x:.11e}"),
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub const CSV_HEADER: &str = "experiment,model,detail,lower,upper,bound,margin,pass";

pub fn to_csv(report: &Report) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in &report.rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            csv_field(&r.experiment),
            csv_field(&r.model),
            csv_field(&r.detail),
            fmt_f(r.lower),
            fmt_f(r.upper),
            fmt_f(r.bound),
            fmt_f(r.margin),
            r.pass
        );
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Json,
}

pub fn emit_report(report: &Report, format: ReportFormat, path: &Path) -> Result<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir)?;
        }
    }
    let body = match format {
        ReportFormat::Csv => to_csv(report),
        ReportFormat::Json => serde_json::to_string_pretty(report)
            .map_err(|e| Error::Config(format!("json serialization: {e}")))?,
    };
    std::fs::write(path, body)?;
    Ok(())
}
