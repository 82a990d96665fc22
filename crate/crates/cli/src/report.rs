//! Verification reports and their JSON, CSV and text renderings.
//!
//! Every rendering puts the wall time on its own final line so that the
//! rest of the output can be compared byte for byte across runs.

use serde::Serialize;
use serde_json::Value;

use crate::config::{Format, RunConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

/// One exact check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Record {
    pub name: String,
    /// Which statement of the theory the check instantiates.
    pub anchor: String,
    pub inputs: Value,
    pub expected: Value,
    pub actual: Value,
    pub pass: bool,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

impl Record {
    /// A check that passes exactly when `expected == actual`.
    pub fn exact(
        name: impl Into<String>,
        anchor: impl Into<String>,
        inputs: Value,
        expected: Value,
        actual: Value,
    ) -> Record {
        let pass = expected == actual;
        Record {
            name: name.into(),
            anchor: anchor.into(),
            inputs,
            expected,
            actual,
            pass,
            status: if pass { Status::Pass } else { Status::Fail },
            reason: None,
        }
    }

    pub fn skipped(
        name: impl Into<String>,
        anchor: impl Into<String>,
        inputs: Value,
        reason: impl Into<String>,
    ) -> Record {
        Record {
            name: name.into(),
            anchor: anchor.into(),
            inputs,
            expected: Value::Null,
            actual: Value::Null,
            pass: true,
            status: Status::Skipped,
            reason: Some(reason.into()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub config: RunConfig,
    pub records: Vec<Record>,
    pub summary: Summary,
    pub pass: bool,
    /// A requested computation stopped at the node budget.
    pub budget_exhausted: bool,
}

impl Report {
    pub fn new(config: RunConfig, records: Vec<Record>, budget_exhausted: bool) -> Report {
        let count = |s: Status| records.iter().filter(|r| r.status == s).count();
        let summary = Summary {
            total: records.len(),
            passed: count(Status::Pass),
            failed: count(Status::Fail),
            skipped: count(Status::Skipped),
        };
        Report {
            tool: "wonderful",
            version: env!("CARGO_PKG_VERSION"),
            config,
            pass: summary.failed == 0,
            summary,
            records,
            budget_exhausted,
        }
    }

    pub fn record(&self, name: &str) -> Option<&Record> {
        self.records.iter().find(|r| r.name == name)
    }

    /// Deterministic body, without the wall-time footer.
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string(self).expect("report serializes") + "\n",
            Format::Csv => self.render_csv(),
            Format::Text => self.render_text(),
        }
    }

    fn render_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record([
            "name", "anchor", "status", "inputs", "expected", "actual", "reason",
        ])
        .expect("in-memory write");
        for r in &self.records {
            w.write_record([
                r.name.as_str(),
                r.anchor.as_str(),
                status_str(r.status),
                &r.inputs.to_string(),
                &r.expected.to_string(),
                &r.actual.to_string(),
                r.reason.as_deref().unwrap_or(""),
            ])
            .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
    }

    fn render_text(&self) -> String {
        let width = self.records.iter().map(|r| r.name.len()).max().unwrap_or(4);
        let mut out = format!(
            "wonderful {} verify q={} n={}\n",
            self.version, self.config.q, self.config.n
        );
        for r in &self.records {
            let detail = match r.status {
                Status::Skipped => r.reason.clone().unwrap_or_default(),
                _ => format!("expected {} actual {}", r.expected, r.actual),
            };
            out.push_str(&format!(
                "{:<7} {:<width$}  {}\n",
                status_str(r.status).to_uppercase(),
                r.name,
                detail
            ));
        }
        let s = &self.summary;
        out.push_str(&format!(
            "{} checks: {} passed, {} failed, {} skipped\n",
            s.total, s.passed, s.failed, s.skipped
        ));
        out
    }
}

fn status_str(s: Status) -> &'static str {
    match s {
        Status::Pass => "pass",
        Status::Fail => "fail",
        Status::Skipped => "skipped",
    }
}

/// Final line carrying the only nondeterministic field.
pub fn footer(format: Format, wall_time_ms: u128) -> String {
    match format {
        Format::Json => format!("{{\"wall_time_ms\":{wall_time_ms}}}\n"),
        Format::Csv => format!("# wall_time_ms,{wall_time_ms}\n"),
        Format::Text => format!("wall time: {wall_time_ms} ms\n"),
    }
}

/// Everything except the last line of a rendered output.
pub fn strip_footer(output: &str) -> &str {
    let trimmed = output.strip_suffix('\n').unwrap_or(output);
    match trimmed.rfind('\n') {
        Some(i) => &output[..=i],
        None => "",
    }
}
