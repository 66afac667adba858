//! Machine-readable check records and the versioned report they are gathered into.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::Result;

/// Version of the JSON report layout; fields are only ever added.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    /// The computation could not reach the accuracy needed to decide.
    Inconclusive,
}

impl CheckStatus {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        }
    }
}

/// One measured quantity compared with its tolerance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub inputs: BTreeMap<String, Value>,
    pub measured: f64,
    pub tolerance: f64,
    pub status: CheckStatus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl CheckRecord {
    /// Passes when `measured` is finite and strictly below `tolerance`.
    pub fn below(name: impl Into<String>, measured: f64, tolerance: f64) -> Self {
        CheckRecord {
            name: name.into(),
            inputs: BTreeMap::new(),
            measured,
            tolerance,
            status: CheckStatus::from_bool(measured.is_finite() && measured < tolerance),
            detail: None,
        }
    }

    /// Record whose outcome was decided elsewhere.
    pub fn with_outcome(name: impl Into<String>, measured: f64, tolerance: f64, status: CheckStatus) -> Self {
        CheckRecord { status, ..CheckRecord::below(name, measured, tolerance) }
    }

    /// Record for a computation that raised an error.
    pub fn failed(name: impl Into<String>, err: &crate::Error) -> Self {
        CheckRecord {
            detail: Some(err.to_string()),
            ..CheckRecord::with_outcome(name, f64::NAN, 0.0, CheckStatus::Fail)
        }
    }

    pub fn input(mut self, key: &str, value: impl Serialize) -> Self {
        self.inputs.insert(key.to_string(), serde_json::to_value(value).unwrap_or(Value::Null));
        self
    }

    pub fn inputs_from(mut self, params: &BTreeMap<String, f64>) -> Self {
        for (k, v) in params {
            self = self.input(k, v);
        }
        self
    }

    pub fn detail(mut self, text: impl Into<String>) -> Self {
        self.detail = Some(text.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.status == CheckStatus::Pass
    }

    fn sort_key(&self) -> (String, String) {
        (self.name.clone(), serde_json::to_string(&self.inputs).unwrap_or_default())
    }
}

/// Counts of records by status.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub inconclusive: usize,
}

/// Output of one CLI run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: u32,
    pub tool: String,
    pub version: String,
    pub command: String,
    pub config: Value,
    pub summary: Summary,
    pub records: Vec<CheckRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub data: Option<Value>,
    pub wall_time_seconds: f64,
}

impl Report {
    pub fn new(command: &str, config: impl Serialize) -> Self {
        Report {
            schema: SCHEMA_VERSION,
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            config: serde_json::to_value(config).unwrap_or(Value::Null),
            summary: Summary::default(),
            records: Vec::new(),
            data: None,
            wall_time_seconds: 0.0,
        }
    }

    pub fn extend(&mut self, records: impl IntoIterator<Item = CheckRecord>) {
        self.records.extend(records);
    }

    pub fn set_data(&mut self, data: impl Serialize) -> Result<()> {
        self.data = Some(serde_json::to_value(data)?);
        Ok(())
    }

    /// Sorts the records by name and inputs and recomputes the summary, so the
    /// output does not depend on the order work items finished in.
    pub fn finalize(&mut self, wall_time_seconds: f64) {
        self.records.sort_by_cached_key(CheckRecord::sort_key);
        let mut s = Summary::default();
        for r in &self.records {
            match r.status {
                CheckStatus::Pass => s.pass += 1,
                CheckStatus::Fail => s.fail += 1,
                CheckStatus::Inconclusive => s.inconclusive += 1,
            }
        }
        self.summary = s;
        self.wall_time_seconds = wall_time_seconds;
    }

    /// `1` if any record failed, `0` otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.records.iter().any(|r| r.status == CheckStatus::Fail) {
            1
        } else {
            0
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// One row per record: `name,inputs,measured,tolerance,status,detail`.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["name", "inputs", "measured", "tolerance", "status", "detail"]).map_err(csv_error)?;
        for r in &self.records {
            let status = serde_json::to_value(r.status)?;
            w.write_record([
                r.name.as_str(),
                &serde_json::to_string(&r.inputs)?,
                &format!("{:e}", r.measured),
                &format!("{:e}", r.tolerance),
                status.as_str().unwrap_or_default(),
                r.detail.as_deref().unwrap_or(""),
            ])
            .map_err(csv_error)?;
        }
        let bytes = w.into_inner().map_err(|e| std::io::Error::other(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

fn csv_error(e: csv::Error) -> crate::Error {
    crate::Error::Io(std::io::Error::other(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn records_sort_and_summarise() {
        let mut r = Report::new("test", serde_json::json!({"x": 1}));
        r.extend([
            CheckRecord::below("b", 1.0, 0.5).input("n", 2),
            CheckRecord::below("a", 0.1, 0.5).input("n", 1),
            CheckRecord::with_outcome("c", 0.2, 0.1, CheckStatus::Inconclusive),
        ]);
        r.finalize(0.0);
        assert_eq!(r.records[0].name, "a");
        assert_eq!(r.summary, Summary { pass: 1, fail: 1, inconclusive: 1 });
        assert_eq!(r.exit_code(), 1);
        let json: Value = serde_json::from_str(&r.to_json().unwrap()).unwrap();
        assert_eq!(json["schema"], 1);
        assert_eq!(json["records"][1]["status"], "fail");
    }

    #[test]
    fn nan_never_passes() {
        assert!(!CheckRecord::below("x", f64::NAN, 1.0).passed());
    }

    #[test]
    fn csv_quotes_inputs() {
        let mut r = Report::new("test", ());
        r.extend([CheckRecord::below("a", 0.1, 0.5).input("p", 0.3).input("q", 0.5)]);
        r.finalize(0.0);
        let csv = r.to_csv().unwrap();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("name,inputs,measured,tolerance,status,detail"));
        assert!(lines.next().unwrap().starts_with("a,\"{\"\"p\"\":0.3,\"\"q\"\":0.5}\",1e-1,5e-1,pass"));
    }
}
