use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::Result;
use crate::verdict::{CheckOutcome, Verdict};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    Holds,
    Fails,
    Indeterminate,
    /// A computation rather than a check.
    Value,
    Error,
}

impl Status {
    pub fn label(self) -> &'static str {
        match self {
            Status::Holds => "HOLDS",
            Status::Fails => "FAILS",
            Status::Indeterminate => "INDETERMINATE",
            Status::Value => "VALUE",
            Status::Error => "ERROR",
        }
    }
}

/// One executed check or computation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub checker: String,
    pub params: BTreeMap<String, String>,
    pub verdict: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub equality: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub precision_bits: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub values: BTreeMap<String, Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    /// Tolerated INDETERMINATE (set by the suite descriptor).
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub allow_indeterminate: bool,
    #[serde(skip)]
    pub elapsed_ms: u64,
}

impl Record {
    pub fn new(checker: &str, params: BTreeMap<String, String>) -> Self {
        Record {
            checker: checker.to_string(),
            params,
            verdict: Status::Value,
            equality: None,
            witness: None,
            precision_bits: None,
            report: None,
            values: BTreeMap::new(),
            error: None,
            allow_indeterminate: false,
            elapsed_ms: 0,
        }
    }

    pub fn apply_outcome(&mut self, outcome: &CheckOutcome) {
        self.verdict = match &outcome.verdict {
            Verdict::Holds => Status::Holds,
            Verdict::Fails { witness } => {
                self.witness = Some(witness.clone());
                Status::Fails
            }
            Verdict::Indeterminate { precision_bits, report } => {
                self.precision_bits = Some(*precision_bits);
                self.report = Some(report.clone());
                Status::Indeterminate
            }
        };
        self.equality = Some(outcome.equality);
        for (k, v) in &outcome.values {
            self.values.insert(k.clone(), Value::String(v.clone()));
        }
    }

    pub fn fail_with(&mut self, err: &crate::error::LabError) {
        self.verdict = Status::Error;
        self.error = Some(err.to_string());
    }

    /// Whether this record keeps the exit status at zero.
    pub fn acceptable(&self) -> bool {
        match self.verdict {
            Status::Holds | Status::Value => true,
            Status::Indeterminate => self.allow_indeterminate,
            Status::Fails | Status::Error => false,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub holds: usize,
    pub fails: usize,
    pub indeterminate: usize,
    pub unexpected_indeterminate: usize,
    pub values: usize,
    pub errors: usize,
}

impl Summary {
    pub fn of(records: &[Record]) -> Self {
        let mut s = Summary { total: records.len(), ..Summary::default() };
        for r in records {
            match r.verdict {
                Status::Holds => s.holds += 1,
                Status::Fails => s.fails += 1,
                Status::Indeterminate => {
                    s.indeterminate += 1;
                    if !r.allow_indeterminate {
                        s.unexpected_indeterminate += 1;
                    }
                }
                Status::Value => s.values += 1,
                Status::Error => s.errors += 1,
            }
        }
        s
    }

    pub fn ok(&self) -> bool {
        self.fails == 0 && self.errors == 0 && self.unexpected_indeterminate == 0
    }
}

/// Everything that varies between identical runs.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Timestamp {
    pub unix_seconds: u64,
    pub total_ms: u64,
    /// Per-record wall time, aligned with `records`.
    pub record_ms: Vec<u64>,
}

impl Timestamp {
    pub fn now(total_ms: u64, record_ms: Vec<u64>) -> Self {
        let unix_seconds = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map_or(0, |d| d.as_secs());
        Timestamp { unix_seconds, total_ms, record_ms }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub suite: String,
    pub version: String,
    pub seed: u64,
    pub precision_bits: u32,
    pub summary: Summary,
    pub ok: bool,
    pub records: Vec<Record>,
    pub timestamp: Timestamp,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        if self.ok {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// The JSON form with the timestamp removed.
    pub fn deterministic_json(&self) -> Result<String> {
        let mut v = serde_json::to_value(self)?;
        if let Some(obj) = v.as_object_mut() {
            obj.remove("timestamp");
        }
        Ok(serde_json::to_string_pretty(&v)?)
    }

    pub fn to_csv(&self) -> Result<String> {
        records_csv(&self.records)
    }
}

fn join_map<V>(map: &BTreeMap<String, V>, show: impl Fn(&V) -> String) -> String {
    map.iter().map(|(k, v)| format!("{k}={}", show(v))).collect::<Vec<_>>().join(";")
}

fn value_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

pub fn records_csv(records: &[Record]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["checker", "params", "verdict", "equality", "witness", "precision_bits", "values", "error"])
        .map_err(csv_err)?;
    for r in records {
        w.write_record([
            r.checker.clone(),
            join_map(&r.params, String::clone),
            r.verdict.label().to_string(),
            r.equality.map(|e| e.to_string()).unwrap_or_default(),
            r.witness.clone().unwrap_or_default(),
            r.precision_bits.map(|p| p.to_string()).unwrap_or_default(),
            join_map(&r.values, value_text),
            r.error.clone().unwrap_or_default(),
        ])
        .map_err(csv_err)?;
    }
    finish_csv(w)
}

/// Serializes flat rows with a header taken from the field names.
pub fn rows_csv<T: Serialize>(rows: &[T]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row).map_err(csv_err)?;
    }
    finish_csv(w)
}

fn finish_csv(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w.into_inner().map_err(|e| crate::error::LabError::param(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn csv_err(e: csv::Error) -> crate::error::LabError {
    crate::error::LabError::param(format!("csv: {e}"))
}

#[derive(Serialize)]
struct SearchRow {
    problem: String,
    n: u32,
    k: u32,
    optimum: u64,
    complete: bool,
    witnesses: usize,
    nodes: u64,
    prunes: u64,
    units: usize,
    maximal_families: u64,
    wall_time_ms: u64,
}

pub fn search_csv(out: &crate::search::SearchOutcome) -> Result<String> {
    let problem = serde_json::to_value(out.problem)?;
    let kind = problem["kind"].as_str().unwrap_or_default().to_string();
    let param = ["r", "s"].iter().find_map(|p| problem[*p].as_u64().map(|v| format!("{kind}({p}={v})")));
    rows_csv(&[SearchRow {
        problem: param.unwrap_or(kind),
        n: out.problem.n(),
        k: out.problem.k(),
        optimum: out.optimum,
        complete: out.complete,
        witnesses: out.witnesses.len(),
        nodes: out.stats.nodes,
        prunes: out.stats.prunes,
        units: out.stats.units,
        maximal_families: out.stats.maximal_families,
        wall_time_ms: out.stats.wall_time_ms,
    }])
}

#[derive(Serialize)]
struct TheoremRow<'a> {
    theorem: String,
    n: u32,
    k: u32,
    param: u32,
    regime: &'a super::theorem::Regime,
    hypothesis: &'a str,
    formula: u64,
    optimum: u64,
    complete: bool,
    witnesses: usize,
    witnesses_match: Option<bool>,
    unique_witness: bool,
    status: &'a super::theorem::TheoremStatus,
}

pub fn theorem_csv(r: &super::theorem::TheoremReport) -> Result<String> {
    rows_csv(&[TheoremRow {
        theorem: r.theorem.to_string(),
        n: r.n,
        k: r.k,
        param: r.param,
        regime: &r.regime,
        hypothesis: r.hypothesis,
        formula: r.formula,
        optimum: r.optimum,
        complete: r.complete,
        witnesses: r.witnesses.len(),
        witnesses_match: r.witnesses_match,
        unique_witness: r.unique_witness,
        status: &r.status,
    }])
}
