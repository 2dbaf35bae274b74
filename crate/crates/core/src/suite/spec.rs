//! Suite files (TOML) and the runner.
//!
//! ```toml
//! name = "example"
//! seed = 7
//! precision_bits = 128
//!
//! [budgets]
//! max_nodes = 10000000
//! max_seconds = 60.0
//! workers = 2
//!
//! [[check]]
//! checker = "check_russo"
//! params = { n = 6 }
//! grid = { f = ["dict(1)", "or(1,2)"], p = ["1/3", "1/2"] }
//!
//! [[check]]
//! checker = "check_biased_ekr"
//! params = { p = "1/3" }
//! corpus = { generator = "intersecting", count = 20, n_min = 3, n_max = 7 }
//! ```
//!
//! Each descriptor expands to the product of its grid with its corpus. A
//! corpus of random families names each one as a seeded expression such as
//! `rand_inc(…)`, so every record can be replayed on its own.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::child_seed;
use crate::error::{LabError, Result};
use crate::search::SearchLimits;

use super::registry::{run_check, validate, Context};
use super::report::{Record, Report, Summary, Timestamp};

pub const DEFAULT_SUITE_NAME: &str = "paper-tools";
const DEFAULT_SUITE: &str = include_str!("../../suites/paper-tools.toml");

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteSpec {
    #[serde(default = "default_name")]
    pub name: String,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_precision")]
    pub precision_bits: u32,
    #[serde(default)]
    pub budgets: Budgets,
    #[serde(default, rename = "check")]
    pub checks: Vec<CheckSpec>,
}

fn default_name() -> String {
    "suite".into()
}

fn default_precision() -> u32 {
    128
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Budgets {
    pub max_nodes: Option<u64>,
    pub max_seconds: Option<f64>,
    pub workers: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckSpec {
    pub checker: String,
    #[serde(default)]
    pub params: BTreeMap<String, toml::Value>,
    #[serde(default)]
    pub grid: BTreeMap<String, Vec<toml::Value>>,
    pub corpus: Option<CorpusSpec>,
    #[serde(default)]
    pub allow_indeterminate: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Generator {
    /// `rand_inc(seed)`.
    Increasing,
    /// `rand_int(seed)`.
    Intersecting,
    /// `rand_unif(k, seed)`.
    Uniform,
    /// `slice(rand_int(seed), k)`.
    IntersectingUniform,
    /// `file(path)` for each listed file.
    Files,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorpusSpec {
    pub generator: Generator,
    #[serde(default)]
    pub count: usize,
    /// Ground sizes are drawn uniformly from `n_min..=n_max`; when absent the
    /// descriptor's own `n` is used.
    pub n_min: Option<u32>,
    pub n_max: Option<u32>,
    pub k: Option<u32>,
    /// Overrides the seed derived from the suite seed.
    pub seed: Option<u64>,
    /// Parameter receiving the family; defaults to `f`, or `families` when
    /// `tuple > 1`.
    pub param: Option<String>,
    /// Families per item, joined with `|`.
    #[serde(default = "one")]
    pub tuple: u32,
    #[serde(default)]
    pub files: Vec<String>,
}

fn one() -> u32 {
    1
}

/// Command-line values that replace the suite file's.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub precision_bits: Option<u32>,
    pub max_nodes: Option<u64>,
    pub max_seconds: Option<f64>,
    pub workers: Option<usize>,
}

/// One expanded check.
#[derive(Clone, Debug, PartialEq)]
pub struct PlannedCheck {
    pub checker: String,
    pub params: BTreeMap<String, String>,
    pub allow_indeterminate: bool,
}

impl SuiteSpec {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| LabError::param(format!("malformed suite: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    /// The built-in suite exercising every measure checker on named
    /// constructions, plus shadow, cross-intersection and search checks.
    pub fn default_suite() -> Self {
        Self::parse(DEFAULT_SUITE).expect("the built-in suite parses")
    }

    pub fn apply(&mut self, o: &Overrides) {
        if let Some(seed) = o.seed {
            self.seed = seed;
        }
        if let Some(p) = o.precision_bits {
            self.precision_bits = p;
        }
        if o.max_nodes.is_some() {
            self.budgets.max_nodes = o.max_nodes;
        }
        if o.max_seconds.is_some() {
            self.budgets.max_seconds = o.max_seconds;
        }
        if o.workers.is_some() {
            self.budgets.workers = o.workers;
        }
    }

    pub fn context(&self, base_dir: &Path) -> Context {
        Context {
            base_dir: base_dir.to_path_buf(),
            precision_bits: self.precision_bits,
            limits: SearchLimits {
                max_nodes: self.budgets.max_nodes,
                max_seconds: self.budgets.max_seconds,
                workers: self.budgets.workers.unwrap_or(1),
                ..SearchLimits::default()
            },
        }
    }

    /// Expands every descriptor and validates checker ids and parameter
    /// names. Files named by a `files` corpus must exist.
    pub fn plan(&self, base_dir: &Path) -> Result<Vec<PlannedCheck>> {
        let mut out = Vec::new();
        for (index, check) in self.checks.iter().enumerate() {
            let base: BTreeMap<String, String> =
                check.params.iter().map(|(k, v)| Ok((k.clone(), scalar(k, v)?))).collect::<Result<_>>()?;
            let mut rows = vec![base];
            for (key, values) in &check.grid {
                let mut next = Vec::with_capacity(rows.len() * values.len());
                for row in &rows {
                    for v in values {
                        let mut r = row.clone();
                        r.insert(key.clone(), scalar(key, v)?);
                        next.push(r);
                    }
                }
                rows = next;
            }
            if let Some(corpus) = &check.corpus {
                let seed = corpus.seed.unwrap_or_else(|| child_seed(self.seed, index as u64));
                let items = corpus_items(corpus, seed, base_dir)?;
                rows = rows
                    .iter()
                    .flat_map(|row| {
                        items.iter().map(move |item| {
                            let mut r = row.clone();
                            r.extend(item.clone());
                            r
                        })
                    })
                    .collect();
            }
            for params in rows {
                validate(&check.checker, &params)
                    .map_err(|e| LabError::param(format!("check #{} ({}): {e}", index + 1, check.checker)))?;
                out.push(PlannedCheck {
                    checker: check.checker.replace('-', "_"),
                    params,
                    allow_indeterminate: check.allow_indeterminate,
                });
            }
        }
        Ok(out)
    }
}

fn scalar(key: &str, v: &toml::Value) -> Result<String> {
    match v {
        toml::Value::String(s) => Ok(s.clone()),
        toml::Value::Integer(i) => Ok(i.to_string()),
        toml::Value::Float(f) => Ok(f.to_string()),
        toml::Value::Boolean(b) => Ok(b.to_string()),
        _ => Err(LabError::param(format!("parameter `{key}` must be a string, number or boolean"))),
    }
}

fn corpus_items(c: &CorpusSpec, seed: u64, base_dir: &Path) -> Result<Vec<BTreeMap<String, String>>> {
    let param = c.param.clone().unwrap_or_else(|| if c.tuple > 1 { "families".into() } else { "f".into() });
    if c.generator == Generator::Files {
        let mut items = Vec::new();
        for file in &c.files {
            if !base_dir.join(file).is_file() {
                return Err(LabError::param(format!("family file `{file}` not found")));
            }
            items.push(BTreeMap::from([(param.clone(), format!("file({file})"))]));
        }
        return Ok(items);
    }
    let need_k = || c.k.ok_or_else(|| LabError::param("this corpus generator needs `k`"));
    let (n_min, n_max) = match (c.n_min, c.n_max) {
        (Some(a), Some(b)) if a <= b => (Some(a), b),
        (None, None) => (None, 0),
        _ => return Err(LabError::param("corpus needs both n_min ≤ n_max or neither")),
    };
    let mut items = Vec::with_capacity(c.count);
    for i in 0..c.count {
        let item_seed = child_seed(seed, i as u64);
        let mut item = BTreeMap::new();
        if let Some(lo) = n_min {
            let n = lo + (item_seed % u64::from(n_max - lo + 1)) as u32;
            item.insert("n".to_string(), n.to_string());
        }
        let exprs: Vec<String> = (0..c.tuple.max(1))
            .map(|j| {
                let s = child_seed(item_seed, u64::from(j) + 1);
                Ok(match c.generator {
                    Generator::Increasing => format!("rand_inc({s})"),
                    Generator::Intersecting => format!("rand_int({s})"),
                    Generator::Uniform => format!("rand_unif({},{s})", need_k()?),
                    Generator::IntersectingUniform => format!("slice(rand_int({s}),{})", need_k()?),
                    Generator::Files => unreachable!(),
                })
            })
            .collect::<Result<_>>()?;
        item.insert(param.clone(), exprs.join("|"));
        items.push(item);
    }
    Ok(items)
}

/// Runs every planned check (concurrently) and assembles the report with
/// records ordered by `(checker, params)`.
pub fn run_suite(spec: &SuiteSpec, base_dir: &Path) -> Result<Report> {
    let plan = spec.plan(base_dir)?;
    let ctx = spec.context(base_dir);
    let start = Instant::now();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(ctx.limits.workers.max(1))
        .build()
        .map_err(|e| LabError::param(format!("cannot start worker pool: {e}")))?;
    let mut records: Vec<Record> = pool.install(|| {
        plan.par_iter()
            .map(|p| {
                let mut r = run_check(&p.checker, p.params.clone(), &ctx)?;
                r.allow_indeterminate = p.allow_indeterminate;
                Ok(r)
            })
            .collect::<Result<_>>()
    })?;
    records.sort_by(|a, b| (&a.checker, &a.params).cmp(&(&b.checker, &b.params)));
    let record_ms = records.iter().map(|r| r.elapsed_ms).collect();
    let summary = Summary::of(&records);
    Ok(Report {
        suite: spec.name.clone(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        seed: spec.seed,
        precision_bits: spec.precision_bits,
        ok: summary.ok(),
        summary,
        records,
        timestamp: Timestamp::now(start.elapsed().as_millis() as u64, record_ms),
    })
}

/// Resolves a suite argument: a path, or the name of the built-in suite.
/// Returns the spec and the directory its relative paths refer to.
pub fn resolve_suite(arg: &str) -> Result<(SuiteSpec, PathBuf)> {
    let path = Path::new(arg);
    if !path.exists() && (arg == DEFAULT_SUITE_NAME || arg == "default") {
        return Ok((SuiteSpec::default_suite(), PathBuf::from(".")));
    }
    let spec = SuiteSpec::load(path)?;
    let dir = path.parent().map(Path::to_path_buf).unwrap_or_else(|| PathBuf::from("."));
    Ok((spec, if dir.as_os_str().is_empty() { PathBuf::from(".") } else { dir }))
}
