//! On-disk formats.
//!
//! * run logs: newline-delimited JSON, one [`RunRecord`] per line. Malformed
//!   lines are collected with their line number and loading continues;
//!   unknown fields are ignored with a warning.
//! * suite manifest, pricing table, weight profiles: TOML.
//! * expert ratings: CSV with header `rater_id,agent_id,task_id,score`.
//! * reliability task list: one task id per line, `#` starts a comment.
//!
//! The run-log schema is this crate's own; see the README for a field table.

use std::collections::{BTreeMap, HashSet};
use std::fs;
use std::io::{self, BufRead, BufReader, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{
    self, validate_dataset, AgentSummary, Domain, DomainProfile, ExpertRating, PricingTable,
    RunRecord, TaskSpec, ValidationReport, WeightProfile, WeightSet, MAX_STEPS, MIN_STEPS,
};

/// Everything needed to evaluate a cohort.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub records: Vec<RunRecord>,
    pub suite: Vec<TaskSpec>,
    pub profiles: Vec<DomainProfile>,
    pub pricing: PricingTable,
    pub weights: WeightSet,
    /// Tasks used for pass@k. Empty means "every task with repeated trials".
    pub reliability_tasks: Vec<String>,
}

impl Dataset {
    pub fn validate(&self) -> ValidationReport {
        validate_dataset(&self.records, &self.suite)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineError {
    pub line: usize,
    pub message: String,
}

/// Result of reading a run log: good records in file order plus per-line
/// errors and warnings.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunLog {
    pub records: Vec<RunRecord>,
    pub errors: Vec<LineError>,
    pub warnings: Vec<String>,
}

impl RunLog {
    fn extend(&mut self, other: RunLog) {
        self.records.extend(other.records);
        self.errors.extend(other.errors);
        self.warnings.extend(other.warnings);
    }
}

fn read_to_string(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn context(path: &Path) -> String {
    path.display().to_string()
}

pub fn parse_runs<R: Read>(reader: R) -> io::Result<RunLog> {
    let mut log = RunLog::default();
    for (i, line) in BufReader::new(reader).lines().enumerate() {
        let line = line?;
        let lineno = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        let fail = |message: String| LineError {
            line: lineno,
            message,
        };
        let value: serde_json::Value = match serde_json::from_str(&line) {
            Ok(v) => v,
            Err(e) => {
                log.errors.push(fail(e.to_string()));
                continue;
            }
        };
        let Some(obj) = value.as_object() else {
            log.errors.push(fail("expected a JSON object".into()));
            continue;
        };
        for key in obj.keys() {
            if !RunRecord::FIELDS.contains(&key.as_str()) {
                log.warnings
                    .push(format!("line {lineno}: unknown field `{key}` ignored"));
            }
        }
        match serde_json::from_value::<RunRecord>(value) {
            Ok(r) => log.records.push(r),
            Err(e) => log.errors.push(fail(e.to_string())),
        }
    }
    Ok(log)
}

pub fn load_runs(path: impl AsRef<Path>) -> Result<RunLog> {
    let path = path.as_ref();
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    parse_runs(file).map_err(|e| Error::io(path, e))
}

/// Load several logs; records keep file order, files keep argument order.
pub fn load_runs_many<P: AsRef<Path>>(paths: &[P]) -> Result<RunLog> {
    let mut all = RunLog::default();
    for p in paths {
        all.extend(load_runs(p)?);
    }
    Ok(all)
}

pub fn write_runs<W: Write>(mut out: W, records: &[RunRecord]) -> io::Result<()> {
    for r in records {
        serde_json::to_writer(&mut out, r)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

pub fn save_runs(path: impl AsRef<Path>, records: &[RunRecord]) -> Result<()> {
    let path = path.as_ref();
    let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = io::BufWriter::new(file);
    write_runs(&mut w, records)
        .and_then(|_| w.flush())
        .map_err(|e| Error::io(path, e))
}

#[derive(Debug, Serialize, Deserialize)]
struct SuiteManifest {
    domain_profiles: BTreeMap<String, BTreeMap<String, f64>>,
    #[serde(default)]
    tasks: Vec<TaskEntry>,
}

#[derive(Debug, Serialize, Deserialize)]
struct TaskEntry {
    task_id: String,
    domain: String,
    #[serde(default = "fallback_subtype")]
    subtype: String,
    step_count: u32,
}

fn fallback_subtype() -> String {
    DomainProfile::FALLBACK.to_string()
}

/// Parse a suite manifest and resolve every task's SLA.
pub fn parse_suite(text: &str) -> Result<(Vec<TaskSpec>, Vec<DomainProfile>)> {
    let manifest: SuiteManifest = toml::from_str(text).map_err(|e| Error::parse("suite", e))?;

    let mut profiles = Vec::new();
    for (name, map) in manifest.domain_profiles {
        let domain: Domain = name.parse().map_err(|m| Error::parse("suite", m))?;
        if let Some((sub, v)) = map.iter().find(|(_, v)| !(v.is_finite() && **v > 0.0)) {
            return Err(Error::parse(
                "suite",
                format!("domain `{name}` subtype `{sub}` has non-positive SLA {v}"),
            ));
        }
        profiles.push(DomainProfile {
            domain,
            sla_map: map,
        });
    }
    profiles.sort_by_key(|p| p.domain);
    if let Some(missing) = Domain::ALL
        .iter()
        .find(|d| !profiles.iter().any(|p| p.domain == **d))
    {
        return Err(Error::MissingProfile(missing.to_string()));
    }

    let mut seen = HashSet::new();
    let mut tasks = Vec::with_capacity(manifest.tasks.len());
    for t in manifest.tasks {
        let domain: Domain = t.domain.parse().map_err(|_| Error::UnknownDomain {
            task_id: t.task_id.clone(),
            domain: t.domain.clone(),
        })?;
        if !(MIN_STEPS..=MAX_STEPS).contains(&t.step_count) {
            return Err(Error::InvalidTask {
                task_id: t.task_id,
                reason: format!(
                    "step_count {} outside [{MIN_STEPS}, {MAX_STEPS}]",
                    t.step_count
                ),
            });
        }
        if !seen.insert(t.task_id.clone()) {
            return Err(Error::InvalidTask {
                task_id: t.task_id,
                reason: "duplicate task_id".into(),
            });
        }
        let sla_seconds = model::resolve_sla(&t.task_id, domain, &t.subtype, &profiles)?;
        tasks.push(TaskSpec {
            task_id: t.task_id,
            domain,
            subtype: t.subtype,
            step_count: t.step_count,
            sla_seconds,
        });
    }
    Ok((tasks, profiles))
}

pub fn load_suite(path: impl AsRef<Path>) -> Result<(Vec<TaskSpec>, Vec<DomainProfile>)> {
    let path = path.as_ref();
    parse_suite(&read_to_string(path)?).map_err(|e| match e {
        Error::Parse { message, .. } => Error::parse(context(path), message),
        other => other,
    })
}

/// Render a suite back to manifest TOML.
pub fn suite_to_toml(tasks: &[TaskSpec], profiles: &[DomainProfile]) -> String {
    let manifest = SuiteManifest {
        domain_profiles: profiles
            .iter()
            .map(|p| (p.domain.to_string(), p.sla_map.clone()))
            .collect(),
        tasks: tasks
            .iter()
            .map(|t| TaskEntry {
                task_id: t.task_id.clone(),
                domain: t.domain.to_string(),
                subtype: t.subtype.clone(),
                step_count: t.step_count,
            })
            .collect(),
    };
    toml::to_string(&manifest).expect("suite manifest serializes")
}

pub fn parse_pricing(text: &str) -> Result<PricingTable> {
    let table: PricingTable = toml::from_str(text).map_err(|e| Error::parse("pricing", e))?;
    table.validate()?;
    Ok(table)
}

pub fn load_pricing(path: impl AsRef<Path>) -> Result<PricingTable> {
    parse_pricing(&read_to_string(path.as_ref())?)
}

#[derive(Debug, Deserialize)]
struct WeightsFile {
    profiles: BTreeMap<String, WeightProfile>,
}

/// Parse named weight profiles. An `equal` profile with every weight 0.2
/// is mandatory.
pub fn parse_weights(text: &str) -> Result<WeightSet> {
    let file: WeightsFile = toml::from_str(text).map_err(|e| Error::parse("weights", e))?;
    for (name, w) in &file.profiles {
        w.validate(name)?;
    }
    let equal = file
        .profiles
        .get("equal")
        .ok_or_else(|| Error::InvalidWeights {
            name: "equal".into(),
            reason: "profile is required".into(),
        })?;
    if equal
        .as_array()
        .iter()
        .any(|w| (w - 0.2).abs() > model::SUM_TOLERANCE)
    {
        return Err(Error::InvalidWeights {
            name: "equal".into(),
            reason: "every weight must be 0.2".into(),
        });
    }
    Ok(WeightSet {
        profiles: file.profiles,
    })
}

pub fn load_weights(path: impl AsRef<Path>) -> Result<WeightSet> {
    parse_weights(&read_to_string(path.as_ref())?)
}

const RATINGS_HEADER: [&str; 4] = ["rater_id", "agent_id", "task_id", "score"];

/// Parse expert ratings. Rows are numbered from 1, excluding the header.
pub fn parse_ratings<R: Read>(reader: R) -> Result<Vec<ExpertRating>> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);
    let header = rdr.headers().map_err(|e| Error::parse("ratings", e))?;
    if header.iter().collect::<Vec<_>>() != RATINGS_HEADER {
        return Err(Error::parse(
            "ratings",
            format!("expected header `{}`", RATINGS_HEADER.join(",")),
        ));
    }
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for (i, row) in rdr.records().enumerate() {
        let row_no = i + 1;
        let row = row.map_err(|e| Error::InvalidRating {
            row: row_no,
            reason: e.to_string(),
        })?;
        let score: i64 = row[3].parse().map_err(|_| Error::InvalidRating {
            row: row_no,
            reason: format!("score `{}` is not an integer", &row[3]),
        })?;
        if !(1..=5).contains(&score) {
            return Err(Error::InvalidRating {
                row: row_no,
                reason: format!("score {score} outside 1-5"),
            });
        }
        let rating = ExpertRating {
            rater_id: row[0].to_string(),
            agent_id: row[1].to_string(),
            task_id: row[2].to_string(),
            score: score as u8,
        };
        let key = (
            rating.rater_id.clone(),
            rating.agent_id.clone(),
            rating.task_id.clone(),
        );
        if !seen.insert(key) {
            return Err(Error::DuplicateRating {
                row: row_no,
                rater: rating.rater_id,
                agent: rating.agent_id,
                task: rating.task_id,
            });
        }
        out.push(rating);
    }
    Ok(out)
}

pub fn load_ratings(path: impl AsRef<Path>) -> Result<Vec<ExpertRating>> {
    let path = path.as_ref();
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    parse_ratings(file)
}

pub fn parse_task_list(text: &str) -> Vec<String> {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .map(str::to_string)
        .collect()
}

pub fn load_task_list(path: impl AsRef<Path>) -> Result<Vec<String>> {
    Ok(parse_task_list(&read_to_string(path.as_ref())?))
}

/// Read a `summary.csv` written by the report module back into summaries.
pub fn load_summary(path: impl AsRef<Path>) -> Result<Vec<AgentSummary>> {
    let path = path.as_ref();
    crate::report::parse_summary_csv(&read_to_string(path)?)
        .map_err(|e| Error::parse(context(path), e))
}
