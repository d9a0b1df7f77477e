//! Reports: per-instance records, summaries, JSON and CSV output.
//!
//! JSON layout (top-level keys are stable):
//!
//! ```text
//! { "scenario": str, "config": ScenarioConfig,
//!   "records": [ { "id", "seed", "pass", "info", "values", "slacks", "margins", "residuals" } ],
//!   "summary": { "records", "passed", "failed", "max_violation", "worst_check", "intervals" },
//!   "walltime_ms": int }
//! ```
//!
//! `info` and `slacks` carry information quantities and are the only fields
//! rescaled when a report is emitted in bits. A record passes when every slack
//! and margin is at least `−tol` and every residual is at most `tol`.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::config::{ScenarioConfig, Units};
use crate::error::Result;

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub id: usize,
    pub seed: Option<u64>,
    pub pass: bool,
    /// Information quantities in the report's units.
    pub info: BTreeMap<String, f64>,
    /// Dimensionless values and counts.
    pub values: BTreeMap<String, f64>,
    /// Inequality slacks in the report's units; non-negative when a bound holds.
    pub slacks: BTreeMap<String, f64>,
    /// Dimensionless margins; non-negative when a check holds.
    pub margins: BTreeMap<String, f64>,
    /// Absolute residuals of identities; zero in exact arithmetic.
    pub residuals: BTreeMap<String, f64>,
}

impl Record {
    pub fn new(id: usize, seed: Option<u64>) -> Self {
        Self {
            id,
            seed,
            ..Self::default()
        }
    }

    pub fn info(&mut self, key: &str, nats: f64) -> &mut Self {
        self.info.insert(key.to_string(), nats);
        self
    }

    pub fn value(&mut self, key: &str, v: f64) -> &mut Self {
        self.values.insert(key.to_string(), v);
        self
    }

    pub fn slack(&mut self, key: &str, nats: f64) -> &mut Self {
        self.slacks.insert(key.to_string(), nats);
        self
    }

    pub fn margin(&mut self, key: &str, m: f64) -> &mut Self {
        self.margins.insert(key.to_string(), m);
        self
    }

    pub fn residual(&mut self, key: &str, r: f64) -> &mut Self {
        self.residuals.insert(key.to_string(), r);
        self
    }

    /// Largest amount by which any check misses its threshold at zero
    /// tolerance, with the check's name. Non-positive when all hold exactly.
    pub fn worst_check(&self) -> Option<(String, f64)> {
        let slacks = self.slacks.iter().map(|(k, v)| (format!("slacks.{k}"), -v));
        let margins = self.margins.iter().map(|(k, v)| (format!("margins.{k}"), -v));
        let residuals = self.residuals.iter().map(|(k, v)| (format!("residuals.{k}"), *v));
        slacks
            .chain(margins)
            .chain(residuals)
            .fold(None, |best: Option<(String, f64)>, (k, v)| match best {
                Some((_, b)) if b >= v && !v.is_nan() => best,
                _ => Some((k, v)),
            })
    }

    /// Sets `pass` from the recorded checks; non-finite entries fail.
    pub fn evaluate(&mut self, tol: f64) {
        self.pass = self.slacks.values().chain(self.margins.values()).all(|v| *v >= -tol)
            && self.residuals.values().all(|r| *r <= tol);
    }
}

/// A Monte Carlo interval attached to a record.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub record: usize,
    pub mean: f64,
    pub std_error: f64,
    /// Three standard errors.
    pub half_width: f64,
    pub target: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub records: usize,
    pub passed: usize,
    pub failed: usize,
    /// Largest amount by which any check misses its threshold at zero tolerance.
    pub max_violation: f64,
    pub worst_check: Option<String>,
    pub intervals: Vec<Interval>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub scenario: String,
    pub config: ScenarioConfig,
    pub records: Vec<Record>,
    pub summary: Summary,
    pub walltime_ms: u64,
}

impl Report {
    /// Evaluates every record against `config.tol` and builds the summary.
    pub fn finish(config: ScenarioConfig, mut records: Vec<Record>, intervals: Vec<Interval>, walltime_ms: u64) -> Self {
        let mut summary = Summary {
            records: records.len(),
            intervals,
            max_violation: f64::NEG_INFINITY,
            ..Summary::default()
        };
        for r in records.iter_mut() {
            r.evaluate(config.tol);
            if r.pass {
                summary.passed += 1;
            } else {
                summary.failed += 1;
            }
            if let Some((name, v)) = r.worst_check() {
                if v > summary.max_violation || v.is_nan() {
                    summary.max_violation = v;
                    summary.worst_check = Some(format!("{}:{name}", r.id));
                }
            }
        }
        if summary.worst_check.is_none() {
            summary.max_violation = 0.0;
        }
        Report {
            scenario: config.name.clone(),
            config,
            records,
            summary,
            walltime_ms,
        }
    }

    pub fn all_passed(&self) -> bool {
        self.summary.failed == 0
    }

    /// Copy with information fields expressed in `config.units`.
    pub fn in_display_units(&self) -> Report {
        let mut out = self.clone();
        if self.config.units == Units::Bits {
            let ln2 = std::f64::consts::LN_2;
            for r in out.records.iter_mut() {
                r.info.values_mut().for_each(|v| *v /= ln2);
                r.slacks.values_mut().for_each(|v| *v /= ln2);
            }
            for i in out.summary.intervals.iter_mut() {
                i.mean /= ln2;
                i.std_error /= ln2;
                i.half_width /= ln2;
                i.target /= ln2;
            }
        }
        out
    }

    /// JSON with the wall time zeroed, for reproducibility comparisons.
    pub fn canonical_json(&self) -> Result<String> {
        let mut copy = self.clone();
        copy.walltime_ms = 0;
        Ok(serde_json::to_string_pretty(&copy)?)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

impl std::str::FromStr for Format {
    type Err = crate::error::CliError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(crate::error::CliError::InvalidConfig(format!("unknown format `{other}`"))),
        }
    }
}

/// Serializes the report in display units.
pub fn render(report: &Report, format: Format) -> Result<Vec<u8>> {
    let shown = report.in_display_units();
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&shown)?;
            s.push('\n');
            Ok(s.into_bytes())
        }
        Format::Csv => render_csv(&shown),
    }
}

fn render_csv(report: &Report) -> Result<Vec<u8>> {
    let mut columns: BTreeSet<String> = BTreeSet::new();
    for r in &report.records {
        for (prefix, map) in record_maps(r) {
            columns.extend(map.keys().map(|k| format!("{prefix}.{k}")));
        }
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["id".to_string(), "seed".to_string(), "pass".to_string()];
    header.extend(columns.iter().cloned());
    w.write_record(&header)?;
    for r in &report.records {
        let mut flat: BTreeMap<String, f64> = BTreeMap::new();
        for (prefix, map) in record_maps(r) {
            flat.extend(map.iter().map(|(k, v)| (format!("{prefix}.{k}"), *v)));
        }
        let mut row = vec![
            r.id.to_string(),
            r.seed.map(|s| s.to_string()).unwrap_or_default(),
            r.pass.to_string(),
        ];
        row.extend(columns.iter().map(|c| flat.get(c).map(|v| v.to_string()).unwrap_or_default()));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(w.into_inner().map_err(|e| e.into_error())?)
}

fn record_maps(r: &Record) -> [(&'static str, &BTreeMap<String, f64>); 5] {
    [
        ("info", &r.info),
        ("values", &r.values),
        ("slacks", &r.slacks),
        ("margins", &r.margins),
        ("residuals", &r.residuals),
    ]
}

/// Writes the report to `path`, or to stdout when `path` is `None`.
pub fn emit_report(report: &Report, format: Format, path: Option<&Path>) -> Result<()> {
    let bytes = render(report, format)?;
    match path {
        Some(p) => fs::write(p, bytes)?,
        None => std::io::stdout().lock().write_all(&bytes)?,
    }
    Ok(())
}

pub fn read_report(path: &Path) -> Result<Report> {
    Ok(serde_json::from_slice(&fs::read(path)?)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        let cfg = ScenarioConfig::new("bound-chain").unwrap();
        let mut a = Record::new(0, Some(1));
        a.info("mi", 0.5).slack("holevo", 0.1).residual("dual", 1e-12);
        let mut b = Record::new(1, Some(2));
        b.info("mi", 0.25).slack("holevo", -1e-6).margin("sigma", 1.0);
        Report::finish(cfg, vec![a, b], vec![], 3)
    }

    #[test]
    fn pass_is_decided_by_checks() {
        let r = sample();
        assert!(r.records[0].pass);
        assert!(!r.records[1].pass);
        assert_eq!((r.summary.passed, r.summary.failed), (1, 1));
        assert_eq!(r.summary.max_violation, 1e-6);
        assert_eq!(r.summary.worst_check.as_deref(), Some("1:slacks.holevo"));
    }

    #[test]
    fn nan_checks_fail() {
        let mut r = Record::new(0, None);
        r.slack("x", f64::NAN);
        r.evaluate(1e-8);
        assert!(!r.pass);
    }

    #[test]
    fn json_round_trip() {
        let r = sample();
        let bytes = render(&r, Format::Json).unwrap();
        let back: Report = serde_json::from_slice(&bytes).unwrap();
        assert_eq!(back, r);
        let v: serde_json::Value = serde_json::from_slice(&bytes).unwrap();
        let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
        assert_eq!(keys, ["config", "records", "scenario", "summary", "walltime_ms"]);
    }

    #[test]
    fn bits_rescale_information_only() {
        let mut r = sample();
        r.config.units = Units::Bits;
        r.records[0].value("count", 3.0);
        let shown = r.in_display_units();
        let ln2 = std::f64::consts::LN_2;
        assert_eq!(shown.records[0].info["mi"], 0.5 / ln2);
        assert_eq!(shown.records[0].slacks["holevo"], 0.1 / ln2);
        assert_eq!(shown.records[0].values["count"], 3.0);
        assert_eq!(shown.records[0].residuals["dual"], 1e-12);
        assert_eq!(shown.records[0].pass, r.records[0].pass);
    }

    #[test]
    fn csv_has_one_row_per_record() {
        let bytes = render(&sample(), Format::Csv).unwrap();
        let text = String::from_utf8(bytes).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 3);
        assert_eq!(
            lines[0],
            "id,seed,pass,info.mi,margins.sigma,residuals.dual,slacks.holevo"
        );
        assert!(lines[2].starts_with("1,2,false,0.25,"));
    }
}
