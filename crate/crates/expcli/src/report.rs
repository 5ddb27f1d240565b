//! Report rows and their CSV / JSONL emission.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::Value;

/// One bound or property, with both sides recorded.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundCheck {
    pub name: String,
    pub formula: String,
    pub lhs: f64,
    pub rhs: f64,
    pub pass: bool,
    /// Hard checks decide the exit status.
    pub hard: bool,
}

impl BoundCheck {
    /// `lhs <= rhs`, compared without slack.
    pub fn le(name: &str, formula: &str, lhs: f64, rhs: f64, hard: bool) -> Self {
        Self::new(name, formula, lhs, rhs, lhs <= rhs, hard)
    }

    /// A check decided elsewhere (usually exactly), with the two sides for display.
    pub fn new(name: &str, formula: &str, lhs: f64, rhs: f64, pass: bool, hard: bool) -> Self {
        BoundCheck {
            name: name.to_string(),
            formula: formula.to_string(),
            lhs,
            rhs,
            pass,
            hard,
        }
    }

    /// A yes/no property: `lhs` is 1 when it holds, `rhs` is the required 1.
    pub fn holds(name: &str, formula: &str, pass: bool, hard: bool) -> Self {
        Self::new(name, formula, pass as u8 as f64, 1.0, pass, hard)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ReportRow {
    pub trial: usize,
    pub seed: u64,
    pub values: BTreeMap<String, Value>,
    pub checks: Vec<BoundCheck>,
    /// Conditions such as `inexact` (solver budget exhausted) or `statistical-failure`.
    pub flags: Vec<String>,
    #[serde(skip)]
    pub wall_ms: f64,
}

impl ReportRow {
    pub fn new(trial: usize, seed: u64) -> Self {
        ReportRow {
            trial,
            seed,
            values: BTreeMap::new(),
            checks: Vec::new(),
            flags: Vec::new(),
            wall_ms: 0.0,
        }
    }

    pub fn set(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.values.insert(key.to_string(), value.into());
        self
    }

    pub fn check(&mut self, c: BoundCheck) -> &mut Self {
        self.checks.push(c);
        self
    }

    pub fn flag(&mut self, f: &str) -> &mut Self {
        if !self.flags.iter().any(|x| x == f) {
            self.flags.push(f.to_string());
        }
        self
    }

    pub fn has_flag(&self, f: &str) -> bool {
        self.flags.iter().any(|x| x == f)
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.values.get(key)
    }

    pub fn get_f64(&self, key: &str) -> Option<f64> {
        self.values.get(key).and_then(Value::as_f64)
    }

    pub fn check_named(&self, name: &str) -> Option<&BoundCheck> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// All hard checks pass.
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass || !c.hard)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub experiment: String,
    pub rows: Vec<ReportRow>,
    /// Checks over all rows together.
    pub summary: Vec<BoundCheck>,
}

impl Report {
    pub fn new(experiment: &str, mut rows: Vec<ReportRow>) -> Self {
        rows.sort_by_key(|r| r.trial);
        Report {
            experiment: experiment.to_string(),
            rows,
            summary: Vec::new(),
        }
    }

    pub fn failed(&self) -> bool {
        self.rows.iter().any(|r| !r.passed()) || self.summary.iter().any(|c| c.hard && !c.pass)
    }

    /// Failed hard checks as `(trial, check)`; summary checks have no trial.
    pub fn failures(&self) -> Vec<(Option<usize>, &BoundCheck)> {
        let rows = self
            .rows
            .iter()
            .flat_map(|r| r.checks.iter().filter(|c| c.hard && !c.pass).map(move |c| (Some(r.trial), c)));
        let summary = self.summary.iter().filter(|c| c.hard && !c.pass).map(|c| (None, c));
        rows.chain(summary).collect()
    }

    pub fn count_passing(&self, check: &str) -> (usize, usize) {
        let mut pass = 0;
        let mut total = 0;
        for c in self.rows.iter().flat_map(|r| r.checks.iter()).filter(|c| c.name == check) {
            total += 1;
            pass += c.pass as usize;
        }
        (pass, total)
    }

    /// One JSON object per row, then one line holding the summary checks.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for row in &self.rows {
            out += &serde_json::to_string(row).expect("rows serialize");
            out.push('\n');
        }
        out += &serde_json::to_string(&serde_json::json!({ "summary": self.summary })).expect("summary serializes");
        out.push('\n');
        out
    }

    /// Columns: trial, seed, every value key, then `lhs`, `rhs`, `pass` per check name, then flags.
    pub fn to_csv(&self) -> Result<String> {
        let keys: BTreeSet<&str> = self.rows.iter().flat_map(|r| r.values.keys().map(String::as_str)).collect();
        let mut checks: Vec<&str> = Vec::new();
        for c in self.rows.iter().flat_map(|r| r.checks.iter()) {
            if !checks.contains(&c.name.as_str()) {
                checks.push(&c.name);
            }
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header: Vec<String> = vec!["trial".into(), "seed".into()];
        header.extend(keys.iter().map(|k| k.to_string()));
        for c in &checks {
            header.extend([format!("{c}.lhs"), format!("{c}.rhs"), format!("{c}.pass")]);
        }
        header.push("flags".into());
        w.write_record(&header)?;
        for row in &self.rows {
            let mut rec = vec![row.trial.to_string(), row.seed.to_string()];
            rec.extend(keys.iter().map(|k| row.values.get(*k).map(cell).unwrap_or_default()));
            for name in &checks {
                match row.check_named(name) {
                    Some(c) => rec.extend([c.lhs.to_string(), c.rhs.to_string(), c.pass.to_string()]),
                    None => rec.extend([String::new(), String::new(), String::new()]),
                }
            }
            rec.push(row.flags.join(";"));
            w.write_record(&rec)?;
        }
        Ok(String::from_utf8(w.into_inner()?)?)
    }

    /// Wall times, kept apart from the deterministic files.
    pub fn timings_csv(&self) -> String {
        let mut out = String::from("trial,wall_ms\n");
        for r in &self.rows {
            out += &format!("{},{:.3}\n", r.trial, r.wall_ms);
        }
        out
    }

    /// Write `<experiment>.csv`, `<experiment>.jsonl` and `<experiment>.timings.csv` into `dir`.
    pub fn write(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        let files = [
            (format!("{}.csv", self.experiment), self.to_csv()?),
            (format!("{}.jsonl", self.experiment), self.to_jsonl()),
            (format!("{}.timings.csv", self.experiment), self.timings_csv()),
        ];
        let mut paths = Vec::new();
        for (name, body) in files {
            let path = dir.join(name);
            fs::write(&path, body).with_context(|| format!("writing {}", path.display()))?;
            paths.push(path);
        }
        Ok(paths)
    }

    /// Human-readable digest: per check name, passes out of total.
    pub fn digest(&self) -> String {
        let mut seen: Vec<&str> = Vec::new();
        for c in self.rows.iter().flat_map(|r| r.checks.iter()) {
            if !seen.contains(&c.name.as_str()) {
                seen.push(&c.name);
            }
        }
        let mut out = format!("{}: {} rows\n", self.experiment, self.rows.len());
        for name in seen {
            let (p, t) = self.count_passing(name);
            let formula = self
                .rows
                .iter()
                .flat_map(|r| r.checks.iter())
                .find(|c| c.name == name)
                .map(|c| c.formula.as_str())
                .unwrap_or("");
            out += &format!("  {name}: {p}/{t} pass  [{formula}]\n");
        }
        for c in &self.summary {
            out += &format!(
                "  {}: {} (lhs {}, rhs {})  [{}]\n",
                c.name,
                if c.pass { "pass" } else { "FAIL" },
                c.lhs,
                c.rhs,
                c.formula
            );
        }
        let flagged = self.rows.iter().filter(|r| !r.flags.is_empty()).count();
        if flagged > 0 {
            out += &format!("  flagged rows: {flagged}\n");
        }
        out
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}
