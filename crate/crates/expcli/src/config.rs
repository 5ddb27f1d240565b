//! Experiment configuration: a flat `key = value` file plus command-line overrides.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::str::FromStr;

use anyhow::{bail, Context, Result};

/// Every experiment the runner knows.
pub const VERBS: &[&str] = &[
    "sample",
    "clique",
    "span",
    "tree",
    "hard-instance",
    "growth-sim",
    "count",
    "dimension",
    "compress",
    "check-fminus",
    "z5d-ramsey",
    "coprime6-ramsey",
    "rcoloring",
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExperimentConfig {
    pub experiment: String,
    pub group: Option<String>,
    pub sampler: Option<String>,
    pub trials: usize,
    pub seed: u64,
    /// Node budget for the clique solver; `None` solves exactly.
    pub budget: Option<u64>,
    pub workers: usize,
    pub out: Option<PathBuf>,
    pub input: Option<PathBuf>,
    /// Experiment-specific parameters.
    pub params: BTreeMap<String, String>,
}

impl ExperimentConfig {
    pub fn new(experiment: &str) -> Self {
        ExperimentConfig {
            experiment: experiment.to_string(),
            group: None,
            sampler: None,
            trials: 1,
            seed: 0,
            budget: None,
            workers: 1,
            out: None,
            input: None,
            params: BTreeMap::new(),
        }
    }

    pub fn with_group(mut self, group: &str) -> Self {
        self.group = Some(group.to_string());
        self
    }

    pub fn with_trials(mut self, trials: usize) -> Self {
        self.trials = trials;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_param(mut self, key: &str, value: impl ToString) -> Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }

    /// Parse the file form. Blank lines and `#` comments are skipped; keys
    /// other than the fixed ones become parameters.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = ExperimentConfig::new("");
        let mut seen = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                bail!("line {}: expected key = value, got {raw:?}", lineno + 1);
            };
            let (key, value) = (key.trim(), value.trim());
            if seen.insert(key.to_string(), lineno + 1).is_some() {
                bail!("line {}: duplicate key {key:?}", lineno + 1);
            }
            cfg.set(key, value).with_context(|| format!("line {}", lineno + 1))?;
        }
        if cfg.experiment.is_empty() {
            bail!("config has no experiment key");
        }
        Ok(cfg)
    }

    /// Set one key, as from a file line or a `--param` override.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        if key.is_empty() {
            bail!("empty key");
        }
        if key.contains(char::is_whitespace) || key.contains('=') {
            bail!("key {key:?} contains whitespace or '='");
        }
        match key {
            "experiment" => self.experiment = value.to_string(),
            "group" => self.group = Some(value.to_string()),
            "sampler" => self.sampler = Some(value.to_string()),
            "trials" => self.trials = parse_num(key, value)?,
            "seed" => self.seed = parse_num(key, value)?,
            "budget" => self.budget = Some(parse_num(key, value)?),
            "workers" => self.workers = parse_num(key, value)?,
            "out" => self.out = Some(PathBuf::from(value)),
            "input" => self.input = Some(PathBuf::from(value)),
            _ => {
                self.params.insert(key.to_string(), value.to_string());
            }
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("experiment = {}\n", self.experiment);
        if let Some(g) = &self.group {
            out += &format!("group = {g}\n");
        }
        if let Some(s) = &self.sampler {
            out += &format!("sampler = {s}\n");
        }
        out += &format!("trials = {}\nseed = {}\n", self.trials, self.seed);
        if let Some(b) = self.budget {
            out += &format!("budget = {b}\n");
        }
        out += &format!("workers = {}\n", self.workers);
        if let Some(p) = &self.out {
            out += &format!("out = {}\n", p.display());
        }
        if let Some(p) = &self.input {
            out += &format!("input = {}\n", p.display());
        }
        for (k, v) in &self.params {
            out += &format!("{k} = {v}\n");
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        if !VERBS.contains(&self.experiment.as_str()) {
            bail!("unknown experiment {:?} (known: {})", self.experiment, VERBS.join(", "));
        }
        if self.trials == 0 {
            bail!("trials must be at least 1");
        }
        if self.workers == 0 {
            bail!("workers must be at least 1");
        }
        Ok(())
    }

    pub fn param_str(&self, key: &str) -> Option<&str> {
        self.params.get(key).map(String::as_str)
    }

    pub fn param<T: FromStr>(&self, key: &str, default: T) -> Result<T>
    where
        T::Err: std::fmt::Display,
    {
        match self.params.get(key) {
            Some(v) => v.parse().map_err(|e| anyhow::anyhow!("parameter {key} = {v:?}: {e}")),
            None => Ok(default),
        }
    }

    /// A comma-separated list parameter.
    pub fn param_list<T: FromStr>(&self, key: &str, default: &[T]) -> Result<Vec<T>>
    where
        T: Clone,
        T::Err: std::fmt::Display,
    {
        match self.params.get(key) {
            Some(v) => v
                .split(',')
                .map(|x| x.trim().parse().map_err(|e| anyhow::anyhow!("parameter {key} item {x:?}: {e}")))
                .collect(),
            None => Ok(default.to_vec()),
        }
    }
}

fn parse_num<T: FromStr>(key: &str, value: &str) -> Result<T>
where
    T::Err: std::error::Error + Send + Sync + 'static,
{
    value.parse().with_context(|| format!("{key} = {value:?} is not a number"))
}
