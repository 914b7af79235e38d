//! Runs a list of configurations on one data set and writes the artifacts.
//!
//! Layout under `output_dir`:
//!
//! ```text
//! report.json
//! run-00-spcm/memberships.csv
//! run-00-spcm/theta.csv
//! run-00-spcm/plot.svg
//! ```

use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algorithms::{AlgoConfig, Fit, Registry};
use crate::datagen::{self, MixtureSpec};
use crate::error::{Error, Result};
use crate::io::{self, LabelColumn};
use crate::plot;
use crate::types::{DataSet, RunReport};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Input {
    Csv {
        path: PathBuf,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        label_column: Option<LabelColumn>,
    },
    /// A JSON [`MixtureSpec`].
    Generator { path: PathBuf },
    Fixture {
        name: String,
        #[serde(default)]
        seed: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Emit {
    Report,
    Memberships,
    Plot,
}

impl std::str::FromStr for Emit {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "report" => Ok(Emit::Report),
            "memberships" => Ok(Emit::Memberships),
            "plot" => Ok(Emit::Plot),
            other => Err(Error::InvalidConfig(format!(
                "unknown artifact `{other}`; expected report, memberships or plot"
            ))),
        }
    }
}

fn all_artifacts() -> Vec<Emit> {
    vec![Emit::Report, Emit::Memberships, Emit::Plot]
}

fn schema_version() -> u32 {
    SCHEMA_VERSION
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default = "schema_version")]
    pub schema_version: u32,
    pub input: Input,
    pub runs: Vec<AlgoConfig>,
    pub output_dir: PathBuf,
    #[serde(default = "all_artifacts")]
    pub emit: Vec<Emit>,
}

impl ExperimentConfig {
    pub fn from_json_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(serde_json::from_str(&text)?)
    }

    /// Checks everything that can be checked without touching the disk.
    pub fn validate(&self, registry: &Registry) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::InvalidConfig(format!(
                "schema_version {} is not supported (expected {SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        if self.runs.is_empty() {
            return Err(Error::InvalidConfig("no runs configured".into()));
        }
        for run in &self.runs {
            registry.get(&run.algorithm)?;
            run.check_common()?;
        }
        if let Input::Fixture { name, .. } = &self.input {
            if !datagen::FIXTURE_NAMES.contains(&name.as_str()) {
                return Err(Error::InvalidConfig(format!("unknown fixture `{name}`")));
            }
        }
        Ok(())
    }

    fn wants(&self, e: Emit) -> bool {
        self.emit.contains(&e)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunFailure {
    pub run: usize,
    pub algorithm: String,
    pub message: String,
}

/// Contents of `report.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportFile {
    pub schema_version: u32,
    pub reports: Vec<RunReport>,
    #[serde(default)]
    pub failures: Vec<RunFailure>,
}

impl ReportFile {
    pub fn from_json_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(serde_json::from_str(&text)?)
    }
}

#[derive(Debug)]
pub struct ExperimentOutcome {
    pub reports: Vec<RunReport>,
    pub failures: Vec<(usize, Error)>,
}

impl ExperimentOutcome {
    pub fn all_succeeded(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn load_input(input: &Input) -> Result<DataSet> {
    match input {
        Input::Csv { path, label_column } => io::load_csv(path, label_column.as_ref()),
        Input::Generator { path } => {
            let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
            let spec: MixtureSpec = serde_json::from_str(&text)?;
            datagen::generate(&spec)
        }
        Input::Fixture { name, seed } => datagen::fixture(name, *seed),
    }
}

pub fn run_dir_name(index: usize, algorithm: &str) -> String {
    format!("run-{index:02}-{}", algorithm.to_ascii_lowercase())
}

fn write_artifacts(config: &ExperimentConfig, data: &DataSet, dir: &Path, fit: &Fit) -> Result<()> {
    let wants_files = config.wants(Emit::Memberships) || (config.wants(Emit::Plot) && data.dim() == 2);
    if !wants_files {
        return Ok(());
    }
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    if config.wants(Emit::Memberships) {
        io::write_memberships(dir.join("memberships.csv"), &fit.memberships)?;
        io::write_theta(dir.join("theta.csv"), &fit.model.theta)?;
    }
    if config.wants(Emit::Plot) && data.dim() == 2 {
        let svg = plot::render_svg(data, &fit.model.theta, &fit.model.gamma, &fit.report.labels_final)?;
        let path = dir.join("plot.svg");
        fs::write(&path, svg).map_err(|e| Error::io(path, e))?;
    }
    Ok(())
}

/// Validates, loads the input, runs every configuration (in parallel) and
/// writes artifacts. Setup problems are returned as `Err`; failures of
/// individual runs are collected in the outcome and in `report.json`.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentOutcome> {
    run_experiment_with(config, &Registry::with_builtins())
}

pub fn run_experiment_with(config: &ExperimentConfig, registry: &Registry) -> Result<ExperimentOutcome> {
    config.validate(registry)?;
    let data = load_input(&config.input)?;
    let out = &config.output_dir;
    fs::create_dir_all(out).map_err(|e| Error::io(out, e))?;

    let results: Vec<Result<RunReport>> = config
        .runs
        .par_iter()
        .enumerate()
        .map(|(i, run)| {
            let fit = registry.run(&data, run)?;
            write_artifacts(config, &data, &out.join(run_dir_name(i, &run.algorithm)), &fit)?;
            Ok(fit.report)
        })
        .collect();

    let mut reports = Vec::new();
    let mut failures = Vec::new();
    for (i, r) in results.into_iter().enumerate() {
        match r {
            Ok(rep) => reports.push(rep),
            Err(e) => failures.push((i, e)),
        }
    }

    if config.wants(Emit::Report) {
        let file = ReportFile {
            schema_version: SCHEMA_VERSION,
            reports: reports.clone(),
            failures: failures
                .iter()
                .map(|(i, e)| RunFailure {
                    run: *i,
                    algorithm: config.runs[*i].algorithm.clone(),
                    message: e.to_string(),
                })
                .collect(),
        };
        let path = out.join("report.json");
        let text = serde_json::to_string_pretty(&file)?;
        fs::write(&path, text).map_err(|e| Error::io(path, e))?;
    }
    Ok(ExperimentOutcome { reports, failures })
}
