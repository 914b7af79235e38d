use std::collections::BTreeMap;
use std::time::Instant;

use super::adaptive;
use super::baseline;
use super::config::AlgoConfig;
use super::possibilistic::{self, Membership};
use super::Fit;
use crate::error::{Error, Result};
use crate::metrics;
use crate::types::DataSet;

/// A clustering algorithm selectable by name.
pub trait Clusterer: Send + Sync {
    fn name(&self) -> &'static str;

    fn description(&self) -> &'static str;

    /// Runs the algorithm. Timing and metrics are filled in by
    /// [`Registry::run`].
    fn fit(&self, data: &DataSet, config: &AlgoConfig) -> Result<Fit>;

    /// Hard partition scored by the metrics. Possibilistic clusterers use
    /// the scale-weighted compatibility of the final representatives, so
    /// points left with all-zero memberships are still classified.
    fn partition(&self, data: &DataSet, fit: &Fit) -> Vec<usize> {
        metrics::compatibility_labels(data, &fit.model.theta, &fit.model.gamma)
    }
}

pub struct Pcm;
pub struct Spcm;
pub struct Sapcm;
pub struct Apcm;
pub struct Fcm;
pub struct Kmeans;

impl Clusterer for Pcm {
    fn name(&self) -> &'static str {
        "pcm"
    }
    fn description(&self) -> &'static str {
        "classical possibilistic c-means, fixed scales from FCM"
    }
    fn fit(&self, data: &DataSet, config: &AlgoConfig) -> Result<Fit> {
        possibilistic::run(data, config, self.name(), Membership::Exponential)
    }
}

impl Clusterer for Spcm {
    fn name(&self) -> &'static str {
        "spcm"
    }
    fn description(&self) -> &'static str {
        "sparse possibilistic c-means (lp penalty, default K = 0.9)"
    }
    fn fit(&self, data: &DataSet, config: &AlgoConfig) -> Result<Fit> {
        possibilistic::run(data, config, self.name(), Membership::Sparse)
    }
}

impl Clusterer for Sapcm {
    fn name(&self) -> &'static str {
        "sapcm"
    }
    fn description(&self) -> &'static str {
        "sparse adaptive possibilistic c-means with cluster elimination (default K = 0.1)"
    }
    fn fit(&self, data: &DataSet, config: &AlgoConfig) -> Result<Fit> {
        adaptive::run(data, config, self.name(), true)
    }
}

impl Clusterer for Apcm {
    fn name(&self) -> &'static str {
        "apcm"
    }
    fn description(&self) -> &'static str {
        "adaptive possibilistic c-means (sapcm with lambda = 0)"
    }
    fn fit(&self, data: &DataSet, config: &AlgoConfig) -> Result<Fit> {
        adaptive::run(data, config, self.name(), false)
    }
}

impl Clusterer for Fcm {
    fn name(&self) -> &'static str {
        "fcm"
    }
    fn description(&self) -> &'static str {
        "fuzzy c-means baseline"
    }
    fn fit(&self, data: &DataSet, config: &AlgoConfig) -> Result<Fit> {
        baseline::fcm(data, config, self.name())
    }
    fn partition(&self, _: &DataSet, fit: &Fit) -> Vec<usize> {
        fit.report.labels_final.clone()
    }
}

impl Clusterer for Kmeans {
    fn name(&self) -> &'static str {
        "kmeans"
    }
    fn description(&self) -> &'static str {
        "Lloyd k-means baseline"
    }
    fn fit(&self, data: &DataSet, config: &AlgoConfig) -> Result<Fit> {
        baseline::kmeans(data, config, self.name())
    }
    fn partition(&self, _: &DataSet, fit: &Fit) -> Vec<usize> {
        fit.report.labels_final.clone()
    }
}

/// Name-keyed table of clusterers.
#[derive(Default)]
pub struct Registry {
    entries: BTreeMap<&'static str, Box<dyn Clusterer>>,
}

impl Registry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_builtins() -> Self {
        let mut r = Self::new();
        r.register(Box::new(Pcm));
        r.register(Box::new(Spcm));
        r.register(Box::new(Sapcm));
        r.register(Box::new(Apcm));
        r.register(Box::new(Fcm));
        r.register(Box::new(Kmeans));
        r
    }

    /// Adds a clusterer, replacing any previous one with the same name.
    pub fn register(&mut self, clusterer: Box<dyn Clusterer>) {
        self.entries.insert(clusterer.name(), clusterer);
    }

    pub fn get(&self, name: &str) -> Result<&dyn Clusterer> {
        self.entries
            .get(name.to_ascii_lowercase().as_str())
            .map(|b| b.as_ref())
            .ok_or_else(|| Error::UnknownAlgorithm(name.to_string()))
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.entries.keys().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = &dyn Clusterer> {
        self.entries.values().map(|b| b.as_ref())
    }

    /// Looks up `config.algorithm`, runs it, and attaches wall time and
    /// (when the data has truth labels) metrics of
    /// [`Clusterer::partition`] to the report.
    pub fn run(&self, data: &DataSet, config: &AlgoConfig) -> Result<Fit> {
        let clusterer = self.get(&config.algorithm)?;
        let start = Instant::now();
        let mut fit = clusterer.fit(data, config)?;
        fit.report.wall_time = start.elapsed().as_secs_f64();
        let labels = clusterer.partition(data, &fit);
        fit.report.metrics = metrics::evaluate(data, &fit.model.theta, &labels)?;
        Ok(fit)
    }
}
