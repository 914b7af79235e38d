//! The clustering loops, each reachable by name through [`Registry`].

pub(crate) mod adaptive;
mod baseline;
mod config;
mod ops;
mod possibilistic;
mod registry;

use ndarray::Array2;

use crate::types::{rows_to_vec, ClusterModel, IterationSummary, MembershipMatrix, RunReport};

pub use adaptive::ETA_FLOOR;
pub use config::AlgoConfig;
pub use ops::{
    adapt_eta, assign_labels, duplicate_survivors, eliminate_clusters, remove_duplicates, update_theta,
    LabelAssignment,
};
pub use registry::{Apcm, Clusterer, Fcm, Kmeans, Pcm, Registry, Sapcm, Spcm};

/// Everything a finished run produces.
#[derive(Debug, Clone)]
pub struct Fit {
    pub report: RunReport,
    /// Final memberships, one column per surviving cluster.
    pub memberships: MembershipMatrix,
    pub model: ClusterModel,
    /// Representatives before the first iteration and after each one.
    pub theta_history: Vec<Array2<f64>>,
}

impl Fit {
    #[allow(clippy::too_many_arguments)]
    pub(crate) fn new(
        name: &str,
        config: &AlgoConfig,
        model: ClusterModel,
        memberships: MembershipMatrix,
        labels: Vec<usize>,
        iterations: usize,
        converged: bool,
        history: Vec<IterationSummary>,
        theta_history: Vec<Array2<f64>>,
    ) -> Self {
        let report = RunReport {
            algorithm: name.to_string(),
            seed: config.seed,
            m_ini: config.m_ini,
            m_final: model.m(),
            iterations,
            converged,
            wall_time: 0.0,
            theta_final: rows_to_vec(&model.theta),
            gamma_final: model.gamma.clone(),
            labels_final: labels,
            metrics: None,
            history,
        };
        Fit {
            report,
            memberships,
            model,
            theta_history,
        }
    }
}

/// Runs `config.algorithm` from the built-in registry.
pub fn run(data: &crate::types::DataSet, config: &AlgoConfig) -> crate::error::Result<Fit> {
    Registry::with_builtins().run(data, config)
}

/// Classical PCM.
pub fn run_pcm(data: &crate::types::DataSet, config: &AlgoConfig) -> crate::error::Result<Fit> {
    Registry::with_builtins().run(data, &AlgoConfig { algorithm: "pcm".into(), ..config.clone() })
}

/// Sparse PCM.
pub fn run_spcm(data: &crate::types::DataSet, config: &AlgoConfig) -> crate::error::Result<Fit> {
    Registry::with_builtins().run(data, &AlgoConfig { algorithm: "spcm".into(), ..config.clone() })
}

/// Sparse adaptive PCM; `apcm` in `config.algorithm` selects the
/// `lambda = 0` mode.
pub fn run_sapcm(data: &crate::types::DataSet, config: &AlgoConfig) -> crate::error::Result<Fit> {
    let name = if config.algorithm.eq_ignore_ascii_case("apcm") { "apcm" } else { "sapcm" };
    Registry::with_builtins().run(data, &AlgoConfig { algorithm: name.into(), ..config.clone() })
}
