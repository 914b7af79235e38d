use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fcm::{DEFAULT_FCM_MAX_ITER, DEFAULT_FCM_TOL, DEFAULT_FUZZIFIER};

/// Settings for one run. `algorithm` is the registry name; knobs that an
/// algorithm does not use are ignored by it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgoConfig {
    pub algorithm: String,
    pub m_ini: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    /// Sparsity strength in `[0, 1)`. `None` means the algorithm default.
    #[serde(default, rename = "K", alias = "k", skip_serializing_if = "Option::is_none")]
    pub k: Option<f64>,
    #[serde(default = "default_p")]
    pub p: f64,
    #[serde(default = "default_b", rename = "B", alias = "b")]
    pub b: f64,
    #[serde(default = "default_theta_tol")]
    pub theta_tol: f64,
    #[serde(default = "default_max_iter")]
    pub max_iter: usize,
    #[serde(default)]
    pub seed: u64,
    /// Defaults to 1% of the data bounding-box diagonal.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub duplicate_tol: Option<f64>,
    #[serde(default = "default_fuzzifier")]
    pub fuzzifier: f64,
    #[serde(default = "default_fcm_tol")]
    pub fcm_tol: f64,
    #[serde(default = "default_fcm_max_iter")]
    pub fcm_max_iter: usize,
}

fn default_p() -> f64 {
    0.5
}
fn default_b() -> f64 {
    1.0
}
fn default_theta_tol() -> f64 {
    1e-6
}
fn default_max_iter() -> usize {
    500
}
fn default_fuzzifier() -> f64 {
    DEFAULT_FUZZIFIER
}
fn default_fcm_tol() -> f64 {
    DEFAULT_FCM_TOL
}
fn default_fcm_max_iter() -> usize {
    DEFAULT_FCM_MAX_ITER
}

impl AlgoConfig {
    pub fn new(algorithm: impl Into<String>, m_ini: usize) -> Self {
        AlgoConfig {
            algorithm: algorithm.into(),
            m_ini,
            alpha: None,
            k: None,
            p: default_p(),
            b: default_b(),
            theta_tol: default_theta_tol(),
            max_iter: default_max_iter(),
            seed: 0,
            duplicate_tol: None,
            fuzzifier: default_fuzzifier(),
            fcm_tol: default_fcm_tol(),
            fcm_max_iter: default_fcm_max_iter(),
        }
    }

    pub fn alpha(mut self, alpha: f64) -> Self {
        self.alpha = Some(alpha);
        self
    }

    pub fn k(mut self, k: f64) -> Self {
        self.k = Some(k);
        self
    }

    pub fn p(mut self, p: f64) -> Self {
        self.p = p;
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn max_iter(mut self, max_iter: usize) -> Self {
        self.max_iter = max_iter;
        self
    }

    pub(crate) fn check_common(&self) -> Result<()> {
        if self.m_ini == 0 {
            return Err(Error::InvalidConfig("m_ini must be at least 1".into()));
        }
        if !(self.p > 0.0 && self.p < 1.0) {
            return Err(Error::InvalidConfig(format!("p must lie in (0, 1), got {}", self.p)));
        }
        if !(self.b > 0.0) {
            return Err(Error::InvalidConfig(format!("B must be > 0, got {}", self.b)));
        }
        if !(self.theta_tol > 0.0) || self.max_iter == 0 {
            return Err(Error::InvalidConfig("theta_tol and max_iter must be positive".into()));
        }
        if let Some(t) = self.duplicate_tol {
            if !(t > 0.0) {
                return Err(Error::InvalidConfig(format!("duplicate_tol must be > 0, got {t}")));
            }
        }
        Ok(())
    }

    /// Effective `K`: the explicit value when allowed, else `default`.
    /// Modes without sparsity reject any nonzero value.
    pub(crate) fn resolve_k(&self, default: f64, sparse: bool) -> Result<f64> {
        match (self.k, sparse) {
            (None, _) => Ok(default),
            (Some(k), false) if k != 0.0 => Err(Error::InvalidConfig(format!(
                "{} has no sparsity term; K must be 0, got {k}",
                self.algorithm
            ))),
            (Some(k), _) if !(0.0..1.0).contains(&k) => {
                Err(Error::InvalidConfig(format!("K must lie in [0, 1), got {k}")))
            }
            (Some(k), _) => Ok(k),
        }
    }

    pub(crate) fn require_alpha(&self) -> Result<f64> {
        match self.alpha {
            Some(a) if a > 0.0 => Ok(a),
            Some(a) => Err(Error::InvalidConfig(format!("alpha must be > 0, got {a}"))),
            None => Err(Error::InvalidConfig(format!("{} requires alpha", self.algorithm))),
        }
    }
}
