//! Domain types shared by every algorithm, plus the squared-distance kernel.

use ndarray::{Array1, Array2, ArrayView1, Axis};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metrics::MetricReport;

/// `N` points in `l` dimensions with optional ground truth.
///
/// Truth labels are 1-based class indices; generated noise points carry
/// label `0`.
#[derive(Debug, Clone, PartialEq)]
pub struct DataSet {
    pub points: Array2<f64>,
    pub truth_labels: Option<Vec<usize>>,
    pub truth_centers: Option<Array2<f64>>,
}

impl DataSet {
    pub fn new(points: Array2<f64>) -> Result<Self> {
        let ds = DataSet {
            points,
            truth_labels: None,
            truth_centers: None,
        };
        ds.validate()?;
        Ok(ds)
    }

    pub fn with_labels(mut self, labels: Vec<usize>) -> Result<Self> {
        self.truth_labels = Some(labels);
        self.validate()?;
        Ok(self)
    }

    pub fn with_centers(mut self, centers: Array2<f64>) -> Result<Self> {
        self.truth_centers = Some(centers);
        self.validate()?;
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.points.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.points.nrows() == 0
    }

    pub fn dim(&self) -> usize {
        self.points.ncols()
    }

    /// Number of true classes: the largest label, or the number of centers.
    pub fn true_class_count(&self) -> Option<usize> {
        match (&self.truth_labels, &self.truth_centers) {
            (Some(labels), _) => labels.iter().copied().max().filter(|&m| m > 0),
            (None, Some(c)) => Some(c.nrows()),
            (None, None) => None,
        }
    }

    /// Length of the diagonal of the axis-aligned bounding box.
    pub fn bbox_diagonal(&self) -> f64 {
        let (lo, hi) = self.bounding_box();
        lo.iter()
            .zip(hi.iter())
            .map(|(a, b)| (b - a) * (b - a))
            .sum::<f64>()
            .sqrt()
    }

    pub fn bounding_box(&self) -> (Array1<f64>, Array1<f64>) {
        let lo = self
            .points
            .fold_axis(Axis(0), f64::INFINITY, |&acc, &x| acc.min(x));
        let hi = self
            .points
            .fold_axis(Axis(0), f64::NEG_INFINITY, |&acc, &x| acc.max(x));
        (lo, hi)
    }

    pub fn validate(&self) -> Result<()> {
        let (n, l) = self.points.dim();
        if n == 0 || l == 0 {
            return Err(Error::InvalidData(format!(
                "data set must have at least one point and one feature, got {n}x{l}"
            )));
        }
        if let Some((idx, _)) = self.points.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::InvalidData(format!(
                "non-finite coordinate at point {}, feature {}",
                idx / l,
                idx % l
            )));
        }
        if let Some(labels) = &self.truth_labels {
            if labels.len() != n {
                return Err(Error::DimensionMismatch(format!(
                    "{} truth labels for {n} points",
                    labels.len()
                )));
            }
        }
        if let Some(centers) = &self.truth_centers {
            if centers.ncols() != l {
                return Err(Error::DimensionMismatch(format!(
                    "truth centers have {} columns, data has {l}",
                    centers.ncols()
                )));
            }
            if let Some(labels) = &self.truth_labels {
                if let Some(&bad) = labels.iter().find(|&&c| c > centers.nrows()) {
                    return Err(Error::InvalidData(format!(
                        "truth label {bad} exceeds the {} truth centers",
                        centers.nrows()
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Representatives and the scale/sparsity parameters attached to them.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterModel {
    pub theta: Array2<f64>,
    pub gamma: Vec<f64>,
    /// Mean absolute deviations, adaptive runs only.
    pub eta: Option<Vec<f64>>,
    /// Smallest initial `eta`, fixed for the whole adaptive run.
    pub eta_hat: Option<f64>,
    pub lambda: f64,
    pub p: f64,
    pub k: f64,
    pub alpha: Option<f64>,
    pub b: f64,
}

impl ClusterModel {
    pub fn m(&self) -> usize {
        self.theta.nrows()
    }

    /// Keep only the clusters listed in `keep`, in that order.
    pub fn retain(&mut self, keep: &[usize]) {
        self.theta = self.theta.select(Axis(0), keep);
        self.gamma = keep.iter().map(|&j| self.gamma[j]).collect();
        if let Some(eta) = &self.eta {
            self.eta = Some(keep.iter().map(|&j| eta[j]).collect());
        }
    }
}

/// Dense `N x m` matrix of degrees of compatibility, exact zeros allowed.
#[derive(Debug, Clone, PartialEq)]
pub struct MembershipMatrix(pub Array2<f64>);

impl MembershipMatrix {
    pub fn zeros(n: usize, m: usize) -> Self {
        MembershipMatrix(Array2::zeros((n, m)))
    }

    pub fn n_points(&self) -> usize {
        self.0.nrows()
    }

    pub fn n_clusters(&self) -> usize {
        self.0.ncols()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[[i, j]]
    }

    pub fn row(&self, i: usize) -> ArrayView1<'_, f64> {
        self.0.row(i)
    }

    pub fn column_sums(&self) -> Array1<f64> {
        // rows are summed in index order so results are reproducible
        let mut sums = Array1::zeros(self.0.ncols());
        for row in self.0.rows() {
            sums += &row;
        }
        sums
    }

    pub fn retain_columns(&mut self, keep: &[usize]) {
        self.0 = self.0.select(Axis(1), keep);
    }

    pub fn count_zeros(&self) -> usize {
        self.0.iter().filter(|&&u| u == 0.0).count()
    }
}

/// Per-iteration working state: distances plus most-compatible bookkeeping.
#[derive(Debug, Clone)]
pub struct IterationState {
    pub d: Array2<f64>,
    /// 1-based cluster index per point, `0` when no cluster is compatible.
    pub labels: Vec<usize>,
    pub n: Vec<usize>,
    /// Mean of the most-compatible points; rows with `n[j] == 0` are zero.
    pub mu: Array2<f64>,
    pub iteration: usize,
    pub m_current: usize,
}

impl IterationState {
    pub fn new(data: &DataSet, theta: &Array2<f64>, iteration: usize) -> Result<Self> {
        let d = squared_distances(data, theta)?;
        let m = theta.nrows();
        Ok(IterationState {
            d,
            labels: vec![0; data.len()],
            n: vec![0; m],
            mu: Array2::zeros((m, data.dim())),
            iteration,
            m_current: m,
        })
    }
}

/// Trace of a single membership subproblem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MembershipSolution {
    pub u_hat: f64,
    pub f_at_u_hat: f64,
    pub root_low: Option<f64>,
    pub root_high: Option<f64>,
    pub chosen: f64,
}

/// One row of a run's iteration history.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationSummary {
    pub iteration: usize,
    pub m: usize,
    pub max_shift: f64,
    pub lambda: f64,
    pub zero_memberships: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub algorithm: String,
    pub seed: u64,
    pub m_ini: usize,
    pub m_final: usize,
    pub iterations: usize,
    pub converged: bool,
    pub wall_time: f64,
    pub theta_final: Vec<Vec<f64>>,
    pub gamma_final: Vec<f64>,
    pub labels_final: Vec<usize>,
    pub metrics: Option<MetricReport>,
    pub history: Vec<IterationSummary>,
}

/// `d[i][j] = ||x_i - theta_j||^2`.
pub fn squared_distances(data: &DataSet, theta: &Array2<f64>) -> Result<Array2<f64>> {
    squared_distances_raw(&data.points, theta)
}

pub(crate) fn squared_distances_raw(points: &Array2<f64>, theta: &Array2<f64>) -> Result<Array2<f64>> {
    if points.ncols() != theta.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "points have {} features, representatives have {}",
            points.ncols(),
            theta.ncols()
        )));
    }
    let mut d = Array2::zeros((points.nrows(), theta.nrows()));
    for (i, x) in points.rows().into_iter().enumerate() {
        for (j, t) in theta.rows().into_iter().enumerate() {
            d[[i, j]] = x
                .iter()
                .zip(t.iter())
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>();
        }
    }
    Ok(d)
}

pub(crate) fn euclidean(a: ArrayView1<'_, f64>, b: ArrayView1<'_, f64>) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

pub(crate) fn rows_to_vec(m: &Array2<f64>) -> Vec<Vec<f64>> {
    m.rows().into_iter().map(|r| r.to_vec()).collect()
}
