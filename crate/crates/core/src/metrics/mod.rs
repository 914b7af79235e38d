//! External validity indices: Rand measure, success rate (overall and per
//! true class) and mean distance from true centers to representatives.
//!
//! Predicted label `0` marks a point compatible with no cluster. It always
//! counts as an error for the success rate, and all such points form one
//! shared cluster for the Rand measure.

mod assignment;

use std::collections::HashMap;

use ndarray::{Array2, Axis};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::types::{euclidean, DataSet};

pub use assignment::min_cost_matching;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    pub rm: f64,
    pub sr: f64,
    pub sr_per_cluster: Vec<f64>,
    pub md: f64,
}

fn check_lengths(pred: &[usize], truth: &[usize]) -> Result<()> {
    if pred.len() != truth.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} predicted labels vs {} true labels",
            pred.len(),
            truth.len()
        )));
    }
    Ok(())
}

fn pairs(n: u64) -> u64 {
    n * n.saturating_sub(1) / 2
}

/// Rand index over all point pairs, in percent.
pub fn rand_measure(pred: &[usize], truth: &[usize]) -> Result<f64> {
    check_lengths(pred, truth)?;
    let n = pred.len() as u64;
    if n < 2 {
        return Ok(100.0);
    }
    let mut joint: HashMap<(usize, usize), u64> = HashMap::new();
    let mut by_pred: HashMap<usize, u64> = HashMap::new();
    let mut by_truth: HashMap<usize, u64> = HashMap::new();
    for (&p, &t) in pred.iter().zip(truth) {
        *joint.entry((p, t)).or_default() += 1;
        *by_pred.entry(p).or_default() += 1;
        *by_truth.entry(t).or_default() += 1;
    }
    let same_both: u64 = joint.values().map(|&c| pairs(c)).sum();
    let same_pred: u64 = by_pred.values().map(|&c| pairs(c)).sum();
    let same_truth: u64 = by_truth.values().map(|&c| pairs(c)).sum();
    let total = pairs(n);
    // agreements = pairs together in both + pairs apart in both
    let agree = total + 2 * same_both - same_pred - same_truth;
    Ok(100.0 * agree as f64 / total as f64)
}

/// Fraction of correctly labeled points after matching predicted clusters
/// to true classes one-to-one so as to maximize the number of hits.
///
/// Returns `(overall, per_class)` in percent; `per_class[c]` refers to true
/// class `c + 1`. Points with true label `0` are not evaluated.
pub fn success_rate(pred: &[usize], truth: &[usize], m_true: usize) -> Result<(f64, Vec<f64>)> {
    check_lengths(pred, truth)?;
    if m_true < 1 {
        return Err(Error::InvalidConfig("success rate needs at least one true class".into()));
    }
    if let Some(&bad) = truth.iter().find(|&&t| t > m_true) {
        return Err(Error::InvalidData(format!("true label {bad} exceeds m_true = {m_true}")));
    }
    let m_pred = pred.iter().copied().max().unwrap_or(0);
    let mut confusion = vec![vec![0.0f64; m_true]; m_pred];
    let mut class_size = vec![0usize; m_true];
    let mut evaluated = 0usize;
    for (&p, &t) in pred.iter().zip(truth) {
        if t == 0 {
            continue;
        }
        evaluated += 1;
        class_size[t - 1] += 1;
        if p > 0 {
            confusion[p - 1][t - 1] += 1.0;
        }
    }
    let mut hits = vec![0.0; m_true];
    if m_pred > 0 {
        let cost: Vec<Vec<f64>> = confusion.iter().map(|r| r.iter().map(|&c| -c).collect()).collect();
        for (r, c) in min_cost_matching(&cost) {
            hits[c] = confusion[r][c];
        }
    }
    let per_class = hits
        .iter()
        .zip(&class_size)
        .map(|(&h, &size)| if size == 0 { 0.0 } else { 100.0 * h / size as f64 })
        .collect();
    let overall = if evaluated == 0 {
        0.0
    } else {
        100.0 * hits.iter().sum::<f64>() / evaluated as f64
    };
    Ok((overall, per_class))
}

/// Mean distance from each true center to its representative.
///
/// With at least as many representatives as centers, centers are matched
/// one-to-one to representatives minimizing the total distance; otherwise
/// each center uses its nearest representative.
pub fn mean_distance(theta: &Array2<f64>, centers: &Array2<f64>) -> Result<f64> {
    if theta.ncols() != centers.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "representatives have {} features, centers have {}",
            theta.ncols(),
            centers.ncols()
        )));
    }
    if theta.nrows() == 0 || centers.nrows() == 0 {
        return Err(Error::InvalidData("mean distance needs at least one representative and one center".into()));
    }
    let dist: Vec<Vec<f64>> = centers
        .rows()
        .into_iter()
        .map(|c| theta.rows().into_iter().map(|t| euclidean(c, t)).collect())
        .collect();
    let total: f64 = if theta.nrows() >= centers.nrows() {
        min_cost_matching(&dist).iter().map(|&(c, t)| dist[c][t]).sum()
    } else {
        dist.iter().map(|row| row.iter().cloned().fold(f64::INFINITY, f64::min)).sum()
    };
    Ok(total / centers.nrows() as f64)
}

/// Class means of the labeled points, for data sets that ship labels but no
/// generator centers.
pub fn class_means(data: &DataSet, labels: &[usize], m_true: usize) -> Array2<f64> {
    let mut sums = Array2::<f64>::zeros((m_true, data.dim()));
    let mut counts = vec![0usize; m_true];
    for (x, &t) in data.points.axis_iter(Axis(0)).zip(labels) {
        if t > 0 {
            let mut row = sums.row_mut(t - 1);
            row += &x;
            counts[t - 1] += 1;
        }
    }
    for (mut row, &c) in sums.rows_mut().into_iter().zip(&counts) {
        if c > 0 {
            row /= c as f64;
        }
    }
    sums
}

/// Label of the nearest representative for every point (1-based; lowest
/// index on ties).
pub fn nearest_labels(data: &DataSet, theta: &Array2<f64>) -> Vec<usize> {
    data.points
        .axis_iter(Axis(0))
        .map(|x| {
            let mut best = (0, f64::INFINITY);
            for (j, t) in theta.axis_iter(Axis(0)).enumerate() {
                let d = euclidean(x, t);
                if d < best.1 {
                    best = (j + 1, d);
                }
            }
            best.0
        })
        .collect()
}

/// Label maximizing the compatibility `exp(-d_ij / gamma_j)` of each point
/// (1-based; lowest index on ties). Unlike a sparse membership row this is
/// never all zero, so every point is classified. Falls back to
/// [`nearest_labels`] unless every `gamma_j` is positive and finite.
pub fn compatibility_labels(data: &DataSet, theta: &Array2<f64>, gamma: &[f64]) -> Vec<usize> {
    if gamma.len() != theta.nrows() || gamma.iter().any(|&g| !(g > 0.0 && g.is_finite())) {
        return nearest_labels(data, theta);
    }
    data.points
        .axis_iter(Axis(0))
        .map(|x| {
            let mut best = (0, f64::INFINITY);
            for (j, t) in theta.axis_iter(Axis(0)).enumerate() {
                let diff = &x - &t;
                let score = diff.dot(&diff) / gamma[j];
                if score < best.1 {
                    best = (j + 1, score);
                }
            }
            best.0
        })
        .collect()
}

/// All indices for the given labels, or `None` when the data has no truth
/// labels.
pub fn evaluate(data: &DataSet, theta: &Array2<f64>, labels: &[usize]) -> Result<Option<MetricReport>> {
    let Some(truth) = &data.truth_labels else {
        return Ok(None);
    };
    let Some(m_true) = data.true_class_count() else {
        return Ok(None);
    };
    check_lengths(labels, truth)?;
    let (pred_eval, truth_eval): (Vec<usize>, Vec<usize>) = labels
        .iter()
        .zip(truth)
        .filter(|(_, &t)| t != 0)
        .map(|(&p, &t)| (p, t))
        .unzip();
    let rm = rand_measure(&pred_eval, &truth_eval)?;
    let (sr, sr_per_cluster) = success_rate(&pred_eval, &truth_eval, m_true)?;
    let centers = match &data.truth_centers {
        Some(c) => c.clone(),
        None => class_means(data, truth, m_true),
    };
    let md = if theta.nrows() == 0 {
        f64::NAN
    } else {
        mean_distance(theta, &centers)?
    };
    Ok(Some(MetricReport {
        rm,
        sr,
        sr_per_cluster,
        md,
    }))
}
