//! Building blocks shared by the possibilistic loops.

use ndarray::{Array1, Array2};

use crate::error::{Error, Result};
use crate::types::{euclidean, ClusterModel, DataSet, IterationState, MembershipMatrix};

/// Weighted means of the data with the membership columns as weights.
///
/// Columns whose memberships are all zero keep their previous row; the
/// returned flags mark them as stale.
pub fn update_theta(u: &MembershipMatrix, data: &DataSet, theta_prev: &Array2<f64>) -> (Array2<f64>, Vec<bool>) {
    let m = u.n_clusters();
    let mut theta = theta_prev.clone();
    let mut stale = vec![false; m];
    for j in 0..m {
        let mut num = Array1::<f64>::zeros(data.dim());
        let mut den = 0.0;
        for (x, &w) in data.points.rows().into_iter().zip(u.0.column(j).iter()) {
            if w != 0.0 {
                num.scaled_add(w, &x);
                den += w;
            }
        }
        if den > 0.0 {
            theta.row_mut(j).assign(&(num / den));
        } else {
            stale[j] = true;
        }
    }
    (theta, stale)
}

/// Most-compatible cluster per point.
#[derive(Debug, Clone, PartialEq)]
pub struct LabelAssignment {
    /// 1-based; `0` when every membership of the point is zero.
    pub labels: Vec<usize>,
    pub n: Vec<usize>,
    pub mu: Array2<f64>,
}

/// Labels each point with its most compatible cluster (lowest index on
/// ties) and collects per-cluster counts and means.
pub fn assign_labels(u: &MembershipMatrix, data: &DataSet) -> LabelAssignment {
    let m = u.n_clusters();
    let mut labels = vec![0usize; u.n_points()];
    let mut n = vec![0usize; m];
    let mut mu = Array2::<f64>::zeros((m, data.dim()));
    for (i, label) in labels.iter_mut().enumerate() {
        let row = u.row(i);
        let mut best = 0;
        for j in 1..m {
            if row[j] > row[best] {
                best = j;
            }
        }
        if m > 0 && row[best] > 0.0 {
            *label = best + 1;
            n[best] += 1;
            let mut r = mu.row_mut(best);
            r += &data.points.row(i);
        }
    }
    for (mut r, &c) in mu.rows_mut().into_iter().zip(&n) {
        if c > 0 {
            r /= c as f64;
        }
    }
    LabelAssignment { labels, n, mu }
}

impl IterationState {
    pub fn set_assignment(&mut self, a: LabelAssignment) {
        self.labels = a.labels;
        self.n = a.n;
        self.mu = a.mu;
    }
}

/// Drops every cluster that is no point's most compatible one and
/// renumbers the survivors contiguously in `state`, `model` and `u`.
///
/// Returns the removed (0-based, pre-removal) indices.
pub fn eliminate_clusters(
    state: &mut IterationState,
    model: &mut ClusterModel,
    u: &mut MembershipMatrix,
) -> Result<Vec<usize>> {
    let m = state.n.len();
    let keep: Vec<usize> = (0..m).filter(|&j| state.n[j] > 0).collect();
    let removed: Vec<usize> = (0..m).filter(|&j| state.n[j] == 0).collect();
    if keep.is_empty() {
        return Err(Error::DegenerateRun {
            iterations: state.iteration,
            reason: format!("all {m} clusters eliminated; no point has a nonzero membership"),
        });
    }
    if removed.is_empty() {
        return Ok(removed);
    }
    let mut new_index = vec![0usize; m];
    for (new, &old) in keep.iter().enumerate() {
        new_index[old] = new + 1;
    }
    for l in state.labels.iter_mut() {
        if *l > 0 {
            *l = new_index[*l - 1];
        }
    }
    state.n = keep.iter().map(|&j| state.n[j]).collect();
    state.mu = state.mu.select(ndarray::Axis(0), &keep);
    state.d = state.d.select(ndarray::Axis(1), &keep);
    state.m_current = keep.len();
    model.retain(&keep);
    u.retain_columns(&keep);
    Ok(removed)
}

/// Mean distance of each cluster's most compatible points from their mean.
pub fn adapt_eta(state: &IterationState, data: &DataSet) -> Result<Vec<f64>> {
    let m = state.n.len();
    let mut sums = vec![0.0; m];
    for (i, &l) in state.labels.iter().enumerate() {
        if l > 0 {
            sums[l - 1] += euclidean(data.points.row(i), state.mu.row(l - 1));
        }
    }
    sums.iter()
        .zip(&state.n)
        .enumerate()
        .map(|(j, (&s, &n))| {
            if n == 0 {
                Err(Error::DegenerateCluster {
                    cluster: j,
                    reason: "no most-compatible points left to adapt eta".into(),
                })
            } else {
                Ok(s / n as f64)
            }
        })
        .collect()
}

/// Indices of representatives kept after merging duplicates: rows closer
/// than `tol` are linked, each connected group keeps its lowest index.
/// Linking is transitive, so a chain of close rows collapses to one.
pub fn duplicate_survivors(theta: &Array2<f64>, tol: f64) -> Vec<usize> {
    let m = theta.nrows();
    let mut group: Vec<usize> = (0..m).collect();
    for j in 0..m {
        if group[j] != j {
            continue;
        }
        let mut stack = vec![j];
        while let Some(a) = stack.pop() {
            for b in j + 1..m {
                if group[b] == b && b != a && euclidean(theta.row(a), theta.row(b)) < tol {
                    group[b] = j;
                    stack.push(b);
                }
            }
        }
    }
    (0..m).filter(|&j| group[j] == j).collect()
}

pub fn remove_duplicates(model: &ClusterModel, duplicate_tol: f64) -> ClusterModel {
    let mut out = model.clone();
    out.retain(&duplicate_survivors(&model.theta, duplicate_tol));
    out
}

pub(crate) fn max_row_shift(a: &Array2<f64>, b: &Array2<f64>) -> f64 {
    a.rows()
        .into_iter()
        .zip(b.rows())
        .map(|(x, y)| euclidean(x, y))
        .fold(0.0, f64::max)
}
