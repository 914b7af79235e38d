//! Fuzzy c-means and k-means: initializers for the possibilistic runs and
//! baselines in their own right.

use ndarray::{Array1, Array2, Axis};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::types::{squared_distances, DataSet};

pub const DEFAULT_FUZZIFIER: f64 = 2.0;
pub const DEFAULT_FCM_TOL: f64 = 1e-6;
pub const DEFAULT_FCM_MAX_ITER: usize = 300;
const DEGENERATE_WEIGHT: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct FcmResult {
    pub theta: Array2<f64>,
    /// Row-stochastic memberships.
    pub u_fcm: Array2<f64>,
    pub iterations: usize,
    pub converged: bool,
}

#[derive(Debug, Clone)]
pub struct KmeansResult {
    pub theta: Array2<f64>,
    /// 1-based cluster index per point.
    pub labels: Vec<usize>,
    pub iterations: usize,
    pub converged: bool,
}

fn check_m(data: &DataSet, m: usize) -> Result<()> {
    if m == 0 || m > data.len() {
        return Err(Error::InvalidConfig(format!(
            "number of clusters must lie in 1..={}, got {m}",
            data.len()
        )));
    }
    Ok(())
}

/// `m` data points picked by a seeded shuffle, skipping exact repeats of an
/// already-picked point while enough distinct points remain.
pub(crate) fn seed_points(data: &DataSet, m: usize, seed: u64) -> Array2<f64> {
    let mut order: Vec<usize> = (0..data.len()).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut picked: Vec<usize> = Vec::with_capacity(m);
    for &i in &order {
        if picked.len() == m {
            break;
        }
        let row = data.points.row(i);
        if picked.iter().all(|&k| data.points.row(k) != row) {
            picked.push(i);
        }
    }
    // fewer distinct points than clusters: allow repeats
    for &i in &order {
        if picked.len() == m {
            break;
        }
        if !picked.contains(&i) {
            picked.push(i);
        }
    }
    data.points.select(Axis(0), &picked)
}

fn fcm_memberships(d: &Array2<f64>, fuzzifier: f64) -> Array2<f64> {
    let (n, m) = d.dim();
    let exponent = 1.0 / (fuzzifier - 1.0);
    let mut u = Array2::zeros((n, m));
    for i in 0..n {
        let row = d.row(i);
        let zeros = row.iter().filter(|&&v| v == 0.0).count();
        if zeros > 0 {
            let share = 1.0 / zeros as f64;
            for j in 0..m {
                if row[j] == 0.0 {
                    u[[i, j]] = share;
                }
            }
            continue;
        }
        // u_ij = d_ij^(-e) / sum_k d_ik^(-e), scaled by the row minimum to
        // stay clear of overflow
        let dmin = row.iter().cloned().fold(f64::INFINITY, f64::min);
        let w: Vec<f64> = row.iter().map(|&v| (dmin / v).powf(exponent)).collect();
        let total: f64 = w.iter().sum();
        for j in 0..m {
            u[[i, j]] = w[j] / total;
        }
    }
    u
}

fn weighted_means(points: &Array2<f64>, weights: &Array2<f64>, previous: &Array2<f64>) -> Array2<f64> {
    let m = weights.ncols();
    let mut theta = previous.clone();
    for j in 0..m {
        let mut num = Array1::<f64>::zeros(points.ncols());
        let mut den = 0.0;
        for (x, &w) in points.rows().into_iter().zip(weights.column(j).iter()) {
            num.scaled_add(w, &x);
            den += w;
        }
        if den > 0.0 {
            theta.row_mut(j).assign(&(num / den));
        }
    }
    theta
}

fn max_row_shift(a: &Array2<f64>, b: &Array2<f64>) -> f64 {
    a.rows()
        .into_iter()
        .zip(b.rows())
        .map(|(x, y)| crate::types::euclidean(x, y))
        .fold(0.0, f64::max)
}

/// Standard fuzzy c-means from `m` seeded data points.
pub fn run_fcm(data: &DataSet, m: usize, fuzzifier: f64, seed: u64, tol: f64, max_iter: usize) -> Result<FcmResult> {
    check_m(data, m)?;
    if !(fuzzifier > 1.0) {
        return Err(Error::InvalidConfig(format!("fuzzifier must be > 1, got {fuzzifier}")));
    }
    let mut theta = seed_points(data, m, seed);
    let mut u = fcm_memberships(&squared_distances(data, &theta)?, fuzzifier);
    let mut iterations = 0;
    let mut converged = false;
    while iterations < max_iter {
        iterations += 1;
        let w = u.mapv(|v| v.powf(fuzzifier));
        let next = weighted_means(&data.points, &w, &theta);
        let shift = max_row_shift(&next, &theta);
        theta = next;
        u = fcm_memberships(&squared_distances(data, &theta)?, fuzzifier);
        if shift < tol {
            converged = true;
            break;
        }
    }
    Ok(FcmResult {
        theta,
        u_fcm: u,
        iterations,
        converged,
    })
}

fn weighted_average_per_cluster(
    data: &DataSet,
    fcm: &FcmResult,
    transform: impl Fn(f64) -> f64,
) -> Result<Vec<f64>> {
    let d = squared_distances(data, &fcm.theta)?;
    (0..fcm.theta.nrows())
        .map(|j| {
            let mut num = 0.0;
            let mut den = 0.0;
            for i in 0..data.len() {
                let w = fcm.u_fcm[[i, j]];
                num += w * transform(d[[i, j]]);
                den += w;
            }
            if den < DEGENERATE_WEIGHT {
                return Err(Error::DegenerateCluster {
                    cluster: j,
                    reason: format!("total FCM membership {den:e}"),
                });
            }
            let value = num / den;
            if !(value > 0.0) {
                return Err(Error::DegenerateCluster {
                    cluster: j,
                    reason: "all weighted points coincide with the representative".into(),
                });
            }
            Ok(value)
        })
        .collect()
}

/// `gamma_j = B * sum_i u_ij ||x_i - theta_j||^2 / sum_i u_ij`.
pub fn gamma_init_pcm(data: &DataSet, fcm: &FcmResult, b: f64) -> Result<Vec<f64>> {
    if !(b > 0.0) {
        return Err(Error::InvalidConfig(format!("B must be > 0, got {b}")));
    }
    weighted_average_per_cluster(data, fcm, |d| b * d)
}

/// `eta_j = sum_i u_ij ||x_i - theta_j|| / sum_i u_ij`, plain distances.
pub fn eta_init_sapcm(data: &DataSet, fcm: &FcmResult) -> Result<Vec<f64>> {
    weighted_average_per_cluster(data, fcm, f64::sqrt)
}

/// Lloyd's algorithm from `m` seeded data points.
pub fn run_kmeans(data: &DataSet, m: usize, seed: u64, max_iter: usize) -> Result<KmeansResult> {
    check_m(data, m)?;
    let n = data.len();
    let mut theta = seed_points(data, m, seed);
    let mut labels = vec![0usize; n];
    let mut iterations = 0;
    let mut converged = false;
    while iterations < max_iter {
        iterations += 1;
        let d = squared_distances(data, &theta)?;
        let mut changed = false;
        for i in 0..n {
            let row = d.row(i);
            let mut best = 0;
            for j in 1..m {
                if row[j] < row[best] {
                    best = j;
                }
            }
            if labels[i] != best + 1 {
                labels[i] = best + 1;
                changed = true;
            }
        }
        // re-seed empty clusters from the point farthest from its centroid
        let mut counts = vec![0usize; m];
        for &l in &labels {
            counts[l - 1] += 1;
        }
        for j in 0..m {
            if counts[j] > 0 {
                continue;
            }
            let far = (0..n)
                .filter(|&i| counts[labels[i] - 1] > 1)
                .max_by(|&a, &b| d[[a, labels[a] - 1]].total_cmp(&d[[b, labels[b] - 1]]))
                .expect("m <= N leaves a donor cluster");
            counts[labels[far] - 1] -= 1;
            labels[far] = j + 1;
            counts[j] = 1;
            changed = true;
        }
        let mut one_hot = Array2::zeros((n, m));
        for (i, &l) in labels.iter().enumerate() {
            one_hot[[i, l - 1]] = 1.0;
        }
        theta = weighted_means(&data.points, &one_hot, &theta);
        if !changed {
            converged = true;
            break;
        }
    }
    Ok(KmeansResult {
        theta,
        labels,
        iterations,
        converged,
    })
}
