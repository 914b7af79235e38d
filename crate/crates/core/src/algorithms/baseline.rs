//! FCM and k-means exposed as clusterers for comparison runs.

use ndarray::Array2;

use super::config::AlgoConfig;
use super::ops::assign_labels;
use super::Fit;
use crate::error::Result;
use crate::fcm::{run_fcm, run_kmeans};
use crate::types::{squared_distances, ClusterModel, DataSet, MembershipMatrix};

/// Membership-weighted mean squared distance per cluster; zero for a
/// cluster with no weight or no spread.
fn scatter(data: &DataSet, theta: &Array2<f64>, u: &Array2<f64>) -> Result<Vec<f64>> {
    let d = squared_distances(data, theta)?;
    Ok((0..theta.nrows())
        .map(|j| {
            let den: f64 = u.column(j).sum();
            if den > 0.0 {
                u.column(j).iter().zip(d.column(j)).map(|(w, dd)| w * dd).sum::<f64>() / den
            } else {
                0.0
            }
        })
        .collect())
}

fn model_for(theta: Array2<f64>, gamma: Vec<f64>, config: &AlgoConfig) -> ClusterModel {
    ClusterModel {
        theta,
        gamma,
        eta: None,
        eta_hat: None,
        lambda: 0.0,
        p: config.p,
        k: 0.0,
        alpha: None,
        b: config.b,
    }
}

pub(crate) fn fcm(data: &DataSet, config: &AlgoConfig, name: &str) -> Result<Fit> {
    config.check_common()?;
    let r = run_fcm(data, config.m_ini, config.fuzzifier, config.seed, config.fcm_tol, config.max_iter)?;
    let gamma = scatter(data, &r.theta, &r.u_fcm)?;
    let u = MembershipMatrix(r.u_fcm);
    let labels = assign_labels(&u, data).labels;
    let history = vec![];
    let theta_history = vec![r.theta.clone()];
    Ok(Fit::new(
        name,
        config,
        model_for(r.theta, gamma, config),
        u,
        labels,
        r.iterations,
        r.converged,
        history,
        theta_history,
    ))
}

pub(crate) fn kmeans(data: &DataSet, config: &AlgoConfig, name: &str) -> Result<Fit> {
    config.check_common()?;
    let r = run_kmeans(data, config.m_ini, config.seed, config.max_iter)?;
    let mut one_hot = Array2::zeros((data.len(), config.m_ini));
    for (i, &l) in r.labels.iter().enumerate() {
        one_hot[[i, l - 1]] = 1.0;
    }
    let gamma = scatter(data, &r.theta, &one_hot)?;
    let theta_history = vec![r.theta.clone()];
    Ok(Fit::new(
        name,
        config,
        model_for(r.theta, gamma, config),
        MembershipMatrix(one_hot),
        r.labels,
        r.iterations,
        r.converged,
        vec![],
        theta_history,
    ))
}
