//! Fixed-scale possibilistic clustering: classical PCM and its sparse
//! variant. Both start from FCM representatives with `gamma` from the FCM
//! scatter; the scales never change afterwards, and neither does `lambda`.

use ndarray::Array2;

use super::config::AlgoConfig;
use super::ops::{assign_labels, duplicate_survivors, max_row_shift, update_theta};
use super::Fit;
use crate::error::{Error, Result};
use crate::fcm::{gamma_init_pcm, run_fcm};
use crate::solver::{compute_lambda, memberships_from_distances, MembershipSolver};
use crate::types::{squared_distances, ClusterModel, DataSet, IterationSummary, MembershipMatrix};

/// `u_ij = exp(-d_ij / gamma_j)`.
fn pcm_memberships(d: &Array2<f64>, gamma: &[f64]) -> MembershipMatrix {
    let mut u = d.clone();
    for mut row in u.rows_mut() {
        for (v, &g) in row.iter_mut().zip(gamma) {
            *v = (-*v / g).exp();
        }
    }
    MembershipMatrix(u)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Membership {
    Exponential,
    Sparse,
}

pub(crate) fn run(data: &DataSet, config: &AlgoConfig, name: &str, mode: Membership) -> Result<Fit> {
    config.check_common()?;
    let k = match mode {
        Membership::Exponential => config.resolve_k(0.0, false)?,
        Membership::Sparse => config.resolve_k(0.9, true)?,
    };
    let fcm = run_fcm(data, config.m_ini, config.fuzzifier, config.seed, config.fcm_tol, config.fcm_max_iter)?;
    let gamma = gamma_init_pcm(data, &fcm, config.b)?;
    let gamma_min = gamma.iter().cloned().fold(f64::INFINITY, f64::min);
    let mut model = ClusterModel {
        theta: fcm.theta,
        gamma,
        eta: None,
        eta_hat: None,
        lambda: compute_lambda(gamma_min, config.p, k),
        p: config.p,
        k,
        alpha: None,
        b: config.b,
    };

    let solver = MembershipSolver::default();
    let mut history = Vec::new();
    let mut theta_history = vec![model.theta.clone()];
    let mut converged = false;
    let mut iterations = 0;
    let mut u = MembershipMatrix::zeros(data.len(), model.m());
    let mut stale = vec![false; model.m()];

    while iterations < config.max_iter {
        iterations += 1;
        let d = squared_distances(data, &model.theta)?;
        u = match mode {
            Membership::Exponential => pcm_memberships(&d, &model.gamma),
            Membership::Sparse => memberships_from_distances(&d, &model.gamma, model.lambda, model.p, &solver)?,
        };
        let (next, next_stale) = update_theta(&u, data, &model.theta);
        if mode == Membership::Exponential {
            if let Some(j) = next_stale.iter().position(|&s| s) {
                // exp(-d/gamma) underflowed for every point
                return Err(Error::DegenerateCluster {
                    cluster: j,
                    reason: "all PCM memberships underflowed to zero".into(),
                });
            }
        }
        stale = next_stale;
        let shift = max_row_shift(&next, &model.theta);
        model.theta = next;
        theta_history.push(model.theta.clone());
        history.push(IterationSummary {
            iteration: iterations,
            m: model.m(),
            max_shift: shift,
            lambda: model.lambda,
            zero_memberships: u.count_zeros(),
        });
        if shift < config.theta_tol {
            converged = true;
            break;
        }
    }

    // clusters that lost every point are dropped before merging duplicates
    let live: Vec<usize> = (0..model.m()).filter(|&j| !stale[j]).collect();
    if live.is_empty() {
        return Err(Error::DegenerateRun {
            iterations,
            reason: "every membership column is zero".into(),
        });
    }
    model.retain(&live);
    u.retain_columns(&live);

    let tol = config.duplicate_tol.unwrap_or_else(|| 0.01 * data.bbox_diagonal());
    let keep = duplicate_survivors(&model.theta, tol);
    model.retain(&keep);
    u.retain_columns(&keep);

    let labels = assign_labels(&u, data).labels;
    Ok(Fit::new(name, config, model, u, labels, iterations, converged, history, theta_history))
}
