//! Sparse adaptive possibilistic clustering (and its `lambda = 0` mode).
//!
//! Each iteration, in order:
//! 1. memberships from the current `theta`, `gamma`, `lambda`;
//! 2. weighted-mean update of `theta`;
//! 3. most-compatible labels from the memberships of step 1, and removal
//!    of every cluster no point prefers;
//! 4. `eta_j` = mean distance of cluster j's points from their mean,
//!    `gamma_j = eta_hat * eta_j / alpha`, `lambda` from the new smallest
//!    `gamma`.
//!
//! `eta_hat` is the smallest initial `eta` and never changes, so
//! `gamma_j / eta_j` stays equal to `eta_hat / alpha` throughout.

use super::config::AlgoConfig;
use super::ops::{adapt_eta, assign_labels, eliminate_clusters, update_theta};
use super::Fit;
use crate::error::{Error, Result};
use crate::fcm::{eta_init_sapcm, run_fcm};
use crate::solver::{compute_lambda, memberships_from_distances, MembershipSolver};
use crate::types::{euclidean, ClusterModel, DataSet, IterationState, IterationSummary, MembershipMatrix};

/// Lower clamp for adapted `eta`, so that `gamma` stays positive for
/// singleton or coincident clusters.
pub const ETA_FLOOR: f64 = 1e-9;

fn min_of(v: &[f64]) -> f64 {
    v.iter().cloned().fold(f64::INFINITY, f64::min)
}

/// Per-iteration observation hook, called after the parameter adaptation.
pub(crate) type Observer<'a> = &'a mut dyn FnMut(&ClusterModel, &IterationState, &MembershipMatrix);

pub(crate) fn run(data: &DataSet, config: &AlgoConfig, name: &str, sparse: bool) -> Result<Fit> {
    run_observed(data, config, name, sparse, &mut |_, _, _| {})
}

pub(crate) fn run_observed(
    data: &DataSet,
    config: &AlgoConfig,
    name: &str,
    sparse: bool,
    observer: Observer<'_>,
) -> Result<Fit> {
    config.check_common()?;
    let alpha = config.require_alpha()?;
    let k = config.resolve_k(if sparse { 0.1 } else { 0.0 }, sparse)?;

    let fcm = run_fcm(data, config.m_ini, config.fuzzifier, config.seed, config.fcm_tol, config.fcm_max_iter)?;
    let eta = eta_init_sapcm(data, &fcm)?;
    let eta_hat = min_of(&eta);
    let gamma: Vec<f64> = eta.iter().map(|&e| eta_hat * e / alpha).collect();
    let lambda = compute_lambda(min_of(&gamma), config.p, k);
    let mut model = ClusterModel {
        theta: fcm.theta,
        gamma,
        eta: Some(eta),
        eta_hat: Some(eta_hat),
        lambda,
        p: config.p,
        k,
        alpha: Some(alpha),
        b: config.b,
    };

    let solver = MembershipSolver::default();
    let mut history = Vec::new();
    let mut theta_history = vec![model.theta.clone()];
    let mut iterations = 0;
    let mut converged = false;
    let mut u;
    let mut labels;

    loop {
        iterations += 1;
        let mut state = IterationState::new(data, &model.theta, iterations)?;
        let lambda_used = model.lambda;
        u = memberships_from_distances(&state.d, &model.gamma, model.lambda, model.p, &solver)?;

        let theta_prev = model.theta.clone();
        let (next, _) = update_theta(&u, data, &model.theta);
        model.theta = next;

        state.set_assignment(assign_labels(&u, data));
        let removed = eliminate_clusters(&mut state, &mut model, &mut u)?;
        let survivors: Vec<usize> = (0..theta_prev.nrows()).filter(|j| !removed.contains(j)).collect();
        let shift = survivors
            .iter()
            .enumerate()
            .map(|(new, &old)| euclidean(model.theta.row(new), theta_prev.row(old)))
            .fold(0.0, f64::max);

        let eta: Vec<f64> = adapt_eta(&state, data)?.into_iter().map(|e| e.max(ETA_FLOOR)).collect();
        model.gamma = eta.iter().map(|&e| eta_hat * e / alpha).collect();
        model.lambda = compute_lambda(min_of(&model.gamma), model.p, k);
        model.eta = Some(eta);
        labels = state.labels.clone();

        observer(&model, &state, &u);
        theta_history.push(model.theta.clone());
        history.push(IterationSummary {
            iteration: iterations,
            m: model.m(),
            max_shift: shift,
            lambda: lambda_used,
            zero_memberships: u.count_zeros(),
        });
        if shift < config.theta_tol {
            converged = true;
            break;
        }
        if iterations >= config.max_iter {
            break;
        }
    }

    if model.m() == 0 {
        return Err(Error::DegenerateRun {
            iterations,
            reason: "no clusters left".into(),
        });
    }
    Ok(Fit::new(name, config, model, u, labels, iterations, converged, history, theta_history))
}
