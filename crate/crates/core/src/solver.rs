//! The per-entry membership subproblem of the sparse possibilistic cost.
//!
//! For a single point/cluster pair with squared distance `d`, scale `gamma`,
//! sparsity weight `lambda` and exponent `p in (0, 1)`, the terms of the cost
//! that depend on the membership `u` are
//!
//! ```text
//! J(u) = u d + gamma (u ln u - u) + lambda u^p,      u in [0, 1]
//! ```
//!
//! with derivative `f(u) = d + gamma ln u + lambda p u^(p-1)`. `f` is convex
//! in `u` with a unique minimum at `u_hat = [lambda p (1-p) / gamma]^(1/(1-p))`.
//! When `f(u_hat) < 0` it has two roots `u1 < u_hat < u2` in `(0, 1)`; `u2` is a
//! local minimum of `J` and beats `u = 0` exactly when
//! `u2 > (lambda (1-p) / gamma)^(1/(1-p))`. Otherwise the minimizer is `u = 0`.
//!
//! Roots are found by bisection on `s = ln u`. The map is monotone so the
//! bracket `(u_hat, 1]` is unchanged, but `f(e^s)` has slope at most `gamma`
//! to the right of `ln u_hat`, which keeps the residual small even when the
//! root sits many orders of magnitude below 1.

use ndarray::Array2;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::types::{ClusterModel, IterationState, MembershipMatrix, MembershipSolution};

pub const DEFAULT_TOL: f64 = 1e-10;
const BRACKET_WIDTH: f64 = 1e-12;
const MAX_BISECTIONS: usize = 200;

fn check_params(d: f64, gamma: f64, lambda: f64, p: f64) -> Result<()> {
    if !(d.is_finite() && d >= 0.0) {
        return Err(Error::Domain(format!("distance must be finite and >= 0, got {d}")));
    }
    if !(gamma.is_finite() && gamma > 0.0) {
        return Err(Error::Domain(format!("gamma must be finite and > 0, got {gamma}")));
    }
    if !(lambda.is_finite() && lambda >= 0.0) {
        return Err(Error::Domain(format!("lambda must be finite and >= 0, got {lambda}")));
    }
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::Domain(format!("p must lie in (0, 1), got {p}")));
    }
    Ok(())
}

/// `f(u) = d + gamma ln u + lambda p u^(p-1)`, the derivative of the
/// per-entry cost.
pub fn f_value(u: f64, d: f64, gamma: f64, lambda: f64, p: f64) -> Result<f64> {
    if !(u > 0.0) {
        return Err(Error::Domain(format!("f is undefined for u = {u}")));
    }
    Ok(f_log(u.ln(), d, gamma, lambda, p))
}

#[inline]
fn f_log(s: f64, d: f64, gamma: f64, lambda: f64, p: f64) -> f64 {
    let penalty = if lambda == 0.0 {
        0.0
    } else {
        lambda * p * ((p - 1.0) * s).exp()
    };
    d + gamma * s + penalty
}

/// The u-dependent terms of the cost for a single entry; `J(0) = 0`.
pub fn entry_objective(u: f64, d: f64, gamma: f64, lambda: f64, p: f64) -> f64 {
    if u <= 0.0 {
        return 0.0;
    }
    u * d + gamma * (u * u.ln() - u) + lambda * u.powf(p)
}

/// Stationary point of `f`. Zero when `lambda == 0`; may exceed 1.
pub fn u_hat(gamma: f64, lambda: f64, p: f64) -> f64 {
    if lambda == 0.0 {
        return 0.0;
    }
    ln_u_hat(gamma, lambda, p).exp()
}

#[inline]
fn ln_u_hat(gamma: f64, lambda: f64, p: f64) -> f64 {
    (lambda * p * (1.0 - p) / gamma).ln() / (1.0 - p)
}

/// Sparsity weight that zeroes memberships of points lying farther than
/// about `gamma_min` from the tightest cluster:
/// `lambda = K gamma_min e^(p-2) / (p (1-p))`.
pub fn compute_lambda(gamma_min: f64, p: f64, k: f64) -> f64 {
    k * gamma_min * (p - 2.0).exp() / (p * (1.0 - p))
}

/// Smallest `lambda` that forces `f(u_hat) >= 0`, and therefore `u = 0`,
/// for an entry at squared distance `d`.
pub fn sparsity_bound(d: f64, gamma: f64, p: f64) -> f64 {
    gamma / (p * (1.0 - p)) * (-1.0 - d * (1.0 - p) / gamma).exp()
}

/// Bisection on the log-membership.
#[derive(Debug, Clone, Copy)]
pub struct MembershipSolver {
    pub tol: f64,
    pub max_iter: usize,
    /// Also locate the smaller root `u1`. Not needed to pick the minimizer.
    pub lower_root: bool,
}

impl Default for MembershipSolver {
    fn default() -> Self {
        MembershipSolver {
            tol: DEFAULT_TOL,
            max_iter: MAX_BISECTIONS,
            lower_root: false,
        }
    }
}

impl MembershipSolver {
    pub fn new(tol: f64) -> Self {
        MembershipSolver {
            tol,
            ..Default::default()
        }
    }

    pub fn with_lower_root(mut self) -> Self {
        self.lower_root = true;
        self
    }

    pub fn solve(&self, d: f64, gamma: f64, lambda: f64, p: f64) -> Result<MembershipSolution> {
        check_params(d, gamma, lambda, p)?;
        if !(self.tol > 0.0) {
            return Err(Error::Domain(format!("tolerance must be > 0, got {}", self.tol)));
        }

        if lambda == 0.0 {
            // plain possibilistic update
            return Ok(MembershipSolution {
                u_hat: 0.0,
                f_at_u_hat: f64::NEG_INFINITY,
                root_low: None,
                root_high: None,
                chosen: (-d / gamma).exp(),
            });
        }

        let s_hat = ln_u_hat(gamma, lambda, p);
        // lambda p u_hat^(p-1) = gamma / (1-p) at the stationary point
        let f_hat = d + gamma * s_hat + gamma / (1.0 - p);
        let u_hat = s_hat.exp();
        let mut sol = MembershipSolution {
            u_hat,
            f_at_u_hat: f_hat,
            root_low: None,
            root_high: None,
            chosen: 0.0,
        };

        // f(1) = d + lambda p > 0, so with u_hat >= 1 f is positive on (0, 1]
        // and J is increasing there.
        if s_hat >= 0.0 || f_hat >= 0.0 {
            return Ok(sol);
        }

        let scale = d.abs() + gamma + lambda + 1.0;
        let f = |s: f64| f_log(s, d, gamma, lambda, p);
        let s_high = self.bisect(&f, s_hat, 0.0, scale)?;
        sol.root_high = Some(s_high.exp());

        if self.lower_root {
            let mut step = 1.0;
            let mut s_lo = s_hat - step;
            while f(s_lo) <= 0.0 {
                step *= 2.0;
                s_lo = s_hat - step;
                if !s_lo.is_finite() || step > 1e6 {
                    return Err(Error::Bisection {
                        lo: s_lo.exp(),
                        hi: u_hat,
                        iterations: 0,
                    });
                }
            }
            let s_low = self.bisect(&f, s_lo, s_hat, scale)?;
            sol.root_low = Some(s_low.exp());
        }

        let ln_threshold = (lambda * (1.0 - p) / gamma).ln() / (1.0 - p);
        if s_high > ln_threshold {
            sol.chosen = s_high.exp();
        }
        Ok(sol)
    }

    /// Root of a monotone `f` on `[lo, hi]` with a sign change between the
    /// ends.
    fn bisect(&self, f: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, scale: f64) -> Result<f64> {
        let f_lo_positive = f(lo) > 0.0;
        for _ in 0..self.max_iter {
            let mid = 0.5 * (lo + hi);
            let fm = f(mid);
            if fm.abs() < self.tol * scale || hi - lo < BRACKET_WIDTH {
                return Ok(mid);
            }
            if (fm > 0.0) == f_lo_positive {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Err(Error::Bisection {
            lo: lo.exp(),
            hi: hi.exp(),
            iterations: self.max_iter,
        })
    }
}

/// Global minimizer of the per-entry cost on `[0, 1]`.
pub fn solve_membership(d: f64, gamma: f64, lambda: f64, p: f64, tol: f64) -> Result<MembershipSolution> {
    MembershipSolver::new(tol).solve(d, gamma, lambda, p)
}

/// Membership matrix for the current distances and model parameters.
pub fn update_memberships(state: &IterationState, model: &ClusterModel) -> Result<MembershipMatrix> {
    memberships_from_distances(&state.d, &model.gamma, model.lambda, model.p, &MembershipSolver::default())
}

pub(crate) fn memberships_from_distances(
    d: &Array2<f64>,
    gamma: &[f64],
    lambda: f64,
    p: f64,
    solver: &MembershipSolver,
) -> Result<MembershipMatrix> {
    let (n, m) = d.dim();
    if gamma.len() != m {
        return Err(Error::DimensionMismatch(format!(
            "{} scale parameters for {m} clusters",
            gamma.len()
        )));
    }
    let rows: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|i| {
            (0..m)
                .map(|j| {
                    solver
                        .solve(d[[i, j]], gamma[j], lambda, p)
                        .map(|s| s.chosen)
                        .map_err(|e| Error::Membership {
                            point: i,
                            cluster: j,
                            source: Box::new(e),
                        })
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    let flat: Vec<f64> = rows.into_iter().flatten().collect();
    Ok(MembershipMatrix(
        Array2::from_shape_vec((n, m), flat).expect("row lengths match"),
    ))
}
