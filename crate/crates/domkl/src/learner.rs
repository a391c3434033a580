//! Per-learner update rules.
//!
//! Each learner j keeps, for every kernel p, a model θ and a dual
//! variable λ̂ (the sum of its incident edge duals), plus one scalar
//! loss accumulator per kernel that drives multiplicative kernel
//! weighting.
//!
//! On observing (x, y) with features z = z_p(x), learner j solves
//!
//! θ⁺ = argmin_θ ℒ(θᵀz, y) + λ̂ᵀθ
//!        + (ρ/2) Σ_{i∈N_j} ‖θ − (θ_j + θ_i)/2‖²
//!        + (η/2) ‖θ − θ_j‖²
//!
//! then updates the dual from the *new* neighbour models:
//!
//! λ̂⁺ = λ̂ + (ρ/2) Σ_{i∈N_j} (θ⁺_j − θ⁺_i).
//!
//! For the regularized quadratic loss the stationarity condition is
//! the linear system (2zzᵀ + cI)θ = b with c = 2λ + η + ρ|N_j| and
//! b = 2yz + ηθ_j + ργ̂ − λ̂ where γ̂ = Σ_i (θ_j + θ_i)/2, solved in
//! O(dim) by the Sherman–Morrison identity. Other convex losses go
//! through backtracking gradient descent.

use std::collections::BTreeMap;

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::losses::ConvexLoss;

/// Iteration cap for the iterative update path.
pub const GENERIC_MAX_ITERS: usize = 10_000;
/// Gradient-norm tolerance for the iterative update path.
pub const GENERIC_TOLERANCE: f64 = 1e-8;

/// Per-kernel model state.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelModel {
    /// Model weights θ over the kernel's random features.
    pub theta: DVector<f64>,
    /// Aggregated dual variable λ̂ (sum over incident edges).
    pub dual: DVector<f64>,
    /// Accumulated loss Σ_τ ℒ(f̂(x_τ), y_τ) for this kernel.
    pub loss_sum: f64,
}

impl KernelModel {
    pub fn zeros(feature_dim: usize) -> Self {
        KernelModel {
            theta: DVector::zeros(feature_dim),
            dual: DVector::zeros(feature_dim),
            loss_sum: 0.0,
        }
    }
}

/// Full state of one learner.
#[derive(Debug, Clone, PartialEq)]
pub struct LearnerState {
    pub id: usize,
    /// One model per dictionary kernel.
    pub models: Vec<KernelModel>,
    /// Kernel combination weights q, on the probability simplex.
    pub weights: Vec<f64>,
    /// Log-domain messages last received, keyed by sender. Empty
    /// unless the message-passing weight scheme is active; missing
    /// senders count as the all-ones message (log 0).
    pub messages: BTreeMap<usize, Vec<f64>>,
}

impl LearnerState {
    /// Zero models and uniform weights.
    pub fn new(id: usize, num_kernels: usize, feature_dim: usize) -> Self {
        LearnerState {
            id,
            models: (0..num_kernels)
                .map(|_| KernelModel::zeros(feature_dim))
                .collect(),
            weights: vec![1.0 / num_kernels as f64; num_kernels],
            messages: BTreeMap::new(),
        }
    }

    pub fn num_kernels(&self) -> usize {
        self.models.len()
    }
}

fn check_dims(name: &str, got: usize, expected: usize) -> Result<()> {
    if got != expected {
        return Err(Error::Input(format!(
            "{name} has dimension {got}, expected {expected}"
        )));
    }
    Ok(())
}

/// γ̂ = Σ_{i∈N} (θ_own + θ_i)/2, the sum of edge midpoints the
/// consensus penalty pulls toward. Empty neighbourhoods give the
/// zero vector.
pub fn gamma(own_theta: &DVector<f64>, neighbor_thetas: &[&DVector<f64>]) -> Result<DVector<f64>> {
    let mut g = DVector::zeros(own_theta.len());
    for nb in neighbor_thetas {
        check_dims("neighbor model", nb.len(), own_theta.len())?;
        g += (own_theta + *nb) * 0.5;
    }
    Ok(g)
}

/// Closed-form model update for the regularized quadratic loss.
///
/// Solves (2zzᵀ + cI)θ = b exactly via Sherman–Morrison:
/// θ = (b − 2(zᵀb)/(c + 2‖z‖²) z) / c.
#[allow(clippy::too_many_arguments)]
pub fn local_update_quadratic(
    z: &DVector<f64>,
    y: f64,
    theta_prev: &DVector<f64>,
    dual: &DVector<f64>,
    gamma: &DVector<f64>,
    degree: usize,
    rho: f64,
    eta: f64,
    reg: f64,
) -> Result<DVector<f64>> {
    let dim = z.len();
    check_dims("model", theta_prev.len(), dim)?;
    check_dims("dual", dual.len(), dim)?;
    check_dims("gamma", gamma.len(), dim)?;
    if !y.is_finite() {
        return Err(Error::Input(format!("label must be finite, got {y}")));
    }
    for &(v, name) in &[(rho, "rho"), (eta, "eta"), (reg, "reg")] {
        if !v.is_finite() || v < 0.0 {
            return Err(Error::Config(format!(
                "{name} must be finite and non-negative, got {v}"
            )));
        }
    }
    let c = 2.0 * reg + eta + rho * degree as f64;
    if c <= 0.0 {
        return Err(Error::Config(
            "update is singular: 2·reg + eta + rho·degree must be positive".into(),
        ));
    }
    let b = z * (2.0 * y) + theta_prev * eta + gamma * rho - dual;
    let ztb = z.dot(&b);
    let denom = c + 2.0 * z.norm_squared();
    let theta = (b - z * (2.0 * ztb / denom)) / c;
    if theta.iter().any(|v| !v.is_finite()) {
        return Err(Error::Numeric("model update produced non-finite values".into()));
    }
    Ok(theta)
}

/// Iterative model update for any [`ConvexLoss`]: backtracking
/// gradient descent on the full objective, started from θ_prev,
/// run until the gradient norm falls below [`GENERIC_TOLERANCE`].
#[allow(clippy::too_many_arguments)]
pub fn local_update_generic(
    loss: &dyn ConvexLoss,
    z: &DVector<f64>,
    y: f64,
    theta_prev: &DVector<f64>,
    dual: &DVector<f64>,
    gamma: &DVector<f64>,
    degree: usize,
    rho: f64,
    eta: f64,
) -> Result<DVector<f64>> {
    let dim = z.len();
    check_dims("model", theta_prev.len(), dim)?;
    check_dims("dual", dual.len(), dim)?;
    check_dims("gamma", gamma.len(), dim)?;
    if !y.is_finite() {
        return Err(Error::Input(format!("label must be finite, got {y}")));
    }
    let deg = degree as f64;
    // Objective up to a θ-independent constant: the consensus sum
    // Σ_i ‖θ − m_i‖² expands to |N|‖θ‖² − 2θᵀγ + Σ‖m_i‖².
    let objective = |theta: &DVector<f64>| -> f64 {
        loss.loss(theta, z, y)
            + dual.dot(theta)
            + 0.5 * rho * (deg * theta.norm_squared() - 2.0 * theta.dot(gamma))
            + 0.5 * eta * (theta - theta_prev).norm_squared()
    };
    let grad = |theta: &DVector<f64>| -> DVector<f64> {
        loss.gradient(theta, z, y)
            + dual
            + (theta * deg - gamma) * rho
            + (theta - theta_prev) * eta
    };

    let mut theta = theta_prev.clone();
    let mut value = objective(&theta);
    for iter in 0..GENERIC_MAX_ITERS {
        let g = grad(&theta);
        let gnorm = g.norm();
        if !gnorm.is_finite() {
            return Err(Error::Numeric(
                "gradient became non-finite during model update".into(),
            ));
        }
        if gnorm <= GENERIC_TOLERANCE {
            return Ok(theta);
        }
        // Armijo backtracking along −g.
        let mut step = 1.0;
        loop {
            let candidate = &theta - &g * step;
            let candidate_value = objective(&candidate);
            if candidate_value <= value - 1e-4 * step * gnorm * gnorm {
                theta = candidate;
                value = candidate_value;
                break;
            }
            step *= 0.5;
            if step < 1e-18 {
                return Err(Error::NonConvergence {
                    iterations: iter,
                    gradient_norm: gnorm,
                });
            }
        }
    }
    let gnorm = grad(&theta).norm();
    if gnorm <= GENERIC_TOLERANCE {
        Ok(theta)
    } else {
        Err(Error::NonConvergence {
            iterations: GENERIC_MAX_ITERS,
            gradient_norm: gnorm,
        })
    }
}

/// Dual update λ̂⁺ = λ̂ + (ρ/2) Σ_i (θ⁺_own − θ⁺_i), applied after
/// every learner has refreshed its model. Summing λ̂ over the network
/// stays at zero because paired edge terms cancel.
pub fn dual_update(
    dual: &DVector<f64>,
    own_theta_new: &DVector<f64>,
    neighbor_thetas_new: &[&DVector<f64>],
    rho: f64,
) -> Result<DVector<f64>> {
    check_dims("dual", dual.len(), own_theta_new.len())?;
    let mut acc = DVector::zeros(own_theta_new.len());
    for nb in neighbor_thetas_new {
        check_dims("neighbor model", nb.len(), own_theta_new.len())?;
        acc += own_theta_new - *nb;
    }
    Ok(dual + acc * (0.5 * rho))
}

/// Log-domain Hedge exponent −L/η_g for an accumulated loss L.
pub fn hedge_local_exponent(loss_sum: f64, eta_g: f64) -> Result<f64> {
    if !eta_g.is_finite() || eta_g <= 0.0 {
        return Err(Error::Config(format!(
            "eta_g must be finite and positive, got {eta_g}"
        )));
    }
    if !loss_sum.is_finite() {
        return Err(Error::Numeric(format!(
            "accumulated loss must be finite, got {loss_sum}"
        )));
    }
    Ok(-loss_sum / eta_g)
}

/// Normalizes log-domain scores into simplex weights,
/// q_p ∝ exp(s_p), stabilized by subtracting the maximum score.
pub fn combine_log_weights(scores: &[f64]) -> Result<Vec<f64>> {
    if scores.is_empty() {
        return Err(Error::Input("cannot combine an empty weight set".into()));
    }
    if scores.iter().any(|s| !s.is_finite()) {
        return Err(Error::Numeric("non-finite weight exponent".into()));
    }
    let m = scores.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = scores.iter().map(|s| (s - m).exp()).collect();
    let total: f64 = exps.iter().sum();
    Ok(exps.iter().map(|e| e / total).collect())
}

/// Hedge weights from combined accumulated losses (own plus
/// neighbours'): q_p ∝ exp(−L_p / η_g).
pub fn combine_weights(combined_losses: &[f64], eta_g: f64) -> Result<Vec<f64>> {
    let scores = combined_losses
        .iter()
        .map(|&l| hedge_local_exponent(l, eta_g))
        .collect::<Result<Vec<f64>>>()?;
    combine_log_weights(&scores)
}

/// Log-domain message from a learner toward one neighbour: its own
/// exponent plus all incoming messages *except* the one from the
/// target. `incoming` holds per-kernel log messages from the other
/// neighbours.
pub fn message_update(own_log_weights: &[f64], incoming: &[&[f64]]) -> Result<Vec<f64>> {
    let mut out = own_log_weights.to_vec();
    for msg in incoming {
        check_dims("incoming message", msg.len(), out.len())?;
        for (o, m) in out.iter_mut().zip(msg.iter()) {
            *o += m;
        }
    }
    Ok(out)
}

/// Combined prediction f̂(x) = Σ_p q_p θ_pᵀ z_p(x).
pub fn predict(
    weights: &[f64],
    models: &[KernelModel],
    features: &[DVector<f64>],
) -> Result<f64> {
    if weights.len() != models.len() || weights.len() != features.len() {
        return Err(Error::Input(format!(
            "prediction needs matching weights/models/features, got {}/{}/{}",
            weights.len(),
            models.len(),
            features.len()
        )));
    }
    let mut out = 0.0;
    for ((q, model), z) in weights.iter().zip(models).zip(features) {
        check_dims("features", z.len(), model.theta.len())?;
        out += q * model.theta.dot(z);
    }
    Ok(out)
}
