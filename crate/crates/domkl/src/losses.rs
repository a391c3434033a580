//! Loss functions for online model updates.
//!
//! Models are weight vectors θ over random features; predictions are
//! u = θᵀz. The regularized quadratic loss
//!
//! ℒ(θ; z, y) = (θᵀz − y)² + λ‖θ‖²
//!
//! admits a closed-form consensus update ([`crate::learner`]). Other
//! convex losses plug in through [`ConvexLoss`] and are served by the
//! iterative update path.

use nalgebra::DVector;

use crate::error::{Error, Result};

/// A convex loss θ ↦ ℒ(θ; z, y), differentiable in θ. Any learner
/// regularizer is part of the loss itself.
pub trait ConvexLoss: Send + Sync {
    fn loss(&self, theta: &DVector<f64>, z: &DVector<f64>, y: f64) -> f64;
    fn gradient(&self, theta: &DVector<f64>, z: &DVector<f64>, y: f64) -> DVector<f64>;
}

/// Squared error plus a ridge penalty on the model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadraticLoss {
    reg: f64,
}

impl QuadraticLoss {
    /// `reg` is the ridge weight λ ≥ 0.
    pub fn new(reg: f64) -> Result<Self> {
        if !reg.is_finite() || reg < 0.0 {
            return Err(Error::Config(format!(
                "regularization weight must be finite and non-negative, got {reg}"
            )));
        }
        Ok(QuadraticLoss { reg })
    }

    pub fn reg(&self) -> f64 {
        self.reg
    }

    /// (u − y)², the prediction-space part of the loss.
    pub fn squared_error(u: f64, y: f64) -> f64 {
        let r = u - y;
        r * r
    }
}

impl ConvexLoss for QuadraticLoss {
    fn loss(&self, theta: &DVector<f64>, z: &DVector<f64>, y: f64) -> f64 {
        Self::squared_error(theta.dot(z), y) + self.reg * theta.norm_squared()
    }

    fn gradient(&self, theta: &DVector<f64>, z: &DVector<f64>, y: f64) -> DVector<f64> {
        let residual = theta.dot(z) - y;
        z * (2.0 * residual) + theta * (2.0 * self.reg)
    }
}
