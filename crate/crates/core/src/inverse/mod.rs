//! Recovery of the uniform boundary vorticity `h(t)` from the initial
//! vorticity and the prescribed mean vorticity `L`.
//!
//! [`recover_projection`] enforces `mean(omega) = L` one step at a time using
//! the affinity of the step in `h`. [`landweber`] and [`levenberg_marquardt`]
//! instead solve `F(h) = L 1`, where `F` maps `h(t_1..t_Nt)` to the mean
//! vorticity at the same nodes.

mod iterative;
mod jacobian;
mod projection;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::forward::{BoundaryVorticity, Trajectory};

pub use iterative::{landweber, levenberg_marquardt, operator_norm_sq};
pub use jacobian::{forward_map, sensitivity_jacobian, BaseRun};
pub use projection::{project_h_step, recover_projection, ProjectedStep, ProjectionStepper, MIN_RESPONSE};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Method {
    Projection,
    Landweber,
    LevenbergMarquardt,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum JacobianMode {
    /// Tangent-linear integration, one column per boundary sample.
    Sensitivity,
    /// Central differences with step `fd_eps`.
    FiniteDifference,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InverseConfig {
    pub method: Method,
    /// Target mean vorticity `L`.
    pub target: f64,
    pub max_iters: usize,
    /// Landweber step; `None` uses `1 / |J|^2`.
    pub step_size: Option<f64>,
    /// Initial Levenberg–Marquardt damping.
    pub damping: f64,
    pub growth: f64,
    /// Threshold on the Euclidean norm of `F(h) - L 1`.
    pub stop_tol: f64,
    pub jacobian_mode: JacobianMode,
    pub fd_eps: f64,
}

impl InverseConfig {
    pub fn new(method: Method, target: f64) -> Self {
        Self {
            method,
            target,
            max_iters: 200,
            step_size: None,
            damping: 1e-6,
            growth: 10.0,
            stop_tol: 1e-8,
            jacobian_mode: JacobianMode::Sensitivity,
            fd_eps: 1e-4,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |v: f64, what: &str| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::InvalidConfig(format!("{what} must be positive, got {v}")))
            }
        };
        if !self.target.is_finite() {
            return Err(Error::InvalidConfig("L must be finite".into()));
        }
        if let Some(mu) = self.step_size {
            positive(mu, "step_size")?;
        }
        positive(self.damping, "damping")?;
        positive(self.stop_tol, "stop_tol")?;
        positive(self.fd_eps, "fd_eps")?;
        if !(self.growth > 1.0 && self.growth.is_finite()) {
            return Err(Error::InvalidConfig(format!("growth must exceed 1, got {}", self.growth)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InverseResult {
    pub h: BoundaryVorticity,
    pub trajectory: Trajectory,
    /// Projection: per-step `|mean(omega_k) - L|`. Iterative methods: residual
    /// norm per accepted iterate, starting with the initial guess.
    pub residual_history: Vec<f64>,
    pub converged: bool,
    pub iterations: usize,
}

/// Euclidean norm.
pub(crate) fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests;
