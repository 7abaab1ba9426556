//! Forward problem: vorticity transport with a uniform Dirichlet boundary
//! vorticity `h(t)`, velocity reconstruction, and pressure recovery.

mod config;
mod pressure;
mod stepper;
mod trajectory;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{mean, BoundaryValue, ScalarField, SpectralSolver, VectorField};

pub use config::{time_l2, BoundaryVorticity, SolverConfig, StoragePolicy, TOL_BC, TOL_L};
pub use pressure::{recover_pressure, recover_pressure_with, PressureTerms};
pub use stepper::{FlowState, Integrator, PreparedStep, StepOutput};
pub use trajectory::{NodeDiagnostics, Recorder, Snapshot, StepDiagnostics, Trajectory};

/// `psi` with `-lap psi = omega` at interior nodes and `psi = 0` on the walls.
pub fn stream_function(omega: &ScalarField) -> Result<ScalarField> {
    SpectralSolver::new(*omega.grid()).poisson_dirichlet(omega, BoundaryValue::Constant(0.0))
}

/// `u = (d psi/dy, -d psi/dx)`. Fails if `psi` is not constant on the walls.
pub fn velocity_from_stream(psi: &ScalarField) -> Result<VectorField> {
    stepper::velocity(psi)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompatibilityReport {
    /// `max |omega0 - h0|` over boundary nodes.
    pub boundary_mismatch: f64,
    pub boundary_ok: bool,
    /// `mean(omega0) - L`, when a target was supplied.
    pub mean_defect: Option<f64>,
    pub mean_ok: Option<bool>,
}

impl CompatibilityReport {
    pub fn passed(&self) -> bool {
        self.boundary_ok && self.mean_ok.unwrap_or(true)
    }
}

/// Checks `omega0 = h0` on the walls and, if given, `mean(omega0) = L`,
/// with the default tolerances [`TOL_BC`] and [`TOL_L`].
pub fn check_compatibility(omega0: &ScalarField, h0: f64, target: Option<f64>) -> CompatibilityReport {
    let boundary_mismatch = omega0.boundary_deviation(h0);
    let mean_defect = target.map(|l| mean(omega0) - l);
    CompatibilityReport {
        boundary_mismatch,
        boundary_ok: boundary_mismatch <= TOL_BC,
        mean_defect,
        mean_ok: mean_defect.map(|d| d.abs() <= TOL_L),
    }
}

/// Integrates from `omega0` with the prescribed boundary vorticity `h`.
pub fn forward_solve(omega0: &ScalarField, h: &BoundaryVorticity, cfg: &SolverConfig) -> Result<Trajectory> {
    let integrator = Integrator::new(cfg.clone())?;
    integrator.solve(omega0, h)
}

impl Integrator {
    /// Full forward run; see [`forward_solve`].
    pub fn solve(&self, omega0: &ScalarField, h: &BoundaryVorticity) -> Result<Trajectory> {
        let cfg = self.config();
        let nt = cfg.n_steps()?;
        h.check_pairing(cfg, nt)?;
        let report = check_compatibility(omega0, h.values()[0], None);
        if !report.boundary_ok {
            return Err(Error::IncompatibleInitialData {
                mismatch: report.boundary_mismatch,
            });
        }
        let mut state = self.initial_state(omega0, h.values()[0])?;
        let mut rec = Recorder::new(self, &state)?;
        for k in 1..=nt {
            state = self.advance(&state, h.values()[k])?;
            rec.push(self, &state)?;
        }
        Ok(rec.finish())
    }
}

#[cfg(test)]
mod tests;
