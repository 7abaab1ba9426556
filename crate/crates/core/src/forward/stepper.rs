//! One IMEX step: Crank–Nicolson diffusion, Adams–Bashforth advection
//! (forward Euler on the first step), Dirichlet value `h_{n+1}` on the walls.
//!
//! The step is split into an `h`-independent part ([`PreparedStep`]) and the
//! fixed boundary response, so `omega_{n+1}(h) = base + h * response` exactly.

use crate::error::{Error, Result};
use crate::field::ops::laplacian_5pt_interior;
use crate::field::{
    advect, perp_gradient, BoundaryValue, ScalarField, SpectralSolver, VectorField,
};
use crate::forward::config::SolverConfig;
use crate::forward::pressure::recover_pressure_with;

/// Everything needed to take the next step.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowState {
    pub k: usize,
    pub t: f64,
    pub h: f64,
    pub omega: ScalarField,
    pub psi: ScalarField,
    pub u: VectorField,
    /// `u . grad omega` at the previous level, for the Adams–Bashforth history.
    pub prev_advection: Option<ScalarField>,
}

/// The part of a step that does not depend on `h_{n+1}`.
#[derive(Debug, Clone)]
pub struct PreparedStep {
    /// Step result with `h_{n+1} = 0`.
    pub base: ScalarField,
    /// Advection at the current level (None when advection is off).
    pub advection: Option<ScalarField>,
}

#[derive(Debug, Clone)]
pub struct StepOutput {
    pub omega: ScalarField,
    pub advection: Option<ScalarField>,
}

pub struct Integrator {
    cfg: SolverConfig,
    solver: SpectralSolver,
    response: ScalarField,
}

pub(crate) fn velocity(psi: &ScalarField) -> Result<VectorField> {
    let c = psi[0];
    let deviation = psi.boundary_deviation(c);
    if deviation > 1e-10 * (1.0 + psi.max_abs()) {
        return Err(Error::BoundaryNotConstant { deviation });
    }
    Ok(perp_gradient(psi))
}

impl Integrator {
    pub fn new(cfg: SolverConfig) -> Result<Self> {
        cfg.validate()?;
        let solver = SpectralSolver::with_tolerance(cfg.grid, cfg.poisson_tol);
        let zero = ScalarField::zeros(cfg.grid);
        let response = solver.solve_dirichlet(1.0, 0.5 * cfg.dt, &zero, BoundaryValue::Constant(1.0))?;
        Ok(Self { cfg, solver, response })
    }

    pub fn config(&self) -> &SolverConfig {
        &self.cfg
    }

    pub fn solver(&self) -> &SpectralSolver {
        &self.solver
    }

    /// `d omega_{n+1} / d h_{n+1}`: the same for every step.
    pub fn boundary_response(&self) -> &ScalarField {
        &self.response
    }

    pub fn stream_function(&self, omega: &ScalarField) -> Result<ScalarField> {
        self.check_grid(omega)?;
        self.solver.poisson_dirichlet(omega, BoundaryValue::Constant(0.0))
    }

    pub fn velocity(&self, psi: &ScalarField) -> Result<VectorField> {
        velocity(psi)
    }

    pub fn pressure(&self, u_curr: &VectorField, u_prev: &VectorField) -> Result<ScalarField> {
        recover_pressure_with(&self.solver, u_curr, u_prev, self.cfg.dt).map(|p| p.pressure)
    }

    fn check_grid(&self, f: &ScalarField) -> Result<()> {
        if *f.grid() != self.cfg.grid {
            return Err(Error::GridMismatch);
        }
        if !f.is_finite() {
            return Err(Error::NonFinite { what: "vorticity" });
        }
        Ok(())
    }

    pub fn initial_state(&self, omega0: &ScalarField, h0: f64) -> Result<FlowState> {
        let psi = self.stream_function(omega0)?;
        let u = self.velocity(&psi)?;
        Ok(FlowState {
            k: 0,
            t: 0.0,
            h: h0,
            omega: omega0.clone(),
            psi,
            u,
            prev_advection: None,
        })
    }

    /// Explicit half of a step from `(omega_n, u_n)`.
    pub fn prepare_from(
        &self,
        omega_n: &ScalarField,
        u_n: &VectorField,
        prev_advection: Option<&ScalarField>,
    ) -> Result<PreparedStep> {
        self.check_grid(omega_n)?;
        let dt = self.cfg.dt;
        let max_speed = u_n.max_speed();
        let limit = self.cfg.step_limit(max_speed);
        if dt > limit {
            return Err(Error::CflViolation { dt, limit, max_speed });
        }
        let lap = laplacian_5pt_interior(omega_n);
        let mut rhs = omega_n.axpy(0.5 * dt, &lap);
        let advection = if self.cfg.advection {
            let a = advect(u_n, omega_n);
            let n = match prev_advection {
                Some(prev) => a.zip_map(prev, |cur, old| 1.5 * cur - 0.5 * old),
                None => a.clone(),
            };
            rhs = rhs.axpy(-dt, &n);
            Some(a)
        } else {
            None
        };
        let base = self
            .solver
            .solve_dirichlet(1.0, 0.5 * dt, &rhs, BoundaryValue::Constant(0.0))?;
        Ok(PreparedStep { base, advection })
    }

    pub fn prepare(&self, state: &FlowState) -> Result<PreparedStep> {
        self.prepare_from(&state.omega, &state.u, state.prev_advection.as_ref())
    }

    /// `omega_{n+1}` for boundary value `h_next`.
    pub fn complete(&self, prep: &PreparedStep, h_next: f64) -> ScalarField {
        prep.base.axpy(h_next, &self.response)
    }

    /// One step from raw fields; `prev_advection` is the advection returned by
    /// the previous step, or None on the first step.
    pub fn step_vorticity(
        &self,
        omega_n: &ScalarField,
        u_n: &VectorField,
        prev_advection: Option<&ScalarField>,
        h_next: f64,
    ) -> Result<StepOutput> {
        let prep = self.prepare_from(omega_n, u_n, prev_advection)?;
        Ok(StepOutput {
            omega: self.complete(&prep, h_next),
            advection: prep.advection,
        })
    }

    /// Builds the state after a step whose new vorticity is `omega`.
    pub fn commit(&self, state: &FlowState, prep: PreparedStep, omega: ScalarField, h_next: f64) -> Result<FlowState> {
        if !omega.is_finite() {
            return Err(Error::NonFinite { what: "vorticity" });
        }
        let psi = self.stream_function(&omega)?;
        let u = self.velocity(&psi)?;
        Ok(FlowState {
            k: state.k + 1,
            t: self.cfg.time(state.k + 1),
            h: h_next,
            omega,
            psi,
            u,
            prev_advection: prep.advection,
        })
    }

    pub fn advance(&self, state: &FlowState, h_next: f64) -> Result<FlowState> {
        let prep = self.prepare(state)?;
        let omega = self.complete(&prep, h_next);
        self.commit(state, prep, omega, h_next)
    }
}
