use crate::error::{Error, Result};
use crate::field::{mean, ScalarField, VectorField};
use crate::forward::{FlowState, Integrator, Recorder, SolverConfig, TOL_BC, TOL_L};
use crate::inverse::InverseResult;

/// Smallest admissible `|mean(d omega_{n+1} / d h_{n+1})|`.
pub const MIN_RESPONSE: f64 = 1e-14;

#[derive(Debug, Clone)]
pub struct ProjectedStep {
    pub h: f64,
    pub omega: ScalarField,
    pub advection: Option<ScalarField>,
}

fn response_mean(integ: &Integrator) -> Result<f64> {
    let m = mean(integ.boundary_response());
    if m.abs() < MIN_RESPONSE {
        return Err(Error::DegenerateResponse { response: m });
    }
    Ok(m)
}

/// One step with `h_{n+1}` chosen so that `mean(omega_{n+1}) = target`.
///
/// With `omega(h) = base + h * response`, the choice is
/// `h = (target - mean(base)) / mean(response)`.
pub fn project_h_step(
    integ: &Integrator,
    omega_n: &ScalarField,
    u_n: &VectorField,
    prev_advection: Option<&ScalarField>,
    target: f64,
) -> Result<ProjectedStep> {
    let m1 = response_mean(integ)?;
    let prep = integ.prepare_from(omega_n, u_n, prev_advection)?;
    let h = (target - mean(&prep.base)) / m1;
    Ok(ProjectedStep {
        h,
        omega: integ.complete(&prep, h),
        advection: prep.advection,
    })
}

/// Advances a flow while holding its mean vorticity at `target`.
pub struct ProjectionStepper<'a> {
    integ: &'a Integrator,
    target: f64,
    m1: f64,
    state: FlowState,
}

impl<'a> ProjectionStepper<'a> {
    /// Checks that `omega0` is constant on the walls and has mean `target`.
    pub fn new(integ: &'a Integrator, omega0: &ScalarField, target: f64) -> Result<Self> {
        let m = mean(omega0);
        let defect = m - target;
        if !(defect.abs() <= TOL_L) {
            return Err(Error::IncompatibleL { target, mean: m, defect });
        }
        let h0 = omega0.boundary_average();
        let mismatch = omega0.boundary_deviation(h0);
        if mismatch > TOL_BC {
            return Err(Error::IncompatibleInitialData { mismatch });
        }
        let m1 = response_mean(integ)?;
        let state = integ.initial_state(omega0, h0)?;
        Ok(Self { integ, target, m1, state })
    }

    pub fn state(&self) -> &FlowState {
        &self.state
    }

    pub fn step(&mut self) -> Result<&FlowState> {
        let prep = self.integ.prepare(&self.state)?;
        let h = (self.target - mean(&prep.base)) / self.m1;
        let omega = self.integ.complete(&prep, h);
        self.state = self.integ.commit(&self.state, prep, omega, h)?;
        Ok(&self.state)
    }
}

/// Recovers `h` by per-step projection onto `mean(omega) = target`.
pub fn recover_projection(omega0: &ScalarField, target: f64, cfg: &SolverConfig) -> Result<InverseResult> {
    let integ = Integrator::new(cfg.clone())?;
    recover_projection_with(&integ, omega0, target)
}

pub(crate) fn recover_projection_with(integ: &Integrator, omega0: &ScalarField, target: f64) -> Result<InverseResult> {
    let nt = integ.config().n_steps()?;
    let mut stepper = ProjectionStepper::new(integ, omega0, target)?;
    let mut rec = Recorder::new(integ, stepper.state())?;
    let mut defects = Vec::with_capacity(nt);
    for _ in 0..nt {
        let s = stepper.step()?;
        defects.push((mean(&s.omega) - target).abs());
        rec.push(integ, s)?;
    }
    let trajectory = rec.finish();
    Ok(InverseResult {
        h: trajectory.h.clone(),
        trajectory,
        residual_history: defects,
        converged: true,
        iterations: nt,
    })
}
