//! The observation map `F: (h_1..h_Nt) -> (mean omega_1..mean omega_Nt)` and
//! its Jacobian.
//!
//! The sensitivity mode differentiates the discrete step exactly, including
//! the velocity perturbation `du = perp_grad(lap^-1 d omega)` that feeds back
//! into advection. Dropping that term leaves an error of the size of the
//! advective coupling, far above what central differences resolve.

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::ops::laplacian_5pt_interior;
use crate::field::{advect, mean, BoundaryValue, ScalarField, VectorField};
use crate::forward::{check_compatibility, BoundaryVorticity, FlowState, Integrator, SolverConfig};
use crate::inverse::JacobianMode;

/// Stored states of one forward run, reused to restart perturbed runs.
pub struct BaseRun {
    /// States at `t_0..t_Nt`.
    pub states: Vec<FlowState>,
    /// `mean(omega_k)` for `k = 1..Nt`.
    pub means: Vec<f64>,
}

impl BaseRun {
    pub fn new(integ: &Integrator, omega0: &ScalarField, h: &BoundaryVorticity) -> Result<Self> {
        let nt = integ.config().n_steps()?;
        check_pairing(integ, omega0, h, nt)?;
        let hv = h.values();
        let mut states = Vec::with_capacity(nt + 1);
        states.push(integ.initial_state(omega0, hv[0])?);
        let mut means = Vec::with_capacity(nt);
        for k in 1..=nt {
            let next = integ.advance(&states[k - 1], hv[k])?;
            means.push(mean(&next.omega));
            states.push(next);
        }
        Ok(Self { states, means })
    }

    pub fn n_steps(&self) -> usize {
        self.means.len()
    }
}

fn check_pairing(integ: &Integrator, omega0: &ScalarField, h: &BoundaryVorticity, nt: usize) -> Result<()> {
    if h.len() != nt + 1 {
        return Err(Error::LengthMismatch {
            expected: nt + 1,
            got: h.len(),
        });
    }
    if (h.dt() - integ.config().dt).abs() > 1e-12 * integ.config().dt {
        return Err(Error::InvalidConfig("boundary samples and solver use different dt".into()));
    }
    let report = check_compatibility(omega0, h.values()[0], None);
    if !report.boundary_ok {
        return Err(Error::IncompatibleInitialData {
            mismatch: report.boundary_mismatch,
        });
    }
    Ok(())
}

/// Mean vorticity at `t_1..t_Nt`.
pub fn forward_map(h: &BoundaryVorticity, omega0: &ScalarField, cfg: &SolverConfig) -> Result<Vec<f64>> {
    let integ = Integrator::new(cfg.clone())?;
    map_means(&integ, omega0, h.values())
}

pub(crate) fn map_means(integ: &Integrator, omega0: &ScalarField, h: &[f64]) -> Result<Vec<f64>> {
    let nt = integ.config().n_steps()?;
    let hb = BoundaryVorticity::new(0.0, integ.config().dt, h.to_vec())?;
    check_pairing(integ, omega0, &hb, nt)?;
    let mut state = integ.initial_state(omega0, h[0])?;
    let mut out = Vec::with_capacity(nt);
    for &hk in &h[1..] {
        state = integ.advance(&state, hk)?;
        out.push(mean(&state.omega));
    }
    Ok(out)
}

/// `J[k][j] = d mean(omega_{k+1}) / d h_{j+1}`, lower triangular.
pub fn sensitivity_jacobian(
    h: &BoundaryVorticity,
    omega0: &ScalarField,
    cfg: &SolverConfig,
    mode: JacobianMode,
    fd_eps: f64,
) -> Result<DMatrix<f64>> {
    let integ = Integrator::new(cfg.clone())?;
    let base = BaseRun::new(&integ, omega0, h)?;
    match mode {
        JacobianMode::Sensitivity => tangent_jacobian(&integ, &base, true),
        JacobianMode::FiniteDifference => fd_jacobian(&integ, &base, h.values(), fd_eps),
    }
}

fn assemble(nt: usize, cols: Vec<Vec<f64>>) -> DMatrix<f64> {
    DMatrix::from_fn(nt, nt, |k, j| cols[j][k])
}

/// Linearized step about `base` with perturbation `(dw, du)` and advection
/// history `d_prev`. Returns the new perturbation and the current advection
/// perturbation.
fn tangent_step(
    integ: &Integrator,
    base: &FlowState,
    dw: &ScalarField,
    du: &VectorField,
    d_prev: Option<&ScalarField>,
    dh_next: f64,
    feedback: bool,
) -> Result<(ScalarField, VectorField, Option<ScalarField>)> {
    let cfg = integ.config();
    let dt = cfg.dt;
    let mut rhs = dw.axpy(0.5 * dt, &laplacian_5pt_interior(dw));
    let da = if cfg.advection {
        let mut a = advect(&base.u, dw);
        if feedback {
            a = a.axpy(1.0, &advect(du, &base.omega));
        }
        let n = match (base.k, d_prev) {
            (0, _) => a.clone(),
            (_, Some(p)) => a.zip_map(p, |c, o| 1.5 * c - 0.5 * o),
            (_, None) => a.scale(1.5),
        };
        rhs = rhs.axpy(-dt, &n);
        Some(a)
    } else {
        None
    };
    let dw_next = integ
        .solver()
        .solve_dirichlet(1.0, 0.5 * dt, &rhs, BoundaryValue::Constant(0.0))?
        .axpy(dh_next, integ.boundary_response());
    let du_next = integ.velocity(&integ.stream_function(&dw_next)?)?;
    Ok((dw_next, du_next, da))
}

pub(crate) fn tangent_jacobian(integ: &Integrator, base: &BaseRun, feedback: bool) -> Result<DMatrix<f64>> {
    let nt = base.n_steps();
    let g = integ.config().grid;
    let cols: Result<Vec<Vec<f64>>> = (1..=nt)
        .into_par_iter()
        .map(|j| {
            let mut col = vec![0.0; nt];
            // the perturbation enters at step j through the boundary only
            let mut dw = integ.boundary_response().clone();
            let mut du = integ.velocity(&integ.stream_function(&dw)?)?;
            let mut d_prev: Option<ScalarField> = None;
            col[j - 1] = mean(&dw);
            for n in j..nt {
                let (w, u, a) = tangent_step(integ, &base.states[n], &dw, &du, d_prev.as_ref(), 0.0, feedback)?;
                col[n] = mean(&w);
                dw = w;
                du = u;
                d_prev = a;
            }
            debug_assert_eq!(*dw.grid(), g);
            Ok(col)
        })
        .collect();
    Ok(assemble(nt, cols?))
}

fn fd_jacobian(integ: &Integrator, base: &BaseRun, h: &[f64], eps: f64) -> Result<DMatrix<f64>> {
    let nt = base.n_steps();
    let run = |j: usize, delta: f64| -> Result<Vec<f64>> {
        let mut state = base.states[j - 1].clone();
        let mut out = Vec::with_capacity(nt + 1 - j);
        for k in j..=nt {
            let hk = if k == j { h[k] + delta } else { h[k] };
            state = integ.advance(&state, hk)?;
            out.push(mean(&state.omega));
        }
        Ok(out)
    };
    let cols: Result<Vec<Vec<f64>>> = (1..=nt)
        .into_par_iter()
        .map(|j| {
            let plus = run(j, eps)?;
            let minus = run(j, -eps)?;
            let mut col = vec![0.0; nt];
            for (i, (p, m)) in plus.iter().zip(&minus).enumerate() {
                col[j - 1 + i] = (p - m) / (2.0 * eps);
            }
            Ok(col)
        })
        .collect();
    Ok(assemble(nt, cols?))
}
