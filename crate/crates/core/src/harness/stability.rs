use serde::Serialize;

use crate::error::Result;
use crate::field::{mean, NormKind, ScalarField, SpatialNorm, VectorField};
use crate::forward::{time_l2, FlowState, Integrator, SolverConfig};
use crate::inverse::ProjectionStepper;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StabilityReport {
    pub first: String,
    pub second: String,
    pub epsilon: Option<f64>,
    pub t_end: f64,
    pub nx: usize,
    pub ny: usize,
    /// `max_t |u1 - u2|_H1`.
    pub velocity_sup_h1: f64,
    /// `|p1 - p2|_L2(0,T;H1)`.
    pub pressure_l2h1: f64,
    /// `|h1 - h2|_L2(0,T)`.
    pub boundary_l2: f64,
    /// `max_t |omega1 - omega2|_L2`.
    pub vorticity_sup_l2: f64,
    /// `|grad(omega1 - omega2)|_L2(0,T;L2)`.
    pub vorticity_gradient_l2l2: f64,
    /// `|omega01 - omega02|_L2`.
    pub denominator: f64,
    /// Velocity, pressure, and boundary terms over the denominator; `None`
    /// when the initial fields coincide.
    pub ratio: Option<f64>,
    pub degenerate: bool,
    /// `max |omega0i|_L2`.
    pub m: f64,
}

impl StabilityReport {
    /// Attaches labels and the perturbation size.
    pub fn labeled(mut self, first: impl Into<String>, second: impl Into<String>, epsilon: Option<f64>) -> Self {
        self.first = first.into();
        self.second = second.into();
        self.epsilon = epsilon;
        self
    }
}

struct Differences {
    u_h1: Vec<f64>,
    p_h1: Vec<f64>,
    h: Vec<f64>,
    w_l2: Vec<f64>,
    w_grad: Vec<f64>,
}

impl Differences {
    fn push(&mut self, a: &FlowState, b: &FlowState, pa: &ScalarField, pb: &ScalarField) {
        let dw = a.omega.sub(&b.omega);
        self.u_h1.push(a.u.sub(&b.u).norm(NormKind::H1));
        self.p_h1.push(pa.sub(pb).norm(NormKind::H1));
        self.h.push(a.h - b.h);
        self.w_l2.push(dw.norm(NormKind::L2));
        self.w_grad.push(dw.norm(NormKind::GradL2));
    }
}

/// Recovers both flows by projection onto their own mean vorticity and
/// measures their distance. The two runs advance in lockstep so no field
/// history is stored.
pub fn stability_pair(omega01: &ScalarField, omega02: &ScalarField, cfg: &SolverConfig) -> Result<StabilityReport> {
    omega01.same_grid(omega02)?;
    let integ = Integrator::new(cfg.clone())?;
    let nt = cfg.n_steps()?;
    let mut a = ProjectionStepper::new(&integ, omega01, mean(omega01))?;
    let mut b = ProjectionStepper::new(&integ, omega02, mean(omega02))?;
    let mut d = Differences {
        u_h1: Vec::with_capacity(nt + 1),
        p_h1: Vec::with_capacity(nt + 1),
        h: Vec::with_capacity(nt + 1),
        w_l2: Vec::with_capacity(nt + 1),
        w_grad: Vec::with_capacity(nt + 1),
    };
    let (mut ua, mut ub) = (a.state().u.clone(), b.state().u.clone());
    let pressure = |s: &FlowState, prev: &VectorField| integ.pressure(&s.u, prev);
    d.push(a.state(), b.state(), &pressure(a.state(), &ua)?, &pressure(b.state(), &ub)?);
    for _ in 0..nt {
        let (ra, rb) = rayon::join(
            || a.step().cloned(),
            || b.step().cloned(),
        );
        let (sa, sb) = (ra?, rb?);
        let (pa, pb) = rayon::join(|| pressure(&sa, &ua), || pressure(&sb, &ub));
        d.push(&sa, &sb, &pa?, &pb?);
        ua = sa.u;
        ub = sb.u;
    }
    let dt = cfg.dt;
    let sup = |v: &[f64]| v.iter().fold(0.0f64, |m, x| m.max(*x));
    let velocity_sup_h1 = sup(&d.u_h1);
    let pressure_l2h1 = time_l2(&d.p_h1, dt);
    let boundary_l2 = time_l2(&d.h, dt);
    let denominator = omega01.sub(omega02).norm(NormKind::L2);
    let degenerate = denominator == 0.0;
    let ratio = (!degenerate).then(|| (velocity_sup_h1 + pressure_l2h1 + boundary_l2) / denominator);
    Ok(StabilityReport {
        first: String::new(),
        second: String::new(),
        epsilon: None,
        t_end: cfg.t_end,
        nx: cfg.grid.nx(),
        ny: cfg.grid.ny(),
        velocity_sup_h1,
        pressure_l2h1,
        boundary_l2,
        vorticity_sup_l2: sup(&d.w_l2),
        vorticity_gradient_l2l2: time_l2(&d.w_grad, dt),
        denominator,
        ratio,
        degenerate,
        m: omega01.norm(NormKind::L2).max(omega02.norm(NormKind::L2)),
    })
}
