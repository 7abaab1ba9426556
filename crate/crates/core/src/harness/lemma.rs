use serde::Serialize;

use crate::forward::{time_l2, Trajectory};
use crate::harness::{interval_sq, ratio};

/// Relative slack on `sup |omega|_L2 <= |omega0|_L2`.
pub const SUP_SLACK: f64 = 1e-8;
/// Discretization slack on `|grad omega|_L2L2 <= |omega0|_L2 / sqrt(2)`.
pub const GRADIENT_SLACK: f64 = 1.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BoundKind {
    /// Constant-free; `pass` means `lhs <= rhs`.
    Hard,
    /// `rhs` omits an unknown constant; `ratio` estimates it and `pass` only
    /// requires it to be finite.
    Empirical,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundRow {
    pub name: &'static str,
    pub kind: BoundKind,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
    pub pass: bool,
}

impl BoundRow {
    fn hard(name: &'static str, lhs: f64, rhs: f64) -> Self {
        Self {
            name,
            kind: BoundKind::Hard,
            lhs,
            rhs,
            ratio: ratio(lhs, rhs),
            pass: lhs <= rhs,
        }
    }

    fn empirical(name: &'static str, lhs: f64, rhs: f64) -> Self {
        let r = ratio(lhs, rhs);
        Self {
            name,
            kind: BoundKind::Empirical,
            lhs,
            rhs,
            ratio: r,
            pass: r.is_finite(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LemmaReport {
    pub t_end: f64,
    pub omega0_l2: f64,
    pub rows: Vec<BoundRow>,
}

impl LemmaReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    pub fn row(&self, name: &str) -> Option<&BoundRow> {
        self.rows.iter().find(|r| r.name == name)
    }
}

/// Evaluates the vorticity, velocity, pressure, and boundary-vorticity bounds
/// on a trajectory. Time integrals use the trapezoid rule over nodes, except
/// `|du/dt|`, which lives on intervals.
pub fn lemma_bounds_check(traj: &Trajectory) -> LemmaReport {
    let n = &traj.nodes;
    let dt = traj.dt;
    let t = traj.t_end();
    let w0 = n.first().map_or(0.0, |d| d.omega_l2);
    let root_t = t.sqrt().max(1.0);
    let col = |f: fn(&crate::forward::NodeDiagnostics) -> f64| n.iter().map(f).collect::<Vec<_>>();

    let sup_w = n.iter().fold(0.0f64, |m, d| m.max(d.omega_l2));
    let grad = time_l2(&col(|d| d.omega_grad_l2), dt);
    let sup_u = n.iter().fold(0.0f64, |m, d| m.max(d.u_h1));
    let u_h2 = time_l2(&col(|d| d.u_h2), dt);
    let dudt: Vec<f64> = traj.steps.iter().map(|s| s.dudt_l2).collect();
    let rate = interval_sq(&dudt, dt).sqrt() + time_l2(&col(|d| d.p_grad_l2), dt);
    let h = traj.h.l2_time();
    let l4 = time_l2(&col(|d| d.omega_l4), dt).powi(2);

    LemmaReport {
        t_end: t,
        omega0_l2: w0,
        rows: vec![
            BoundRow::hard("vorticity_sup_l2", sup_w, w0 * (1.0 + SUP_SLACK)),
            BoundRow::hard(
                "vorticity_gradient_l2l2",
                grad,
                w0 / std::f64::consts::SQRT_2 * GRADIENT_SLACK,
            ),
            BoundRow::empirical("velocity_sup_h1", sup_u, w0),
            BoundRow::empirical("velocity_l2h2", u_h2, root_t * w0),
            BoundRow::empirical("velocity_rate_and_pressure_gradient", rate, root_t * (w0 * w0 + w0)),
            BoundRow::empirical("boundary_vorticity_l2", h, root_t * w0),
            BoundRow::empirical("vorticity_l4_sq_integral", l4, t.max(1.0) * w0 * w0),
        ],
    }
}
