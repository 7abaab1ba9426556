use serde::Serialize;

use crate::error::Result;
use crate::field::norms::{grad_l2_sq, inner};
use crate::field::{gradient, mean, Grid, NormKind, ScalarField, SpatialNorm, VectorField};
use crate::forward::config::{BoundaryVorticity, StoragePolicy};
use crate::forward::stepper::{FlowState, Integrator};

/// Norms and scalars recorded at every time node.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NodeDiagnostics {
    pub t: f64,
    pub h: f64,
    pub mean_omega: f64,
    pub omega_l2: f64,
    pub omega_grad_l2: f64,
    pub omega_l4: f64,
    /// `|omega - mean(omega)|_L2`.
    pub omega_centered_l2: f64,
    pub u_l2: f64,
    pub u_h1: f64,
    pub u_h2: f64,
    pub p_h1: f64,
    pub p_grad_l2: f64,
    /// `<grad p, (u_k - u_{k-1}) / dt>`; zero at the first node.
    pub pressure_work: f64,
}

/// Quantities attached to the interval `[t_k, t_{k+1}]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StepDiagnostics {
    /// `|grad omega_bar|^2` for the Crank–Nicolson midpoint `(omega_k + omega_{k+1}) / 2`.
    pub grad_mid_sq: f64,
    /// `|(u_{k+1} - u_k) / dt|_L2`.
    pub dudt_l2: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub k: usize,
    pub t: f64,
    pub omega: ScalarField,
    pub psi: ScalarField,
    pub u: VectorField,
    pub p: ScalarField,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub grid: Grid,
    pub dt: f64,
    pub h: BoundaryVorticity,
    pub nodes: Vec<NodeDiagnostics>,
    pub steps: Vec<StepDiagnostics>,
    /// Stored fields in time order, per the storage policy (always the first and last).
    pub snapshots: Vec<Snapshot>,
}

impl Trajectory {
    pub fn n_steps(&self) -> usize {
        self.steps.len()
    }

    pub fn t_end(&self) -> f64 {
        self.nodes.last().map_or(0.0, |n| n.t)
    }

    pub fn times(&self) -> Vec<f64> {
        self.nodes.iter().map(|n| n.t).collect()
    }

    pub fn mean_omega(&self) -> Vec<f64> {
        self.nodes.iter().map(|n| n.mean_omega).collect()
    }

    pub fn snapshot(&self, k: usize) -> Option<&Snapshot> {
        self.snapshots.iter().find(|s| s.k == k)
    }

    pub fn initial(&self) -> &Snapshot {
        &self.snapshots[0]
    }

    pub fn last(&self) -> &Snapshot {
        self.snapshots.last().expect("trajectory keeps its final fields")
    }
}

/// Builds a [`Trajectory`] from successive states.
pub struct Recorder {
    grid: Grid,
    dt: f64,
    storage: StoragePolicy,
    last: usize,
    h: Vec<f64>,
    nodes: Vec<NodeDiagnostics>,
    steps: Vec<StepDiagnostics>,
    snapshots: Vec<Snapshot>,
    prev_omega: ScalarField,
    prev_u: VectorField,
}

impl Recorder {
    pub fn new(integ: &Integrator, s0: &FlowState) -> Result<Self> {
        let cfg = integ.config();
        let mut rec = Self {
            grid: cfg.grid,
            dt: cfg.dt,
            storage: cfg.storage,
            last: cfg.n_steps()?,
            h: Vec::new(),
            nodes: Vec::new(),
            steps: Vec::new(),
            snapshots: Vec::new(),
            prev_omega: s0.omega.clone(),
            prev_u: s0.u.clone(),
        };
        rec.record_node(integ, s0)?;
        Ok(rec)
    }

    fn record_node(&mut self, integ: &Integrator, s: &FlowState) -> Result<()> {
        let p = integ.pressure(&s.u, &self.prev_u)?;
        let dudt = s.u.sub(&self.prev_u).scale(1.0 / self.dt);
        let gp = gradient(&p);
        let m = mean(&s.omega);
        self.nodes.push(NodeDiagnostics {
            t: s.t,
            h: s.h,
            mean_omega: m,
            omega_l2: s.omega.norm(NormKind::L2),
            omega_grad_l2: s.omega.norm(NormKind::GradL2),
            omega_l4: s.omega.norm(NormKind::L4),
            omega_centered_l2: s.omega.map(|v| v - m).norm(NormKind::L2),
            u_l2: s.u.norm(NormKind::L2),
            u_h1: s.u.norm(NormKind::H1),
            u_h2: s.u.norm(NormKind::H2),
            p_h1: p.norm(NormKind::H1),
            p_grad_l2: p.norm(NormKind::GradL2),
            pressure_work: inner(&gp.u1, &dudt.u1) + inner(&gp.u2, &dudt.u2),
        });
        self.h.push(s.h);
        if self.storage.keeps(s.k, self.last) {
            self.snapshots.push(Snapshot {
                k: s.k,
                t: s.t,
                omega: s.omega.clone(),
                psi: s.psi.clone(),
                u: s.u.clone(),
                p,
            });
        }
        Ok(())
    }

    /// Records the state following the previously recorded one.
    pub fn push(&mut self, integ: &Integrator, s: &FlowState) -> Result<()> {
        let mid = s.omega.zip_map(&self.prev_omega, |a, b| 0.5 * (a + b));
        self.steps.push(StepDiagnostics {
            grad_mid_sq: grad_l2_sq(&mid),
            dudt_l2: s.u.sub(&self.prev_u).norm(NormKind::L2) / self.dt,
        });
        self.record_node(integ, s)?;
        self.prev_omega = s.omega.clone();
        self.prev_u = s.u.clone();
        Ok(())
    }

    pub fn finish(self) -> Trajectory {
        let h = BoundaryVorticity::new(0.0, self.dt, self.h).expect("recorded boundary values are finite");
        Trajectory {
            grid: self.grid,
            dt: self.dt,
            h,
            nodes: self.nodes,
            steps: self.steps,
            snapshots: self.snapshots,
        }
    }
}
