use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::poisson::DEFAULT_TOL;
use crate::field::Grid;

/// Default absolute tolerance on `omega0 = h(0)` along the walls.
pub const TOL_BC: f64 = 1e-8;
/// Default tolerance on `mean(omega0) = L`.
pub const TOL_L: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum StoragePolicy {
    /// Every time node keeps its fields.
    All,
    /// Every m-th node (plus the first and last).
    Every(usize),
    /// Only the first and last fields.
    NormsOnly,
}

impl StoragePolicy {
    pub(crate) fn keeps(&self, k: usize, last: usize) -> bool {
        k == 0
            || k == last
            || match self {
                StoragePolicy::All => true,
                StoragePolicy::Every(m) => *m > 0 && k.is_multiple_of(*m),
                StoragePolicy::NormsOnly => false,
            }
    }
}

/// Time integration settings. Viscosity is 1.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolverConfig {
    pub grid: Grid,
    pub dt: f64,
    pub t_end: f64,
    pub advection: bool,
    /// Fraction of the advective step limit `min(dx,dy) / (1 + max|u|)`.
    pub cfl_safety: f64,
    pub poisson_tol: f64,
    pub storage: StoragePolicy,
}

impl SolverConfig {
    pub fn new(grid: Grid, dt: f64, t_end: f64) -> Self {
        Self {
            grid,
            dt,
            t_end,
            advection: true,
            cfl_safety: 0.5,
            poisson_tol: DEFAULT_TOL,
            storage: StoragePolicy::NormsOnly,
        }
    }

    pub fn with_advection(mut self, on: bool) -> Self {
        self.advection = on;
        self
    }

    pub fn with_storage(mut self, storage: StoragePolicy) -> Self {
        self.storage = storage;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidConfig(m));
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return bad(format!("dt must be positive, got {}", self.dt));
        }
        if !(self.t_end.is_finite() && self.t_end >= self.dt) {
            return bad(format!("T = {} must be at least dt = {}", self.t_end, self.dt));
        }
        if !(self.cfl_safety > 0.0 && self.cfl_safety <= 1.0) {
            return bad(format!("cfl_safety must lie in (0, 1], got {}", self.cfl_safety));
        }
        if !(self.poisson_tol.is_finite() && self.poisson_tol > 0.0) {
            return bad(format!("poisson_tol must be positive, got {}", self.poisson_tol));
        }
        if let StoragePolicy::Every(0) = self.storage {
            return bad("storage stride must be positive".into());
        }
        self.n_steps().map(|_| ())
    }

    /// Number of steps `T / dt`; `T` must be a whole multiple of `dt`.
    pub fn n_steps(&self) -> Result<usize> {
        let r = self.t_end / self.dt;
        let n = r.round();
        if n < 1.0 || (r - n).abs() > 1e-9 * r.max(1.0) {
            return Err(Error::InvalidConfig(format!(
                "T = {} is not a whole multiple of dt = {}",
                self.t_end, self.dt
            )));
        }
        Ok(n as usize)
    }

    pub fn time(&self, k: usize) -> f64 {
        k as f64 * self.dt
    }

    /// Largest admissible step for the given peak speed.
    pub fn step_limit(&self, max_speed: f64) -> f64 {
        self.cfl_safety * self.grid.min_spacing() / (1.0 + max_speed)
    }
}

/// Samples `h(t_k)` on a uniform time grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundaryVorticity {
    t0: f64,
    dt: f64,
    values: Vec<f64>,
}

impl BoundaryVorticity {
    pub fn new(t0: f64, dt: f64, values: Vec<f64>) -> Result<Self> {
        if !(dt.is_finite() && dt > 0.0) || !t0.is_finite() {
            return Err(Error::InvalidConfig(format!("time step must be positive, got {dt}")));
        }
        if values.is_empty() {
            return Err(Error::InvalidConfig("boundary vorticity needs at least one sample".into()));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite { what: "boundary vorticity" });
        }
        Ok(Self { t0, dt, values })
    }

    /// `h = c` at `n_steps + 1` nodes starting from 0.
    pub fn constant(c: f64, dt: f64, n_steps: usize) -> Result<Self> {
        Self::new(0.0, dt, vec![c; n_steps + 1])
    }

    /// Samples `f(t_k)` for the step count of `cfg`.
    pub fn from_fn(cfg: &SolverConfig, f: impl Fn(f64) -> f64) -> Result<Self> {
        let n = cfg.n_steps()?;
        Self::new(0.0, cfg.dt, (0..=n).map(|k| f(cfg.time(k))).collect())
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.values.len()).map(|k| self.t0 + k as f64 * self.dt).collect()
    }

    /// `L2(0,T)` norm of the piecewise-linear interpolant, by the trapezoid rule.
    pub fn l2_time(&self) -> f64 {
        trapezoid_sq(&self.values, self.dt).sqrt()
    }

    /// `L2(0,T)` norm of `h'` for the piecewise-linear interpolant.
    pub fn derivative_l2(&self) -> f64 {
        let s: f64 = self.values.windows(2).map(|w| (w[1] - w[0]).powi(2)).sum();
        (s / self.dt).sqrt()
    }

    pub(crate) fn check_pairing(&self, cfg: &SolverConfig, nt: usize) -> Result<()> {
        if self.values.len() != nt + 1 {
            return Err(Error::LengthMismatch {
                expected: nt + 1,
                got: self.values.len(),
            });
        }
        if (self.dt - cfg.dt).abs() > 1e-12 * cfg.dt {
            return Err(Error::InvalidConfig(format!(
                "boundary samples use dt = {} but the solver uses {}",
                self.dt, cfg.dt
            )));
        }
        Ok(())
    }
}

/// `sqrt(int q^2 dt)` by the trapezoid rule over uniformly spaced samples.
pub fn time_l2(q: &[f64], dt: f64) -> f64 {
    trapezoid_sq(q, dt).sqrt()
}

/// Trapezoidal `int q^2 dt` over uniformly spaced samples.
pub(crate) fn trapezoid_sq(q: &[f64], dt: f64) -> f64 {
    match q.len() {
        0 | 1 => 0.0,
        n => {
            let inner: f64 = q[1..n - 1].iter().map(|v| v * v).sum();
            dt * (inner + 0.5 * (q[0] * q[0] + q[n - 1] * q[n - 1]))
        }
    }
}
