use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("grid needs at least 9 nodes per axis, got {nx}x{ny}")]
    DimensionTooSmall { nx: usize, ny: usize },

    #[error("domain extents must be positive and finite, got lx={lx}, ly={ly}")]
    NonPositiveExtent { lx: f64, ly: f64 },

    #[error("fields live on different grids")]
    GridMismatch,

    #[error("field has {got} values, grid expects {expected}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("non-finite value in {what}")]
    NonFinite { what: &'static str },

    #[error("{solver} solve did not reach relative residual {tol:e} (got {residual:e})")]
    SolverNonconvergence {
        solver: &'static str,
        residual: f64,
        tol: f64,
    },

    #[error("stream function is not constant on the boundary (max deviation {deviation:e})")]
    BoundaryNotConstant { deviation: f64 },

    #[error("time step {dt:e} exceeds the advective limit {limit:e} (max |u| = {max_speed:e})")]
    CflViolation { dt: f64, limit: f64, max_speed: f64 },

    #[error("initial vorticity boundary trace differs from h(0) by {mismatch:e}")]
    IncompatibleInitialData { mismatch: f64 },

    #[error("target mean vorticity L={target} differs from mean of the initial vorticity {mean} (defect {defect:e})")]
    IncompatibleL { target: f64, mean: f64, defect: f64 },

    #[error("boundary response has vanishing mean ({response:e})")]
    DegenerateResponse { response: f64 },

    #[error("Landweber step size {mu:e} is not admissible (bound {bound:e}): {reason}")]
    StepSizeTooLarge {
        mu: f64,
        bound: f64,
        reason: &'static str,
    },

    #[error("normal equations could not be solved (damping {lambda:e})")]
    NormalEquationFailure { lambda: f64 },

    #[error("eigenvalue iteration did not converge after {iterations} iterations")]
    EigensolverNonconvergence { iterations: usize },

    #[error("decay fit needs at least {needed} samples in the window, found {found}")]
    InsufficientSamples { needed: usize, found: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid fixture spec `{spec}`: {reason}")]
    InvalidFixture { spec: String, reason: String },
}
