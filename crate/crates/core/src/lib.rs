//! Forward and inverse solvers for two-dimensional incompressible flow in
//! vorticity-stream-function form with impermeable walls and a spatially
//! uniform boundary vorticity `h(t)`, plus a harness that checks the energy,
//! decay, and stability estimates of the problem numerically.
//!
//! * [`field`] holds grids, stencils, quadrature, and Poisson solvers.
//! * [`forward`] integrates the vorticity transport equation.
//! * [`inverse`] recovers `h(t)` from the initial vorticity and the
//!   prescribed mean vorticity `L`.
//! * [`harness`] evaluates the estimates on trajectories and solution pairs.

// `!(x <= tol)` style checks are meant to reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod field;
pub mod fixtures;
pub mod forward;
pub mod harness;
pub mod inverse;

pub use error::{Error, Result};
