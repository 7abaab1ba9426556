//! Grids, discrete differential operators, quadrature, and norms.

mod fields;
mod grid;
pub mod norms;
pub mod ops;
pub mod poisson;
pub mod transform;

pub use fields::{ScalarField, VectorField};
pub use grid::{Grid, MIN_NODES};
pub use norms::{mean, norm_spatial, NormKind, SpatialNorm};
pub use ops::{advect, curl, divergence, gradient, laplacian, perp_gradient};
pub use poisson::{
    poisson_dirichlet, poisson_neumann, BoundaryValue, NeumannFlux, NeumannSolution,
    SpectralSolver,
};

/// Builds a [`Grid`]; see [`Grid::new`] for the admissibility rules.
pub fn make_grid(nx: usize, ny: usize, lx: f64, ly: f64) -> crate::Result<Grid> {
    Grid::new(nx, ny, lx, ly)
}
