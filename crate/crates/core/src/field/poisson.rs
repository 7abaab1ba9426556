//! Direct spectral solvers for the five-point Laplacian.
//!
//! Dirichlet problems `(alpha - beta lap) f = rhs` on interior nodes are
//! diagonalized by DST-I; Neumann problems use ghost-node reflection on the
//! walls and are diagonalized by DCT-I. Both are exact up to rounding, so the
//! only failure mode is non-finite input, caught by the residual check.

use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::field::grid::edge_factor;
use crate::field::norms::integrate;
use crate::field::transform::{apply_2d, Dct1, Dst1};
use crate::field::{Grid, ScalarField};

/// Default bound on the relative residual of every linear solve.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Dirichlet data: a single value on every wall node, or the boundary nodes
/// of an existing field.
#[derive(Debug, Clone, Copy)]
pub enum BoundaryValue<'a> {
    Constant(f64),
    Trace(&'a ScalarField),
}

impl BoundaryValue<'_> {
    fn at(&self, g: &Grid, i: usize, j: usize) -> f64 {
        match self {
            BoundaryValue::Constant(c) => *c,
            BoundaryValue::Trace(f) => f[g.idx(i, j)],
        }
    }
}

/// Outward normal derivative prescribed on each wall, sampled at that wall's
/// nodes (corners appear on both walls that meet there).
#[derive(Debug, Clone, PartialEq)]
pub struct NeumannFlux {
    /// `x = 0`, indexed by `j`.
    pub left: Vec<f64>,
    /// `x = lx`, indexed by `j`.
    pub right: Vec<f64>,
    /// `y = 0`, indexed by `i`.
    pub bottom: Vec<f64>,
    /// `y = ly`, indexed by `i`.
    pub top: Vec<f64>,
}

impl NeumannFlux {
    pub fn zero(g: &Grid) -> Self {
        Self {
            left: vec![0.0; g.ny()],
            right: vec![0.0; g.ny()],
            bottom: vec![0.0; g.nx()],
            top: vec![0.0; g.nx()],
        }
    }

    /// Trapezoidal integral of the flux around the boundary.
    pub fn integral(&self, g: &Grid) -> f64 {
        let ny = g.ny();
        let nx = g.nx();
        let sy: f64 = (0..ny)
            .map(|j| edge_factor(j, ny) * (self.left[j] + self.right[j]))
            .sum();
        let sx: f64 = (0..nx)
            .map(|i| edge_factor(i, nx) * (self.bottom[i] + self.top[i]))
            .sum();
        sy * g.dy() + sx * g.dx()
    }
}

#[derive(Debug, Clone)]
pub struct NeumannSolution {
    pub field: ScalarField,
    /// Constant removed from the right-hand side to make the problem
    /// solvable: `(int rhs + oint flux) / |Omega|`.
    pub shift: f64,
}

/// Cached transforms and eigenvalues for one grid.
pub struct SpectralSolver {
    grid: Grid,
    tol: f64,
    dst_x: Dst1,
    dst_y: Dst1,
    dct_x: Dct1,
    dct_y: Dct1,
    dir_x: Vec<f64>,
    dir_y: Vec<f64>,
    neu_x: Vec<f64>,
    neu_y: Vec<f64>,
}

fn symbol(k: usize, n_intervals: usize, h: f64) -> f64 {
    let s = (std::f64::consts::PI * k as f64 / (2 * n_intervals) as f64).sin();
    4.0 * s * s / (h * h)
}

impl SpectralSolver {
    pub fn new(grid: Grid) -> Self {
        Self::with_tolerance(grid, DEFAULT_TOL)
    }

    pub fn with_tolerance(grid: Grid, tol: f64) -> Self {
        let mut planner = FftPlanner::new();
        let (nx, ny) = (grid.nx(), grid.ny());
        Self {
            grid,
            tol,
            dst_x: Dst1::new(nx - 2, &mut planner),
            dst_y: Dst1::new(ny - 2, &mut planner),
            dct_x: Dct1::new(nx, &mut planner),
            dct_y: Dct1::new(ny, &mut planner),
            dir_x: (1..nx - 1).map(|k| symbol(k, nx - 1, grid.dx())).collect(),
            dir_y: (1..ny - 1).map(|k| symbol(k, ny - 1, grid.dy())).collect(),
            neu_x: (0..nx).map(|k| symbol(k, nx - 1, grid.dx())).collect(),
            neu_y: (0..ny).map(|k| symbol(k, ny - 1, grid.dy())).collect(),
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn tolerance(&self) -> f64 {
        self.tol
    }

    /// Smallest eigenvalue of the Dirichlet five-point operator `-lap`.
    pub fn dirichlet_min_eigenvalue(&self) -> f64 {
        self.dir_x[0] + self.dir_y[0]
    }

    /// Smallest nonzero eigenvalue of the reflected Neumann operator `-lap_N`.
    pub fn neumann_min_nonzero_eigenvalue(&self) -> f64 {
        self.neu_x[1].min(self.neu_y[1])
    }

    /// Solves `alpha f - beta lap5 f = rhs` at interior nodes with `f` equal to
    /// `boundary` on the walls. `rhs` boundary values are ignored.
    pub fn solve_dirichlet(
        &self,
        alpha: f64,
        beta: f64,
        rhs: &ScalarField,
        boundary: BoundaryValue<'_>,
    ) -> Result<ScalarField> {
        let g = self.grid;
        if *rhs.grid() != g {
            return Err(Error::GridMismatch);
        }
        if let BoundaryValue::Trace(t) = boundary {
            if *t.grid() != g {
                return Err(Error::GridMismatch);
            }
        }
        let (nx, ny) = (g.nx(), g.ny());
        let (mx, my) = (nx - 2, ny - 2);
        let cx = beta / (g.dx() * g.dx());
        let cy = beta / (g.dy() * g.dy());

        let mut out = ScalarField::zeros(g);
        for j in 0..ny {
            for i in 0..nx {
                if g.is_boundary(i, j) {
                    out.set(i, j, boundary.at(&g, i, j));
                }
            }
        }

        // interior right-hand side with the wall values moved over
        let mut work = vec![0.0; mx * my];
        for j in 1..ny - 1 {
            for i in 1..nx - 1 {
                let mut b = rhs.at(i, j);
                if i == 1 {
                    b += cx * out.at(0, j);
                }
                if i == nx - 2 {
                    b += cx * out.at(nx - 1, j);
                }
                if j == 1 {
                    b += cy * out.at(i, 0);
                }
                if j == ny - 2 {
                    b += cy * out.at(i, ny - 1);
                }
                work[(j - 1) * mx + (i - 1)] = b;
            }
        }

        apply_2d(&mut work, my, mx, true, |l, b| self.dst_x.apply(l, b));
        apply_2d(&mut work, my, mx, false, |l, b| self.dst_y.apply(l, b));
        for l in 0..my {
            for k in 0..mx {
                let denom = alpha + beta * (self.dir_x[k] + self.dir_y[l]);
                work[l * mx + k] /= denom;
            }
        }
        apply_2d(&mut work, my, mx, true, |l, b| self.dst_x.apply(l, b));
        apply_2d(&mut work, my, mx, false, |l, b| self.dst_y.apply(l, b));
        let scale = self.dst_x.inverse_scale() * self.dst_y.inverse_scale();
        for j in 1..ny - 1 {
            for i in 1..nx - 1 {
                out.set(i, j, scale * work[(j - 1) * mx + (i - 1)]);
            }
        }

        // residual check
        let mut res: f64 = 0.0;
        let mut rhs_max: f64 = 0.0;
        for j in 1..ny - 1 {
            for i in 1..nx - 1 {
                let k = g.idx(i, j);
                let v = out.values();
                let lap = (v[k + 1] - 2.0 * v[k] + v[k - 1]) * cx
                    + (v[k + nx] - 2.0 * v[k] + v[k - nx]) * cy;
                let r = alpha * v[k] - lap - rhs[k];
                res = res.max(r.abs());
                rhs_max = rhs_max.max(rhs[k].abs());
            }
        }
        let op_scale = alpha.abs() + 2.0 * (cx.abs() + cy.abs());
        let denom = rhs_max + op_scale * out.max_abs();
        let rel = if denom > 0.0 { res / denom } else { 0.0 };
        if !(rel <= self.tol) {
            return Err(Error::SolverNonconvergence {
                solver: "dirichlet",
                residual: rel,
                tol: self.tol,
            });
        }
        Ok(out)
    }

    /// `-lap f = rhs` at interior nodes, `f = boundary` on the walls.
    pub fn poisson_dirichlet(
        &self,
        rhs: &ScalarField,
        boundary: BoundaryValue<'_>,
    ) -> Result<ScalarField> {
        self.solve_dirichlet(0.0, 1.0, rhs, boundary)
    }

    /// Mean-zero solution of `-lap f = rhs - shift` on all nodes with
    /// `df/dn = flux` on the walls (ghost-node reflection).
    pub fn poisson_neumann(&self, rhs: &ScalarField, flux: &NeumannFlux) -> Result<NeumannSolution> {
        let g = self.grid;
        if *rhs.grid() != g {
            return Err(Error::GridMismatch);
        }
        if flux.left.len() != g.ny()
            || flux.right.len() != g.ny()
            || flux.bottom.len() != g.nx()
            || flux.top.len() != g.nx()
        {
            return Err(Error::LengthMismatch {
                expected: 2 * (g.nx() + g.ny()),
                got: flux.left.len() + flux.right.len() + flux.bottom.len() + flux.top.len(),
            });
        }
        let (nx, ny) = (g.nx(), g.ny());
        let mut eff = fold_flux(rhs, flux);
        let shift = integrate(&eff) / g.area();
        for v in eff.values_mut() {
            *v -= shift;
        }
        let target = eff.clone();

        let work = eff.values_mut();
        apply_2d(work, ny, nx, true, |l, b| self.dct_x.apply(l, b));
        apply_2d(work, ny, nx, false, |l, b| self.dct_y.apply(l, b));
        for l in 0..ny {
            for k in 0..nx {
                let lam = self.neu_x[k] + self.neu_y[l];
                work[l * nx + k] = if k == 0 && l == 0 {
                    0.0
                } else {
                    work[l * nx + k] / lam
                };
            }
        }
        apply_2d(work, ny, nx, true, |l, b| self.dct_x.apply(l, b));
        apply_2d(work, ny, nx, false, |l, b| self.dct_y.apply(l, b));
        let scale = self.dct_x.inverse_scale() * self.dct_y.inverse_scale();
        for v in work.iter_mut() {
            *v *= scale;
        }
        let field = eff;

        let applied = neumann_laplacian_homogeneous(&field);
        let mut res: f64 = 0.0;
        for k in 0..g.len() {
            res = res.max((-applied[k] - target[k]).abs());
        }
        let op_scale = 4.0 / (g.dx() * g.dx()) + 4.0 / (g.dy() * g.dy());
        let denom = target.max_abs() + op_scale * field.max_abs();
        let rel = if denom > 0.0 { res / denom } else { 0.0 };
        if !(rel <= self.tol) {
            return Err(Error::SolverNonconvergence {
                solver: "neumann",
                residual: rel,
                tol: self.tol,
            });
        }
        Ok(NeumannSolution { field, shift })
    }
}

/// Adds the ghost-node flux contributions `2 g / h` to wall nodes, so that
/// `-lap_N f = rhs` with flux `g` becomes a homogeneous problem.
fn fold_flux(rhs: &ScalarField, flux: &NeumannFlux) -> ScalarField {
    let g = *rhs.grid();
    let (nx, ny) = (g.nx(), g.ny());
    let mut eff = rhs.clone();
    for j in 0..ny {
        eff[g.idx(0, j)] += 2.0 * flux.left[j] / g.dx();
        eff[g.idx(nx - 1, j)] += 2.0 * flux.right[j] / g.dx();
    }
    for i in 0..nx {
        eff[g.idx(i, 0)] += 2.0 * flux.bottom[i] / g.dy();
        eff[g.idx(i, ny - 1)] += 2.0 * flux.top[i] / g.dy();
    }
    eff
}

/// Reflected Neumann Laplacian with zero flux, applied at every node.
pub fn neumann_laplacian_homogeneous(f: &ScalarField) -> ScalarField {
    let g = *f.grid();
    let (nx, ny) = (g.nx(), g.ny());
    let cx = 1.0 / (g.dx() * g.dx());
    let cy = 1.0 / (g.dy() * g.dy());
    let v = f.values();
    let mut out = vec![0.0; g.len()];
    for j in 0..ny {
        for i in 0..nx {
            let k = g.idx(i, j);
            let west = if i == 0 { v[k + 1] } else { v[k - 1] };
            let east = if i + 1 == nx { v[k - 1] } else { v[k + 1] };
            let south = if j == 0 { v[k + nx] } else { v[k - nx] };
            let north = if j + 1 == ny { v[k - nx] } else { v[k + nx] };
            out[k] = cx * (west - 2.0 * v[k] + east) + cy * (south - 2.0 * v[k] + north);
        }
    }
    ScalarField::from_values(g, out).expect("finite input")
}

/// One-shot Dirichlet Poisson solve; builds a [`SpectralSolver`] internally.
pub fn poisson_dirichlet(rhs: &ScalarField, boundary: BoundaryValue<'_>) -> Result<ScalarField> {
    SpectralSolver::new(*rhs.grid()).poisson_dirichlet(rhs, boundary)
}

/// One-shot Neumann Poisson solve; builds a [`SpectralSolver`] internally.
pub fn poisson_neumann(rhs: &ScalarField, flux: &NeumannFlux) -> Result<NeumannSolution> {
    SpectralSolver::new(*rhs.grid()).poisson_neumann(rhs, flux)
}
