//! Trapezoidal quadrature and the discrete Sobolev norms.
//!
//! One quadrature rule serves the mean, inner products, and every norm.
//! The gradient seminorm is assembled from edge differences,
//!
//! `|grad f|^2 = sum_edges ((f_{i+1} - f_i) / h)^2 * h * w_transverse`,
//!
//! i.e. centered differences evaluated at edge midpoints. It is the exact
//! Dirichlet form of the five-point Laplacian (`-<lap f, f> = |grad f|^2`
//! when `f` vanishes on the walls, and for the reflected Neumann Laplacian
//! without restriction), so energy balances and Poincare constants computed
//! with it carry no quadrature mismatch.

use crate::field::grid::edge_factor;
use crate::field::ops::{d2_dx2, d2_dxdy, d2_dy2};
use crate::field::{ScalarField, VectorField};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NormKind {
    L2,
    L4,
    H1,
    H2,
    GradL2,
    Linf,
}

impl NormKind {
    pub const ALL: [NormKind; 6] = [
        NormKind::L2,
        NormKind::L4,
        NormKind::H1,
        NormKind::H2,
        NormKind::GradL2,
        NormKind::Linf,
    ];
}

/// Trapezoidal integral of `f` over the domain.
pub fn integrate(f: &ScalarField) -> f64 {
    let g = f.grid();
    let v = f.values();
    let mut total = 0.0;
    for j in 0..g.ny() {
        let wy = edge_factor(j, g.ny());
        let row = &v[j * g.nx()..(j + 1) * g.nx()];
        let mut s = 0.5 * (row[0] + row[g.nx() - 1]);
        for x in &row[1..g.nx() - 1] {
            s += x;
        }
        total += wy * s;
    }
    total * g.dx() * g.dy()
}

/// Domain average `(1/|Omega|) int f`.
pub fn mean(f: &ScalarField) -> f64 {
    integrate(f) / f.grid().area()
}

/// Trapezoidal inner product.
pub fn inner(f: &ScalarField, h: &ScalarField) -> f64 {
    debug_assert_eq!(f.grid(), h.grid());
    let g = f.grid();
    let (a, b) = (f.values(), h.values());
    let mut total = 0.0;
    for j in 0..g.ny() {
        let wy = edge_factor(j, g.ny());
        let mut s = 0.0;
        for i in 0..g.nx() {
            let k = j * g.nx() + i;
            s += edge_factor(i, g.nx()) * a[k] * b[k];
        }
        total += wy * s;
    }
    total * g.dx() * g.dy()
}

pub fn l2_sq(f: &ScalarField) -> f64 {
    inner(f, f)
}

/// Squared gradient seminorm from edge differences (see module docs).
pub fn grad_l2_sq(f: &ScalarField) -> f64 {
    let g = f.grid();
    let (nx, ny) = (g.nx(), g.ny());
    let v = f.values();
    let mut sx = 0.0;
    for j in 0..ny {
        let mut s = 0.0;
        for i in 0..nx - 1 {
            let d = v[j * nx + i + 1] - v[j * nx + i];
            s += d * d;
        }
        sx += edge_factor(j, ny) * s;
    }
    let mut sy = 0.0;
    for i in 0..nx {
        let mut s = 0.0;
        for j in 0..ny - 1 {
            let d = v[(j + 1) * nx + i] - v[j * nx + i];
            s += d * d;
        }
        sy += edge_factor(i, nx) * s;
    }
    sx * g.dy() / g.dx() + sy * g.dx() / g.dy()
}

/// Squared Frobenius norm of the nodal Hessian, `|f_xx|^2 + 2|f_xy|^2 + |f_yy|^2`.
pub fn hessian_sq(f: &ScalarField) -> f64 {
    let xy = d2_dxdy(f);
    l2_sq(&d2_dx2(f)) + 2.0 * l2_sq(&xy) + l2_sq(&d2_dy2(f))
}

fn norm_sq(f: &ScalarField, kind: NormKind) -> f64 {
    match kind {
        NormKind::L2 => l2_sq(f),
        NormKind::L4 => {
            let f2 = f.map(|v| v * v);
            l2_sq(&f2).sqrt()
        }
        NormKind::GradL2 => grad_l2_sq(f),
        NormKind::H1 => l2_sq(f) + grad_l2_sq(f),
        NormKind::H2 => l2_sq(f) + grad_l2_sq(f) + hessian_sq(f),
        NormKind::Linf => {
            let m = f.max_abs();
            m * m
        }
    }
}

/// Discrete spatial norms of scalar and vector fields.
///
/// Vector norms combine components as `sqrt(|u1|^2 + |u2|^2)`.
pub trait SpatialNorm {
    fn norm(&self, kind: NormKind) -> f64;
}

impl SpatialNorm for ScalarField {
    fn norm(&self, kind: NormKind) -> f64 {
        norm_sq(self, kind).max(0.0).sqrt()
    }
}

impl SpatialNorm for VectorField {
    fn norm(&self, kind: NormKind) -> f64 {
        (norm_sq(&self.u1, kind) + norm_sq(&self.u2, kind))
            .max(0.0)
            .sqrt()
    }
}

/// Free-function form of [`SpatialNorm::norm`].
pub fn norm_spatial<F: SpatialNorm + ?Sized>(f: &F, kind: NormKind) -> f64 {
    f.norm(kind)
}
