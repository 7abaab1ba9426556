//! Finite-difference operators on vertex-centered grids.
//!
//! Node-valued derivatives use second-order centered stencils in the
//! interior and second-order one-sided stencils on the walls, so they are
//! exact on quadratics everywhere. [`advect`] is the exception: it is built
//! on the summation-by-parts first derivative so that its skew-symmetry under
//! the trapezoidal inner product holds to rounding.

use crate::field::{Grid, ScalarField, VectorField};

#[derive(Clone, Copy, PartialEq, Eq)]
enum Axis {
    X,
    Y,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Closure {
    /// `(-3 f0 + 4 f1 - f2) / 2h`, exact on quadratics.
    SecondOrder,
    /// `(f1 - f0) / h`, the closure that pairs with trapezoidal weights.
    SummationByParts,
}

fn axis_layout(g: &Grid, axis: Axis) -> (usize, usize, usize, usize, f64) {
    // (len along axis, number of lines, stride along axis, stride across, h)
    match axis {
        Axis::X => (g.nx(), g.ny(), 1, g.nx(), g.dx()),
        Axis::Y => (g.ny(), g.nx(), g.nx(), 1, g.dy()),
    }
}

fn first_derivative(f: &ScalarField, axis: Axis, closure: Closure) -> ScalarField {
    let g = *f.grid();
    let (n, lines, s, t, h) = axis_layout(&g, axis);
    let v = f.values();
    let mut out = vec![0.0; g.len()];
    let c = 0.5 / h;
    for line in 0..lines {
        let base = line * t;
        let at = |k: usize| v[base + k * s];
        for k in 1..n - 1 {
            out[base + k * s] = c * (at(k + 1) - at(k - 1));
        }
        let (lo, hi) = match closure {
            Closure::SecondOrder => (
                c * (-3.0 * at(0) + 4.0 * at(1) - at(2)),
                c * (3.0 * at(n - 1) - 4.0 * at(n - 2) + at(n - 3)),
            ),
            Closure::SummationByParts => ((at(1) - at(0)) / h, (at(n - 1) - at(n - 2)) / h),
        };
        out[base] = lo;
        out[base + (n - 1) * s] = hi;
    }
    ScalarField::from_values(g, out).expect("derivative of a finite field")
}

fn second_derivative(f: &ScalarField, axis: Axis) -> ScalarField {
    let g = *f.grid();
    let (n, lines, s, t, h) = axis_layout(&g, axis);
    let v = f.values();
    let mut out = vec![0.0; g.len()];
    let c = 1.0 / (h * h);
    for line in 0..lines {
        let base = line * t;
        let at = |k: usize| v[base + k * s];
        for k in 1..n - 1 {
            out[base + k * s] = c * (at(k + 1) - 2.0 * at(k) + at(k - 1));
        }
        // exact on cubics
        out[base] = c * (2.0 * at(0) - 5.0 * at(1) + 4.0 * at(2) - at(3));
        out[base + (n - 1) * s] =
            c * (2.0 * at(n - 1) - 5.0 * at(n - 2) + 4.0 * at(n - 3) - at(n - 4));
    }
    ScalarField::from_values(g, out).expect("derivative of a finite field")
}

pub fn d_dx(f: &ScalarField) -> ScalarField {
    first_derivative(f, Axis::X, Closure::SecondOrder)
}

pub fn d_dy(f: &ScalarField) -> ScalarField {
    first_derivative(f, Axis::Y, Closure::SecondOrder)
}

pub fn d2_dx2(f: &ScalarField) -> ScalarField {
    second_derivative(f, Axis::X)
}

pub fn d2_dy2(f: &ScalarField) -> ScalarField {
    second_derivative(f, Axis::Y)
}

pub fn d2_dxdy(f: &ScalarField) -> ScalarField {
    d_dx(&d_dy(f))
}

pub fn gradient(f: &ScalarField) -> VectorField {
    VectorField {
        u1: d_dx(f),
        u2: d_dy(f),
    }
}

/// Perpendicular gradient `(d/dy, -d/dx)`; the velocity of stream function `f`.
pub fn perp_gradient(f: &ScalarField) -> VectorField {
    VectorField {
        u1: d_dy(f),
        u2: d_dx(f).scale(-1.0),
    }
}

pub fn laplacian(f: &ScalarField) -> ScalarField {
    let mut out = d2_dx2(f);
    let yy = d2_dy2(f);
    for (o, y) in out.values_mut().iter_mut().zip(yy.values()) {
        *o += y;
    }
    out
}

pub fn divergence(v: &VectorField) -> ScalarField {
    let a = d_dx(&v.u1);
    let b = d_dy(&v.u2);
    a.zip_map(&b, |x, y| x + y)
}

/// Scalar curl `d v2/dx - d v1/dy`.
pub fn curl(v: &VectorField) -> ScalarField {
    let a = d_dx(&v.u2);
    let b = d_dy(&v.u1);
    a.zip_map(&b, |x, y| x - y)
}

/// Skew-symmetric discretization of `v . grad f`:
///
/// `A(v, f) = 1/2 [ v . D f + D . (v f) ]`
///
/// with `D` the summation-by-parts first derivative. For any `v` with
/// `v . n = 0` on the walls, `<f, A(v, f)> = 0` under the trapezoidal inner
/// product, which is what makes the discrete energy identity tight.
pub fn advect(v: &VectorField, f: &ScalarField) -> ScalarField {
    let sbp = Closure::SummationByParts;
    let fx = first_derivative(f, Axis::X, sbp);
    let fy = first_derivative(f, Axis::Y, sbp);
    let flux_x = v.u1.zip_map(f, |a, b| a * b);
    let flux_y = v.u2.zip_map(f, |a, b| a * b);
    let div_x = first_derivative(&flux_x, Axis::X, sbp);
    let div_y = first_derivative(&flux_y, Axis::Y, sbp);
    let g = *f.grid();
    let mut out = vec![0.0; g.len()];
    for (k, o) in out.iter_mut().enumerate() {
        *o = 0.5 * (v.u1[k] * fx[k] + v.u2[k] * fy[k] + div_x[k] + div_y[k]);
    }
    ScalarField::from_values(g, out).expect("advection of finite fields")
}

/// Five-point Laplacian at interior nodes; boundary nodes are set to zero.
pub fn laplacian_5pt_interior(f: &ScalarField) -> ScalarField {
    let g = *f.grid();
    let (nx, ny) = (g.nx(), g.ny());
    let cx = 1.0 / (g.dx() * g.dx());
    let cy = 1.0 / (g.dy() * g.dy());
    let v = f.values();
    let mut out = vec![0.0; g.len()];
    for j in 1..ny - 1 {
        for i in 1..nx - 1 {
            let k = g.idx(i, j);
            out[k] = cx * (v[k + 1] - 2.0 * v[k] + v[k - 1]) + cy * (v[k + nx] - 2.0 * v[k] + v[k - nx]);
        }
    }
    ScalarField::from_values(g, out).expect("laplacian of a finite field")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::norms::inner;

    fn grid() -> Grid {
        Grid::new(17, 13, 1.3, 0.9).unwrap()
    }

    #[test]
    fn gradient_exact_on_linears() {
        let g = grid();
        let f = ScalarField::from_fn(g, |x, y| 2.5 * x - 0.75 * y + 1.0);
        let gr = gradient(&f);
        for k in 0..g.len() {
            assert!((gr.u1[k] - 2.5).abs() < 1e-12);
            assert!((gr.u2[k] + 0.75).abs() < 1e-12);
        }
    }

    #[test]
    fn laplacian_exact_on_quadratics() {
        let g = grid();
        let f = ScalarField::from_fn(g, |x, y| x * x + y * y);
        let l = laplacian(&f);
        for k in 0..g.len() {
            assert!((l[k] - 4.0).abs() < 1e-9, "node {k}: {}", l[k]);
        }
    }

    #[test]
    fn curl_of_shear() {
        let g = grid();
        let v = VectorField::from_fn(g, |_, y| (y, 0.0));
        let c = curl(&v);
        for k in 0..g.len() {
            assert!((c[k] + 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn advect_uniform_flow_on_linear() {
        let g = grid();
        let v = VectorField::from_fn(g, |_, _| (1.0, 0.0));
        let f = ScalarField::from_fn(g, |x, _| x);
        let a = advect(&v, &f);
        for k in 0..g.len() {
            assert!((a[k] - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn curl_of_gradient_and_div_of_perp_gradient_vanish() {
        let g = grid();
        let f = ScalarField::from_fn(g, |x, y| (3.0 * x).sin() * (2.0 * y).cos() + x * y * y);
        let c = curl(&gradient(&f));
        let d = divergence(&perp_gradient(&f));
        let scale = f.max_abs() / (g.dx() * g.dy());
        for k in 0..g.len() {
            assert!(c[k].abs() < 1e-12 * scale);
            assert!(d[k].abs() < 1e-12 * scale);
        }
    }

    #[test]
    fn laplacian_is_symmetric_for_boundary_vanishing_fields() {
        let g = grid();
        let mut f = ScalarField::from_fn(g, |x, y| (5.0 * x).sin() + (x * y).exp());
        let mut h = ScalarField::from_fn(g, |x, y| (2.0 * y).cos() * x);
        f.set_boundary(0.0);
        h.set_boundary(0.0);
        let a = inner(&laplacian(&f), &h);
        let b = inner(&f, &laplacian(&h));
        assert!((a - b).abs() <= 1e-12 * a.abs().max(b.abs()));
    }
}
