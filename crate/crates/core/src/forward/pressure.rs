use crate::error::{Error, Result};
use crate::field::ops::{d_dx, d_dy};
use crate::field::{divergence, laplacian, NeumannFlux, ScalarField, SpectralSolver, VectorField};

#[derive(Debug, Clone)]
pub struct PressureTerms {
    /// Mean-zero pressure.
    pub pressure: ScalarField,
    /// Constant removed from the source to make the Neumann problem solvable.
    pub shift: f64,
}

fn convection(u: &VectorField) -> VectorField {
    let dot = |f: &ScalarField| {
        let (fx, fy) = (d_dx(f), d_dy(f));
        let mut out = fx.zip_map(&u.u1, |a, b| a * b);
        for (o, (a, b)) in out.values_mut().iter_mut().zip(fy.values().iter().zip(u.u2.values())) {
            *o += a * b;
        }
        out
    };
    VectorField {
        u1: dot(&u.u1),
        u2: dot(&u.u2),
    }
}

/// Pressure from the momentum balance `u_t + grad p = lap u - u.grad u`:
/// `-lap p = div(u.grad u)` with `dp/dn = n.(lap u - u.grad u - u_t)`,
/// `u_t = (u_curr - u_prev) / dt`, normalized to zero mean.
pub fn recover_pressure_with(
    solver: &SpectralSolver,
    u_curr: &VectorField,
    u_prev: &VectorField,
    dt: f64,
) -> Result<PressureTerms> {
    let g = *solver.grid();
    if *u_curr.grid() != g || *u_prev.grid() != g {
        return Err(Error::GridMismatch);
    }
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::InvalidConfig(format!("dt must be positive, got {dt}")));
    }
    let conv = convection(u_curr);
    let rhs = divergence(&conv);
    let (lu1, lu2) = (laplacian(&u_curr.u1), laplacian(&u_curr.u2));
    let m = |lap: &ScalarField, c: &ScalarField, cur: &ScalarField, prev: &ScalarField, k: usize| {
        lap[k] - c[k] - (cur[k] - prev[k]) / dt
    };
    let (nx, ny) = (g.nx(), g.ny());
    let mut flux = NeumannFlux::zero(&g);
    for j in 0..ny {
        let (l, r) = (g.idx(0, j), g.idx(nx - 1, j));
        flux.left[j] = -m(&lu1, &conv.u1, &u_curr.u1, &u_prev.u1, l);
        flux.right[j] = m(&lu1, &conv.u1, &u_curr.u1, &u_prev.u1, r);
    }
    for i in 0..nx {
        let (b, t) = (g.idx(i, 0), g.idx(i, ny - 1));
        flux.bottom[i] = -m(&lu2, &conv.u2, &u_curr.u2, &u_prev.u2, b);
        flux.top[i] = m(&lu2, &conv.u2, &u_curr.u2, &u_prev.u2, t);
    }
    let sol = solver.poisson_neumann(&rhs, &flux)?;
    Ok(PressureTerms {
        pressure: sol.field,
        shift: sol.shift,
    })
}

/// One-shot form of [`recover_pressure_with`].
pub fn recover_pressure(u_curr: &VectorField, u_prev: &VectorField, dt: f64) -> Result<ScalarField> {
    let solver = SpectralSolver::new(*u_curr.grid());
    recover_pressure_with(&solver, u_curr, u_prev, dt).map(|p| p.pressure)
}
