use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::norms::inner;
use crate::field::{mean, Grid, NeumannFlux, ScalarField, SpectralSolver};
use crate::forward::Trajectory;

pub const MIN_FIT_SAMPLES: usize = 10;
const EIG_TOL: f64 = 1e-8;
const EIG_MAX_ITERS: usize = 2000;
/// Centered norms below this fraction of `|omega0|` count as zero.
const DEGENERATE_LEVEL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecayReport {
    /// Fitted rate of `|omega - mean(omega)|_L2` over `[T/2, T]`.
    pub lambda_fit: f64,
    /// Smallest nonzero Neumann eigenvalue of the grid.
    pub lambda_ref: f64,
    pub r_squared: f64,
    pub samples: usize,
    /// The centered norm is zero to rounding and no rate exists.
    pub degenerate: bool,
    /// `lambda_fit >= 0.95 lambda_ref`, or a degenerate fit.
    pub pass: bool,
}

/// Log-linear least squares fit of the centered vorticity norm on the second
/// half of the trajectory.
pub fn decay_fit(traj: &Trajectory) -> Result<DecayReport> {
    let t_end = traj.t_end();
    let window: Vec<(f64, f64)> = traj
        .nodes
        .iter()
        .filter(|d| d.t >= 0.5 * t_end - 1e-12 * t_end)
        .map(|d| (d.t, d.omega_centered_l2))
        .collect();
    if window.len() < MIN_FIT_SAMPLES {
        return Err(Error::InsufficientSamples {
            needed: MIN_FIT_SAMPLES,
            found: window.len(),
        });
    }
    let lambda_ref = poincare_estimate(&traj.grid)?;
    let scale = traj.nodes[0].omega_l2.max(1.0);
    if window.iter().any(|&(_, c)| !(c > DEGENERATE_LEVEL * scale)) {
        return Ok(DecayReport {
            lambda_fit: 0.0,
            lambda_ref,
            r_squared: 0.0,
            samples: window.len(),
            degenerate: true,
            pass: true,
        });
    }
    let n = window.len() as f64;
    let tm = window.iter().map(|p| p.0).sum::<f64>() / n;
    let ym = window.iter().map(|p| p.1.ln()).sum::<f64>() / n;
    let (mut stt, mut sty, mut syy) = (0.0, 0.0, 0.0);
    for &(t, c) in &window {
        let (a, b) = (t - tm, c.ln() - ym);
        stt += a * a;
        sty += a * b;
        syy += b * b;
    }
    let slope = sty / stt;
    let r_squared = if syy > 0.0 { (sty * sty) / (stt * syy) } else { 1.0 };
    let lambda_fit = -slope;
    Ok(DecayReport {
        lambda_fit,
        lambda_ref,
        r_squared,
        samples: window.len(),
        degenerate: false,
        pass: lambda_fit >= 0.95 * lambda_ref,
    })
}

/// Smallest nonzero eigenvalue of the discrete Neumann Laplacian, by inverse
/// power iteration on mean-zero fields.
pub fn poincare_estimate(grid: &Grid) -> Result<f64> {
    let solver = SpectralSolver::new(*grid);
    let flux = NeumannFlux::zero(grid);
    let (lx, ly) = (grid.lx(), grid.ly());
    let mut x = ScalarField::from_fn(*grid, |x, y| {
        (x / lx - 0.5) + 0.7 * (y / ly - 0.5) + 0.1 * (3.0 * std::f64::consts::PI * x / lx).cos()
    });
    normalize(&mut x);
    for _ in 0..EIG_MAX_ITERS {
        let mut y = solver.poisson_neumann(&x, &flux)?.field;
        let m = mean(&y);
        y = y.map(|v| v - m);
        let xy = inner(&x, &y);
        let mu = 1.0 / xy;
        // eigen-residual |x - mu y| / |x|, with |x| = 1
        let res = inner_norm(&x.axpy(-mu, &y));
        normalize(&mut y);
        x = y;
        if res <= EIG_TOL {
            return Ok(mu);
        }
    }
    Err(Error::EigensolverNonconvergence {
        iterations: EIG_MAX_ITERS,
    })
}

fn inner_norm(f: &ScalarField) -> f64 {
    inner(f, f).max(0.0).sqrt()
}

fn normalize(f: &mut ScalarField) {
    let m = mean(f);
    let c = f.map(|v| v - m);
    let n = inner_norm(&c);
    *f = c.scale(1.0 / n);
}
