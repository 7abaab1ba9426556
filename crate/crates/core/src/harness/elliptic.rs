use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;
use crate::field::{BoundaryValue, Grid, NormKind, ScalarField, SpatialNorm, SpectralSolver};
use crate::fixtures::random_stream;
use crate::forward::velocity_from_stream;

/// Highest sine mode per axis in probe samples.
const PROBE_MODES: u32 = 4;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatioSummary {
    pub min: f64,
    pub max: f64,
    pub mean: f64,
    pub median: f64,
}

impl RatioSummary {
    fn from_values(mut v: Vec<f64>) -> Self {
        if v.is_empty() {
            return Self {
                min: 0.0,
                max: 0.0,
                mean: 0.0,
                median: 0.0,
            };
        }
        v.sort_by(f64::total_cmp);
        let n = v.len();
        let median = if n % 2 == 1 {
            v[n / 2]
        } else {
            0.5 * (v[n / 2 - 1] + v[n / 2])
        };
        Self {
            min: v[0],
            max: v[n - 1],
            mean: v.iter().sum::<f64>() / n as f64,
            median,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeStats {
    pub samples: usize,
    /// Samples with zero vorticity, left out of the statistics.
    pub skipped: usize,
    /// `|u|_H1 / |omega|_L2`.
    pub h1_over_l2: RatioSummary,
    /// `|u|_H2 / |omega|_H1`.
    pub h2_over_h1: RatioSummary,
}

/// `(|u|_H1 / |omega|_L2, |u|_H2 / |omega|_H1)` for the velocity induced by
/// `omega` with `psi = 0` on the walls; `None` for zero vorticity.
pub fn elliptic_ratios(solver: &SpectralSolver, omega: &ScalarField) -> Result<Option<(f64, f64)>> {
    let w_l2 = omega.norm(NormKind::L2);
    if !(w_l2 > 0.0) {
        return Ok(None);
    }
    let psi = solver.poisson_dirichlet(omega, BoundaryValue::Constant(0.0))?;
    let u = velocity_from_stream(&psi)?;
    Ok(Some((u.norm(NormKind::H1) / w_l2, u.norm(NormKind::H2) / omega.norm(NormKind::H1))))
}

/// Samples seeded band-limited stream functions and collects the ratios of
/// [`elliptic_ratios`].
pub fn elliptic_constant_probe(grid: &Grid, n_samples: usize, seed: u64) -> Result<ProbeStats> {
    let solver = SpectralSolver::new(*grid);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut a, mut b) = (Vec::with_capacity(n_samples), Vec::with_capacity(n_samples));
    let mut skipped = 0;
    for _ in 0..n_samples {
        let modes = rng.random_range(1..=PROBE_MODES);
        let (_, omega) = random_stream(*grid, rng.random(), modes);
        match elliptic_ratios(&solver, &omega)? {
            Some((r1, r2)) => {
                a.push(r1);
                b.push(r2);
            }
            None => skipped += 1,
        }
    }
    Ok(ProbeStats {
        samples: n_samples,
        skipped,
        h1_over_l2: RatioSummary::from_values(a),
        h2_over_h1: RatioSummary::from_values(b),
    })
}
