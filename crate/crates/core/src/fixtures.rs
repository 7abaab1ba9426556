//! Named initial vorticity fields.
//!
//! Spec strings: `taylor`, `constant:C`, `mode:M,N[,AMP]`,
//! `random-stream:SEED,MODES`, and `file:PATH` (loaded by the caller).
//! Every generated field except `constant` vanishes on the walls, so it is
//! compatible with `h(0) = 0`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::field::{Grid, ScalarField};

/// Largest mode count accepted by `random-stream`.
pub const MAX_MODES: u32 = 64;

#[derive(Debug, Clone, PartialEq)]
pub enum Fixture {
    /// `psi = sin(pi x / lx) sin(pi y / ly)`; an exact decaying solution with `h = 0`.
    Taylor,
    Constant(f64),
    /// Single sine mode of the stream function, scaled by `amp`.
    Mode { m: u32, n: u32, amp: f64 },
    /// Band-limited random stream function with `modes x modes` sine modes
    /// and coefficients `N(0,1) / (m^2 + n^2)`.
    RandomStream { seed: u64, modes: u32 },
    File(String),
}

impl Fixture {
    /// Stable identifier used in output file names.
    pub fn id(&self) -> String {
        match self {
            Fixture::Taylor => "taylor".into(),
            Fixture::Constant(c) => format!("constant_{c}"),
            Fixture::Mode { m, n, amp } => format!("mode_{m}_{n}_{amp}"),
            Fixture::RandomStream { seed, modes } => format!("random-stream_{seed}_{modes}"),
            Fixture::File(p) => {
                let stem = std::path::Path::new(p)
                    .file_stem()
                    .and_then(|s| s.to_str())
                    .unwrap_or("field");
                format!("file_{stem}")
            }
        }
    }

    /// Boundary vorticity at `t = 0` compatible with the generated field.
    pub fn initial_boundary_value(&self) -> Option<f64> {
        match self {
            Fixture::Constant(c) => Some(*c),
            Fixture::File(_) => None,
            _ => Some(0.0),
        }
    }

    /// Samples the initial vorticity on `grid`.
    pub fn vorticity(&self, grid: Grid) -> Result<ScalarField> {
        match self {
            Fixture::Taylor => Ok(mode_vorticity(grid, 1, 1, 1.0)),
            Fixture::Constant(c) => Ok(ScalarField::constant(grid, *c)),
            Fixture::Mode { m, n, amp } => Ok(mode_vorticity(grid, *m, *n, *amp)),
            Fixture::RandomStream { seed, modes } => Ok(random_stream(grid, *seed, *modes).1),
            Fixture::File(p) => Err(Error::InvalidFixture {
                spec: format!("file:{p}"),
                reason: "field files are read by the caller".into(),
            }),
        }
    }

    /// Stream function paired with [`Fixture::vorticity`], where one is known
    /// in closed form.
    pub fn stream_function(&self, grid: Grid) -> Option<ScalarField> {
        match self {
            Fixture::Taylor => Some(mode_stream(grid, 1, 1, 1.0)),
            Fixture::Mode { m, n, amp } => Some(mode_stream(grid, *m, *n, *amp)),
            Fixture::RandomStream { seed, modes } => Some(random_stream(grid, *seed, *modes).0),
            _ => None,
        }
    }
}

fn mode_stream(grid: Grid, m: u32, n: u32, amp: f64) -> ScalarField {
    let (kx, ky) = (m as f64 * PI / grid.lx(), n as f64 * PI / grid.ly());
    let mut f = ScalarField::from_fn(grid, |x, y| amp * (kx * x).sin() * (ky * y).sin());
    f.set_boundary(0.0);
    f
}

/// Continuum `-lap psi` of a sine mode, sampled, with exact zeros on the walls.
pub fn mode_vorticity(grid: Grid, m: u32, n: u32, amp: f64) -> ScalarField {
    let (kx, ky) = (m as f64 * PI / grid.lx(), n as f64 * PI / grid.ly());
    let lam = kx * kx + ky * ky;
    mode_stream(grid, m, n, amp * lam)
}

/// Decay rate of a sine mode under the heat flow, `pi^2 (m^2/lx^2 + n^2/ly^2)`.
pub fn mode_rate(grid: &Grid, m: u32, n: u32) -> f64 {
    let (kx, ky) = (m as f64 * PI / grid.lx(), n as f64 * PI / grid.ly());
    kx * kx + ky * ky
}

/// Seeded band-limited stream function and its continuum vorticity.
pub fn random_stream(grid: Grid, seed: u64, modes: u32) -> (ScalarField, ScalarField) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut coeffs = Vec::with_capacity((modes * modes) as usize);
    for m in 1..=modes {
        for n in 1..=modes {
            let z: f64 = StandardNormal.sample(&mut rng);
            coeffs.push((m, n, z / (m * m + n * n) as f64));
        }
    }
    let mut psi = ScalarField::zeros(grid);
    let mut omega = ScalarField::zeros(grid);
    for &(m, n, a) in &coeffs {
        let s = mode_stream(grid, m, n, a);
        let lam = mode_rate(&grid, m, n);
        for k in 0..grid.len() {
            psi[k] += s[k];
            omega[k] += lam * s[k];
        }
    }
    (psi, omega)
}

impl FromStr for Fixture {
    type Err = Error;

    fn from_str(spec: &str) -> Result<Self> {
        let bad = |reason: &str| Error::InvalidFixture {
            spec: spec.to_string(),
            reason: reason.to_string(),
        };
        let spec_t = spec.trim();
        let (name, params) = match spec_t.split_once(':') {
            Some((n, p)) => (n, Some(p)),
            None => (spec_t, None),
        };
        let nums = |p: &str| -> Vec<String> { p.split(',').map(|s| s.trim().to_string()).collect() };
        match (name, params) {
            ("taylor", None) => Ok(Fixture::Taylor),
            ("constant", Some(p)) => {
                let c: f64 = p.trim().parse().map_err(|_| bad("constant expects a number"))?;
                if !c.is_finite() {
                    return Err(bad("constant must be finite"));
                }
                Ok(Fixture::Constant(c))
            }
            ("mode", Some(p)) => {
                let parts = nums(p);
                if parts.len() != 2 && parts.len() != 3 {
                    return Err(bad("mode expects M,N[,AMP]"));
                }
                let m: u32 = parts[0].parse().map_err(|_| bad("M must be a positive integer"))?;
                let n: u32 = parts[1].parse().map_err(|_| bad("N must be a positive integer"))?;
                if m == 0 || n == 0 || m > MAX_MODES || n > MAX_MODES {
                    return Err(bad("mode numbers must lie in 1..=64"));
                }
                let amp = match parts.get(2) {
                    Some(a) => a.parse::<f64>().map_err(|_| bad("AMP must be a number"))?,
                    None => 1.0,
                };
                if !amp.is_finite() {
                    return Err(bad("AMP must be finite"));
                }
                Ok(Fixture::Mode { m, n, amp })
            }
            ("random-stream", Some(p)) => {
                let parts = nums(p);
                if parts.len() != 2 {
                    return Err(bad("random-stream expects SEED,MODES"));
                }
                let seed: u64 = parts[0].parse().map_err(|_| bad("SEED must be an integer"))?;
                let modes: u32 = parts[1].parse().map_err(|_| bad("MODES must be an integer"))?;
                if modes == 0 || modes > MAX_MODES {
                    return Err(bad("MODES must lie in 1..=64"));
                }
                Ok(Fixture::RandomStream { seed, modes })
            }
            ("file", Some(p)) if !p.trim().is_empty() => Ok(Fixture::File(p.trim().to_string())),
            _ => Err(bad("unknown fixture")),
        }
    }
}

impl fmt::Display for Fixture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Fixture::Taylor => write!(f, "taylor"),
            Fixture::Constant(c) => write!(f, "constant:{c}"),
            Fixture::Mode { m, n, amp } => write!(f, "mode:{m},{n},{amp}"),
            Fixture::RandomStream { seed, modes } => write!(f, "random-stream:{seed},{modes}"),
            Fixture::File(p) => write!(f, "file:{p}"),
        }
    }
}
