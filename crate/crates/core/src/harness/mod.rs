//! Numerical checks of the a priori estimates: the energy balance, the
//! vorticity and velocity bounds, exponential decay of the centered
//! vorticity, the elliptic constants, and Lipschitz stability of solution
//! pairs. Every report is a pure function of its inputs.

mod decay;
mod elliptic;
mod energy;
mod lemma;
mod stability;

pub use decay::{decay_fit, poincare_estimate, DecayReport, MIN_FIT_SAMPLES};
pub use elliptic::{elliptic_constant_probe, elliptic_ratios, ProbeStats, RatioSummary};
pub use energy::{energy_identity_check, EnergyReport};
pub use lemma::{lemma_bounds_check, BoundKind, BoundRow, LemmaReport, GRADIENT_SLACK, SUP_SLACK};
pub use stability::{stability_pair, StabilityReport};

/// `lhs / rhs`, with `0 / 0 = 0`.
pub(crate) fn ratio(lhs: f64, rhs: f64) -> f64 {
    if rhs > 0.0 {
        lhs / rhs
    } else if lhs == 0.0 {
        0.0
    } else {
        f64::INFINITY
    }
}

/// Sum of `dt q^2` over per-interval samples.
pub(crate) fn interval_sq(q: &[f64], dt: f64) -> f64 {
    dt * q.iter().map(|v| v * v).sum::<f64>()
}
