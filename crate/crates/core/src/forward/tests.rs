use std::f64::consts::PI;

use super::*;
use crate::field::{curl, divergence, Grid, NormKind, SpatialNorm};
use crate::fixtures::Fixture;

fn unit(n: usize) -> Grid {
    Grid::unit_square(n).unwrap()
}

fn sinsin(g: Grid) -> ScalarField {
    let mut f = ScalarField::from_fn(g, |x, y| (PI * x).sin() * (PI * y).sin());
    f.set_boundary(0.0);
    f
}

#[test]
fn stream_function_of_eigenmode() {
    let g = unit(33);
    let psi = stream_function(&sinsin(g).scale(2.0 * PI * PI)).unwrap();
    let err = psi.sub(&sinsin(g)).max_abs();
    assert!(err < 2e-3, "{err}");
    assert_eq!(stream_function(&ScalarField::zeros(g)).unwrap().max_abs(), 0.0);
}

#[test]
fn velocity_of_sinsin_stream() {
    for (n, tol) in [(33, 1.2e-2), (65, 3e-3)] {
        let g = unit(n);
        let u = velocity_from_stream(&sinsin(g)).unwrap();
        let exact = VectorField::from_fn(g, |x, y| {
            (PI * (PI * x).sin() * (PI * y).cos(), -PI * (PI * x).cos() * (PI * y).sin())
        });
        let err = u.sub(&exact);
        assert!(err.u1.max_abs().max(err.u2.max_abs()) < tol);
    }
}

#[test]
fn velocity_is_divergence_free_and_tangential() {
    let g = Grid::new(49, 37, 1.3, 0.8).unwrap();
    let omega = Fixture::RandomStream { seed: 5, modes: 2 }.vorticity(g).unwrap();
    let psi = stream_function(&omega).unwrap();
    let u = velocity_from_stream(&psi).unwrap();
    let d = divergence(&u);
    let bound = 1e-10 * u.max_speed() / g.min_spacing();
    for j in 1..g.ny() - 1 {
        for i in 1..g.nx() - 1 {
            assert!(d.at(i, j).abs() <= bound);
        }
    }
    for j in 0..g.ny() {
        assert_eq!(u.u1.at(0, j), 0.0);
        assert_eq!(u.u1.at(g.nx() - 1, j), 0.0);
    }
    for i in 0..g.nx() {
        assert_eq!(u.u2.at(i, 0), 0.0);
        assert_eq!(u.u2.at(i, g.ny() - 1), 0.0);
    }
    // curl(u) reproduces omega up to the one-sided stencil error
    let c = curl(&u);
    let mut worst: f64 = 0.0;
    for j in 2..g.ny() - 2 {
        for i in 2..g.nx() - 2 {
            worst = worst.max((c.at(i, j) - omega.at(i, j)).abs());
        }
    }
    assert!(worst < 0.05 * omega.max_abs(), "{worst}");
}

#[test]
fn velocity_rejects_nonconstant_boundary() {
    let g = unit(9);
    let psi = ScalarField::from_fn(g, |x, _| x);
    assert!(matches!(velocity_from_stream(&psi), Err(Error::BoundaryNotConstant { .. })));
    assert_eq!(velocity_from_stream(&ScalarField::zeros(g)).unwrap().max_speed(), 0.0);
}

#[test]
fn compatibility_reports() {
    let g = unit(17);
    let w = Fixture::Taylor.vorticity(g).unwrap();
    assert!(check_compatibility(&w, 0.0, None).passed());
    let c = ScalarField::constant(g, 2.5);
    assert!(check_compatibility(&c, 2.5, Some(2.5)).passed());
    let r = check_compatibility(&c, 0.0, None);
    assert!(!r.passed());
    assert_eq!(r.boundary_mismatch, 2.5);
    assert_eq!(check_compatibility(&c, 2.5, Some(3.5)).mean_ok, Some(false));
}

#[test]
fn zero_and_constant_states_are_fixed_points() {
    let g = unit(17);
    let integ = Integrator::new(SolverConfig::new(g, 1e-3, 1e-2)).unwrap();
    let z = ScalarField::zeros(g);
    let out = integ.step_vorticity(&z, &VectorField::zeros(g), None, 0.0).unwrap();
    assert_eq!(out.omega.max_abs(), 0.0);
    let c = ScalarField::constant(g, 3.0);
    let s = integ.initial_state(&c, 3.0).unwrap();
    let out = integ.step_vorticity(&s.omega, &s.u, None, 3.0).unwrap();
    assert!(out.omega.map(|v| v - 3.0).max_abs() < 1e-12);
}

#[test]
fn crank_nicolson_amplification() {
    let g = unit(33);
    let dt = 1e-3;
    let cfg = SolverConfig::new(g, dt, dt).with_advection(false);
    let integ = Integrator::new(cfg).unwrap();
    let w = sinsin(g);
    let out = integ.step_vorticity(&w, &VectorField::zeros(g), None, 0.0).unwrap();
    let ratio = out.omega.at(16, 16) / w.at(16, 16);
    // discrete eigenvalue of the five-point operator for this mode
    let lam = 2.0 * 4.0 / (g.dx() * g.dx()) * (PI * g.dx() / 2.0).sin().powi(2);
    let cn = (1.0 - 0.5 * lam * dt) / (1.0 + 0.5 * lam * dt);
    assert!((ratio - cn).abs() < 1e-12);
    let continuum = (1.0 - PI * PI * dt) / (1.0 + PI * PI * dt);
    assert!((ratio - continuum).abs() < 1e-4);
    assert!((continuum - (-2.0 * PI * PI * dt).exp()).abs() < 1e-6);
}

#[test]
fn step_is_affine_in_boundary_value() {
    let g = Grid::new(19, 23, 1.0, 1.4).unwrap();
    let integ = Integrator::new(SolverConfig::new(g, 1e-3, 1e-2)).unwrap();
    let w = Fixture::RandomStream { seed: 9, modes: 4 }.vorticity(g).unwrap();
    let s = integ.initial_state(&w, 0.0).unwrap();
    let step = |h| integ.step_vorticity(&s.omega, &s.u, None, h).unwrap().omega;
    let (a, b) = (-0.7, 2.9);
    let (fa, fb, fm) = (step(a), step(b), step(0.5 * (a + b)));
    let defect = fa.zip_map(&fb, |x, y| x + y).axpy(-2.0, &fm);
    assert!(defect.max_abs() < 1e-12 * (1.0 + fa.max_abs()));
    assert_eq!(fa.boundary_deviation(a), 0.0);
}

#[test]
fn cfl_violation_is_reported() {
    let g = unit(17);
    let integ = Integrator::new(SolverConfig::new(g, 0.1, 0.1)).unwrap();
    let s = integ.initial_state(&Fixture::Taylor.vorticity(g).unwrap(), 0.0).unwrap();
    assert!(matches!(integ.advance(&s, 0.0), Err(Error::CflViolation { .. })));
}

#[test]
fn config_validation() {
    let g = unit(9);
    assert!(SolverConfig::new(g, 1.0, 0.5).validate().is_err());
    assert!(SolverConfig::new(g, 0.3, 1.0).validate().is_err());
    assert!(SolverConfig::new(g, -1.0, 1.0).validate().is_err());
    assert_eq!(SolverConfig::new(g, 0.001, 0.1).n_steps().unwrap(), 100);
}

fn taylor_error(n: usize, nt: usize) -> f64 {
    let g = unit(n);
    let t_end = 0.1;
    let cfg = SolverConfig::new(g, t_end / nt as f64, t_end);
    let w0 = Fixture::Taylor.vorticity(g).unwrap();
    let h = BoundaryVorticity::constant(0.0, cfg.dt, nt).unwrap();
    let traj = forward_solve(&w0, &h, &cfg).unwrap();
    let exact = w0.scale((-2.0 * PI * PI * t_end).exp());
    traj.last().omega.sub(&exact).norm(NormKind::L2) / exact.norm(NormKind::L2)
}

#[test]
fn taylor_vortex_decays_at_analytic_rate() {
    let e33 = taylor_error(33, 50);
    let e65 = taylor_error(65, 100);
    assert!(e65 < 0.02, "{e65}");
    assert!((e33 / e65).log2() > 1.8, "{e33} {e65}");
}

#[test]
fn taylor_mean_follows_exponential() {
    let g = unit(33);
    let cfg = SolverConfig::new(g, 2e-3, 0.1);
    let w0 = Fixture::Taylor.vorticity(g).unwrap();
    let h = BoundaryVorticity::constant(0.0, cfg.dt, 50).unwrap();
    let traj = forward_solve(&w0, &h, &cfg).unwrap();
    assert_eq!(traj.nodes[0].mean_omega, mean(&w0));
    for n in &traj.nodes {
        let exact = 8.0 * (-2.0 * PI * PI * n.t).exp();
        assert!((n.mean_omega - exact).abs() < 0.02 * 8.0, "{} {}", n.t, n.mean_omega);
    }
}

#[test]
fn constant_state_is_steady() {
    let g = unit(17);
    let cfg = SolverConfig::new(g, 1e-2, 0.2).with_storage(StoragePolicy::All);
    let c = ScalarField::constant(g, -1.5);
    let h = BoundaryVorticity::constant(-1.5, cfg.dt, 20).unwrap();
    let traj = forward_solve(&c, &h, &cfg).unwrap();
    assert_eq!(traj.snapshots.len(), 21);
    for s in &traj.snapshots {
        assert!(s.omega.map(|v| v + 1.5).max_abs() < 1e-10);
    }
}

#[test]
fn incompatible_initial_data_is_rejected() {
    let g = unit(17);
    let cfg = SolverConfig::new(g, 1e-2, 0.1);
    let c = ScalarField::constant(g, 1.0);
    let h = BoundaryVorticity::constant(0.0, cfg.dt, 10).unwrap();
    assert!(matches!(forward_solve(&c, &h, &cfg), Err(Error::IncompatibleInitialData { .. })));
    let short = BoundaryVorticity::constant(1.0, cfg.dt, 5).unwrap();
    assert!(matches!(forward_solve(&c, &short, &cfg), Err(Error::LengthMismatch { .. })));
}

#[test]
fn storage_policy_controls_snapshots() {
    let g = unit(9);
    let w0 = Fixture::Taylor.vorticity(g).unwrap();
    let h = BoundaryVorticity::constant(0.0, 0.01, 10).unwrap();
    let every = SolverConfig::new(g, 0.01, 0.1).with_storage(StoragePolicy::Every(4));
    let ks: Vec<usize> = forward_solve(&w0, &h, &every).unwrap().snapshots.iter().map(|s| s.k).collect();
    assert_eq!(ks, vec![0, 4, 8, 10]);
    let norms = SolverConfig::new(g, 0.01, 0.1);
    let traj = forward_solve(&w0, &h, &norms).unwrap();
    assert_eq!(traj.snapshots.len(), 2);
    assert_eq!(traj.nodes.len(), 11);
    assert_eq!(traj.steps.len(), 10);
}

#[test]
fn pressure_is_mean_zero_and_vanishes_at_rest() {
    let g = unit(33);
    let z = VectorField::zeros(g);
    assert_eq!(recover_pressure(&z, &z, 1e-3).unwrap().max_abs(), 0.0);
    let w = Fixture::RandomStream { seed: 2, modes: 3 }.vorticity(g).unwrap();
    let u = velocity_from_stream(&stream_function(&w).unwrap()).unwrap();
    let p = recover_pressure(&u, &u.scale(0.99), 1e-3).unwrap();
    assert!(mean(&p).abs() <= 1e-12 * p.norm(NormKind::L2));
}

#[test]
fn taylor_pressure_matches_closed_form() {
    // psi = sin sin gives p = (pi^2 / 4)(cos 2 pi x + cos 2 pi y) up to a constant
    let errs: Vec<f64> = [33usize, 65]
        .iter()
        .map(|&n| {
            let g = unit(n);
            let u = velocity_from_stream(&sinsin(g)).unwrap();
            let p = recover_pressure(&u, &u, 1e-3).unwrap();
            let exact = ScalarField::from_fn(g, |x, y| {
                0.25 * PI * PI * ((2.0 * PI * x).cos() + (2.0 * PI * y).cos())
            });
            let shift = mean(&exact);
            p.sub(&exact.map(|v| v - shift)).norm(NormKind::L2)
        })
        .collect();
    assert!(errs[1] < 1e-2, "{errs:?}");
    assert!(errs[0] / errs[1] > 3.0, "{errs:?}");
}

#[test]
fn runs_are_bit_identical() {
    let g = unit(17);
    let cfg = SolverConfig::new(g, 5e-3, 0.05).with_storage(StoragePolicy::All);
    let w0 = Fixture::RandomStream { seed: 1, modes: 4 }.vorticity(g).unwrap();
    let h = BoundaryVorticity::from_fn(&cfg, |t| t * t).unwrap();
    assert_eq!(forward_solve(&w0, &h, &cfg).unwrap(), forward_solve(&w0, &h, &cfg).unwrap());
}
