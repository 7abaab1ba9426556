use super::*;
use crate::field::{mean, Grid, ScalarField};
use crate::fixtures::Fixture;
use crate::forward::{forward_solve, BoundaryVorticity, Integrator, SolverConfig};

fn cfg(n: usize, dt: f64, t: f64) -> SolverConfig {
    SolverConfig::new(Grid::unit_square(n).unwrap(), dt, t)
}

#[test]
fn projection_keeps_constant_state() {
    let c = cfg(17, 0.01, 0.2);
    let w = ScalarField::constant(c.grid, 2.0);
    let res = recover_projection(&w, 2.0, &c).unwrap();
    assert!(res.converged);
    for h in res.h.values() {
        assert!((h - 2.0).abs() < 1e-10);
    }
}

#[test]
fn projection_holds_the_mean() {
    let c = cfg(33, 2e-3, 0.05);
    let w = Fixture::Taylor.vorticity(c.grid).unwrap();
    let l = mean(&w);
    let res = recover_projection(&w, l, &c).unwrap();
    for n in &res.trajectory.nodes {
        assert!((n.mean_omega - l).abs() <= 1e-10 * (1.0 + l.abs()));
    }
    assert!(res.h.values()[1..].iter().all(|&h| h > 0.0));
    assert_eq!(res.residual_history.len(), 25);
}

#[test]
fn projection_step_solves_the_affine_equation() {
    let c = cfg(17, 1e-3, 1e-2);
    let integ = Integrator::new(c.clone()).unwrap();
    let w = Fixture::RandomStream { seed: 4, modes: 3 }.vorticity(c.grid).unwrap();
    let s = integ.initial_state(&w, 0.0).unwrap();
    let step = project_h_step(&integ, &s.omega, &s.u, None, 0.3).unwrap();
    let m0 = mean(&integ.step_vorticity(&s.omega, &s.u, None, 0.0).unwrap().omega);
    let m1 = mean(&integ.step_vorticity(&s.omega, &s.u, None, 1.0).unwrap().omega) - m0;
    assert!((step.h - (0.3 - m0) / m1).abs() < 1e-10 * step.h.abs().max(1.0));
    assert!((mean(&step.omega) - 0.3).abs() < 1e-12);
}

#[test]
fn incompatible_target_is_rejected() {
    let c = cfg(17, 0.01, 0.1);
    let w = ScalarField::constant(c.grid, 1.0);
    assert!(matches!(recover_projection(&w, 2.0, &c), Err(Error::IncompatibleL { .. })));
}

#[test]
fn forward_map_of_projected_h_is_flat() {
    let c = cfg(17, 5e-3, 0.05);
    let w = Fixture::RandomStream { seed: 8, modes: 3 }.vorticity(c.grid).unwrap();
    let l = mean(&w);
    let res = recover_projection(&w, l, &c).unwrap();
    for m in forward_map(&res.h, &w, &c).unwrap() {
        assert!((m - l).abs() < 1e-10 * (1.0 + l.abs()));
    }
    let k = ScalarField::constant(c.grid, -3.0);
    let hk = BoundaryVorticity::constant(-3.0, c.dt, 10).unwrap();
    for m in forward_map(&hk, &k, &c).unwrap() {
        assert!((m + 3.0).abs() < 1e-12);
    }
}

#[test]
fn jacobian_is_causal() {
    let c = cfg(17, 5e-3, 0.05);
    let w = Fixture::Taylor.vorticity(c.grid).unwrap();
    let h = BoundaryVorticity::from_fn(&c, |t| 10.0 * t).unwrap();
    for mode in [JacobianMode::Sensitivity, JacobianMode::FiniteDifference] {
        let j = sensitivity_jacobian(&h, &w, &c, mode, 1e-4).unwrap();
        for k in 0..j.nrows() {
            assert!(j[(k, k)] > 0.0);
            for col in k + 1..j.ncols() {
                assert_eq!(j[(k, col)], 0.0);
            }
        }
    }
}

#[test]
fn linear_map_has_constant_jacobian() {
    let c = cfg(17, 5e-3, 0.05).with_advection(false);
    let w = Fixture::Taylor.vorticity(c.grid).unwrap();
    let a = BoundaryVorticity::constant(0.0, c.dt, 10).unwrap();
    let b = BoundaryVorticity::from_fn(&c, |t| if t == 0.0 { 0.0 } else { 5.0 - 30.0 * t }).unwrap();
    let ja = sensitivity_jacobian(&a, &w, &c, JacobianMode::Sensitivity, 1e-4).unwrap();
    let jb = sensitivity_jacobian(&b, &w, &c, JacobianMode::Sensitivity, 1e-4).unwrap();
    assert!((ja - jb).abs().max() < 1e-14);
}

#[test]
fn iterative_methods_stop_at_exact_guess() {
    let c = cfg(17, 0.01, 0.1);
    let w = ScalarField::constant(c.grid, 1.25);
    for method in [Method::Landweber, Method::LevenbergMarquardt] {
        let icfg = InverseConfig::new(method, 1.25);
        let res = match method {
            Method::Landweber => landweber(&w, &c, &icfg),
            _ => levenberg_marquardt(&w, &c, &icfg),
        }
        .unwrap();
        assert!(res.converged);
        assert_eq!(res.iterations, 0);
        assert_eq!(res.residual_history.len(), 1);
        assert!(res.residual_history[0] < 1e-12);
    }
}

#[test]
fn gauss_newton_is_exact_on_the_linear_map() {
    let c = cfg(17, 5e-3, 0.05).with_advection(false);
    let w = Fixture::Taylor.vorticity(c.grid).unwrap();
    let mut icfg = InverseConfig::new(Method::LevenbergMarquardt, mean(&w));
    icfg.damping = 1e-14;
    let res = levenberg_marquardt(&w, &c, &icfg).unwrap();
    assert!(res.converged, "{:?}", res.residual_history);
    assert_eq!(res.iterations, 1);
}

#[test]
fn oversized_landweber_step_is_rejected() {
    let c = cfg(17, 5e-3, 0.05);
    let w = Fixture::Taylor.vorticity(c.grid).unwrap();
    let mut icfg = InverseConfig::new(Method::Landweber, mean(&w));
    let h = BoundaryVorticity::constant(mean(&w), c.dt, 10).unwrap();
    let mut hv = h.values().to_vec();
    hv[0] = 0.0;
    let h = BoundaryVorticity::new(0.0, c.dt, hv).unwrap();
    let j = sensitivity_jacobian(&h, &w, &c, JacobianMode::Sensitivity, 1e-4).unwrap();
    icfg.step_size = Some(10.0 * 2.0 / operator_norm_sq(&j));
    assert!(matches!(landweber(&w, &c, &icfg), Err(Error::StepSizeTooLarge { .. })));
}

#[test]
fn landweber_residuals_decrease_at_half_step() {
    let c = cfg(17, 5e-3, 0.05);
    let w = Fixture::Taylor.vorticity(c.grid).unwrap();
    let mut icfg = InverseConfig::new(Method::Landweber, mean(&w));
    icfg.max_iters = 30;
    let h0 = {
        let mut v = vec![mean(&w); 11];
        v[0] = 0.0;
        BoundaryVorticity::new(0.0, c.dt, v).unwrap()
    };
    let j = sensitivity_jacobian(&h0, &w, &c, JacobianMode::Sensitivity, 1e-4).unwrap();
    icfg.step_size = Some(1.0 / operator_norm_sq(&j));
    let res = landweber(&w, &c, &icfg).unwrap();
    for pair in res.residual_history[1..].windows(2) {
        assert!(pair[1] <= pair[0], "{:?}", res.residual_history);
    }
    // the stored trajectory belongs to the returned h
    let again = forward_solve(&w, &res.h, &c).unwrap();
    assert_eq!(again.nodes, res.trajectory.nodes);
}
