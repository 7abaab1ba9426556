//! Acceptance criteria, one test each. Every test writes a single
//! `criterion N: PASS|FAIL ...` line to stderr, outside the capture of the
//! test harness, then asserts.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fs;
use std::io::Write;
use std::path::Path;
use std::time::Instant;

use vortinv::field::{mean, Grid, NormKind, ScalarField, SpatialNorm};
use vortinv::fixtures::{mode_rate, mode_vorticity, Fixture};
use vortinv::forward::{forward_solve, time_l2, BoundaryVorticity, SolverConfig, StoragePolicy, Trajectory};
use vortinv::harness::{decay_fit, energy_identity_check, lemma_bounds_check, poincare_estimate, stability_pair};
use vortinv::inverse::{
    landweber, levenberg_marquardt, recover_projection, sensitivity_jacobian, InverseConfig, JacobianMode, Method,
};

fn verdict(n: u32, pass: bool, detail: String) {
    let tag = if pass { "PASS" } else { "FAIL" };
    let _ = writeln!(std::io::stderr(), "criterion {n:>2}: {tag} {detail}");
    assert!(pass, "criterion {n}: {detail}");
}

fn unit(n: usize) -> Grid {
    Grid::unit_square(n).unwrap()
}

/// Step that keeps `dt / dx` fixed at `1e-3 * 64`.
fn scaled_dt(n: usize) -> f64 {
    1e-3 * 64.0 / (n - 1) as f64
}

fn order(coarse: f64, fine: f64) -> f64 {
    (coarse / fine).log2()
}

fn invariant(w: &ScalarField, c: &SolverConfig) -> Trajectory {
    recover_projection(w, mean(w), c).unwrap().trajectory
}

/// Fixtures run in invariant mode for the bound, invariant, and decay checks.
fn suite() -> Vec<Fixture> {
    vec![
        Fixture::Taylor,
        Fixture::Mode { m: 1, n: 2, amp: 1.0 },
        Fixture::Mode { m: 2, n: 2, amp: 0.5 },
        Fixture::RandomStream { seed: 1, modes: 4 },
        Fixture::RandomStream { seed: 7, modes: 3 },
        Fixture::Constant(2.0),
    ]
}

fn suite_runs() -> Vec<(Fixture, ScalarField, Trajectory)> {
    let c = SolverConfig::new(unit(65), 1e-3, 0.5);
    suite()
        .into_iter()
        .map(|f| {
            let w = f.vorticity(c.grid).unwrap();
            let t = invariant(&w, &c);
            (f, w, t)
        })
        .collect()
}

#[test]
fn criterion_01_taylor_forward_oracle() {
    let clock = Instant::now();
    let errs: Vec<f64> = [33, 65, 129]
        .iter()
        .map(|&n| {
            let c = SolverConfig::new(unit(n), scaled_dt(n), 0.1);
            let w0 = Fixture::Taylor.vorticity(c.grid).unwrap();
            let h = BoundaryVorticity::constant(0.0, c.dt, c.n_steps().unwrap()).unwrap();
            let w = forward_solve(&w0, &h, &c).unwrap().last().omega.clone();
            let exact = w0.scale((-2.0 * PI * PI * 0.1).exp());
            w.sub(&exact).norm(NormKind::L2) / exact.norm(NormKind::L2)
        })
        .collect();
    let p = order(errs[1], errs[2]);
    let secs = clock.elapsed().as_secs_f64();
    verdict(
        1,
        errs[1] <= 0.02 && p >= 1.8 && order(errs[0], errs[1]) >= 1.8 && secs <= 180.0,
        format!(
            "Taylor relative L2 error {:.3e} at 65^2 (dt 1e-3), errors {:.2e}/{:.2e}/{:.2e}, orders {:.2}/{:.2}, {secs:.1}s",
            errs[1],
            errs[0],
            errs[1],
            errs[2],
            order(errs[0], errs[1]),
            p
        ),
    );
}

#[test]
fn criterion_02_steady_state_is_exact() {
    let c = SolverConfig::new(unit(33), 5e-3, 0.2);
    let k = 1.75;
    let w = ScalarField::constant(c.grid, k);
    let h = BoundaryVorticity::constant(k, c.dt, c.n_steps().unwrap()).unwrap();
    let traj = forward_solve(&w, &h, &c.clone().with_storage(StoragePolicy::All)).unwrap();
    let drift = traj
        .snapshots
        .iter()
        .map(|s| s.omega.values().iter().fold(0.0f64, |m, v| m.max((v - k).abs())))
        .fold(0.0f64, f64::max);
    let mut worst = 0.0f64;
    for method in [Method::Projection, Method::Landweber, Method::LevenbergMarquardt] {
        let icfg = InverseConfig::new(method, k);
        let res = match method {
            Method::Projection => recover_projection(&w, k, &c),
            Method::Landweber => landweber(&w, &c, &icfg),
            Method::LevenbergMarquardt => levenberg_marquardt(&w, &c, &icfg),
        }
        .unwrap();
        worst = res.h.values().iter().fold(worst, |m, v| m.max((v - k).abs()));
    }
    verdict(
        2,
        drift <= 1e-10 && worst <= 1e-8,
        format!("constant state drift {drift:.1e}, worst |h - c| over three methods {worst:.1e}"),
    );
}

#[test]
fn criterion_03_energy_identity() {
    // dt proportional to dx: 100, 200, 400 steps to T = 0.1
    let res: Vec<f64> = [33usize, 65, 129]
        .iter()
        .map(|&n| {
            let c = SolverConfig::new(unit(n), 0.1 / (200.0 * (n - 1) as f64 / 64.0), 0.1);
            let w = Fixture::Taylor.vorticity(c.grid).unwrap();
            energy_identity_check(&invariant(&w, &c)).max_abs
        })
        .collect();
    let (p1, p2) = (order(res[0], res[1]), order(res[1], res[2]));
    verdict(
        3,
        res[1] <= 1e-3 && p1 >= 1.8 && p2 >= 1.8,
        format!(
            "Taylor invariant-mode max residual {:.2e}/{:.2e}/{:.2e} at 33/65/129, orders {p1:.2}/{p2:.2}",
            res[0], res[1], res[2]
        ),
    );
}

#[test]
fn criterion_04_hard_bounds() {
    let mut lines = Vec::new();
    let mut pass = true;
    for (f, _, traj) in suite_runs() {
        let rep = lemma_bounds_check(&traj);
        let sup = rep.row("vorticity_sup_l2").unwrap();
        let grad = rep.row("vorticity_gradient_l2l2").unwrap();
        pass &= sup.pass && grad.pass;
        lines.push(format!("{} {:.6}/{:.3}", f.id(), sup.ratio, grad.ratio));
    }
    verdict(
        4,
        pass && lines.len() >= 5,
        format!("sup and gradient ratios per fixture: {}", lines.join(", ")),
    );
}

#[test]
fn criterion_05_invariant_enforcement() {
    let mut worst = 0.0f64;
    for (_, w, traj) in suite_runs() {
        let l = mean(&w);
        for d in &traj.nodes {
            worst = worst.max((d.mean_omega - l).abs() / (1.0 + l.abs()));
        }
    }
    verdict(5, worst <= 1e-10, format!("max |mean - L| / (1 + |L|) = {worst:.2e} over the suite"));
}

#[test]
fn criterion_06_cross_method_agreement() {
    let clock = Instant::now();
    let c = SolverConfig::new(unit(33), 2e-3, 0.1);
    let w = Fixture::Taylor.vorticity(c.grid).unwrap();
    let l = mean(&w);
    let hp = recover_projection(&w, l, &c).unwrap().h;
    let mut icfg = InverseConfig::new(Method::Landweber, l);
    icfg.max_iters = 20_000;
    let lw = landweber(&w, &c, &icfg).unwrap();
    icfg.method = Method::LevenbergMarquardt;
    let lm = levenberg_marquardt(&w, &c, &icfg).unwrap();
    let rel = |a: &BoundaryVorticity, b: &BoundaryVorticity| {
        let d: Vec<f64> = a.values().iter().zip(b.values()).map(|(x, y)| x - y).collect();
        time_l2(&d, c.dt) / a.l2_time()
    };
    let (pl, pm, lmw) = (rel(&hp, &lw.h), rel(&hp, &lm.h), rel(&lw.h, &lm.h));
    verdict(
        6,
        lw.converged && lm.converged && pl.max(pm).max(lmw) <= 1e-2,
        format!(
            "relative L2(0,T) differences projection/Landweber {pl:.1e}, projection/LM {pm:.1e}, Landweber/LM {lmw:.1e} \
             ({} and {} iterations, {:.1}s)",
            lw.iterations,
            lm.iterations,
            clock.elapsed().as_secs_f64()
        ),
    );
}

#[test]
fn criterion_07_jacobian() {
    let c = SolverConfig::new(unit(33), 2e-3, 0.1);
    let w = Fixture::Taylor.vorticity(c.grid).unwrap();
    let h = recover_projection(&w, mean(&w), &c).unwrap().h;
    let fd_eps = 1e-4;
    let js = sensitivity_jacobian(&h, &w, &c, JacobianMode::Sensitivity, fd_eps).unwrap();
    let jf = sensitivity_jacobian(&h, &w, &c, JacobianMode::FiniteDifference, fd_eps).unwrap();
    let scale = js.abs().max();
    let diff = (&js - &jf).abs().max();
    let bound = 10.0 * fd_eps * fd_eps * scale;
    let n = js.nrows();
    let upper_zero = (0..n).all(|r| (r + 1..n).all(|k| js[(r, k)] == 0.0));
    let diag_pos = (0..n).all(|r| js[(r, r)] > 0.0);
    verdict(
        7,
        diff <= bound && upper_zero && diag_pos,
        format!("max |J_sens - J_fd| = {diff:.2e} <= {bound:.2e}; upper triangle zero {upper_zero}, diagonal positive {diag_pos}"),
    );
}

#[test]
fn criterion_08_exponential_decay() {
    let c = SolverConfig::new(unit(65), 1e-3, 0.2);
    let w = Fixture::Taylor.vorticity(c.grid).unwrap();
    let h = BoundaryVorticity::constant(0.0, c.dt, c.n_steps().unwrap()).unwrap();
    let taylor = decay_fit(&forward_solve(&w, &h, &c).unwrap()).unwrap();
    let taylor_ok = (taylor.lambda_fit / (2.0 * PI * PI) - 1.0).abs() <= 0.05;
    let mut worst = f64::INFINITY;
    let mut all = true;
    for (_, _, traj) in suite_runs() {
        let d = decay_fit(&traj).unwrap();
        all &= d.pass;
        if !d.degenerate {
            worst = worst.min(d.lambda_fit / d.lambda_ref);
        }
    }
    let mu = poincare_estimate(&unit(129)).unwrap();
    let mu_ok = (mu / (PI * PI) - 1.0).abs() <= 5e-3;
    verdict(
        8,
        taylor_ok && all && mu_ok,
        format!(
            "Taylor rate {:.4} (2 pi^2 = {:.4}); min lambda_fit / mu1 over the suite {worst:.2}; mu1(129^2) = {mu:.5}",
            taylor.lambda_fit,
            2.0 * PI * PI
        ),
    );
}

#[test]
fn criterion_09_lipschitz_stability() {
    let clock = Instant::now();
    let c = SolverConfig::new(unit(65), 1e-3, 0.5);
    let g = c.grid;
    let base = Fixture::Taylor.vorticity(g).unwrap();
    let eps = [1e-1, 1e-2, 1e-3];
    let mut pass = true;
    let mut lines = Vec::new();
    let mut every = Vec::new();
    for (m, n) in [(2u32, 2u32), (1, 2), (3, 1)] {
        let dw = mode_vorticity(g, m, n, 1.0 / mode_rate(&g, m, n));
        let ratios: Vec<f64> = eps
            .iter()
            .map(|&e| stability_pair(&base, &base.axpy(e, &dw), &c).unwrap().ratio.unwrap())
            .collect();
        let max = ratios.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let min = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
        let trend = ratios.windows(2).all(|w| w[1] <= 1.05 * w[0]);
        pass &= ratios.iter().all(|r| r.is_finite()) && trend && max / min <= 1.5;
        lines.push(format!("({m},{n}) {:.4}/{:.4}/{:.4}", ratios[0], ratios[1], ratios[2]));
        every.extend(ratios);
    }
    let spread = every.iter().cloned().fold(f64::NEG_INFINITY, f64::max) / every.iter().cloned().fold(f64::INFINITY, f64::min);
    let secs = clock.elapsed().as_secs_f64();
    pass &= secs <= 600.0;
    verdict(
        9,
        pass,
        format!("ratios by direction {}; spread over all directions {spread:.3}; {secs:.1}s", lines.join(", ")),
    );
}

#[test]
fn criterion_10_pressure() {
    let c = SolverConfig::new(unit(33), 2e-3, 0.05).with_storage(StoragePolicy::All);
    let mut worst_mean = 0.0f64;
    for f in [Fixture::Taylor, Fixture::RandomStream { seed: 3, modes: 3 }] {
        let w = f.vorticity(c.grid).unwrap();
        for s in &invariant(&w, &c).snapshots {
            let p = &s.p;
            worst_mean = worst_mean.max(mean(p).abs() / p.norm(NormKind::L2).max(f64::MIN_POSITIVE));
        }
    }
    let work: Vec<f64> = [33usize, 65, 129]
        .iter()
        .map(|&n| {
            let c = SolverConfig::new(unit(n), scaled_dt(n), 0.1);
            let w = Fixture::Taylor.vorticity(c.grid).unwrap();
            invariant(&w, &c).nodes[1..]
                .iter()
                .fold(0.0f64, |m, d| m.max(d.pressure_work.abs()))
        })
        .collect();
    let (p1, p2) = (order(work[0], work[1]), order(work[1], work[2]));
    verdict(
        10,
        worst_mean <= 1e-12 && p1 >= 1.0 && p2 >= 1.0,
        format!(
            "max |mean p| / |p| = {worst_mean:.1e}; max |<grad p, du/dt>| {:.2e}/{:.2e}/{:.2e}, orders {p1:.2}/{p2:.2}",
            work[0], work[1], work[2]
        ),
    );
}

fn files(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    let mut out = BTreeMap::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for e in fs::read_dir(&d).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else {
                out.insert(p.strip_prefix(dir).unwrap().display().to_string(), fs::read(&p).unwrap());
            }
        }
    }
    out
}

#[test]
fn criterion_11_determinism() {
    let tmp = tempfile::tempdir().unwrap();
    let runs = [
        ("forward", "grid = 33\ndt = 0.002\ntmax = 0.05\nfixture = random-stream:5,3\nstore = every:5\n"),
        ("inverse", "grid = 17\ndt = 0.0025\ntmax = 0.05\nfixture = taylor\nmethod = lm\n"),
        ("inverse", "grid = 17\ndt = 0.0025\ntmax = 0.025\nfixture = taylor\nmethod = landweber\nmax_iters = 50\n"),
        ("verify", "grid = 33\ndt = 0.002\ntmax = 0.1\nfixture = mode:1,2\nsamples = 20\nseed = 3\n"),
        ("stability", "grid = 17\ndt = 0.0025\ntmax = 0.05\nfixture = taylor\n"),
        ("convergence", "fixture = taylor\ngrids = 17,33,65\ndt = 0.004\ntmax = 0.02\n"),
    ];
    let mut count = 0;
    let mut same = true;
    for (i, (cmd, text)) in runs.iter().enumerate() {
        let dir = tmp.path().join(format!("{i}_{cmd}"));
        let cfg = vortinv_cli::parse_config(
            text,
            &[("command".into(), cmd.to_string()), ("out".into(), dir.display().to_string())],
        )
        .unwrap();
        vortinv_cli::run(&cfg).unwrap();
        let first = files(&dir);
        vortinv_cli::run(&cfg).unwrap();
        let second = files(&dir);
        count += first.len();
        same &= first == second && !first.is_empty();
    }
    verdict(
        11,
        same,
        format!("{count} output files across {} runs, byte-identical on rerun: {same}", runs.len()),
    );
}
