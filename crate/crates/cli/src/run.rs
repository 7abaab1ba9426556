use std::path::PathBuf;

use serde::Serialize;
use serde_json::{json, Value};
use vortinv::field::{mean, Grid, NormKind, SpatialNorm};
use vortinv::fixtures::{mode_rate, mode_vorticity, Fixture};
use vortinv::forward::{check_compatibility, forward_solve, stream_function, BoundaryVorticity, SolverConfig, Trajectory};
use vortinv::harness::{
    decay_fit, elliptic_constant_probe, energy_identity_check, lemma_bounds_check, poincare_estimate, stability_pair,
    StabilityReport,
};
use vortinv::inverse::{landweber, levenberg_marquardt, recover_projection, Method};

use crate::config::{Boundary, Command, RunConfig, Target};
use crate::error::{CliError, Result};
use crate::fixture::initial_vorticity;
use crate::output::{num, Artifacts};

/// Relative growth allowed between successive stability ratios as the
/// perturbation shrinks.
pub const TREND_SLACK: f64 = 1.05;

#[derive(Debug, Clone, Serialize)]
pub struct RunSummary {
    pub command: &'static str,
    pub config_hash: String,
    pub out: PathBuf,
    pub files: Vec<PathBuf>,
    pub summary: Value,
}

/// Runs the configured experiment and writes its artifacts to `cfg.out`.
pub fn run(cfg: &RunConfig) -> Result<RunSummary> {
    let mut art = Artifacts::create(&cfg.out, &cfg.hash())?;
    art.text("config.echo", &cfg.echo())?;
    let summary = match cfg.command {
        Command::Forward => forward(cfg, &mut art)?,
        Command::Inverse => inverse(cfg, &mut art)?,
        Command::Verify => verify(cfg, &mut art)?,
        Command::Stability => stability(cfg, &mut art)?,
        Command::Convergence => convergence(cfg, &mut art)?,
    };
    Ok(RunSummary {
        command: cfg.command.name(),
        config_hash: art.hash().to_string(),
        out: cfg.out.clone(),
        files: art.written().to_vec(),
        summary,
    })
}

const TRAJECTORY_COLUMNS: [&str; 13] = [
    "t",
    "h",
    "mean_omega",
    "omega_l2",
    "omega_grad_l2",
    "omega_l4",
    "omega_centered_l2",
    "u_l2",
    "u_h1",
    "u_h2",
    "p_h1",
    "p_grad_l2",
    "pressure_work",
];

fn write_trajectory(art: &mut Artifacts, traj: &Trajectory) -> Result<()> {
    art.csv(
        "trajectory.csv",
        &TRAJECTORY_COLUMNS,
        traj.nodes.iter().map(|d| {
            [
                d.t,
                d.h,
                d.mean_omega,
                d.omega_l2,
                d.omega_grad_l2,
                d.omega_l4,
                d.omega_centered_l2,
                d.u_l2,
                d.u_h1,
                d.u_h2,
                d.p_h1,
                d.p_grad_l2,
                d.pressure_work,
            ]
            .iter()
            .map(|v| num(*v))
            .collect()
        }),
    )?;
    art.csv(
        "h.csv",
        &["k", "t", "h"],
        traj.h
            .values()
            .iter()
            .enumerate()
            .map(|(k, h)| vec![k.to_string(), num(traj.h.t0() + k as f64 * traj.dt), num(*h)]),
    )?;
    for s in &traj.snapshots {
        art.field(&format!("fields/omega_{:06}.csv", s.k), &s.omega)?;
        art.field(&format!("fields/psi_{:06}.csv", s.k), &s.psi)?;
        art.field(&format!("fields/p_{:06}.csv", s.k), &s.p)?;
    }
    Ok(())
}

fn target(cfg: &RunConfig, omega0: &vortinv::field::ScalarField) -> f64 {
    match cfg.target {
        Target::Auto => mean(omega0),
        Target::Value(l) => l,
    }
}

fn forward(cfg: &RunConfig, art: &mut Artifacts) -> Result<Value> {
    let sc = cfg.solver_config()?;
    let w = initial_vorticity(&cfg.fixture, sc.grid)?;
    let h0 = match cfg.boundary {
        Boundary::Auto => w.boundary_average(),
        Boundary::Value(v) => v,
    };
    let h = BoundaryVorticity::constant(h0, sc.dt, sc.n_steps()?)?;
    let traj = forward_solve(&w, &h, &sc)?;
    write_trajectory(art, &traj)?;
    let last = traj.nodes.last().expect("at least one node");
    let summary = json!({
        "fixture": cfg.fixture.to_string(),
        "steps": traj.n_steps(),
        "h": h0,
        "omega_l2_initial": traj.nodes[0].omega_l2,
        "omega_l2_final": last.omega_l2,
        "mean_omega_final": last.mean_omega,
    });
    art.json("report.json", &summary)?;
    Ok(summary)
}

fn inverse(cfg: &RunConfig, art: &mut Artifacts) -> Result<Value> {
    let sc = cfg.solver_config()?;
    let w = initial_vorticity(&cfg.fixture, sc.grid)?;
    let l = target(cfg, &w);
    let icfg = cfg.inverse_config(l);
    let res = match cfg.method {
        Method::Projection => recover_projection(&w, l, &sc)?,
        Method::Landweber => landweber(&w, &sc, &icfg)?,
        Method::LevenbergMarquardt => levenberg_marquardt(&w, &sc, &icfg)?,
    };
    write_trajectory(art, &res.trajectory)?;
    art.csv(
        "residuals.csv",
        &["index", "residual"],
        res.residual_history
            .iter()
            .enumerate()
            .map(|(i, r)| vec![i.to_string(), num(*r)]),
    )?;
    let defect = res
        .trajectory
        .nodes
        .iter()
        .fold(0.0f64, |m, d| m.max((d.mean_omega - l).abs()));
    let summary = json!({
        "fixture": cfg.fixture.to_string(),
        "method": icfg.method,
        "target": l,
        "converged": res.converged,
        "iterations": res.iterations,
        "final_residual": res.residual_history.last().copied(),
        "max_mean_defect": defect,
        "h_l2": res.h.l2_time(),
        "compatibility": check_compatibility(&w, res.h.values()[0], Some(l)),
    });
    art.json("report.json", &summary)?;
    Ok(summary)
}

fn verify(cfg: &RunConfig, art: &mut Artifacts) -> Result<Value> {
    let sc = cfg.solver_config()?;
    let w = initial_vorticity(&cfg.fixture, sc.grid)?;
    let l = target(cfg, &w);
    let traj = recover_projection(&w, l, &sc)?.trajectory;
    write_trajectory(art, &traj)?;
    let energy = energy_identity_check(&traj);
    art.csv(
        "energy.csv",
        &["step", "t", "residual"],
        energy
            .residuals
            .iter()
            .enumerate()
            .map(|(k, r)| vec![k.to_string(), num(traj.nodes[k].t), num(*r)]),
    )?;
    let lemma = lemma_bounds_check(&traj);
    art.csv(
        "report.csv",
        &["name", "lhs", "rhs", "ratio", "pass"],
        lemma
            .rows
            .iter()
            .map(|r| vec![r.name.to_string(), num(r.lhs), num(r.rhs), num(r.ratio), r.pass.to_string()]),
    )?;
    let decay = decay_fit(&traj);
    let probe = elliptic_constant_probe(&sc.grid, cfg.samples, cfg.seed)?;
    let summary = json!({
        "fixture": cfg.fixture.to_string(),
        "target": l,
        "energy": { "max_abs": energy.max_abs, "mean_abs": energy.mean_abs },
        "lemma": lemma,
        "decay": decay.as_ref().ok(),
        "decay_error": decay.as_ref().err().map(|e| e.to_string()),
        "poincare": poincare_estimate(&sc.grid)?,
        "elliptic_probe": probe,
        "bounds_pass": lemma.passed(),
    });
    art.json("report.json", &summary)?;
    Ok(summary)
}

fn stability(cfg: &RunConfig, art: &mut Artifacts) -> Result<Value> {
    let sc = cfg.solver_config()?;
    let g = sc.grid;
    let base = initial_vorticity(&cfg.fixture, g)?;
    let mut reports: Vec<StabilityReport> = Vec::new();
    let mut ladders = Vec::new();
    for &(m, n) in &cfg.directions {
        let dw = mode_vorticity(g, m, n, 1.0 / mode_rate(&g, m, n));
        let mut ratios = Vec::new();
        for &eps in &cfg.eps {
            let pert = base.axpy(eps, &dw);
            let rep = stability_pair(&base, &pert, &sc)?.labeled(cfg.fixture.to_string(), format!("mode:{m},{n}"), Some(eps));
            ratios.push(rep.ratio.unwrap_or(f64::NAN));
            reports.push(rep);
        }
        ladders.push(ladder_summary(m, n, &cfg.eps, &ratios));
    }
    art.csv(
        "stability.csv",
        &[
            "direction",
            "eps",
            "velocity_sup_h1",
            "pressure_l2h1",
            "boundary_l2",
            "vorticity_sup_l2",
            "vorticity_gradient_l2l2",
            "denominator",
            "ratio",
            "m",
        ],
        reports.iter().map(|r| {
            vec![
                r.second.clone(),
                r.epsilon.map_or(String::new(), num),
                num(r.velocity_sup_h1),
                num(r.pressure_l2h1),
                num(r.boundary_l2),
                num(r.vorticity_sup_l2),
                num(r.vorticity_gradient_l2l2),
                num(r.denominator),
                r.ratio.map_or(String::new(), num),
                num(r.m),
            ]
        }),
    )?;
    let all: Vec<f64> = reports.iter().filter_map(|r| r.ratio).collect();
    let spread = spread(&all);
    let summary = json!({
        "fixture": cfg.fixture.to_string(),
        "pairs": reports,
        "ladders": ladders,
        "max_over_min": spread,
        "pass": ladders.iter().all(|l| l["pass"] == json!(true)),
    });
    art.json("report.json", &summary)?;
    Ok(summary)
}

fn spread(v: &[f64]) -> f64 {
    let max = v.iter().fold(f64::NEG_INFINITY, |a, b| a.max(*b));
    let min = v.iter().fold(f64::INFINITY, |a, b| a.min(*b));
    max / min
}

/// Ladder verdict: finite ratios, `max/min <= 1.5`, and no growth beyond
/// [`TREND_SLACK`] as the perturbation shrinks.
fn ladder_summary(m: u32, n: u32, eps: &[f64], ratios: &[f64]) -> Value {
    let mut order: Vec<usize> = (0..eps.len()).collect();
    order.sort_by(|&a, &b| eps[b].abs().total_cmp(&eps[a].abs()));
    let finite = ratios.iter().all(|r| r.is_finite());
    let trend = order.windows(2).all(|w| ratios[w[1]] <= TREND_SLACK * ratios[w[0]]);
    let s = spread(ratios);
    json!({
        "direction": format!("mode:{m},{n}"),
        "max_over_min": s,
        "non_increasing": trend,
        "pass": finite && trend && s <= 1.5,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub n: usize,
    pub dt: f64,
    /// Relative L2 error of the vorticity at the final time.
    pub error: f64,
    pub order: Option<f64>,
    /// Relative L2 error of the stream function solve for the initial field.
    pub poisson_error: f64,
    pub poisson_order: Option<f64>,
}

/// Refinement study against the exact decaying sine-mode solution. The step
/// shrinks with the spacing, starting from `dt` on the first grid.
pub fn convergence_study(cfg: &RunConfig) -> Result<Vec<ConvergenceRow>> {
    if cfg.grids.len() < 3 {
        return Err(CliError::Precondition(format!(
            "a convergence study needs at least 3 grids, got {}",
            cfg.grids.len()
        )));
    }
    let (m, n) = match cfg.fixture {
        Fixture::Taylor => (1, 1),
        Fixture::Mode { m, n, .. } => (m, n),
        _ => {
            return Err(CliError::Precondition(
                "convergence needs a fixture with a closed-form solution (taylor or mode)".into(),
            ))
        }
    };
    let mut rows: Vec<ConvergenceRow> = Vec::new();
    for &nodes in &cfg.grids {
        let g = Grid::new(nodes, nodes, cfg.lx, cfg.ly)?;
        let dt = cfg.dt * (cfg.grids[0] - 1) as f64 / (nodes - 1) as f64;
        let mut sc = SolverConfig::new(g, dt, cfg.tmax).with_advection(cfg.advection);
        sc.cfl_safety = cfg.cfl;
        sc.validate().map_err(|e| CliError::Inconsistent(format!("grid {nodes}: {e}")))?;
        let w0 = cfg.fixture.vorticity(g)?;
        let h = BoundaryVorticity::constant(0.0, dt, sc.n_steps()?)?;
        let traj = forward_solve(&w0, &h, &sc)?;
        let exact = w0.scale((-mode_rate(&g, m, n) * cfg.tmax).exp());
        let error = traj.last().omega.sub(&exact).norm(NormKind::L2) / exact.norm(NormKind::L2);
        let psi = stream_function(&w0)?;
        let psi_exact = cfg.fixture.stream_function(g).expect("sine modes have a stream function");
        let poisson_error = psi.sub(&psi_exact).norm(NormKind::L2) / psi_exact.norm(NormKind::L2);
        let slope = |prev: Option<&ConvergenceRow>, e: f64, pick: fn(&ConvergenceRow) -> f64| {
            prev.map(|p| (pick(p) / e).ln() / ((nodes - 1) as f64 / (p.n - 1) as f64).ln())
        };
        let prev = rows.last();
        rows.push(ConvergenceRow {
            n: nodes,
            dt,
            error,
            order: slope(prev, error, |r| r.error),
            poisson_error,
            poisson_order: slope(prev, poisson_error, |r| r.poisson_error),
        });
    }
    Ok(rows)
}

fn convergence(cfg: &RunConfig, art: &mut Artifacts) -> Result<Value> {
    let rows = convergence_study(cfg)?;
    let opt = |v: Option<f64>| v.map_or(String::new(), num);
    art.csv(
        "convergence.csv",
        &["n", "dt", "error", "order", "poisson_error", "poisson_order"],
        rows.iter().map(|r| {
            vec![
                r.n.to_string(),
                num(r.dt),
                num(r.error),
                opt(r.order),
                num(r.poisson_error),
                opt(r.poisson_order),
            ]
        }),
    )?;
    let summary = json!({ "fixture": cfg.fixture.to_string(), "rows": rows });
    art.json("report.json", &summary)?;
    Ok(summary)
}
