use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::field::{mean, ScalarField};
use crate::forward::{BoundaryVorticity, Integrator, SolverConfig};
use crate::inverse::jacobian::{map_means, tangent_jacobian, BaseRun};
use crate::inverse::{norm2, InverseConfig, InverseResult, JacobianMode};

const POWER_ITERATIONS: usize = 20;
/// Damping beyond which Levenberg–Marquardt gives up on finding a descent step.
const MAX_DAMPING: f64 = 1e16;

/// Estimate of `|J|_2^2` from power iteration on `J^T J`.
pub fn operator_norm_sq(j: &DMatrix<f64>) -> f64 {
    let n = j.ncols();
    if n == 0 {
        return 0.0;
    }
    let mut v = DVector::from_element(n, 1.0 / (n as f64).sqrt());
    let mut est = 0.0;
    for _ in 0..POWER_ITERATIONS {
        let w = j.tr_mul(&(j * &v));
        let norm = w.norm();
        if norm == 0.0 {
            return 0.0;
        }
        est = v.dot(&w);
        v = w / norm;
    }
    est.max((j * &v).norm_squared())
}

struct Problem<'a> {
    integ: Integrator,
    omega0: &'a ScalarField,
    target: f64,
    mode: JacobianMode,
    fd_eps: f64,
}

impl Problem<'_> {
    fn residual(&self, h: &[f64]) -> Result<Vec<f64>> {
        Ok(map_means(&self.integ, self.omega0, h)?
            .into_iter()
            .map(|m| m - self.target)
            .collect())
    }

    fn jacobian(&self, h: &[f64]) -> Result<DMatrix<f64>> {
        let hb = BoundaryVorticity::new(0.0, self.integ.config().dt, h.to_vec())?;
        match self.mode {
            JacobianMode::Sensitivity => {
                let base = BaseRun::new(&self.integ, self.omega0, &hb)?;
                tangent_jacobian(&self.integ, &base, true)
            }
            JacobianMode::FiniteDifference => crate::inverse::sensitivity_jacobian(
                &hb,
                self.omega0,
                self.integ.config(),
                JacobianMode::FiniteDifference,
                self.fd_eps,
            ),
        }
    }

    fn finish(&self, h: Vec<f64>, history: Vec<f64>, converged: bool, iterations: usize) -> Result<InverseResult> {
        let hb = BoundaryVorticity::new(0.0, self.integ.config().dt, h)?;
        let trajectory = self.integ.solve(self.omega0, &hb)?;
        Ok(InverseResult {
            h: hb,
            trajectory,
            residual_history: history,
            converged,
            iterations,
        })
    }
}

/// `h(0)` from the wall trace of `omega0`, then `mean(omega0)` at every later node.
fn setup<'a>(omega0: &'a ScalarField, cfg: &SolverConfig, icfg: &InverseConfig) -> Result<(Problem<'a>, Vec<f64>)> {
    icfg.validate()?;
    let integ = Integrator::new(cfg.clone())?;
    let nt = cfg.n_steps()?;
    let mut h = vec![mean(omega0); nt + 1];
    h[0] = omega0.boundary_average();
    Ok((
        Problem {
            integ,
            omega0,
            target: icfg.target,
            mode: icfg.jacobian_mode,
            fd_eps: icfg.fd_eps,
        },
        h,
    ))
}

/// Landweber iteration `h <- h - mu J^T (F(h) - L 1)` with `J` evaluated at
/// the initial guess.
pub fn landweber(omega0: &ScalarField, cfg: &SolverConfig, icfg: &InverseConfig) -> Result<InverseResult> {
    let (prob, mut h) = setup(omega0, cfg, icfg)?;
    let mut r = prob.residual(&h)?;
    let mut rn = norm2(&r);
    let mut history = vec![rn];
    if rn <= icfg.stop_tol {
        return prob.finish(h, history, true, 0);
    }
    let j = prob.jacobian(&h)?;
    let norm_sq = operator_norm_sq(&j);
    let bound = 2.0 / norm_sq;
    let mu = icfg.step_size.unwrap_or(1.0 / norm_sq);
    if !(mu < bound) {
        return Err(Error::StepSizeTooLarge {
            mu,
            bound,
            reason: "step exceeds 2 / |J|^2",
        });
    }
    let (mut best_h, mut best) = (h.clone(), rn);
    let mut rises = 0;
    for it in 1..=icfg.max_iters {
        let g = j.tr_mul(&DVector::from_column_slice(&r));
        for (hk, gk) in h[1..].iter_mut().zip(g.iter()) {
            *hk -= mu * gk;
        }
        r = prob.residual(&h)?;
        let next = norm2(&r);
        history.push(next);
        rises = if next > rn { rises + 1 } else { 0 };
        if rises >= 2 {
            return Err(Error::StepSizeTooLarge {
                mu,
                bound,
                reason: "residual increased twice in a row",
            });
        }
        rn = next;
        if rn < best {
            best = rn;
            best_h.clone_from(&h);
        }
        if rn <= icfg.stop_tol {
            return prob.finish(h, history, true, it);
        }
    }
    prob.finish(best_h, history, false, icfg.max_iters)
}

/// Levenberg–Marquardt: `(J^T J + lambda I) delta = -J^T r`, with `lambda`
/// divided by `growth` after an accepted step and multiplied by it after a
/// rejected one.
pub fn levenberg_marquardt(omega0: &ScalarField, cfg: &SolverConfig, icfg: &InverseConfig) -> Result<InverseResult> {
    let (prob, mut h) = setup(omega0, cfg, icfg)?;
    let mut r = prob.residual(&h)?;
    let mut rn = norm2(&r);
    let mut history = vec![rn];
    if rn <= icfg.stop_tol {
        return prob.finish(h, history, true, 0);
    }
    let mut lambda = icfg.damping;
    for it in 1..=icfg.max_iters {
        let j = prob.jacobian(&h)?;
        let rv = DVector::from_column_slice(&r);
        let g = j.tr_mul(&rv);
        let jtj = j.tr_mul(&j);
        loop {
            let mut m = jtj.clone();
            for d in 0..m.nrows() {
                m[(d, d)] += lambda;
            }
            let chol = m.cholesky().ok_or(Error::NormalEquationFailure { lambda })?;
            let delta = chol.solve(&g);
            let mut trial = h.clone();
            for (hk, dk) in trial[1..].iter_mut().zip(delta.iter()) {
                *hk -= dk;
            }
            let rt = prob.residual(&trial)?;
            let tn = norm2(&rt);
            if tn < rn {
                h = trial;
                r = rt;
                rn = tn;
                lambda /= icfg.growth;
                break;
            }
            lambda *= icfg.growth;
            if lambda > MAX_DAMPING {
                return prob.finish(h, history, false, it - 1);
            }
        }
        history.push(rn);
        if rn <= icfg.stop_tol {
            return prob.finish(h, history, true, it);
        }
    }
    prob.finish(h, history, false, icfg.max_iters)
}
