//! Nuclear-norm recovery by ADMM in the weighted variable `y = D x`:
//!
//! ```text
//! minimize ||G y||_*   subject to   B y = b            (delta = 0)
//!                                   ||B y - b|| <= delta (delta > 0)
//! ```
//!
//! With the splitting `Z = G y` and scaled dual `U`, one iteration is
//! `Z <- svt(G y + U, 1/rho)`, `y <- proj(G*(Z - U))`, `U <- U + G y - Z`.
//! The `y` step is exact because `G` is an isometry (`G* G = I`), so the
//! matrix least-squares subproblem reduces to a vector projection.
//! By default `rho` is rebalanced against the residuals early in the run;
//! the noisy program converges very slowly at a fixed `rho = 1`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{check_len, Error, Result};
use crate::hankel::HankelLift;
use crate::linalg::{nuclear_norm, CMatrix, CVector};
use crate::measurement::{MeasurementEnsemble, Observation};

/// ADMM parameters. `delta = 0` selects the equality-constrained program.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    /// Penalty parameter (the starting value when `adaptive_rho` is set).
    pub rho: f64,
    pub max_iters: usize,
    pub tol_primal: f64,
    pub tol_dual: f64,
    pub delta: f64,
    /// Residual balancing: rescale `rho` by [`RHO_SCALE`] whenever one
    /// normalised residual exceeds the other by [`RHO_IMBALANCE`].
    #[serde(default = "default_adaptive")]
    pub adaptive_rho: bool,
}

fn default_adaptive() -> bool {
    true
}

pub const RHO_IMBALANCE: f64 = 10.0;
pub const RHO_SCALE: f64 = 2.0;
/// `rho` is only adjusted every this many iterations, and not in the last
/// half of the iteration budget so the fixed-penalty convergence theory applies.
const RHO_ADAPT_PERIOD: usize = 10;

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            rho: 1.0,
            max_iters: 2000,
            tol_primal: 1e-7,
            tol_dual: 1e-7,
            delta: 0.0,
            adaptive_rho: true,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.rho > 0.0 && self.rho.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "rho = {} must be > 0",
                self.rho
            )));
        }
        if !(self.tol_primal > 0.0 && self.tol_dual > 0.0) {
            return Err(Error::InvalidArgument("tolerances must be > 0".into()));
        }
        if !(self.delta >= 0.0 && self.delta.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "delta = {} must be >= 0",
                self.delta
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RecoveryResult {
    /// Recovered signal, `D^{-1} y_hat`.
    pub x_hat: CVector,
    pub y_hat: CVector,
    pub iterations: usize,
    pub primal_residual: f64,
    pub dual_residual: f64,
    /// `||G y_hat||_* = ||H(x_hat)||_*`.
    pub objective: f64,
    pub converged: bool,
    /// Penalty in effect at the last iteration.
    pub final_rho: f64,
}

/// Singular value thresholding `U max(S - tau, 0) V^H`, the proximal map of
/// `tau ||.||_*`.
pub fn svt(x: &CMatrix, tau: f64) -> Result<CMatrix> {
    if !(tau >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "threshold tau = {tau} must be >= 0"
        )));
    }
    if x.is_empty() {
        return Ok(x.clone());
    }
    let svd = x
        .clone()
        .try_svd(true, true, f64::EPSILON, 0)
        .ok_or_else(|| Error::Numerical("SVD did not converge in svt".into()))?;
    let (u, v_t) = match (svd.u, svd.v_t) {
        (Some(u), Some(v_t)) => (u, v_t),
        _ => return Err(Error::Numerical("SVD returned no singular vectors".into())),
    };
    let mut out = CMatrix::zeros(x.nrows(), x.ncols());
    for (k, &s) in svd.singular_values.iter().enumerate() {
        let shrunk = s - tau;
        if shrunk > 0.0 {
            let one = Complex64::new(1.0, 0.0);
            let col = u.column(k) * Complex64::new(shrunk, 0.0);
            out.ger(one, &col, &v_t.row(k).transpose(), one);
        }
    }
    Ok(out)
}

/// Recover `x` from `obs` by ADMM on the lifted nuclear-norm program.
///
/// Non-convergence within `max_iters` is reported through
/// `RecoveryResult::converged`; projection failures are errors.
pub fn solve(
    ens: &MeasurementEnsemble,
    obs: &Observation,
    lift: &HankelLift,
    cfg: &SolverConfig,
) -> Result<RecoveryResult> {
    cfg.validate()?;
    check_len("solve: lift dimension", ens.n(), lift.n())?;
    check_len("solve: observation", ens.m(), obs.b.len())?;

    let project = |v: &CVector| -> Result<CVector> {
        if cfg.delta == 0.0 {
            ens.project_affine(v, &obs.b)
        } else {
            ens.project_ball(v, &obs.b, cfg.delta)
        }
    };

    let n = lift.n();
    let mut rho = cfg.rho;
    let mut y = project(&CVector::zeros(lift.ambient_len()))?;
    let mut gy = lift.lift(&y)?;
    let mut z = gy.clone();
    let mut u = CMatrix::zeros(n, n);

    let mut iterations = 0;
    let mut primal = f64::INFINITY;
    let mut dual = f64::INFINITY;
    let mut converged = false;

    while iterations < cfg.max_iters {
        iterations += 1;
        let z_next = svt(&(&gy + &u), 1.0 / rho)?;
        let v = lift.lift_adjoint(&(&z_next - &u))?;
        y = project(&v)?;
        gy = lift.lift(&y)?;
        let gap = &gy - &z_next;
        u += &gap;

        primal = gap.norm();
        dual = rho * lift.lift_adjoint(&(&z_next - &z))?.norm();
        z = z_next;

        let primal_scaled = primal / (cfg.tol_primal * (1.0 + z.norm()));
        let dual_scaled = dual / (cfg.tol_dual * (1.0 + y.norm()));
        if primal_scaled <= 1.0 && dual_scaled <= 1.0 {
            converged = true;
            break;
        }

        if cfg.adaptive_rho && iterations % RHO_ADAPT_PERIOD == 0 && 2 * iterations < cfg.max_iters
        {
            // The scaled dual U = Lambda / rho must be rescaled with rho.
            if primal_scaled > RHO_IMBALANCE * dual_scaled {
                rho *= RHO_SCALE;
                u /= Complex64::new(RHO_SCALE, 0.0);
            } else if dual_scaled > RHO_IMBALANCE * primal_scaled {
                rho /= RHO_SCALE;
                u *= Complex64::new(RHO_SCALE, 0.0);
            }
        }
    }

    Ok(RecoveryResult {
        x_hat: lift.weight_apply(&y, true)?,
        objective: nuclear_norm(&gy)?,
        y_hat: y,
        iterations,
        primal_residual: primal,
        dual_residual: dual,
        converged,
        final_rho: rho,
    })
}

/// `||x_hat - truth|| / ||truth|| <= threshold` (closed comparison).
pub fn success(result: &RecoveryResult, truth: &CVector, threshold: f64) -> Result<bool> {
    Ok(relative_error(&result.x_hat, truth)? <= threshold)
}

pub fn relative_error(estimate: &CVector, truth: &CVector) -> Result<f64> {
    check_len("relative_error", truth.len(), estimate.len())?;
    let scale = truth.norm();
    if scale == 0.0 {
        return Err(Error::InvalidArgument(
            "relative error against a zero signal".into(),
        ));
    }
    Ok((estimate - truth).norm() / scale)
}

/// Error in the weighted variable, `||D (x_hat - truth)||`.
pub fn weighted_error(lift: &HankelLift, estimate: &CVector, truth: &CVector) -> Result<f64> {
    check_len("weighted_error", truth.len(), estimate.len())?;
    Ok(lift.weight_apply(&(estimate - truth), false)?.norm())
}
