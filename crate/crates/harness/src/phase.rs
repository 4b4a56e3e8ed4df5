//! Success-rate grids over model order `R` and measurement count `M`.

use hankel_recover::solver::relative_error;
use hankel_recover::{
    measure, random_instance, sample_ensemble, solve, synthesize, Family, HankelLift, SolverConfig,
};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{HarnessError, Result};
use crate::pool::build_pool;
use crate::seed::{trial_seed, TrialSeeds};

/// Everything that determines a phase-transition run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseGridSpec {
    pub n: usize,
    pub r_values: Vec<usize>,
    pub m_values: Vec<usize>,
    pub trials: usize,
    pub threshold: f64,
    pub base_seed: u64,
    pub family: Family,
    /// Noise level; 0 runs the equality-constrained program.
    pub delta: f64,
    pub solver: SolverConfig,
}

impl PhaseGridSpec {
    /// Desk-scale default: `N = 16`, `R = 1..=4`, `M = 2, 4, .., 30, 31`, 20 trials.
    pub fn desk() -> Self {
        let n = 16;
        let mut m_values: Vec<usize> = (2..2 * n - 1).step_by(2).collect();
        m_values.push(2 * n - 1);
        Self {
            n,
            r_values: (1..=4).collect(),
            m_values,
            trials: 20,
            threshold: 1e-3,
            base_seed: 0,
            family: Family::Sinusoid,
            delta: 0.0,
            solver: SolverConfig::default(),
        }
    }

    /// The full protocol: `N = 64`, `M = 1..=127`, `R = 1..=20`, 100 trials.
    pub fn full() -> Self {
        let n = 64;
        Self {
            n,
            r_values: (1..=20).collect(),
            m_values: (1..=2 * n - 1).collect(),
            trials: 100,
            ..Self::desk()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(HarnessError::Config(msg));
        if self.n == 0 {
            return bad("n must be >= 1".into());
        }
        let len = 2 * self.n - 1;
        if self.trials == 0 {
            return bad("trials must be >= 1".into());
        }
        if !(self.threshold > 0.0 && self.threshold.is_finite()) {
            return bad(format!("threshold {} must be > 0", self.threshold));
        }
        if !(self.delta >= 0.0 && self.delta.is_finite()) {
            return bad(format!("delta {} must be >= 0", self.delta));
        }
        if let Some(r) = self.r_values.iter().find(|&&r| r == 0 || r >= len) {
            return bad(format!("r = {r} outside 1..{len}"));
        }
        if let Some(m) = self.m_values.iter().find(|&&m| m == 0 || m > len) {
            return bad(format!("m = {m} outside 1..={len}"));
        }
        self.solver.validate()?;
        Ok(())
    }
}

/// Outcome of a single recovery trial.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrialOutcome {
    pub relative_error: f64,
    pub iterations: usize,
    pub converged: bool,
    pub success: bool,
}

/// Aggregate of one `(R, M)` cell.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CellResult {
    pub r: usize,
    pub m: usize,
    pub successes: usize,
    pub non_converged: usize,
    pub trials: usize,
}

impl CellResult {
    pub fn rate(&self) -> f64 {
        self.successes as f64 / self.trials as f64
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhaseGrid {
    pub n: usize,
    pub r_values: Vec<usize>,
    pub m_values: Vec<usize>,
    pub trials: usize,
    pub threshold: f64,
    pub base_seed: u64,
    /// `success_rate[i][j]` for `r_values[i]`, `m_values[j]`.
    pub success_rate: Vec<Vec<f64>>,
    pub cells: Vec<CellResult>,
}

impl PhaseGrid {
    pub fn rate(&self, r: usize, m: usize) -> Option<f64> {
        let i = self.r_values.iter().position(|&v| v == r)?;
        let j = self.m_values.iter().position(|&v| v == m)?;
        Some(self.success_rate[i][j])
    }
}

/// One trial: random instance, measurement, ADMM, success test.
pub fn run_trial(spec: &PhaseGridSpec, r: usize, m: usize, trial: usize) -> Result<TrialOutcome> {
    let seeds = TrialSeeds::from_root(trial_seed(spec.base_seed, r, m, trial));
    let lift = HankelLift::new(spec.n)?;
    let truth = synthesize(&random_instance(spec.n, r, spec.family, seeds.signal)?);
    let ens = sample_ensemble(m, spec.n, seeds.ensemble)?;
    let obs = measure(&ens, &truth, spec.delta, seeds.noise)?;
    let cfg = SolverConfig {
        delta: spec.delta,
        ..spec.solver
    };
    let result = solve(&ens, &obs, &lift, &cfg)?;
    let err = relative_error(&result.x_hat, &truth)?;
    Ok(TrialOutcome {
        relative_error: err,
        iterations: result.iterations,
        converged: result.converged,
        success: err <= spec.threshold,
    })
}

fn reduce_cell(r: usize, m: usize, outcomes: &[TrialOutcome]) -> CellResult {
    CellResult {
        r,
        m,
        successes: outcomes.iter().filter(|o| o.success).count(),
        non_converged: outcomes.iter().filter(|o| !o.converged).count(),
        trials: outcomes.len(),
    }
}

/// Run a single cell on the worker pool. Gives the same rate as the cell
/// inside a full grid run with the same spec.
pub fn run_cell(spec: &PhaseGridSpec, r: usize, m: usize) -> Result<CellResult> {
    spec.validate()?;
    let pool = build_pool()?;
    let outcomes: Vec<TrialOutcome> = pool.install(|| {
        (0..spec.trials)
            .into_par_iter()
            .map(|t| run_trial(spec, r, m, t))
            .collect::<Result<_>>()
    })?;
    Ok(reduce_cell(r, m, &outcomes))
}

/// Every `(R, M, trial)` job runs on the pool; results are reduced in
/// `(R, M, trial)` order so the grid does not depend on scheduling.
pub fn run_phase_transition(spec: &PhaseGridSpec) -> Result<PhaseGrid> {
    spec.validate()?;
    let jobs: Vec<(usize, usize, usize)> = spec
        .r_values
        .iter()
        .flat_map(|&r| {
            spec.m_values
                .iter()
                .flat_map(move |&m| (0..spec.trials).map(move |t| (r, m, t)))
        })
        .collect();

    let pool = build_pool()?;
    let outcomes: Vec<TrialOutcome> = pool.install(|| {
        jobs.par_iter()
            .map(|&(r, m, t)| run_trial(spec, r, m, t))
            .collect::<Result<_>>()
    })?;

    let mut cells = Vec::with_capacity(spec.r_values.len() * spec.m_values.len());
    let mut success_rate = Vec::with_capacity(spec.r_values.len());
    let mut chunks = outcomes.chunks(spec.trials);
    for &r in &spec.r_values {
        let mut row = Vec::with_capacity(spec.m_values.len());
        for &m in &spec.m_values {
            let chunk = chunks.next().unwrap_or(&[]);
            let cell = reduce_cell(r, m, chunk);
            row.push(cell.rate());
            cells.push(cell);
        }
        success_rate.push(row);
    }

    Ok(PhaseGrid {
        n: spec.n,
        r_values: spec.r_values.clone(),
        m_values: spec.m_values.clone(),
        trials: spec.trials,
        threshold: spec.threshold,
        base_seed: spec.base_seed,
        success_rate,
        cells,
    })
}
