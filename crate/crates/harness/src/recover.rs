//! Single end-to-end recovery: build or load a signal, measure, solve, and
//! optionally read the modes back out of the estimate.

use std::path::{Path, PathBuf};

use hankel_recover::modal::{matrix_pencil_with, PencilOptions};
use hankel_recover::solver::{relative_error, weighted_error};
use hankel_recover::{
    measure, random_instance, sample_ensemble, solve, synthesize, CVector, Complex64, Family,
    HankelLift, ModalSignal, Mode, SolverConfig,
};
use serde::{Deserialize, Serialize};

use crate::error::{HarnessError, Result};
use crate::seed::TrialSeeds;

const DEFAULT_N: usize = 16;
const DEFAULT_R: usize = 2;

#[derive(Debug, Clone, PartialEq)]
pub struct RecoverSpec {
    pub n: Option<usize>,
    pub r: Option<usize>,
    pub m: usize,
    pub delta: f64,
    pub seed: u64,
    pub family: Family,
    pub threshold: f64,
    pub solver: SolverConfig,
    pub input: Option<PathBuf>,
    pub pencil: bool,
}

impl RecoverSpec {
    pub fn validate(&self) -> Result<()> {
        if self.m == 0 {
            return Err(HarnessError::Config("--m must be >= 1".into()));
        }
        if self.n == Some(0) {
            return Err(HarnessError::Config("--n must be >= 1".into()));
        }
        if self.r == Some(0) {
            return Err(HarnessError::Config("--r must be >= 1".into()));
        }
        if !(self.threshold > 0.0) {
            return Err(HarnessError::Config("--threshold must be > 0".into()));
        }
        self.solver.validate()?;
        Ok(())
    }
}

/// Complex number as `[re, im]`.
pub type JsonComplex = [f64; 2];

fn to_json(z: &Complex64) -> JsonComplex {
    [z.re, z.im]
}

fn from_json(z: &JsonComplex) -> Complex64 {
    Complex64::new(z[0], z[1])
}

fn vec_to_json(v: &CVector) -> Vec<JsonComplex> {
    v.iter().map(to_json).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeJson {
    pub z: JsonComplex,
    pub c: JsonComplex,
}

/// Input signal file: either explicit samples or a list of modes.
///
/// ```json
/// {"signal": [[1.0, 0.0], [0.5, 0.5], [0.0, 1.0]]}
/// {"n": 16, "modes": [{"z": [0.0, 1.0], "c": [2.0, 0.0]}]}
/// ```
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SignalFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modes: Option<Vec<ModeJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub signal: Option<Vec<JsonComplex>>,
}

impl SignalFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| HarnessError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        serde_json::from_str(&text).map_err(|source| HarnessError::Json {
            path: path.to_path_buf(),
            source,
        })
    }

    /// Resolve to `(N, samples, model order if known)`.
    fn resolve(&self, n_flag: Option<usize>) -> Result<(usize, CVector, Option<usize>)> {
        match (&self.signal, &self.modes) {
            (Some(samples), None) => {
                let len = samples.len();
                if len.is_multiple_of(2) {
                    return Err(HarnessError::Config(format!(
                        "input signal has {len} samples; expected 2N - 1"
                    )));
                }
                let n = len.div_ceil(2);
                if let Some(flag) = n_flag.or(self.n) {
                    if flag != n {
                        return Err(HarnessError::Config(format!(
                            "--n {flag} does not match input length {len}"
                        )));
                    }
                }
                let x = CVector::from_iterator(len, samples.iter().map(from_json));
                Ok((n, x, None))
            }
            (None, Some(modes)) => {
                let n = n_flag.or(self.n).ok_or_else(|| {
                    HarnessError::Config("a modes input needs n (in the file or --n)".into())
                })?;
                let modes: Vec<Mode> = modes
                    .iter()
                    .map(|m| Mode::new(from_json(&m.z), from_json(&m.c)))
                    .collect();
                let sig = ModalSignal::new(modes, n)?;
                Ok((n, synthesize(&sig), Some(sig.order())))
            }
            _ => Err(HarnessError::Config(
                "input file needs exactly one of \"signal\" or \"modes\"".into(),
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolverSummary {
    pub rho: f64,
    pub max_iters: usize,
    pub tol_primal: f64,
    pub tol_dual: f64,
    pub adaptive_rho: bool,
    pub final_rho: f64,
}

/// Result JSON of a single run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RecoverReport {
    pub n: usize,
    pub m: usize,
    pub r: Option<usize>,
    pub delta: f64,
    pub seed: u64,
    pub threshold: f64,
    pub solver: SolverSummary,
    pub converged: bool,
    pub iterations: usize,
    pub primal_residual: f64,
    pub dual_residual: f64,
    pub objective: f64,
    /// `||x_hat - x|| / ||x||`; absent for an all-zero input.
    pub relative_error: Option<f64>,
    /// `||D (x_hat - x)||`.
    pub weighted_error: f64,
    pub success: Option<bool>,
    pub truth: Vec<JsonComplex>,
    pub x_hat: Vec<JsonComplex>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub modes: Option<Vec<ModeJson>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pencil_error: Option<String>,
}

impl RecoverReport {
    pub fn summary(&self) -> String {
        let err = self
            .relative_error
            .map(|e| format!("{e:.3e}"))
            .unwrap_or_else(|| "n/a".into());
        format!(
            "N={} M={} delta={} converged={} iterations={} relative_error={} weighted_error={:.3e} objective={:.6e}",
            self.n,
            self.m,
            self.delta,
            self.converged,
            self.iterations,
            err,
            self.weighted_error,
            self.objective
        )
    }

    pub fn write_json(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(self).map_err(|source| HarnessError::Json {
            path: path.to_path_buf(),
            source,
        })?;
        std::fs::write(path, text + "\n").map_err(|source| HarnessError::Io {
            path: path.to_path_buf(),
            source,
        })
    }
}

pub fn run_recover(spec: &RecoverSpec) -> Result<RecoverReport> {
    spec.validate()?;
    let seeds = TrialSeeds::from_root(spec.seed);

    let (n, truth, order) = match &spec.input {
        Some(path) => SignalFile::load(path)?.resolve(spec.n)?,
        None => {
            let n = spec.n.unwrap_or(DEFAULT_N);
            let r = spec.r.unwrap_or(DEFAULT_R);
            let sig = random_instance(n, r, spec.family, seeds.signal)?;
            (n, synthesize(&sig), Some(r))
        }
    };
    let order = spec.r.or(order);
    let len = 2 * n - 1;
    if spec.m > len {
        return Err(HarnessError::Config(format!(
            "--m {} exceeds the signal length 2N - 1 = {len}",
            spec.m
        )));
    }

    let lift = HankelLift::new(n)?;
    let ens = sample_ensemble(spec.m, n, seeds.ensemble)?;
    let obs = measure(&ens, &truth, spec.delta, seeds.noise)?;
    let cfg = SolverConfig {
        delta: spec.delta,
        ..spec.solver
    };
    let result = solve(&ens, &obs, &lift, &cfg)?;

    let rel = if truth.norm() > 0.0 {
        Some(relative_error(&result.x_hat, &truth)?)
    } else {
        None
    };

    let (modes, pencil_error) = match (spec.pencil, order) {
        (false, _) => (None, None),
        (true, None) => (None, Some("model order unknown; pass --r".to_string())),
        (true, Some(r)) => {
            let opts = PencilOptions {
                residual_tol: spec.threshold.max(PencilOptions::default().residual_tol),
            };
            match matrix_pencil_with(&result.x_hat, r, &opts) {
                Ok(modes) => (
                    Some(
                        modes
                            .iter()
                            .map(|m| ModeJson {
                                z: to_json(&m.z),
                                c: to_json(&m.c),
                            })
                            .collect(),
                    ),
                    None,
                ),
                Err(e) => (None, Some(e.to_string())),
            }
        }
    };

    Ok(RecoverReport {
        n,
        m: spec.m,
        r: order,
        delta: spec.delta,
        seed: spec.seed,
        threshold: spec.threshold,
        solver: SolverSummary {
            rho: cfg.rho,
            max_iters: cfg.max_iters,
            tol_primal: cfg.tol_primal,
            tol_dual: cfg.tol_dual,
            adaptive_rho: cfg.adaptive_rho,
            final_rho: result.final_rho,
        },
        converged: result.converged,
        iterations: result.iterations,
        primal_residual: result.primal_residual,
        dual_residual: result.dual_residual,
        objective: result.objective,
        success: rel.map(|e| e <= spec.threshold),
        relative_error: rel,
        weighted_error: weighted_error(&lift, &result.x_hat, &truth)?,
        truth: vec_to_json(&truth),
        x_hat: vec_to_json(&result.x_hat),
        modes,
        pencil_error,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(m: usize) -> RecoverSpec {
        RecoverSpec {
            n: Some(16),
            r: Some(2),
            m,
            delta: 0.0,
            seed: 7,
            family: Family::Sinusoid,
            threshold: 1e-3,
            solver: SolverConfig::default(),
            input: None,
            pencil: true,
        }
    }

    #[test]
    fn generated_instance_recovers_with_modes() {
        let report = run_recover(&spec(24)).unwrap();
        assert!(report.converged);
        assert!(report.relative_error.unwrap() < 1e-4);
        assert_eq!(report.modes.as_ref().map(Vec::len), Some(2));
        assert_eq!(report.x_hat.len(), 31);
    }

    #[test]
    fn m_bounds() {
        assert!(matches!(
            run_recover(&spec(0)),
            Err(HarnessError::Config(_))
        ));
        assert!(matches!(
            run_recover(&spec(32)),
            Err(HarnessError::Config(_))
        ));
    }

    #[test]
    fn signal_file_resolution() {
        let f = SignalFile {
            signal: Some(vec![[1.0, 0.0]; 5]),
            ..Default::default()
        };
        let (n, x, r) = f.resolve(None).unwrap();
        assert_eq!((n, x.len(), r), (3, 5, None));
        assert!(f.resolve(Some(4)).is_err());

        let even = SignalFile {
            signal: Some(vec![[1.0, 0.0]; 4]),
            ..Default::default()
        };
        assert!(even.resolve(None).is_err());

        let modes = SignalFile {
            modes: Some(vec![ModeJson {
                z: [0.0, 1.0],
                c: [2.0, 0.0],
            }]),
            ..Default::default()
        };
        assert!(modes.resolve(None).is_err());
        let (n, x, r) = modes.resolve(Some(2)).unwrap();
        assert_eq!((n, r), (2, Some(1)));
        assert!((x[1] - Complex64::new(0.0, 2.0)).norm() < 1e-15);

        assert!(SignalFile::default().resolve(Some(2)).is_err());
    }
}
