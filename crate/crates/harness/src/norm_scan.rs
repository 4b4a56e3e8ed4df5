//! Monte-Carlo estimate of `E ||G g||_2` for complex Gaussian `g`, the
//! quantity expected to grow like `ln N`.

use hankel_recover::linalg::{random_vector, spectral_norm};
use hankel_recover::HankelLift;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{HarnessError, Result};
use crate::pool::build_pool;
use crate::seed::hash_words;

pub const MIN_TRIALS: usize = 30;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormEstimate {
    pub n: usize,
    pub mean: f64,
    /// Sample standard deviation over `sqrt(trials)`.
    pub stderr: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormScan {
    pub n_values: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    pub estimates: Vec<NormEstimate>,
}

impl NormScan {
    pub fn estimate(&self, n: usize) -> Option<&NormEstimate> {
        self.estimates.iter().find(|e| e.n == n)
    }
}

/// Spectral norm of `G g` for the `trial`-th draw at dimension `n`.
pub fn sample_norm(n: usize, seed: u64, trial: usize) -> Result<f64> {
    let lift = HankelLift::new(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(hash_words(&[seed, n as u64, trial as u64]));
    let g = random_vector(lift.ambient_len(), &mut rng);
    Ok(spectral_norm(&lift.lift(&g)?)?)
}

pub fn run_norm_scan(n_values: &[usize], trials: usize, seed: u64) -> Result<NormScan> {
    if trials < MIN_TRIALS {
        return Err(HarnessError::Config(format!(
            "norm scan needs at least {MIN_TRIALS} trials, got {trials}"
        )));
    }
    if n_values.contains(&0) {
        return Err(HarnessError::Config("n values must be >= 1".into()));
    }
    let jobs: Vec<(usize, usize)> = n_values
        .iter()
        .flat_map(|&n| (0..trials).map(move |t| (n, t)))
        .collect();
    let pool = build_pool()?;
    let norms: Vec<f64> = pool.install(|| {
        jobs.par_iter()
            .map(|&(n, t)| sample_norm(n, seed, t))
            .collect::<Result<_>>()
    })?;

    let estimates = n_values
        .iter()
        .zip(norms.chunks(trials))
        .map(|(&n, draws)| {
            let k = draws.len() as f64;
            let mean = draws.iter().sum::<f64>() / k;
            let var = draws.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (k - 1.0);
            NormEstimate {
                n,
                mean,
                stderr: (var / k).sqrt(),
            }
        })
        .collect();

    Ok(NormScan {
        n_values: n_values.to_vec(),
        trials,
        seed,
        estimates,
    })
}
