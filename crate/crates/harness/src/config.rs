//! Run settings shared by the CLI flags and the JSON config file.
//!
//! The config file mirrors the flag names (`max_iters` for `--max-iters`).
//! Precedence is: flag, then config file, then `--full` preset, then desk default.

use std::path::{Path, PathBuf};

use hankel_recover::{Family, SolverConfig};
use serde::Deserialize;

use crate::error::{HarnessError, Result};
use crate::phase::PhaseGridSpec;
use crate::recover::RecoverSpec;

/// An integer or list of integers. Text accepts `a,b,c`, `start:end` and
/// `start:step:end` (inclusive), and comma-joined mixtures.
#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(untagged)]
pub enum IntList {
    One(usize),
    Many(Vec<usize>),
    Text(String),
}

impl IntList {
    pub fn values(&self) -> Result<Vec<usize>> {
        match self {
            IntList::One(v) => Ok(vec![*v]),
            IntList::Many(v) => Ok(v.clone()),
            IntList::Text(s) => parse_int_list(s),
        }
    }

    pub fn single(&self, name: &str) -> Result<usize> {
        match self.values()?.as_slice() {
            [v] => Ok(*v),
            other => Err(HarnessError::Config(format!(
                "--{name} expects a single value, got {other:?}"
            ))),
        }
    }
}

pub fn parse_int_list(text: &str) -> Result<Vec<usize>> {
    let bad = || HarnessError::Config(format!("cannot parse integer list {text:?}"));
    let num = |s: &str| s.trim().parse::<usize>().map_err(|_| bad());
    let mut out = Vec::new();
    for part in text.split(',').filter(|p| !p.trim().is_empty()) {
        let pieces: Vec<&str> = part.split(':').collect();
        match pieces.as_slice() {
            [v] => out.push(num(v)?),
            [a, b] => out.extend(num(a)?..=num(b)?),
            [a, step, b] => {
                let step = num(step)?;
                if step == 0 {
                    return Err(bad());
                }
                out.extend((num(a)?..=num(b)?).step_by(step));
            }
            _ => return Err(bad()),
        }
    }
    Ok(out)
}

/// Unresolved settings; every field optional so flags can overlay a file.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawSettings {
    pub n: Option<IntList>,
    pub r: Option<IntList>,
    pub m: Option<IntList>,
    pub delta: Option<f64>,
    pub seed: Option<u64>,
    pub trials: Option<usize>,
    pub threshold: Option<f64>,
    pub rho: Option<f64>,
    pub max_iters: Option<usize>,
    pub tol: Option<f64>,
    pub out: Option<PathBuf>,
    pub full: Option<bool>,
    pub family: Option<Family>,
    pub input: Option<PathBuf>,
    pub pencil: Option<bool>,
    pub fixed_rho: Option<bool>,
}

impl RawSettings {
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

    /// Fields set in `self` win over `base`.
    pub fn overlay(self, base: RawSettings) -> RawSettings {
        RawSettings {
            n: self.n.or(base.n),
            r: self.r.or(base.r),
            m: self.m.or(base.m),
            delta: self.delta.or(base.delta),
            seed: self.seed.or(base.seed),
            trials: self.trials.or(base.trials),
            threshold: self.threshold.or(base.threshold),
            rho: self.rho.or(base.rho),
            max_iters: self.max_iters.or(base.max_iters),
            tol: self.tol.or(base.tol),
            out: self.out.or(base.out),
            full: self.full.or(base.full),
            family: self.family.or(base.family),
            input: self.input.or(base.input),
            pencil: self.pencil.or(base.pencil),
            fixed_rho: self.fixed_rho.or(base.fixed_rho),
        }
    }

    pub fn is_full(&self) -> bool {
        self.full.unwrap_or(false)
    }

    pub fn solver(&self) -> SolverConfig {
        let d = SolverConfig::default();
        SolverConfig {
            rho: self.rho.unwrap_or(d.rho),
            max_iters: self.max_iters.unwrap_or(d.max_iters),
            tol_primal: self.tol.unwrap_or(d.tol_primal),
            tol_dual: self.tol.unwrap_or(d.tol_dual),
            delta: self.delta.unwrap_or(0.0),
            adaptive_rho: !self.fixed_rho.unwrap_or(false),
        }
    }

    pub fn phase_spec(&self) -> Result<PhaseGridSpec> {
        let preset = if self.is_full() {
            PhaseGridSpec::full()
        } else {
            PhaseGridSpec::desk()
        };
        let n = match &self.n {
            Some(list) => list.single("n")?,
            None => preset.n,
        };
        // A changed N invalidates the preset M grid.
        let m_values = match &self.m {
            Some(list) => list.values()?,
            None if n != preset.n => (1..=2 * n - 1).collect(),
            None => preset.m_values,
        };
        let spec = PhaseGridSpec {
            n,
            r_values: match &self.r {
                Some(list) => list.values()?,
                None => preset.r_values,
            },
            m_values,
            trials: self.trials.unwrap_or(preset.trials),
            threshold: self.threshold.unwrap_or(preset.threshold),
            base_seed: self.seed.unwrap_or(preset.base_seed),
            family: self.family.unwrap_or(preset.family),
            delta: self.delta.unwrap_or(preset.delta),
            solver: self.solver(),
        };
        spec.validate()?;
        Ok(spec)
    }

    /// `(n_values, trials, seed)` for the norm scan.
    pub fn norm_scan_params(&self) -> Result<(Vec<usize>, usize, u64)> {
        let (n_default, trials_default) = if self.is_full() {
            (vec![1, 4, 16, 64, 256, 512], 500)
        } else {
            (vec![1, 16, 64, 256], 200)
        };
        let n_values = match &self.n {
            Some(list) => list.values()?,
            None => n_default,
        };
        Ok((
            n_values,
            self.trials.unwrap_or(trials_default),
            self.seed.unwrap_or(0),
        ))
    }

    pub fn recover_spec(&self) -> Result<RecoverSpec> {
        let m = match &self.m {
            Some(list) => list.single("m")?,
            None => return Err(HarnessError::Config("recover requires --m".into())),
        };
        let spec = RecoverSpec {
            n: self.n.as_ref().map(|l| l.single("n")).transpose()?,
            r: self.r.as_ref().map(|l| l.single("r")).transpose()?,
            m,
            delta: self.delta.unwrap_or(0.0),
            seed: self.seed.unwrap_or(0),
            family: self.family.unwrap_or(Family::Sinusoid),
            threshold: self.threshold.unwrap_or(1e-3),
            solver: self.solver(),
            input: self.input.clone(),
            pencil: self.pencil.unwrap_or(false),
        };
        spec.validate()?;
        Ok(spec)
    }
}
