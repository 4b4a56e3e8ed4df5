//! Exponential-mode signals: synthesis of `x_j = sum_k c_k z_k^j`, seeded random
//! test instances, and mode extraction by the matrix pencil method.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hankel::hankel_map;
use crate::linalg::{CMatrix, CVector};

/// Upper end of the damping draw `tau ~ U[0, tau_max]` for [`Family::Damped`].
pub const DEFAULT_TAU_MAX: f64 = 0.5;

/// One exponential component `c z^j`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mode {
    pub z: Complex64,
    pub c: Complex64,
}

impl Mode {
    pub fn new(z: Complex64, c: Complex64) -> Self {
        Self { z, c }
    }
}

/// A superposition of `R` modes observed on `2N - 1` samples.
#[derive(Debug, Clone, PartialEq)]
pub struct ModalSignal {
    modes: Vec<Mode>,
    n: usize,
}

impl ModalSignal {
    /// `n` is the Hankel dimension `N`; the signal has `2N - 1` samples.
    ///
    /// Rejects `R >= 2N - 1`, zero amplitudes, non-finite values and repeated poles.
    pub fn new(modes: Vec<Mode>, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument(
                "signal dimension N must be >= 1".into(),
            ));
        }
        if modes.len() >= 2 * n - 1 {
            return Err(Error::InvalidArgument(format!(
                "{} modes do not fit a signal of length {}",
                modes.len(),
                2 * n - 1
            )));
        }
        for (i, m) in modes.iter().enumerate() {
            if !(m.z.re.is_finite()
                && m.z.im.is_finite()
                && m.c.re.is_finite()
                && m.c.im.is_finite())
            {
                return Err(Error::InvalidArgument(format!("mode {i} is not finite")));
            }
            if m.c == Complex64::new(0.0, 0.0) {
                return Err(Error::InvalidArgument(format!(
                    "mode {i} has zero amplitude"
                )));
            }
            if modes[..i].iter().any(|o| o.z == m.z) {
                return Err(Error::InvalidArgument(format!(
                    "mode {i} repeats an earlier pole"
                )));
            }
        }
        Ok(Self { modes, n })
    }

    pub fn modes(&self) -> &[Mode] {
        &self.modes
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        self.modes.len()
    }

    /// Number of samples, `2N - 1`.
    pub fn len(&self) -> usize {
        2 * self.n - 1
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }
}

/// Pole distribution of [`random_instance`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// `z = exp(2 pi i f)`, `f ~ U[0, 1]`.
    Sinusoid,
    /// `z = exp(-tau) exp(2 pi i f)`, additionally `tau ~ U[0, tau_max]`.
    Damped,
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sinusoid" => Ok(Family::Sinusoid),
            "damped" => Ok(Family::Damped),
            other => Err(Error::InvalidArgument(format!(
                "unknown signal family {other:?} (expected sinusoid or damped)"
            ))),
        }
    }
}

/// Evaluate `sum_k c_k z_k^j` for `j = 0..len`.
pub fn evaluate(modes: &[Mode], len: usize) -> CVector {
    let mut out = CVector::zeros(len);
    for m in modes {
        let mut p = Complex64::new(1.0, 0.0);
        for j in 0..len {
            out[j] += m.c * p;
            p *= m.z;
        }
    }
    out
}

/// Sample vector `x_j = sum_k c_k z_k^j`, `j = 0..=2N-2`.
pub fn synthesize(sig: &ModalSignal) -> CVector {
    evaluate(&sig.modes, sig.len())
}

/// Seeded random instance with `r` modes and amplitudes `|c| = 1 + 10^(0.5 m)`,
/// `m ~ U[0, 1]`, phases uniform on `[0, 2 pi)`.
pub fn random_instance(n: usize, r: usize, family: Family, seed: u64) -> Result<ModalSignal> {
    random_instance_with_damping(n, r, family, DEFAULT_TAU_MAX, seed)
}

pub fn random_instance_with_damping(
    n: usize,
    r: usize,
    family: Family,
    tau_max: f64,
    seed: u64,
) -> Result<ModalSignal> {
    if n == 0 || r == 0 || r >= 2 * n - 1 {
        return Err(Error::InvalidArgument(format!(
            "model order r = {r} must satisfy 1 <= r < 2N - 1 = {}",
            (2 * n).saturating_sub(1)
        )));
    }
    if !(tau_max >= 0.0 && tau_max.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "tau_max = {tau_max} must be finite and >= 0"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let modes = (0..r)
        .map(|_| {
            let f: f64 = rng.random();
            let radius = match family {
                Family::Sinusoid => 1.0,
                Family::Damped => (-tau_max * rng.random::<f64>()).exp(),
            };
            let phase = 2.0 * PI * rng.random::<f64>();
            let m: f64 = rng.random();
            let amplitude = 1.0 + 10f64.powf(0.5 * m);
            Mode::new(
                Complex64::from_polar(radius, 2.0 * PI * f),
                Complex64::from_polar(amplitude, phase),
            )
        })
        .collect();
    ModalSignal::new(modes, n)
}

/// Tuning for [`matrix_pencil_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PencilOptions {
    /// Maximum accepted `||synthesize(modes) - x|| / ||x||`.
    pub residual_tol: f64,
}

impl Default for PencilOptions {
    fn default() -> Self {
        Self { residual_tol: 1e-6 }
    }
}

/// Extract `r` modes from a length `2N - 1` signal with the default residual tolerance.
pub fn matrix_pencil(x: &CVector, r: usize) -> Result<Vec<Mode>> {
    matrix_pencil_with(x, r, &PencilOptions::default())
}

/// Matrix pencil mode extraction.
///
/// With `H0`/`H1` the Hankel matrix of `x` without its last/first row, the
/// poles are the generalized eigenvalues of `(H1, H0)` restricted to the
/// rank-`r` principal subspace of `H0`: `eig(U_r^H H1 V_r S_r^{-1})`.
/// Amplitudes come from a least-squares Vandermonde fit. Modes are returned
/// sorted by `arg(z)`.
pub fn matrix_pencil_with(x: &CVector, r: usize, opts: &PencilOptions) -> Result<Vec<Mode>> {
    let len = x.len();
    if len.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!(
            "signal length {len} is not of the form 2N - 1"
        )));
    }
    let n = len.div_ceil(2);
    if r == 0 || r > n.saturating_sub(1) {
        return Err(Error::InvalidArgument(format!(
            "model order r = {r} must satisfy 1 <= r <= N - 1 = {}",
            n.saturating_sub(1)
        )));
    }
    let x_norm = x.norm();
    if x_norm == 0.0 {
        return Err(Error::InvalidArgument(
            "cannot extract modes from a zero signal".into(),
        ));
    }

    let h = hankel_map(x, n)?;
    let h0 = h.rows(0, n - 1).into_owned();
    let h1 = h.rows(1, n - 1).into_owned();

    let svd = h0
        .try_svd(true, true, f64::EPSILON, 0)
        .ok_or_else(|| Error::Numerical("SVD of the pencil did not converge".into()))?;
    let (u, v_t) = match (svd.u, svd.v_t) {
        (Some(u), Some(v_t)) => (u, v_t),
        _ => return Err(Error::Numerical("SVD returned no singular vectors".into())),
    };
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let keep = &order[..r];
    let s_top = svd.singular_values[keep[0]];
    let s_last = svd.singular_values[keep[r - 1]];
    if !(s_last > s_top * f64::EPSILON * n as f64) {
        return Err(Error::Numerical(format!(
            "pencil has numerical rank below r = {r} (sigma_r / sigma_1 = {:e})",
            s_last / s_top
        )));
    }

    let u_r = CMatrix::from_fn(n - 1, r, |i, k| u[(i, keep[k])]);
    let v_r = CMatrix::from_fn(n, r, |i, k| v_t[(keep[k], i)].conj());
    let mut reduced = u_r.adjoint() * h1 * v_r;
    for (k, &idx) in keep.iter().enumerate().take(r) {
        let inv = 1.0 / svd.singular_values[idx];
        reduced.column_mut(k).scale_mut(inv);
    }
    let poles: Vec<Complex64> = if r == 1 {
        vec![reduced[(0, 0)]]
    } else {
        let schur = reduced
            .try_schur(f64::EPSILON, 0)
            .ok_or_else(|| Error::Numerical("Schur decomposition did not converge".into()))?;
        let (_, t) = schur.unpack();
        t.diagonal().iter().copied().collect()
    };

    let amplitudes = vandermonde_fit(&poles, x)?;
    let mut modes: Vec<Mode> = poles
        .into_iter()
        .zip(amplitudes.iter())
        .map(|(z, c)| Mode::new(z, *c))
        .collect();
    modes.sort_by(|a, b| a.z.arg().total_cmp(&b.z.arg()));

    let residual = (evaluate(&modes, len) - x).norm() / x_norm;
    if !(residual <= opts.residual_tol) {
        return Err(Error::IllConditionedPencil {
            residual,
            tolerance: opts.residual_tol,
        });
    }
    Ok(modes)
}

/// Least-squares `c` minimising `|| V c - x ||` with `V[j][k] = z_k^j`.
fn vandermonde_fit(poles: &[Complex64], x: &CVector) -> Result<CVector> {
    let len = x.len();
    let mut v = DMatrix::<Complex64>::zeros(len, poles.len());
    for (k, z) in poles.iter().enumerate() {
        let mut p = Complex64::new(1.0, 0.0);
        for j in 0..len {
            v[(j, k)] = p;
            p *= z;
        }
    }
    let svd = v
        .try_svd(true, true, f64::EPSILON, 0)
        .ok_or_else(|| Error::Numerical("SVD of the Vandermonde system did not converge".into()))?;
    let s_max = svd.singular_values.max();
    svd.solve(x, s_max * f64::EPSILON * len as f64)
        .map_err(|e| Error::Numerical(e.to_string()))
}
