//! Scaled Gaussian measurements `b = B D x + eta` and the two feasibility
//! projections the solver uses in the weighted variable `y = D x`.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{check_len, Error, Result};
use crate::hankel::HankelLift;
use crate::linalg::{random_matrix, random_vector, CMatrix, CVector};

/// Complex Gaussian matrix `B` (`M x (2N-1)`, real and imaginary parts i.i.d.
/// N(0, 1)) with its thin SVD cached for the projections.
#[derive(Debug, Clone)]
pub struct MeasurementEnsemble {
    b_matrix: CMatrix,
    n: usize,
    d_diag: Vec<f64>,
    u: CMatrix,
    s: Vec<f64>,
    /// Right singular vectors as columns, `(2N-1) x min(M, 2N-1)`.
    v: CMatrix,
    full_row_rank: bool,
}

/// Measured data and the noise level it was generated with.
#[derive(Debug, Clone, PartialEq)]
pub struct Observation {
    pub b: CVector,
    pub delta: f64,
}

/// Draw `B` row-major from a ChaCha8 stream seeded with `seed`.
pub fn sample_ensemble(m: usize, n: usize, seed: u64) -> Result<MeasurementEnsemble> {
    if m == 0 || n == 0 {
        return Err(Error::InvalidArgument(format!(
            "ensemble needs m >= 1 and n >= 1 (got m = {m}, n = {n})"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    MeasurementEnsemble::new(random_matrix(m, 2 * n - 1, &mut rng), n)
}

impl MeasurementEnsemble {
    /// Wrap an explicit `B` for Hankel dimension `n`; factorizes it once.
    pub fn new(b_matrix: CMatrix, n: usize) -> Result<Self> {
        let lift = HankelLift::new(n)?;
        check_len("ensemble columns", lift.ambient_len(), b_matrix.ncols())?;
        if b_matrix.nrows() == 0 {
            return Err(Error::InvalidArgument(
                "ensemble needs at least one row".into(),
            ));
        }
        let svd = b_matrix
            .clone()
            .try_svd(true, true, f64::EPSILON, 0)
            .ok_or_else(|| {
                Error::Numerical("SVD of the measurement matrix did not converge".into())
            })?;
        let (u, v_t) = match (svd.u, svd.v_t) {
            (Some(u), Some(v_t)) => (u, v_t),
            _ => return Err(Error::Numerical("SVD returned no singular vectors".into())),
        };
        let s: Vec<f64> = svd.singular_values.iter().copied().collect();
        let (m, len) = b_matrix.shape();
        let s_max = s.iter().copied().fold(0.0, f64::max);
        let s_min = s.iter().copied().fold(f64::INFINITY, f64::min);
        let full_row_rank = m <= len && s_min > s_max * len as f64 * f64::EPSILON * 10.0;
        Ok(Self {
            n,
            d_diag: lift.d_diag().to_vec(),
            u,
            s,
            v: v_t.adjoint(),
            full_row_rank,
            b_matrix,
        })
    }

    pub fn b_matrix(&self) -> &CMatrix {
        &self.b_matrix
    }

    pub fn m(&self) -> usize {
        self.b_matrix.nrows()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ambient_len(&self) -> usize {
        2 * self.n - 1
    }

    pub fn singular_values(&self) -> &[f64] {
        &self.s
    }

    pub fn is_full_row_rank(&self) -> bool {
        self.full_row_rank
    }

    /// `B y`.
    pub fn apply(&self, y: &CVector) -> Result<CVector> {
        check_len("ensemble apply", self.ambient_len(), y.len())?;
        Ok(&self.b_matrix * y)
    }

    /// `A x = B D x`.
    pub fn apply_weighted(&self, x: &CVector) -> Result<CVector> {
        check_len("ensemble apply", self.ambient_len(), x.len())?;
        let y = CVector::from_iterator(x.len(), x.iter().zip(&self.d_diag).map(|(v, d)| v * *d));
        Ok(&self.b_matrix * y)
    }

    /// Closest point to `v` on `{y : B y = b}`: `v - B^H (B B^H)^{-1} (B v - b)`.
    pub fn project_affine(&self, v: &CVector, b: &CVector) -> Result<CVector> {
        check_len("project_affine signal", self.ambient_len(), v.len())?;
        check_len("project_affine data", self.m(), b.len())?;
        if !self.full_row_rank {
            return Err(Error::Numerical(format!(
                "measurement matrix ({} x {}) is not of full row rank",
                self.m(),
                self.ambient_len()
            )));
        }
        let r = &self.b_matrix * v - b;
        let mut coeff = self.u.adjoint() * r;
        for (c, s) in coeff.iter_mut().zip(&self.s) {
            *c /= *s;
        }
        Ok(v - &self.v * coeff)
    }

    /// Closest point to `v` on `{y : ||B y - b|| <= delta}`.
    ///
    /// In the SVD basis the solution is `w_i = (a_i + mu s_i beta_i) / (1 + mu s_i^2)`
    /// for the multiplier `mu >= 0` that puts the residual on the sphere; `mu` is
    /// found by a safeguarded Newton iteration on `1/||res(mu)|| - 1/delta`.
    /// The returned point is always on the feasible side of the root.
    pub fn project_ball(&self, v: &CVector, b: &CVector, delta: f64) -> Result<CVector> {
        check_len("project_ball signal", self.ambient_len(), v.len())?;
        check_len("project_ball data", self.m(), b.len())?;
        if !(delta >= 0.0 && delta.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "delta = {delta} must be finite and >= 0"
            )));
        }
        let current = (&self.b_matrix * v - b).norm();
        if current <= delta {
            return Ok(v.clone());
        }
        if delta == 0.0 {
            return self.project_affine(v, b);
        }

        let a = self.v.adjoint() * v;
        let beta = self.u.adjoint() * b;
        let b_perp = (b - &self.u * &beta).norm();
        if b_perp >= delta {
            return Err(Error::RootFind {
                residual: b_perp,
                delta,
                multiplier: f64::INFINITY,
            });
        }
        let target = (delta * delta - b_perp * b_perp).sqrt();
        let r: Vec<Complex64> = a
            .iter()
            .zip(beta.iter())
            .zip(&self.s)
            .map(|((ai, bi), si)| ai * *si - bi)
            .collect();
        let r2: Vec<f64> = r.iter().map(|z| z.norm_sqr()).collect();

        // Residual norm (range part) and its derivative in mu.
        let eval = |mu: f64| -> (f64, f64) {
            let mut g = 0.0;
            let mut dg = 0.0;
            for (ri2, si) in r2.iter().zip(&self.s) {
                let q = 1.0 + mu * si * si;
                g += ri2 / (q * q);
                dg += -2.0 * ri2 * si * si / (q * q * q);
            }
            let norm = g.sqrt();
            (norm, if norm > 0.0 { dg / (2.0 * norm) } else { 0.0 })
        };

        let mut lo = 0.0;
        let mut hi = 1.0
            / self
                .s
                .iter()
                .map(|s| s * s)
                .fold(0.0, f64::max)
                .max(f64::MIN_POSITIVE);
        let mut doublings = 0;
        loop {
            let (res, _) = eval(hi);
            if res <= target {
                break;
            }
            lo = hi;
            hi *= 2.0;
            doublings += 1;
            if doublings > 2000 || !hi.is_finite() {
                return Err(Error::RootFind {
                    residual: (res * res + b_perp * b_perp).sqrt(),
                    delta,
                    multiplier: hi,
                });
            }
        }

        let mut mu = hi;
        for _ in 0..200 {
            let (res, dres) = eval(mu);
            if res <= target {
                hi = mu;
                if res >= target * (1.0 - 1e-10) {
                    break;
                }
            } else {
                lo = mu;
            }
            if hi - lo <= 1e-15 * hi {
                break;
            }
            // Newton on phi(mu) = 1/res - 1/target, which is close to linear.
            let phi = 1.0 / res - 1.0 / target;
            let dphi = -dres / (res * res);
            let newton = mu - phi / dphi;
            mu = if newton.is_finite() && newton > lo && newton < hi {
                newton
            } else {
                0.5 * (lo + hi)
            };
        }
        let mu = hi;

        let mut step = CVector::zeros(self.s.len());
        for (i, (ri, si)) in r.iter().zip(&self.s).enumerate() {
            step[i] = -(ri * (mu * si)) / (1.0 + mu * si * si);
        }
        Ok(v + &self.v * step)
    }
}

/// `b = B D x + eta`, with `eta` complex Gaussian rescaled to `||eta|| = noise_delta`.
pub fn measure(
    ens: &MeasurementEnsemble,
    x: &CVector,
    noise_delta: f64,
    seed: u64,
) -> Result<Observation> {
    if !(noise_delta >= 0.0 && noise_delta.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "noise level {noise_delta} must be finite and >= 0"
        )));
    }
    let mut b = ens.apply_weighted(x)?;
    if noise_delta > 0.0 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let eta = random_vector(ens.m(), &mut rng);
        let norm = eta.norm();
        if norm == 0.0 {
            return Err(Error::Numerical("drew an all-zero noise vector".into()));
        }
        b += eta * Complex64::new(noise_delta / norm, 0.0);
    }
    Ok(Observation {
        b,
        delta: noise_delta,
    })
}
