//! Dense complex helpers shared by the operator, solver and harness code.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

pub type CVector = DVector<Complex64>;
pub type CMatrix = DMatrix<Complex64>;

/// Complex number whose real and imaginary parts are independent N(0, 1).
pub fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im)
}

pub fn random_vector<R: Rng + ?Sized>(len: usize, rng: &mut R) -> CVector {
    CVector::from_fn(len, |_, _| complex_normal(rng))
}

/// Row-major fill, so the draw order does not depend on nalgebra's storage.
pub fn random_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    let mut m = CMatrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            m[(i, j)] = complex_normal(rng);
        }
    }
    m
}

/// `<a, b> = sum a_i conj(b_i)`, linear in the first argument.
pub fn inner(a: &CVector, b: &CVector) -> Complex64 {
    a.iter().zip(b.iter()).map(|(x, y)| x * y.conj()).sum()
}

/// Frobenius inner product `<A, B> = tr(B^H A)`.
pub fn inner_mat(a: &CMatrix, b: &CMatrix) -> Complex64 {
    a.iter().zip(b.iter()).map(|(x, y)| x * y.conj()).sum()
}

pub fn singular_values(m: &CMatrix) -> Result<Vec<f64>> {
    if m.is_empty() {
        return Ok(Vec::new());
    }
    let svd = m
        .clone()
        .try_svd(false, false, f64::EPSILON, 0)
        .ok_or_else(|| Error::Numerical("SVD did not converge".into()))?;
    let mut s: Vec<f64> = svd.singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    Ok(s)
}

pub fn nuclear_norm(m: &CMatrix) -> Result<f64> {
    Ok(singular_values(m)?.iter().sum())
}

pub fn spectral_norm(m: &CMatrix) -> Result<f64> {
    Ok(singular_values(m)?.first().copied().unwrap_or(0.0))
}

/// Number of singular values above `rel_tol * sigma_max`.
pub fn numerical_rank(m: &CMatrix, rel_tol: f64) -> Result<usize> {
    let s = singular_values(m)?;
    let Some(&top) = s.first() else {
        return Ok(0);
    };
    if top == 0.0 {
        return Ok(0);
    }
    Ok(s.iter().filter(|&&v| v > rel_tol * top).count())
}

/// Default relative threshold for rank decisions on an `n x n` matrix.
pub fn default_rank_tol(n: usize) -> f64 {
    n as f64 * f64::EPSILON * 1e3
}

pub fn all_finite_vec(v: &CVector) -> bool {
    v.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

pub fn all_finite_mat(m: &CMatrix) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}
