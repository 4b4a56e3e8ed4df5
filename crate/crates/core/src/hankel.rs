//! Hankel and Toeplitz structure on `C^{N x N}`.
//!
//! The anti-diagonal `j` of an `N x N` matrix has `K_j = min(j + 1, 2N - 1 - j)`
//! entries. The normalised anti-diagonal indicators `E_j` (entries `1/sqrt(K_j)`
//! on `k + l = j`) form an orthonormal basis of the Hankel subspace, so the
//! lifting `y -> sum_j y_j E_j` is an isometry and its adjoint is a left inverse.
//! Indices are 0-based throughout.

use num_complex::Complex64;

use crate::error::{check_len, Error, Result};
use crate::linalg::{CMatrix, CVector};

/// `H(x)[j][k] = x[j + k]`.
pub fn hankel_map(x: &CVector, n: usize) -> Result<CMatrix> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "Hankel dimension must be >= 1".into(),
        ));
    }
    check_len("hankel_map", 2 * n - 1, x.len())?;
    Ok(CMatrix::from_fn(n, n, |j, k| x[j + k]))
}

/// `T(x)[i][j] = x[N - 1 + i - j]`, i.e. `H(x) P` with `P` the anti-identity.
pub fn toeplitz_map(x: &CVector, n: usize) -> Result<CMatrix> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "Toeplitz dimension must be >= 1".into(),
        ));
    }
    check_len("toeplitz_map", 2 * n - 1, x.len())?;
    Ok(CMatrix::from_fn(n, n, |i, j| x[n - 1 + i - j]))
}

/// The anti-identity `P` (ones on the main anti-diagonal).
pub fn flip(n: usize) -> CMatrix {
    CMatrix::from_fn(n, n, |i, j| {
        if i + j + 1 == n {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

/// Dimension-`N` lifting context: anti-diagonal lengths `K_j`, the diagonal
/// weighting `D = diag(sqrt(K_j))`, and the isometric lift between `C^{2N-1}`
/// and the Hankel subspace of `C^{N x N}`.
#[derive(Debug, Clone, PartialEq)]
pub struct HankelLift {
    n: usize,
    weights: Vec<f64>,
    d_diag: Vec<f64>,
}

impl HankelLift {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument(
                "Hankel dimension must be >= 1".into(),
            ));
        }
        let len = 2 * n - 1;
        let weights: Vec<f64> = (0..len)
            .map(|j| if j < n { j + 1 } else { len - j } as f64)
            .collect();
        let d_diag = weights.iter().map(|k| k.sqrt()).collect();
        Ok(Self { n, weights, d_diag })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `2N - 1`.
    pub fn ambient_len(&self) -> usize {
        2 * self.n - 1
    }

    /// Anti-diagonal lengths `K_j`.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Diagonal of `D`, `sqrt(K_j)`.
    pub fn d_diag(&self) -> &[f64] {
        &self.d_diag
    }

    pub fn hankel_map(&self, x: &CVector) -> Result<CMatrix> {
        hankel_map(x, self.n)
    }

    pub fn toeplitz_map(&self, x: &CVector) -> Result<CMatrix> {
        toeplitz_map(x, self.n)
    }

    /// `G y`: entry `(j, k)` is `y[j + k] / sqrt(K_{j+k})`.
    pub fn lift(&self, y: &CVector) -> Result<CMatrix> {
        check_len("lift", self.ambient_len(), y.len())?;
        let scaled: Vec<Complex64> = y.iter().zip(&self.d_diag).map(|(v, d)| v / *d).collect();
        Ok(CMatrix::from_fn(self.n, self.n, |j, k| scaled[j + k]))
    }

    /// `G* X`: entry `j` is the anti-diagonal sum of `X` divided by `sqrt(K_j)`.
    pub fn lift_adjoint(&self, x: &CMatrix) -> Result<CVector> {
        if x.nrows() != self.n || x.ncols() != self.n {
            return Err(Error::Dimension {
                context: "lift_adjoint",
                expected: self.n,
                actual: if x.nrows() != self.n {
                    x.nrows()
                } else {
                    x.ncols()
                },
            });
        }
        let mut sums = vec![Complex64::new(0.0, 0.0); self.ambient_len()];
        for k in 0..self.n {
            for j in 0..self.n {
                sums[j + k] += x[(j, k)];
            }
        }
        Ok(CVector::from_iterator(
            sums.len(),
            sums.iter().zip(&self.d_diag).map(|(s, d)| s / *d),
        ))
    }

    /// Orthogonal projection onto the Hankel subspace, `G G* X`.
    pub fn project_hankel(&self, x: &CMatrix) -> Result<CMatrix> {
        self.lift(&self.lift_adjoint(x)?)
    }

    /// Multiply entrywise by `sqrt(K_j)` (`D x`), or divide when `inverse`.
    pub fn weight_apply(&self, x: &CVector, inverse: bool) -> Result<CVector> {
        check_len("weight_apply", self.ambient_len(), x.len())?;
        Ok(CVector::from_iterator(
            x.len(),
            x.iter()
                .zip(&self.d_diag)
                .map(|(v, d)| if inverse { v / *d } else { v * *d }),
        ))
    }
}
