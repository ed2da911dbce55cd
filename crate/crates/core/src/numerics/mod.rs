//! Dense complex linear algebra and quadrature used by every other module.
//!
//! Matrices are `nalgebra` dynamic matrices over `Complex64`. Hermitian
//! inputs are gated through [`HermitianMatrix`], which symmetrizes on
//! construction so downstream code can rely on exact Hermiticity.

mod eigen;
mod ode;
mod quadrature;

pub use eigen::{
    determinant, general_eigenvalues, hermitian_eigen, hermitian_signature, inverse,
    kernel_basis, kernel_basis_abs, numerical_rank, signature_of_values, singular_values, spectral_norm,
    HermitianEigen, DEFAULT_RANK_TOL, DEFAULT_ZERO_TOL,
};
pub use ode::{dopri5, OdeSolution};
pub use quadrature::{adaptive_quadrature, Quadrature};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Shorthand for a complex scalar.
#[inline]
pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Largest entry modulus, `‖M‖_max`.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn is_finite(m: &CMatrix) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// Builds a real diagonal matrix as a complex matrix.
pub fn real_diagonal(d: &[f64]) -> CMatrix {
    CMatrix::from_diagonal(&CVector::from_iterator(d.len(), d.iter().map(|&x| c64(x, 0.0))))
}

/// A square complex matrix that is Hermitian up to rounding.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianMatrix(CMatrix);

impl HermitianMatrix {
    /// Relative asymmetry accepted at construction: `‖M − M†‖_max ≤ tol·(1 + ‖M‖_max)`.
    pub const ASYMMETRY_TOL: f64 = 1e-12;

    pub fn new(m: CMatrix) -> Result<Self> {
        if m.nrows() == 0 || m.nrows() != m.ncols() {
            return Err(Error::DimensionMismatch(format!(
                "Hermitian matrix must be square and non-empty, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        if !is_finite(&m) {
            return Err(Error::NonFinite);
        }
        let adj = m.adjoint();
        let asymmetry = max_abs(&(&m - &adj));
        if asymmetry > Self::ASYMMETRY_TOL * (1.0 + max_abs(&m)) {
            return Err(Error::NotHermitian { asymmetry });
        }
        Ok(Self((m + adj).scale(0.5)))
    }

    pub fn zeros(n: usize) -> Self {
        Self(CMatrix::zeros(n, n))
    }

    pub fn identity(n: usize) -> Self {
        Self(CMatrix::identity(n, n))
    }

    pub fn from_real_diagonal(d: &[f64]) -> Self {
        Self(real_diagonal(d))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_inner(self) -> CMatrix {
        self.0
    }

    /// Multiplication by a real scalar keeps the matrix Hermitian.
    pub fn scaled(&self, s: f64) -> Self {
        Self(self.0.scale(s))
    }

    /// Congruence `T† M T`.
    pub fn congruence(&self, t: &CMatrix) -> Result<Self> {
        if t.nrows() != self.dim() {
            return Err(Error::DimensionMismatch("congruence transform".into()));
        }
        let m = t.adjoint() * &self.0 * t;
        let adj = m.adjoint();
        Ok(Self((m + adj).scale(0.5)))
    }
}

/// Inertia of a Hermitian matrix relative to a zero tolerance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignatureTriple {
    pub n_plus: usize,
    pub n_minus: usize,
    pub n_zero: usize,
}

impl SignatureTriple {
    /// `n₊ − n₋`.
    pub fn signature(&self) -> i64 {
        self.n_plus as i64 - self.n_minus as i64
    }

    pub fn dim(&self) -> usize {
        self.n_plus + self.n_minus + self.n_zero
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.n_zero == 0
    }
}
