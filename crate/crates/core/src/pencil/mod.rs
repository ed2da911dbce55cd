//! Selfadjoint matrix pencils `p(σ) = Σ a_j σ^j` with Hermitian coefficients.

mod dirac;
mod ellipticity;
mod roots;

pub use dirac::{dirac_block, dirac_matrix, dirac_resolvent, DiracData};
pub use ellipticity::{verify_parameter_ellipticity, EllipticityReport};
pub use roots::{
    cluster_roots, indicial_roots, indicial_roots_with, normalize_strip, roots_by_determinant_interpolation,
    roots_by_linearization, IndicialRoot, RootMethod, DEFAULT_ROOT_TOL,
};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{c64, singular_values, CMatrix, HermitianMatrix};

/// Hermitian-coefficient matrix polynomial of order `mu ≥ 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct SelfAdjointPencil {
    coeffs: Vec<HermitianMatrix>,
}

impl SelfAdjointPencil {
    /// Builds the pencil from `a_0, …, a_mu`, rejecting determinants that
    /// vanish identically.
    pub fn new(coeffs: Vec<HermitianMatrix>) -> Result<Self> {
        if coeffs.len() < 2 {
            return Err(Error::ConstructionError("pencil order must be at least 1".into()));
        }
        let n = coeffs[0].dim();
        if coeffs.iter().any(|a| a.dim() != n) {
            return Err(Error::DimensionMismatch("pencil coefficients differ in size".into()));
        }
        let p = Self { coeffs };
        if p.is_degenerate()? {
            return Err(Error::DegeneratePencil);
        }
        Ok(p)
    }

    /// Like [`SelfAdjointPencil::new`] but from raw matrices, each passed
    /// through the Hermiticity gate.
    pub fn from_matrices(coeffs: Vec<CMatrix>) -> Result<Self> {
        Self::new(coeffs.into_iter().map(HermitianMatrix::new).collect::<Result<_>>()?)
    }

    /// Scalar pencil `Σ c_j σ^j` on `C^1`.
    pub fn scalar(coeffs: &[f64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| HermitianMatrix::from_real_diagonal(&[c])).collect())
    }

    pub fn mu(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn dim(&self) -> usize {
        self.coeffs[0].dim()
    }

    pub fn coeffs(&self) -> &[HermitianMatrix] {
        &self.coeffs
    }

    pub fn leading(&self) -> &HermitianMatrix {
        &self.coeffs[self.mu()]
    }

    /// Horner evaluation of `p(σ)`.
    pub fn evaluate(&self, sigma: Complex64) -> CMatrix {
        self.derivative(0, sigma)
    }

    /// `p(σ)` at real `σ`, exactly Hermitian.
    pub fn evaluate_real(&self, sigma: f64) -> HermitianMatrix {
        let m = self.evaluate(c64(sigma, 0.0));
        HermitianMatrix::new(m).expect("real evaluation of a Hermitian pencil is Hermitian")
    }

    /// `p^{(k)}(σ)`, the k-th derivative in σ.
    pub fn derivative(&self, k: usize, sigma: Complex64) -> CMatrix {
        let n = self.dim();
        let mut acc = CMatrix::zeros(n, n);
        if k > self.mu() {
            return acc;
        }
        for j in (k..=self.mu()).rev() {
            let falling = (j - k + 1..=j).fold(1.0, |f, i| f * i as f64);
            acc = acc * sigma + self.coeffs[j].matrix().scale(falling);
        }
        acc
    }

    /// `Σ ‖a_j‖_F |σ|^j`, the natural magnitude of `p` near `σ`; rank
    /// decisions at indicial roots are taken relative to it.
    pub fn magnitude_at(&self, sigma: Complex64) -> f64 {
        let r = sigma.norm();
        self.coeffs.iter().rev().fold(0.0, |acc, a| acc * r + a.matrix().norm())
    }

    /// `p(σ) + iλ·I`.
    pub fn evaluate_resolvent_point(&self, sigma: f64, lambda: f64) -> CMatrix {
        let n = self.dim();
        self.evaluate(c64(sigma, 0.0)) + CMatrix::identity(n, n) * c64(0.0, lambda)
    }

    /// Pencil with coefficients `a_j t^j`, i.e. `σ ↦ p(tσ)`.
    pub fn scale(&self, t: f64) -> Result<Self> {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::InvalidScale(t));
        }
        let coeffs = self.coeffs.iter().enumerate().map(|(j, a)| a.scaled(t.powi(j as i32))).collect();
        Ok(Self { coeffs })
    }

    /// Whether the leading coefficient is numerically invertible.
    pub fn leading_invertible(&self) -> Result<bool> {
        let sv = singular_values(self.leading().matrix())?;
        let smax = sv[0];
        let smin = *sv.last().unwrap();
        Ok(smax > 0.0 && smin > 1e-10 * smax)
    }

    /// Direct sum `p ⊕ q` (block diagonal), padding the lower order with zeros.
    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        let mu = self.mu().max(other.mu());
        let (n1, n2) = (self.dim(), other.dim());
        let coeffs = (0..=mu)
            .map(|j| {
                let mut m = CMatrix::zeros(n1 + n2, n1 + n2);
                if let Some(a) = self.coeffs.get(j) {
                    m.view_mut((0, 0), (n1, n1)).copy_from(a.matrix());
                }
                if let Some(b) = other.coeffs.get(j) {
                    m.view_mut((n1, n1), (n2, n2)).copy_from(b.matrix());
                }
                HermitianMatrix::new(m)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(coeffs)
    }

    fn is_degenerate(&self) -> Result<bool> {
        let samples = self.mu() * self.dim() + 1;
        for k in 0..samples {
            // points on the unit circle with an irrational angular offset
            let theta = 0.618_033_988_749_895 + 2.0 * std::f64::consts::PI * k as f64 / samples as f64;
            let sigma = Complex64::from_polar(1.0 + 0.1 * k as f64, theta);
            let sv = singular_values(&self.evaluate(sigma))?;
            if sv[0] > 0.0 && *sv.last().unwrap() > 1e-12 * sv[0] {
                return Ok(false);
            }
        }
        Ok(true)
    }
}
