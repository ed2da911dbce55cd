use num_complex::Complex64;

use super::SelfAdjointPencil;
use crate::error::{Error, Result};
use crate::numerics::{c64, is_finite, kernel_basis, CMatrix, HermitianMatrix, DEFAULT_RANK_TOL};

/// A map `D : H₁ → H₂` given by its matrix (`rows = dim H₂`, `cols = dim H₁`).
#[derive(Clone, Debug, PartialEq)]
pub struct DiracData {
    pub d: CMatrix,
}

impl DiracData {
    pub fn new(d: CMatrix) -> Result<Self> {
        if d.nrows() == 0 || d.ncols() == 0 {
            return Err(Error::DimensionMismatch("Dirac map must be non-empty".into()));
        }
        if !is_finite(&d) {
            return Err(Error::NonFinite);
        }
        Ok(Self { d })
    }

    /// `dim H₁`.
    pub fn source_dim(&self) -> usize {
        self.d.ncols()
    }

    /// `dim H₂`.
    pub fn target_dim(&self) -> usize {
        self.d.nrows()
    }

    pub fn kernel(&self) -> Result<CMatrix> {
        kernel_basis(&self.d, DEFAULT_RANK_TOL)
    }

    pub fn cokernel(&self) -> Result<CMatrix> {
        kernel_basis(&self.d.adjoint(), DEFAULT_RANK_TOL)
    }

    /// `dim ker D − dim ker D*`.
    pub fn index(&self) -> Result<i64> {
        Ok(self.kernel()?.ncols() as i64 - self.cokernel()?.ncols() as i64)
    }

    /// The Hermitian matrix `[[0, D*], [D, 0]]`.
    pub fn off_diagonal(&self) -> CMatrix {
        let (a, b) = (self.source_dim(), self.target_dim());
        let mut m = CMatrix::zeros(a + b, a + b);
        m.view_mut((0, a), (a, b)).copy_from(&self.d.adjoint());
        m.view_mut((a, 0), (b, a)).copy_from(&self.d);
        m
    }

    /// `diag(I_{H₁}, −I_{H₂})`.
    pub fn grading(&self) -> HermitianMatrix {
        let (a, b) = (self.source_dim(), self.target_dim());
        let d: Vec<f64> = std::iter::repeat_n(1.0, a).chain(std::iter::repeat_n(-1.0, b)).collect();
        HermitianMatrix::from_real_diagonal(&d)
    }
}

/// First-order pencil `σ ↦ [[σ, D*], [D, −σ]]`.
pub fn dirac_block(d: &DiracData) -> Result<SelfAdjointPencil> {
    SelfAdjointPencil::new(vec![HermitianMatrix::new(d.off_diagonal())?, d.grading()])
}

/// `𝐃(z) = [[z, D*], [D, −z̄]]`, which equals `𝒟(σ) + iλ` for `z = σ + iλ`.
pub fn dirac_matrix(d: &DiracData, z: Complex64) -> CMatrix {
    let (a, b) = (d.source_dim(), d.target_dim());
    let mut m = d.off_diagonal();
    for i in 0..a {
        m[(i, i)] = z;
    }
    for i in a..a + b {
        m[(i, i)] = -z.conj();
    }
    m
}

/// Closed-form inverse of `𝐃(z)`:
/// `[z̄Π₁ − zΠ₂][𝒟(0)² + |z|²]⁻¹ + 𝒟(0)[𝒟(0)² + |z|²]⁻¹`.
///
/// `𝒟(0)² + |z|²` is block diagonal with blocks `D*D + |z|²` and
/// `DD* + |z|²`, each positive definite for `z ≠ 0`.
pub fn dirac_resolvent(d: &DiracData, z: Complex64) -> Result<CMatrix> {
    if z == c64(0.0, 0.0) {
        return Err(Error::SingularPoint);
    }
    let (a, b) = (d.source_dim(), d.target_dim());
    let r2 = z.norm_sqr();
    let shift = |m: CMatrix| -> Result<CMatrix> {
        let n = m.nrows();
        (m + CMatrix::identity(n, n) * c64(r2, 0.0))
            .cholesky()
            .map(|c| c.inverse())
            .ok_or_else(|| Error::NumericalFailure("shifted Gram matrix not positive definite".into()))
    };
    let top = shift(d.d.adjoint() * &d.d)?;
    let bottom = shift(&d.d * d.d.adjoint())?;
    let mut gram_inv = CMatrix::zeros(a + b, a + b);
    gram_inv.view_mut((0, 0), (a, a)).copy_from(&top);
    gram_inv.view_mut((a, a), (b, b)).copy_from(&bottom);

    let mut grading = CMatrix::zeros(a + b, a + b);
    for i in 0..a {
        grading[(i, i)] = z.conj();
    }
    for i in a..a + b {
        grading[(i, i)] = -z;
    }
    Ok((grading + d.off_diagonal()) * gram_inv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{inverse, max_abs};

    fn scalar(x: f64) -> DiracData {
        DiracData::new(CMatrix::from_element(1, 1, c64(x, 0.0))).unwrap()
    }

    #[test]
    fn block_of_zero_map() {
        let p = dirac_block(&scalar(0.0)).unwrap();
        assert_eq!(p.mu(), 1);
        assert_eq!(p.coeffs()[1], HermitianMatrix::from_real_diagonal(&[1.0, -1.0]));
        assert_eq!(p.coeffs()[0], HermitianMatrix::zeros(2));
    }

    #[test]
    fn block_of_wide_map() {
        let d = DiracData::new(CMatrix::from_row_slice(1, 2, &[c64(1., 0.), c64(0., 0.)])).unwrap();
        let p = dirac_block(&d).unwrap();
        assert_eq!(p.dim(), 3);
        assert_eq!(p.coeffs()[1], HermitianMatrix::from_real_diagonal(&[1.0, 1.0, -1.0]));
        assert_eq!(d.index().unwrap(), 1);
    }

    #[test]
    fn determinant_of_unit_block() {
        let p = dirac_block(&scalar(1.0)).unwrap();
        for s in [c64(0.3, 0.0), c64(1.0, 2.0), c64(-2.0, 0.5)] {
            let det = crate::numerics::determinant(&p.evaluate(s));
            assert!((det - (-s * s - 1.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn resolvent_examples() {
        let r = dirac_resolvent(&scalar(0.0), c64(0.0, 1.0)).unwrap();
        let expect = CMatrix::from_row_slice(2, 2, &[c64(0., -1.), c64(0., 0.), c64(0., 0.), c64(0., -1.)]);
        assert!(max_abs(&(r - expect)) < 1e-15);

        let r = dirac_resolvent(&scalar(1.0), c64(1.0, 0.0)).unwrap();
        let expect = CMatrix::from_row_slice(2, 2, &[c64(0.5, 0.), c64(0.5, 0.), c64(0.5, 0.), c64(-0.5, 0.)]);
        assert!(max_abs(&(r - expect)) < 1e-15);

        assert_eq!(dirac_resolvent(&scalar(1.0), c64(0.0, 0.0)), Err(Error::SingularPoint));
    }

    #[test]
    fn resolvent_matches_direct_inverse_for_rectangular_map() {
        let d = DiracData::new(CMatrix::from_row_slice(
            2,
            3,
            &[c64(1., 0.5), c64(0., 0.), c64(-2., 0.), c64(0.3, 0.), c64(0., 1.), c64(0., 0.)],
        ))
        .unwrap();
        for z in [c64(1.0, 0.0), c64(0.0, -3.0), c64(20.0, 7.0)] {
            let direct = inverse(&dirac_matrix(&d, z)).unwrap();
            let formula = dirac_resolvent(&d, z).unwrap();
            assert!(max_abs(&(&direct - &formula)) <= 1e-12 * max_abs(&direct));
        }
    }
}
