use nalgebra::linalg::{Schur, SymmetricEigen, SVD};
use num_complex::Complex64;

use super::{c64, CMatrix, HermitianMatrix, SignatureTriple};
use crate::error::{Error, Result};

/// Default relative rank tolerance (fraction of the largest singular value).
pub const DEFAULT_RANK_TOL: f64 = 1e-9;
/// Default relative zero tolerance for eigenvalue signs.
pub const DEFAULT_ZERO_TOL: f64 = 1e-9;

const SWEEPS_PER_DIM: usize = 100;

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    /// Unitary matrix whose columns are the eigenvectors, in the order of `values`.
    pub vectors: CMatrix,
}

impl HermitianEigen {
    pub fn min_abs_value(&self) -> f64 {
        self.values.iter().fold(f64::INFINITY, |acc, v| acc.min(v.abs()))
    }

    pub fn max_abs_value(&self) -> f64 {
        self.values.iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }
}

/// Householder tridiagonalization followed by implicit-shift QR.
pub fn hermitian_eigen(m: &HermitianMatrix) -> Result<HermitianEigen> {
    let n = m.dim();
    let eig = SymmetricEigen::try_new(m.matrix().clone(), f64::EPSILON, SWEEPS_PER_DIM * n)
        .ok_or_else(|| Error::NumericalFailure("Hermitian eigensolver did not converge".into()))?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    Ok(HermitianEigen { values, vectors })
}

/// Counts eigenvalues above `zero_tol`, below `-zero_tol`, and in between.
pub fn signature_of_values(values: &[f64], zero_tol: f64) -> SignatureTriple {
    let mut sig = SignatureTriple { n_plus: 0, n_minus: 0, n_zero: 0 };
    for &v in values {
        if v > zero_tol {
            sig.n_plus += 1;
        } else if v < -zero_tol {
            sig.n_minus += 1;
        } else {
            sig.n_zero += 1;
        }
    }
    sig
}

/// Inertia of `m` with an absolute zero tolerance.
pub fn hermitian_signature(m: &HermitianMatrix, zero_tol: f64) -> Result<SignatureTriple> {
    debug_assert!(zero_tol > 0.0);
    Ok(signature_of_values(&hermitian_eigen(m)?.values, zero_tol))
}

fn padded_svd(m: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    let (rows, cols) = m.shape();
    // wide matrices get zero rows so that V spans all of C^cols
    let square = if rows < cols {
        let mut padded = CMatrix::zeros(cols, cols);
        padded.view_mut((0, 0), (rows, cols)).copy_from(m);
        padded
    } else {
        m.clone()
    };
    let svd = SVD::try_new(square, false, true, f64::EPSILON, SWEEPS_PER_DIM * rows.max(cols))
        .ok_or_else(|| Error::NumericalFailure("SVD did not converge".into()))?;
    let v_t = svd.v_t.expect("requested right singular vectors");
    let mut order: Vec<usize> = (0..cols).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let values = order.iter().map(|&i| svd.singular_values[i]).collect::<Vec<_>>();
    let v = CMatrix::from_fn(cols, cols, |r, c| v_t[(order[c], r)].conj());
    Ok((values, v))
}

/// Singular values of `m`, descending. Wide matrices are zero-padded, so the
/// list always has `cols` entries.
pub fn singular_values(m: &CMatrix) -> Result<Vec<f64>> {
    Ok(padded_svd(m)?.0)
}

pub fn spectral_norm(m: &CMatrix) -> Result<f64> {
    Ok(singular_values(m)?.first().copied().unwrap_or(0.0))
}

fn rank_from_values(values: &[f64], rank_tol: f64) -> usize {
    let smax = values.first().copied().unwrap_or(0.0);
    if smax == 0.0 {
        return 0;
    }
    values.iter().filter(|&&s| s > rank_tol * smax).count()
}

/// Number of singular values above `rank_tol · σ_max`.
pub fn numerical_rank(m: &CMatrix, rank_tol: f64) -> Result<usize> {
    Ok(rank_from_values(&singular_values(m)?, rank_tol).min(m.nrows()))
}

/// Orthonormal basis (as columns) of the numerical kernel of `m`, with
/// singular values at most `rank_tol · σ_max` treated as zero.
pub fn kernel_basis(m: &CMatrix, rank_tol: f64) -> Result<CMatrix> {
    debug_assert!(rank_tol > 0.0);
    let (values, v) = padded_svd(m)?;
    let rank = rank_from_values(&values, rank_tol).min(m.nrows());
    Ok(v.columns(rank, values.len() - rank).clone_owned())
}

/// Kernel with an absolute singular value threshold, for matrices whose
/// natural scale is known to the caller (e.g. a pencil evaluated at a root).
pub fn kernel_basis_abs(m: &CMatrix, threshold: f64) -> Result<CMatrix> {
    let (values, v) = padded_svd(m)?;
    let rank = values.iter().filter(|&&s| s > threshold).count().min(m.nrows());
    Ok(v.columns(rank, values.len() - rank).clone_owned())
}

/// Eigenvalues of a general complex square matrix via the Schur form.
pub fn general_eigenvalues(m: &CMatrix) -> Result<Vec<Complex64>> {
    let n = m.nrows();
    if n == 0 {
        return Ok(Vec::new());
    }
    let schur = Schur::try_new(m.clone(), f64::EPSILON, SWEEPS_PER_DIM * n * 10)
        .ok_or_else(|| Error::NumericalFailure("Schur iteration did not converge".into()))?;
    let (_, t) = schur.unpack();
    Ok((0..n).map(|i| t[(i, i)]).collect())
}

pub fn inverse(m: &CMatrix) -> Result<CMatrix> {
    m.clone()
        .lu()
        .try_inverse()
        .ok_or_else(|| Error::NumericalFailure("matrix is singular".into()))
}

pub fn determinant(m: &CMatrix) -> Complex64 {
    if m.nrows() == 0 {
        return c64(1.0, 0.0);
    }
    m.clone().lu().determinant()
}
