use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::SelfAdjointPencil;
use crate::error::{Error, Result};
use crate::numerics::{c64, determinant, general_eigenvalues, inverse, CMatrix};

/// Default clustering tolerance for indicial roots, absolute for `|σ| ≤ 1`
/// and relative to `|σ|` beyond.
pub const DEFAULT_ROOT_TOL: f64 = 1e-8;

const STRIP_HALF_WIDTH: f64 = 0.5;
const STRIP_SAFETY: f64 = 0.9;

/// A point of the boundary spectrum with its algebraic multiplicity.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IndicialRoot {
    pub sigma0: Complex64,
    pub alg_mult: usize,
    pub is_real: bool,
    pub in_strip: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RootMethod {
    /// Block companion linearization, needs an invertible leading coefficient.
    Linearization,
    /// Interpolation of `det p` at Chebyshev nodes plus scalar companion roots.
    DeterminantInterpolation,
}

/// Eigenvalues of the first block companion matrix of `a_mu^{-1} p(σ)`.
pub fn roots_by_linearization(p: &SelfAdjointPencil) -> Result<Vec<Complex64>> {
    if !p.leading_invertible()? {
        return Err(Error::InvalidLeadingCoefficient);
    }
    let (n, mu) = (p.dim(), p.mu());
    let lead_inv = inverse(p.leading().matrix())?;
    let mut companion = CMatrix::zeros(n * mu, n * mu);
    for b in 0..mu - 1 {
        companion.view_mut((b * n, (b + 1) * n), (n, n)).fill_with_identity();
    }
    for j in 0..mu {
        let block = -(&lead_inv * p.coeffs()[j].matrix());
        companion.view_mut(((mu - 1) * n, j * n), (n, n)).copy_from(&block);
    }
    general_eigenvalues(&companion)
}

/// Monomial coefficients (ascending) of `det p(σ)`, obtained by
/// interpolation at `nμ + 1` Chebyshev nodes of `[-1, 1]`.
pub(crate) fn determinant_coefficients(p: &SelfAdjointPencil) -> Result<Vec<Complex64>> {
    let deg = p.dim() * p.mu();
    let m = deg + 1;
    let nodes: Vec<f64> = (0..m)
        .map(|k| ((2 * k + 1) as f64 * std::f64::consts::PI / (2 * m) as f64).cos())
        .collect();
    let vandermonde = CMatrix::from_fn(m, m, |r, c| c64(nodes[r].powi(c as i32), 0.0));
    let values = nalgebra::DVector::from_iterator(m, nodes.iter().map(|&x| determinant(&p.evaluate(c64(x, 0.0)))));
    let coeffs = vandermonde
        .lu()
        .solve(&values)
        .ok_or_else(|| Error::NumericalFailure("singular interpolation system".into()))?;
    Ok(coeffs.iter().copied().collect())
}

/// Roots of `det p(σ)` from its interpolated coefficients; leading
/// coefficients below `1e-10` of the largest are treated as zero.
pub fn roots_by_determinant_interpolation(p: &SelfAdjointPencil) -> Result<Vec<Complex64>> {
    let mut coeffs = determinant_coefficients(p)?;
    let cmax = coeffs.iter().fold(0.0f64, |acc, c| acc.max(c.norm()));
    if cmax == 0.0 {
        return Err(Error::DegeneratePencil);
    }
    while coeffs.last().is_some_and(|c| c.norm() <= 1e-10 * cmax) {
        coeffs.pop();
    }
    let deg = coeffs.len() - 1;
    if deg == 0 {
        return Ok(Vec::new());
    }
    let lead = coeffs[deg];
    let mut companion = CMatrix::zeros(deg, deg);
    for i in 0..deg - 1 {
        companion[(i, i + 1)] = c64(1.0, 0.0);
    }
    for j in 0..deg {
        companion[(deg - 1, j)] = -coeffs[j] / lead;
    }
    general_eigenvalues(&companion)
}

fn scaled_tol(root_tol: f64, z: Complex64) -> f64 {
    root_tol * z.norm().max(1.0)
}

/// Single-linkage clustering of raw roots; multiplicity is cluster size.
pub fn cluster_roots(raw: &[Complex64], root_tol: f64) -> Vec<IndicialRoot> {
    let n = raw.len();
    let mut label: Vec<usize> = (0..n).collect();
    fn find(label: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while label[r] != r {
            r = label[r];
        }
        label[i] = r;
        r
    }
    for i in 0..n {
        for j in i + 1..n {
            if (raw[i] - raw[j]).norm() <= scaled_tol(root_tol, raw[i]).max(scaled_tol(root_tol, raw[j])) {
                let (a, b) = (find(&mut label, i), find(&mut label, j));
                label[a.max(b)] = a.min(b);
            }
        }
    }
    let mut groups: Vec<(usize, Vec<Complex64>)> = Vec::new();
    for (i, &z) in raw.iter().enumerate() {
        let r = find(&mut label, i);
        match groups.iter_mut().find(|(g, _)| *g == r) {
            Some((_, members)) => members.push(z),
            None => groups.push((r, vec![z])),
        }
    }
    let mut roots: Vec<IndicialRoot> = groups
        .into_iter()
        .map(|(_, members)| {
            let mut sigma0 = members.iter().sum::<Complex64>() / members.len() as f64;
            let is_real = sigma0.im.abs() <= scaled_tol(root_tol, sigma0);
            if is_real {
                sigma0.im = 0.0;
            }
            IndicialRoot {
                sigma0,
                alg_mult: members.len(),
                is_real,
                in_strip: sigma0.im.abs() <= STRIP_HALF_WIDTH + root_tol,
            }
        })
        .collect();
    roots.sort_by(|a, b| a.sigma0.re.total_cmp(&b.sigma0.re).then(a.sigma0.im.total_cmp(&b.sigma0.im)));
    roots
}

/// The boundary spectrum of `p` with multiplicities.
///
/// Uses the companion linearization when `a_mu` is invertible and falls
/// back to determinant interpolation otherwise.
pub fn indicial_roots(p: &SelfAdjointPencil, root_tol: f64) -> Result<Vec<IndicialRoot>> {
    let method = if p.leading_invertible()? { RootMethod::Linearization } else { RootMethod::DeterminantInterpolation };
    indicial_roots_with(p, root_tol, method)
}

pub fn indicial_roots_with(p: &SelfAdjointPencil, root_tol: f64, method: RootMethod) -> Result<Vec<IndicialRoot>> {
    let raw = match method {
        RootMethod::Linearization => roots_by_linearization(p)?,
        RootMethod::DeterminantInterpolation => roots_by_determinant_interpolation(p)?,
    };
    Ok(cluster_roots(&raw, root_tol))
}

/// Chooses `t ≤ 1` so that `p(t·)` has no roots with `0 < |Im σ| ≤ ½`.
pub fn normalize_strip(p: &SelfAdjointPencil, root_tol: f64) -> Result<(f64, SelfAdjointPencil)> {
    let roots = indicial_roots(p, root_tol)?;
    let min_im = roots
        .iter()
        .filter(|r| !r.is_real)
        .map(|r| r.sigma0.im.abs())
        .fold(f64::INFINITY, f64::min);
    let t = if min_im.is_finite() { (STRIP_SAFETY * 2.0 * min_im).min(1.0) } else { 1.0 };
    Ok((t, p.scale(t)?))
}
