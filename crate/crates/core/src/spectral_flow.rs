//! Spectral flow of `σ ↦ p(σ)` along the real axis.
//!
//! Three independent routes are provided: the endpoint signature count, an
//! adaptive partition count with per-crossing data, and the sum of
//! crossing-form signatures at the real indicial roots. Eigenvalues moving
//! from negative to positive as σ increases count `+1`.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{c64, hermitian_eigen, kernel_basis_abs, signature_of_values, HermitianMatrix, DEFAULT_ZERO_TOL};
use crate::pencil::{indicial_roots, IndicialRoot, SelfAdjointPencil, DEFAULT_ROOT_TOL};

const ENDPOINT_MARGIN_FACTOR: f64 = 10.0;
const MAX_WINDOW_DOUBLINGS: usize = 10;
const SUBDIVISION_FLOOR: f64 = 1e-6;
const CROSSING_RANK_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SfMethod {
    Endpoint,
    Partition,
    CrossingForm,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Crossing {
    pub sigma_c: f64,
    pub kernel_dim: usize,
    pub crossing_signature: i64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralFlowReport {
    pub value: i64,
    pub interval: (f64, f64),
    /// Smallest `|eigenvalue|` of `p` at the two window endpoints.
    pub endpoint_margins: (f64, f64),
    pub crossings: Vec<Crossing>,
    pub method: SfMethod,
}

/// Tolerances shared by the spectral flow routines.
#[derive(Clone, Copy, Debug)]
pub struct SfTolerances {
    pub root_tol: f64,
    /// Relative to the largest eigenvalue modulus at each evaluation point.
    pub zero_tol: f64,
    /// Relative spectral gap required at partition points.
    pub gap_tol: f64,
}

impl Default for SfTolerances {
    fn default() -> Self {
        Self { root_tol: DEFAULT_ROOT_TOL, zero_tol: DEFAULT_ZERO_TOL, gap_tol: 1e-8 }
    }
}

struct Inertia {
    n_minus: usize,
    min_abs: f64,
    max_abs: f64,
}

fn inertia(p: &SelfAdjointPencil, sigma: f64) -> Result<Inertia> {
    let eig = hermitian_eigen(&p.evaluate_real(sigma))?;
    Ok(Inertia {
        n_minus: eig.values.iter().filter(|&&v| v < 0.0).count(),
        min_abs: eig.min_abs_value(),
        max_abs: eig.max_abs_value(),
    })
}

fn has_margin(i: &Inertia, zero_tol: f64) -> bool {
    i.min_abs > ENDPOINT_MARGIN_FACTOR * zero_tol * i.max_abs.max(f64::MIN_POSITIVE)
}

/// Half-width `T` of a window `[-T, T]` that contains every crossing.
pub fn choose_window(p: &SelfAdjointPencil, tol: &SfTolerances) -> Result<f64> {
    let roots = indicial_roots(p, tol.root_tol)?;
    let reach = roots.iter().map(|r| r.sigma0.re.abs() + r.sigma0.im.abs()).fold(0.0, f64::max);
    let mut t = 1.0 + 2.0 * reach;
    for _ in 0..=MAX_WINDOW_DOUBLINGS {
        if has_margin(&inertia(p, t)?, tol.zero_tol) && has_margin(&inertia(p, -t)?, tol.zero_tol) {
            return Ok(t);
        }
        t *= 2.0;
    }
    Err(Error::WindowError(t))
}

/// Spectral flow over `[a, b]` as `n₋(p(a)) − n₋(p(b))`.
pub fn sf_endpoint_on(p: &SelfAdjointPencil, a: f64, b: f64, zero_tol: f64) -> Result<i64> {
    let (left, right) = (inertia(p, a)?, inertia(p, b)?);
    if !has_margin(&left, zero_tol) {
        return Err(Error::WindowError(a));
    }
    if !has_margin(&right, zero_tol) {
        return Err(Error::WindowError(b));
    }
    Ok(left.n_minus as i64 - right.n_minus as i64)
}

/// `½(sig p(T) − sig p(−T))`.
pub fn sf_endpoint(p: &SelfAdjointPencil, t: f64, zero_tol: f64) -> Result<i64> {
    sf_endpoint_on(p, -t, t, zero_tol)
}

fn real_roots_in(p: &SelfAdjointPencil, t: f64, root_tol: f64) -> Result<Vec<IndicialRoot>> {
    Ok(indicial_roots(p, root_tol)?.into_iter().filter(|r| r.is_real && r.sigma0.re.abs() < t).collect())
}

/// Finds a point in `(lo, hi)` near `target` where `p` has a relative gap.
fn separated_point(p: &SelfAdjointPencil, target: f64, lo: f64, hi: f64, gap_tol: f64) -> Result<Option<(f64, Inertia)>> {
    let mut step = 0.25 * (hi - lo);
    while step >= SUBDIVISION_FLOOR {
        for s in [target, target - step, target + step] {
            if s <= lo || s >= hi {
                continue;
            }
            let i = inertia(p, s)?;
            if i.min_abs >= gap_tol * i.max_abs.max(f64::MIN_POSITIVE) {
                return Ok(Some((s, i)));
            }
        }
        step *= 0.5;
    }
    Ok(None)
}

/// Partition count seeded by midpoints between consecutive real roots.
pub fn sf_partition(p: &SelfAdjointPencil, t: f64, tol: &SfTolerances) -> Result<SpectralFlowReport> {
    let left = inertia(p, -t)?;
    let right = inertia(p, t)?;
    if !has_margin(&left, tol.zero_tol) || !has_margin(&right, tol.zero_tol) {
        return Err(Error::WindowError(t));
    }
    let roots = real_roots_in(p, t, tol.root_tol)?;
    let mut points = vec![(-t, left)];
    for pair in roots.windows(2) {
        let (a, b) = (pair[0].sigma0.re, pair[1].sigma0.re);
        match separated_point(p, 0.5 * (a + b), a, b, tol.gap_tol)? {
            Some(pt) => points.push(pt),
            None => return Err(Error::DegenerateCrossing(0.5 * (a + b))),
        }
    }
    points.push((t, right));

    let mut crossings = Vec::with_capacity(roots.len());
    for (root, w) in roots.iter().zip(points.windows(2)) {
        let sigma_c = root.sigma0.re;
        let kernel_dim = crossing_kernel(p, sigma_c)?.ncols();
        crossings.push(Crossing {
            sigma_c,
            kernel_dim,
            crossing_signature: w[0].1.n_minus as i64 - w[1].1.n_minus as i64,
        });
    }
    let value = points[0].1.n_minus as i64 - points[points.len() - 1].1.n_minus as i64;
    Ok(SpectralFlowReport {
        value,
        interval: (-t, t),
        endpoint_margins: (points[0].1.min_abs, points[points.len() - 1].1.min_abs),
        crossings,
        method: SfMethod::Partition,
    })
}

fn crossing_kernel(p: &SelfAdjointPencil, sigma_c: f64) -> Result<crate::numerics::CMatrix> {
    let threshold = CROSSING_RANK_TOL * p.magnitude_at(c64(sigma_c, 0.0)).max(f64::MIN_POSITIVE);
    kernel_basis_abs(p.evaluate_real(sigma_c).matrix(), threshold)
}

/// Crossing-form signature at a real root, or `DegenerateCrossing` when the
/// compressed derivative is singular or the kernel is too small.
pub fn crossing_form(p: &SelfAdjointPencil, root: &IndicialRoot, zero_tol: f64) -> Result<Crossing> {
    let sigma_c = root.sigma0.re;
    let kernel = crossing_kernel(p, sigma_c)?;
    if kernel.ncols() == 0 || kernel.ncols() != root.alg_mult {
        return Err(Error::DegenerateCrossing(sigma_c));
    }
    let derivative = p.derivative(1, c64(sigma_c, 0.0));
    let q = HermitianMatrix::new(kernel.adjoint() * &derivative * &kernel)?;
    let eig = hermitian_eigen(&q)?;
    let scale = crate::numerics::spectral_norm(&derivative)?;
    let sig = signature_of_values(&eig.values, zero_tol * scale.max(f64::MIN_POSITIVE));
    if sig.n_zero > 0 {
        return Err(Error::DegenerateCrossing(sigma_c));
    }
    Ok(Crossing { sigma_c, kernel_dim: kernel.ncols(), crossing_signature: sig.signature() })
}

/// Sum of crossing-form signatures over the real roots in `(-T, T)`.
pub fn sf_crossing_form(p: &SelfAdjointPencil, t: f64, tol: &SfTolerances) -> Result<SpectralFlowReport> {
    let left = inertia(p, -t)?;
    let right = inertia(p, t)?;
    let crossings = real_roots_in(p, t, tol.root_tol)?
        .iter()
        .map(|r| crossing_form(p, r, tol.zero_tol))
        .collect::<Result<Vec<_>>>()?;
    Ok(SpectralFlowReport {
        value: crossings.iter().map(|c| c.crossing_signature).sum(),
        interval: (-t, t),
        endpoint_margins: (left.min_abs, right.min_abs),
        crossings,
        method: SfMethod::CrossingForm,
    })
}

/// All three methods side by side.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SfComparison {
    pub window: f64,
    pub endpoint: i64,
    pub partition: std::result::Result<SpectralFlowReport, String>,
    pub crossing_form: std::result::Result<SpectralFlowReport, String>,
    /// Every method that succeeded agrees with the endpoint count.
    pub agree: bool,
}

pub fn compare_methods(p: &SelfAdjointPencil, tol: &SfTolerances) -> Result<SfComparison> {
    let window = choose_window(p, tol)?;
    let endpoint = sf_endpoint(p, window, tol.zero_tol)?;
    let partition = sf_partition(p, window, tol).map_err(|e| e.to_string());
    let crossing_form = sf_crossing_form(p, window, tol).map_err(|e| e.to_string());
    let agree = [&partition, &crossing_form].iter().all(|r| r.as_ref().map_or(true, |rep| rep.value == endpoint));
    Ok(SfComparison { window, endpoint, partition, crossing_form, agree })
}

/// Spectral flow with per-crossing data: crossing forms where regular,
/// otherwise the partition count.
pub fn spectral_flow(p: &SelfAdjointPencil, tol: &SfTolerances) -> Result<SpectralFlowReport> {
    let window = choose_window(p, tol)?;
    match sf_crossing_form(p, window, tol) {
        Err(Error::DegenerateCrossing(_)) => sf_partition(p, window, tol),
        other => other,
    }
}

/// Ascending eigenvalues of `p(σ)` at `samples` equally spaced σ in `[-T, T]`.
pub fn eigenvalue_curves(p: &SelfAdjointPencil, t: f64, samples: usize) -> Result<Vec<(f64, Vec<f64>)>> {
    if samples < 2 {
        return Err(Error::InvalidInput("at least two samples are needed".into()));
    }
    (0..samples)
        .map(|k| {
            let sigma = -t + 2.0 * t * k as f64 / (samples - 1) as f64;
            Ok((sigma, hermitian_eigen(&p.evaluate_real(sigma))?.values))
        })
        .collect()
}

/// Writes `sigma,lambda_1,...,lambda_n` rows.
pub fn write_curves_csv<W: Write>(out: &mut W, curves: &[(f64, Vec<f64>)]) -> std::io::Result<()> {
    let n = curves.first().map_or(0, |(_, v)| v.len());
    let header: Vec<String> =
        std::iter::once("sigma".to_string()).chain((1..=n).map(|i| format!("lambda_{i}"))).collect();
    writeln!(out, "{}", header.join(","))?;
    for (sigma, values) in curves {
        let row: Vec<String> = std::iter::once(*sigma).chain(values.iter().copied()).map(|x| x.to_string()).collect();
        writeln!(out, "{}", row.join(","))?;
    }
    Ok(())
}
