//! First-order model operator `A = a₁D_x + x⁻¹a₀` on `(0, 1]` with a
//! boundary condition at `x = 1`, its deficiency indices, and the
//! null-cobordism check.
//!
//! Solutions of `(A − λ)u = 0` near the tip are Frobenius series
//! `x^ρ Σ c_m x^m` with `ρ = iσ` for the indicial roots `σ` of
//! `a₁σ + a₀`. They are continued to `x = 1` by DOPRI5, where the adjoint
//! boundary condition `u(1) ∈ (a₁L)^⊥` is imposed.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::adjoint_pairing::{verify_signature_equals_sf, GramOptions, Verdict};
use crate::error::{Error, Result};
use crate::numerics::{
    c64, dopri5, general_eigenvalues, hermitian_eigen, inverse, kernel_basis_abs, max_abs, singular_values,
    spectral_norm, CMatrix, CVector, HermitianMatrix,
};
use crate::pencil::SelfAdjointPencil;
use crate::spectral_flow::{spectral_flow, SfTolerances};

pub const DEFAULT_ODE_TOL: f64 = 1e-10;
pub const MATCH_POINT: f64 = 0.1;
/// Second starting point used to measure shooting consistency.
pub const CHECK_POINT: f64 = 0.05;
const EXPONENT_TOL: f64 = 1e-6;
const CONSTRAINT_RANK_TOL: f64 = 1e-6;
const SUBSPACE_TOL: f64 = 1e-8;
const MAX_SERIES_TERMS: usize = 400;

/// A `μ = 1` pencil `a₁σ + a₀` together with a boundary subspace `L` at
/// `x = 1`, stored as orthonormal columns.
#[derive(Clone, Debug)]
pub struct ConeRealization {
    pencil: SelfAdjointPencil,
    boundary: CMatrix,
    lagrangian: bool,
}

impl ConeRealization {
    pub fn new(pencil: SelfAdjointPencil, boundary: CMatrix) -> Result<Self> {
        if pencil.mu() != 1 {
            return Err(Error::InvalidInput(format!("cone realizations need order 1, got {}", pencil.mu())));
        }
        if !pencil.leading_invertible()? {
            return Err(Error::InvalidLeadingCoefficient);
        }
        let n = pencil.dim();
        if boundary.nrows() != n {
            return Err(Error::DimensionMismatch(format!(
                "boundary has {} rows, pencil has dimension {n}",
                boundary.nrows()
            )));
        }
        let k = boundary.ncols();
        let a1 = pencil.leading().matrix();
        if k > 0 {
            let gram = boundary.adjoint() * &boundary;
            if max_abs(&(gram - CMatrix::identity(k, k))) > SUBSPACE_TOL {
                return Err(Error::ConstructionError("boundary columns are not orthonormal".into()));
            }
            let form = boundary.adjoint() * a1 * &boundary;
            if max_abs(&form) > SUBSPACE_TOL * spectral_norm(a1)? {
                return Err(Error::ConstructionError("boundary subspace is not isotropic for a₁".into()));
            }
        }
        Ok(Self { pencil, boundary, lagrangian: 2 * k == n })
    }

    /// Realization with the canonical Lagrangian boundary condition.
    pub fn with_lagrangian(pencil: SelfAdjointPencil) -> Result<Self> {
        let boundary = lagrangian_boundary(pencil.leading())?;
        Self::new(pencil, boundary)
    }

    pub fn pencil(&self) -> &SelfAdjointPencil {
        &self.pencil
    }

    pub fn boundary(&self) -> &CMatrix {
        &self.boundary
    }

    pub fn is_lagrangian(&self) -> bool {
        self.lagrangian
    }

    pub fn a1(&self) -> &CMatrix {
        self.pencil.leading().matrix()
    }

    pub fn a0(&self) -> &CMatrix {
        self.pencil.coeffs()[0].matrix()
    }

    /// Image under complex conjugation of sections, `u ↦ ū`: the operator
    /// becomes `(−ā₁)D_x + x⁻¹ā₀` and `L` becomes `L̄`. This swaps `n₊`, `n₋`.
    pub fn conjugate(&self) -> Result<Self> {
        let a0 = self.a0().map(|z| z.conj());
        let a1 = self.a1().map(|z| -z.conj());
        let pencil = SelfAdjointPencil::from_matrices(vec![a0, a1])?;
        Self::new(pencil, self.boundary.map(|z| z.conj()))
    }

    /// Same boundary subspace, pencil `σ ↦ p(tσ)`.
    pub fn scale(&self, t: f64) -> Result<Self> {
        Self::new(self.pencil.scale(t)?, self.boundary.clone())
    }
}

fn fix_phase(v: &mut CVector) {
    let pivot = v.iter().copied().max_by(|a, b| a.norm().total_cmp(&b.norm())).unwrap_or(c64(1.0, 0.0));
    if pivot.norm() > 0.0 {
        let phase = pivot.conj() / pivot.norm();
        *v *= phase;
    }
}

/// Maximal isotropic subspace of `⟨a₁·,·⟩`, built by pairing the `i`-th
/// positive and `i`-th negative eigenvectors (ascending order) as
/// `v⁺/√λ⁺ + v⁻/√|λ⁻|`, normalized.
pub fn lagrangian_boundary(a1: &HermitianMatrix) -> Result<CMatrix> {
    let eig = hermitian_eigen(a1)?;
    let scale = eig.max_abs_value();
    if scale == 0.0 || eig.min_abs_value() <= 1e-10 * scale {
        return Err(Error::InvalidLeadingCoefficient);
    }
    let n = a1.dim();
    let neg: Vec<usize> = (0..n).filter(|&i| eig.values[i] < 0.0).collect();
    let pos: Vec<usize> = (0..n).filter(|&i| eig.values[i] > 0.0).collect();
    if pos.len() != neg.len() {
        return Err(Error::LagrangianObstruction { signature: pos.len() as i64 - neg.len() as i64 });
    }
    let mut l = CMatrix::zeros(n, pos.len());
    for (col, (&ip, &im)) in pos.iter().zip(neg.iter()).enumerate() {
        let mut vp = eig.vectors.column(ip).clone_owned();
        let mut vm = eig.vectors.column(im).clone_owned();
        fix_phase(&mut vp);
        fix_phase(&mut vm);
        let w = vp.unscale(eig.values[ip].sqrt()) + vm.unscale((-eig.values[im]).sqrt());
        l.set_column(col, &w.normalize());
    }
    Ok(l)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DeficiencyReport {
    pub n_plus: usize,
    pub n_minus: usize,
    /// Frobenius exponents `ρ = iσ_r` of the admissible solutions.
    pub frobenius_exponents: Vec<Complex64>,
    /// Relative mismatch at `x = 1` between shooting from the two starting
    /// points, first for `λ = i` then for `λ = −i`.
    pub shooting_residuals: Vec<f64>,
}

struct Exponent {
    rho: Complex64,
    vector: CVector,
}

/// Admissible exponents (`Re ρ > −½`) with eigenvectors of `B₀ = −ia₁⁻¹a₀`.
fn admissible_exponents(b0: &CMatrix) -> Result<Vec<Exponent>> {
    let n = b0.nrows();
    let mut values = general_eigenvalues(b0)?;
    values.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    let mut clusters: Vec<(Complex64, usize)> = Vec::new();
    for v in values {
        match clusters.iter_mut().find(|(c, _)| (*c - v).norm() <= EXPONENT_TOL) {
            Some((c, m)) => {
                *c = (*c * (*m as f64) + v) / (*m as f64 + 1.0);
                *m += 1;
            }
            None => clusters.push((v, 1)),
        }
    }
    let norm = spectral_norm(b0)?;
    let mut out = Vec::new();
    for &(rho, mult) in &clusters {
        if (rho.re + 0.5).abs() <= EXPONENT_TOL {
            return Err(Error::BoundaryRoot(c64(0.0, -1.0) * rho));
        }
        if rho.re < -0.5 {
            continue;
        }
        for &(other, _) in &clusters {
            let gap = other - rho;
            let m = gap.re.round();
            if m >= 1.0 && (gap - c64(m, 0.0)).norm() <= EXPONENT_TOL {
                return Err(Error::ResonantRoots(format!("exponents {rho} and {other} differ by an integer")));
            }
        }
        let shifted = b0 - CMatrix::identity(n, n) * rho;
        let kernel = kernel_basis_abs(&shifted, EXPONENT_TOL * (1.0 + norm))?;
        if kernel.ncols() != mult {
            return Err(Error::ResonantRoots(format!("exponent {rho} is not semisimple")));
        }
        out.extend(kernel.column_iter().map(|col| Exponent { rho, vector: col.clone_owned() }));
    }
    Ok(out)
}

/// Frobenius coefficients `c_0 = e`, `((ρ+m) − B₀)c_m = B₁c_{m−1}`, summed at
/// `x`; terms are added until they drop below `tol` relative to `c_0`.
fn frobenius_value(b0: &CMatrix, b1: &CMatrix, exp: &Exponent, x: f64, tol: f64) -> Result<CVector> {
    let n = b0.nrows();
    let mut term = exp.vector.clone();
    let mut sum = term.clone();
    let mut small = 0;
    for m in 1..=MAX_SERIES_TERMS {
        let shifted = CMatrix::identity(n, n) * (exp.rho + c64(m as f64, 0.0)) - b0;
        let rhs = b1 * &term * c64(x, 0.0);
        term = shifted
            .lu()
            .solve(&rhs)
            .ok_or_else(|| Error::ResonantRoots(format!("recursion singular at order {m}")))?;
        sum += &term;
        if term.norm() <= 1e-2 * tol * exp.vector.norm() {
            small += 1;
            if small >= 2 {
                return Ok(sum * (exp.rho * x.ln()).exp());
            }
        } else {
            small = 0;
        }
    }
    Err(Error::NumericalFailure(format!("Frobenius series did not converge at x = {x}")))
}

fn shoot(c: &ConeRealization, lambda: Complex64, ode_tol: f64) -> Result<(usize, Vec<Complex64>, Vec<f64>)> {
    let a1_inv = inverse(c.a1())?;
    let b0 = &a1_inv * c.a0() * c64(0.0, -1.0);
    let b1 = &a1_inv * (c64(0.0, 1.0) * lambda);
    let exps = admissible_exponents(&b0)?;
    let rhs = |x: f64, u: &CVector| (&b1 + &b0 * c64(1.0 / x, 0.0)) * u;
    let n = c.pencil.dim();
    let mut ends = CMatrix::zeros(n, exps.len());
    let mut residuals = Vec::with_capacity(exps.len());
    for (col, e) in exps.iter().enumerate() {
        let start = frobenius_value(&b0, &b1, e, MATCH_POINT, ode_tol)?;
        let scale = start.norm();
        let end = dopri5(rhs, MATCH_POINT, 1.0, &start.unscale(scale), ode_tol)?.y;
        let check_start = frobenius_value(&b0, &b1, e, CHECK_POINT, ode_tol)?.unscale(scale);
        let check_end = dopri5(rhs, CHECK_POINT, 1.0, &check_start, ode_tol)?.y;
        residuals.push((&end - &check_end).norm() / end.norm());
        ends.set_column(col, &end.normalize());
    }
    let k = exps.len();
    let count = if c.boundary.ncols() == 0 || k == 0 {
        k
    } else {
        let constraint = c.boundary.adjoint() * c.a1() * &ends;
        let threshold = CONSTRAINT_RANK_TOL * spectral_norm(c.a1())?;
        let rank = singular_values(&constraint)?.iter().filter(|&&s| s > threshold).count();
        k - rank.min(k)
    };
    Ok((count, exps.iter().map(|e| e.rho).collect(), residuals))
}

/// `n± = dim ker(A_max ∓ i)` for the realization with maximal domain at the
/// tip and boundary condition `L` at `x = 1`.
pub fn deficiency_indices(c: &ConeRealization, ode_tol: f64) -> Result<DeficiencyReport> {
    let (n_plus, exps, mut residuals) = shoot(c, c64(0.0, 1.0), ode_tol)?;
    let (n_minus, _, minus_residuals) = shoot(c, c64(0.0, -1.0), ode_tol)?;
    residuals.extend(minus_residuals);
    Ok(DeficiencyReport { n_plus, n_minus, frobenius_exponents: exps, shooting_residuals: residuals })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConeVerdict {
    pub n_plus: Option<usize>,
    pub n_minus: Option<usize>,
    pub sig: Option<i64>,
    pub sf: Option<i64>,
    pub pass: bool,
    pub verdict: Verdict,
    pub cause: Option<String>,
}

impl ConeVerdict {
    fn inconclusive(cause: impl ToString) -> Self {
        Self {
            n_plus: None,
            n_minus: None,
            sig: None,
            sf: None,
            pass: false,
            verdict: Verdict::Inconclusive,
            cause: Some(cause.to_string()),
        }
    }
}

/// Checks `n₊ = n₋`, `sig(gram) = 0` and `SF = 0` for a Lagrangian realization.
pub fn verify_null_cobordism(c: &ConeRealization) -> ConeVerdict {
    verify_null_cobordism_with(c, DEFAULT_ODE_TOL, &GramOptions::default(), &SfTolerances::default())
}

pub fn verify_null_cobordism_with(
    c: &ConeRealization,
    ode_tol: f64,
    gram_opts: &GramOptions,
    sf_tol: &SfTolerances,
) -> ConeVerdict {
    if !c.lagrangian {
        return ConeVerdict::inconclusive("boundary condition is not Lagrangian");
    }
    let report = match deficiency_indices(c, ode_tol) {
        Ok(r) => r,
        Err(e) => return ConeVerdict::inconclusive(e),
    };
    let pairing = verify_signature_equals_sf(&c.pencil, gram_opts, sf_tol);
    if pairing.verdict == Verdict::Inconclusive {
        return ConeVerdict::inconclusive(pairing.cause.unwrap_or_default());
    }
    let sf = match spectral_flow(&c.pencil, sf_tol) {
        Ok(r) => r.value,
        Err(e) => return ConeVerdict::inconclusive(e),
    };
    let pass = report.n_plus == report.n_minus && pairing.sig == Some(0) && sf == 0;
    ConeVerdict {
        n_plus: Some(report.n_plus),
        n_minus: Some(report.n_minus),
        sig: pairing.sig,
        sf: Some(sf),
        pass,
        verdict: if pass { Verdict::Pass } else { Verdict::Fail },
        cause: None,
    }
}

/// Entry point for a bare pencil: builds the canonical Lagrangian boundary
/// condition, or reports the obstruction.
pub fn verify_null_cobordism_pencil(p: &SelfAdjointPencil) -> ConeVerdict {
    match ConeRealization::with_lagrangian(p.clone()) {
        Ok(c) => verify_null_cobordism(&c),
        Err(e) => ConeVerdict::inconclusive(e),
    }
}
