//! The adjoint pairing `[u, v] = (1/i)(⟨Au, v⟩ − ⟨u, Av⟩)` on singular
//! functions, its Gram matrix, and the check that its signature equals the
//! spectral flow of the indicial family.
//!
//! For members of the maximal domain the operator image has no plateau
//! part, so both inner products reduce to integrals over the cutoff
//! bridge. In the variable `t = log x` the integrand is
//! `e^{i(σ_u − σ̄_v)t} [(ω φ_v)† R_u − R_v† (ω φ_u)]`, where `R` is the
//! remainder bracket produced by derivatives of `ω`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{
    adaptive_quadrature, c64, hermitian_eigen, max_abs, signature_of_values, CMatrix, HermitianMatrix,
    SignatureTriple,
};
use crate::pencil::{normalize_strip, SelfAdjointPencil, DEFAULT_ROOT_TOL};
use crate::singular_functions::{apply_indicial_operator, strip_decomposition_with, CutoffSpec, LogPowerElement};
use crate::spectral_flow::{spectral_flow, Crossing, SfTolerances};

pub const DEFAULT_QUAD_TOL: f64 = 1e-10;
/// Signature zero tolerance, relative to the Gram spectral radius.
pub const GRAM_ZERO_TOL: f64 = 1e-6;
const MEMBERSHIP_TOL: f64 = 1e-8;
const HERMITICITY_TOL: f64 = 1e-8;

fn check_member(p: &SelfAdjointPencil, u: &LogPowerElement) -> Result<crate::singular_functions::IndicialImage> {
    let image = apply_indicial_operator(p, u)?;
    let size = u.coeffs.iter().map(|e| e.norm()).fold(0.0, f64::max);
    let scale = p.magnitude_at(u.root) * size;
    let residual = image.singular_norm();
    if residual > MEMBERSHIP_TOL * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::NotInMaxDomain(residual));
    }
    Ok(image)
}

/// `[u, v]` by adaptive quadrature over the union of the cutoff bridges.
pub fn pair(p: &SelfAdjointPencil, u: &LogPowerElement, v: &LogPowerElement, tol: f64) -> Result<Complex64> {
    let image_u = check_member(p, u)?;
    let image_v = check_member(p, v)?;
    let lo = u.cutoff.plateau_end.min(v.cutoff.plateau_end).ln();
    let hi = u.cutoff.support_end.max(v.cutoff.support_end).ln();
    let rate = c64(0.0, 1.0) * (u.root - v.root.conj());
    let integrand = |t: f64| {
        let x = t.exp();
        let phase = (rate * t).exp();
        let cut_u = u.phi_derivative(0, t) * c64(u.cutoff.value(x), 0.0);
        let cut_v = v.phi_derivative(0, t) * c64(v.cutoff.value(x), 0.0);
        let forward = cut_v.dotc(&image_u.remainder_bracket(t));
        let backward = image_v.remainder_bracket(t).dotc(&cut_u);
        phase * (forward - backward)
    };
    let q = adaptive_quadrature(integrand, lo, hi, tol)?;
    Ok(q.value * c64(0.0, -1.0))
}

#[derive(Clone, Debug)]
pub struct GramForm {
    pub basis: Vec<LogPowerElement>,
    pub matrix: HermitianMatrix,
    /// `‖G − G†‖_max` before symmetrization.
    pub raw_asymmetry: f64,
    pub signature: SignatureTriple,
}

#[derive(Clone, Copy, Debug)]
pub struct GramOptions {
    pub root_tol: f64,
    pub quad_tol: f64,
    pub zero_tol: f64,
    pub cutoff: CutoffSpec,
}

impl Default for GramOptions {
    fn default() -> Self {
        Self { root_tol: DEFAULT_ROOT_TOL, quad_tol: DEFAULT_QUAD_TOL, zero_tol: GRAM_ZERO_TOL, cutoff: CutoffSpec::default() }
    }
}

/// Gram matrix `G_{ij} = [b_i, b_j]` of an explicit list of elements.
pub fn gram_of(p: &SelfAdjointPencil, basis: Vec<LogPowerElement>, opts: &GramOptions) -> Result<GramForm> {
    let n = basis.len();
    let mut raw = CMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            raw[(i, j)] = pair(p, &basis[i], &basis[j], opts.quad_tol)?;
        }
    }
    let raw_asymmetry = max_abs(&(&raw - raw.adjoint()));
    if raw_asymmetry > HERMITICITY_TOL * (1.0 + max_abs(&raw)) {
        return Err(Error::NumericalFailure(format!("Gram matrix not Hermitian (asymmetry {raw_asymmetry:e})")));
    }
    let matrix = if n == 0 { HermitianMatrix::zeros(0) } else { HermitianMatrix::new((&raw + raw.adjoint()).scale(0.5))? };
    let signature = if n == 0 {
        SignatureTriple { n_plus: 0, n_minus: 0, n_zero: 0 }
    } else {
        let eig = hermitian_eigen(&matrix)?;
        signature_of_values(&eig.values, opts.zero_tol * eig.max_abs_value().max(f64::MIN_POSITIVE))
    };
    Ok(GramForm { basis, matrix, raw_asymmetry, signature })
}

/// Gram form on the concatenated bases of all strip roots.
pub fn gram_with(p: &SelfAdjointPencil, opts: &GramOptions) -> Result<GramForm> {
    let basis = strip_decomposition_with(p, opts.root_tol, opts.cutoff)?
        .into_iter()
        .flat_map(|b| b.elements)
        .collect();
    gram_of(p, basis, opts)
}

pub fn gram(p: &SelfAdjointPencil) -> Result<GramForm> {
    gram_with(p, &GramOptions::default())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

/// Outcome of comparing the pairing signature against the spectral flow.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SignatureVerdict {
    pub sig: Option<i64>,
    pub sf: Option<i64>,
    pub pass: bool,
    pub verdict: Verdict,
    /// Scale factor applied by strip normalization.
    pub t: Option<f64>,
    /// Gram matrix entries as `[re, im]` pairs.
    pub gram: Vec<Vec<[f64; 2]>>,
    pub gram_signature: Option<SignatureTriple>,
    pub crossings: Vec<Crossing>,
    pub cause: Option<String>,
}

impl SignatureVerdict {
    pub(crate) fn inconclusive(cause: impl ToString) -> Self {
        Self {
            sig: None,
            sf: None,
            pass: false,
            verdict: Verdict::Inconclusive,
            t: None,
            gram: Vec::new(),
            gram_signature: None,
            crossings: Vec::new(),
            cause: Some(cause.to_string()),
        }
    }
}

pub fn gram_entries(m: &CMatrix) -> Vec<Vec<[f64; 2]>> {
    m.row_iter().map(|row| row.iter().map(|z| [z.re, z.im]).collect()).collect()
}

/// Normalizes the strip, then computes `sig(gram)` and the spectral flow
/// independently; passes iff they agree.
pub fn verify_signature_equals_sf(p: &SelfAdjointPencil, opts: &GramOptions, sf_tol: &SfTolerances) -> SignatureVerdict {
    let run = || -> Result<SignatureVerdict> {
        let (t, pt) = normalize_strip(p, opts.root_tol)?;
        let form = gram_with(&pt, opts)?;
        let flow = spectral_flow(&pt, sf_tol)?;
        let sig = form.signature.signature();
        let mut verdict = SignatureVerdict {
            sig: Some(sig),
            sf: Some(flow.value),
            pass: sig == flow.value,
            verdict: if sig == flow.value { Verdict::Pass } else { Verdict::Fail },
            t: Some(t),
            gram: gram_entries(form.matrix.matrix()),
            gram_signature: Some(form.signature),
            crossings: flow.crossings,
            cause: None,
        };
        if !form.signature.is_nondegenerate() {
            verdict.pass = false;
            verdict.verdict = Verdict::Inconclusive;
            verdict.cause = Some("Gram form is numerically degenerate".into());
        }
        Ok(verdict)
    };
    run().unwrap_or_else(SignatureVerdict::inconclusive)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::CVector;
    use crate::pencil::{dirac_block, DiracData};

    fn e(re: &[f64]) -> CVector {
        CVector::from_iterator(re.len(), re.iter().map(|&x| c64(x, 0.0)))
    }

    #[test]
    fn cutoff_pairs_to_one_for_identity_symbol() {
        let p = SelfAdjointPencil::scalar(&[0.0, 1.0]).unwrap();
        let u = LogPowerElement::new(c64(0.0, 0.0), vec![e(&[1.0])], CutoffSpec::default()).unwrap();
        let v = pair(&p, &u, &u, 1e-12).unwrap();
        assert!((v - c64(1.0, 0.0)).norm() < 1e-10, "{v}");
    }

    #[test]
    fn dirac_zero_pairing_is_t_times_grading() {
        for t in [0.25, 1.0] {
            let p = dirac_block(&DiracData::new(CMatrix::zeros(1, 1)).unwrap()).unwrap().scale(t).unwrap();
            let basis = vec![
                LogPowerElement::new(c64(0.0, 0.0), vec![e(&[1.0, 0.0])], CutoffSpec::default()).unwrap(),
                LogPowerElement::new(c64(0.0, 0.0), vec![e(&[0.0, 1.0])], CutoffSpec::default()).unwrap(),
            ];
            let g = gram_of(&p, basis, &GramOptions::default()).unwrap();
            let expect = crate::numerics::real_diagonal(&[t, -t]);
            assert!(max_abs(&(g.matrix.matrix() - expect)) < 1e-10);
            assert_eq!(g.signature.signature(), 0);
        }
    }

    #[test]
    fn gram_examples() {
        let g = gram(&SelfAdjointPencil::scalar(&[0.0, 1.0]).unwrap()).unwrap();
        assert_eq!(g.matrix.dim(), 1);
        assert!((g.matrix.matrix()[(0, 0)] - c64(1.0, 0.0)).norm() < 1e-10);
        assert_eq!((g.signature.n_plus, g.signature.n_minus, g.signature.n_zero), (1, 0, 0));

        let g = gram(&SelfAdjointPencil::scalar(&[0.0, 0.0, 1.0]).unwrap()).unwrap();
        assert_eq!(g.matrix.dim(), 2);
        assert_eq!(g.signature.signature(), 0);
        assert!(g.signature.is_nondegenerate());
    }

    #[test]
    fn non_member_is_rejected() {
        let p = SelfAdjointPencil::scalar(&[0.0, 1.0]).unwrap();
        let u = LogPowerElement::new(c64(0.0, 0.0), vec![e(&[0.0]), e(&[1.0])], CutoffSpec::default()).unwrap();
        assert!(matches!(pair(&p, &u, &u, 1e-10), Err(Error::NotInMaxDomain(_))));
    }

    #[test]
    fn distinct_real_roots_are_orthogonal() {
        // σ² − 1 has simple roots ±1 with crossing forms ∓2
        let p = SelfAdjointPencil::scalar(&[-1.0, 0.0, 1.0]).unwrap();
        let g = gram(&p).unwrap();
        let m = g.matrix.matrix();
        assert!(m[(0, 1)].norm() < 1e-9);
        assert!((m[(0, 0)] - c64(-2.0, 0.0)).norm() < 1e-9);
        assert!((m[(1, 1)] - c64(2.0, 0.0)).norm() < 1e-9);
    }

    #[test]
    fn verdict_examples() {
        let d = DiracData::new(CMatrix::from_row_slice(1, 2, &[c64(1.0, 0.0), c64(0.0, 0.0)])).unwrap();
        let v = verify_signature_equals_sf(&dirac_block(&d).unwrap(), &GramOptions::default(), &SfTolerances::default());
        assert_eq!((v.sig, v.sf, v.pass), (Some(1), Some(1), true));

        let v = verify_signature_equals_sf(
            &SelfAdjointPencil::scalar(&[-1.0, 0.0, 1.0]).unwrap(),
            &GramOptions::default(),
            &SfTolerances::default(),
        );
        assert_eq!((v.sig, v.sf, v.verdict), (Some(0), Some(0), Verdict::Pass));
    }
}
