//! Cutoff log-power sections `ω(x) Σ_j e_j log^j(x) x^{iσ₀}` and the spaces
//! they span at each indicial root.
//!
//! With `D_x = −i d/dx` and `t = log x`, the operator `xD_x` acts on
//! `x^{iσ₀} ψ(t)` as `σ₀ − i∂_t` on `ψ`. Hence
//! `A(x^{iσ₀} ψ) = x^{−1} x^{iσ₀} [p(σ₀ − i∂_t) ψ](t)` with
//! `p(σ₀ − i∂_t) = Σ_m p^{(m)}(σ₀)/m! · (−i∂_t)^m`.
//! An element belongs to the maximal domain iff the polynomial part
//! `p(σ₀ − i∂_t) φ` vanishes identically; everything else the operator
//! produces is supported where derivatives fall on the cutoff.

mod cutoff;
mod jet;

pub use cutoff::CutoffSpec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{c64, kernel_basis_abs, singular_values, CMatrix, CVector};
use crate::pencil::{indicial_roots, IndicialRoot, SelfAdjointPencil};

/// Relative rank tolerance for the annihilation system.
pub const BASIS_RANK_TOL: f64 = 1e-8;

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn falling(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64)
}

/// `(−i)^m`.
fn minus_i_pow(m: usize) -> Complex64 {
    [c64(1.0, 0.0), c64(0.0, -1.0), c64(-1.0, 0.0), c64(0.0, 1.0)][m % 4]
}

/// `x^{iσ}` for `x > 0`.
pub fn power(x: f64, sigma: Complex64) -> Complex64 {
    (c64(0.0, 1.0) * sigma * x.ln()).exp()
}

/// `ω(x) x^{iσ₀} Σ_j e_j log^j(x)`.
#[derive(Clone, Debug, PartialEq)]
pub struct LogPowerElement {
    pub root: Complex64,
    /// `e_0, …, e_k`.
    pub coeffs: Vec<CVector>,
    pub cutoff: CutoffSpec,
}

impl LogPowerElement {
    pub fn new(root: Complex64, coeffs: Vec<CVector>, cutoff: CutoffSpec) -> Result<Self> {
        let Some(first) = coeffs.first() else {
            return Err(Error::InvalidInput("log-power element needs at least e_0".into()));
        };
        if coeffs.iter().any(|e| e.len() != first.len()) {
            return Err(Error::DimensionMismatch("coefficient vectors differ in length".into()));
        }
        Ok(Self { root, coeffs, cutoff })
    }

    pub fn dim(&self) -> usize {
        self.coeffs[0].len()
    }

    pub fn log_degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn with_cutoff(&self, cutoff: CutoffSpec) -> Self {
        Self { cutoff, ..self.clone() }
    }

    /// `φ^{(d)}(t)` for `φ(t) = Σ e_j t^j`.
    pub fn phi_derivative(&self, d: usize, t: f64) -> CVector {
        let mut acc = CVector::zeros(self.dim());
        for (j, e) in self.coeffs.iter().enumerate().skip(d) {
            acc += e * c64(falling(j, d) * t.powi((j - d) as i32), 0.0);
        }
        acc
    }

    /// `u(x)`.
    pub fn value(&self, x: f64) -> CVector {
        self.phi_derivative(0, x.ln()) * (power(x, self.root) * self.cutoff.value(x))
    }

    /// Coefficients of `p(σ₀ − i∂_t) Σ e_j t^j`, by ascending power of `t`.
    pub fn annihilator_image(&self, p: &SelfAdjointPencil) -> Vec<CVector> {
        let taylor = taylor_coefficients(p, self.root);
        (0..self.coeffs.len())
            .map(|r| {
                let mut acc = CVector::zeros(self.dim());
                for (m, pm) in taylor.iter().enumerate() {
                    if let Some(e) = self.coeffs.get(r + m) {
                        acc += pm * e * (minus_i_pow(m) * falling(r + m, m));
                    }
                }
                acc
            })
            .collect()
    }
}

/// `p^{(m)}(σ₀)/m!` for `m = 0..=μ`.
fn taylor_coefficients(p: &SelfAdjointPencil, sigma0: Complex64) -> Vec<CMatrix> {
    let mut fact = 1.0;
    (0..=p.mu())
        .map(|m| {
            if m > 0 {
                fact *= m as f64;
            }
            p.derivative(m, sigma0) / c64(fact, 0.0)
        })
        .collect()
}

/// Image of a log-power element under `x^{−1} Σ a_j (xD_x)^j`.
#[derive(Clone, Debug)]
pub struct IndicialImage {
    /// Coefficients of the `x^{−1} x^{iσ₀} log^r(x)` terms on the plateau.
    pub singular_part: Vec<CVector>,
    element: LogPowerElement,
    taylor: Vec<CMatrix>,
}

impl IndicialImage {
    pub fn singular_norm(&self) -> f64 {
        self.singular_part.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Interval outside of which the remainder vanishes.
    pub fn remainder_support(&self) -> (f64, f64) {
        (self.element.cutoff.plateau_end, self.element.cutoff.support_end)
    }

    /// The remainder with the factor `x^{−1} x^{iσ₀}` stripped, as a function
    /// of `t = log x`: all terms in which at least one derivative hits `ω`.
    pub fn remainder_bracket(&self, t: f64) -> CVector {
        let u = &self.element;
        let mu = self.taylor.len() - 1;
        let omega = u.cutoff.log_derivatives(t, mu);
        let mut acc = CVector::zeros(u.dim());
        for (m, pm) in self.taylor.iter().enumerate().skip(1) {
            let mut inner = CVector::zeros(u.dim());
            for (l, w) in omega.iter().enumerate().take(m + 1).skip(1) {
                if *w != 0.0 {
                    inner += u.phi_derivative(m - l, t) * c64(binomial(m, l) * w, 0.0);
                }
            }
            acc += pm * inner * minus_i_pow(m);
        }
        acc
    }

    pub fn remainder(&self, x: f64) -> CVector {
        self.remainder_bracket(x.ln()) * (power(x, self.element.root) / x)
    }

    /// Full value `(A u)(x)`: singular part times `ω` plus the remainder.
    pub fn value(&self, x: f64) -> CVector {
        let t = x.ln();
        let mut poly = CVector::zeros(self.element.dim());
        for (r, s) in self.singular_part.iter().enumerate() {
            poly += s * c64(t.powi(r as i32), 0.0);
        }
        let bracket = poly * c64(self.element.cutoff.value(x), 0.0) + self.remainder_bracket(t);
        bracket * (power(x, self.element.root) / x)
    }
}

/// Applies the indicial operator to `u` by the substitution rule.
pub fn apply_indicial_operator(p: &SelfAdjointPencil, u: &LogPowerElement) -> Result<IndicialImage> {
    if u.dim() != p.dim() {
        return Err(Error::DimensionMismatch("element and pencil dimensions differ".into()));
    }
    Ok(IndicialImage {
        singular_part: u.annihilator_image(p),
        element: u.clone(),
        taylor: taylor_coefficients(p, u.root),
    })
}

/// Basis of `E_{σ₀}(p)` for one indicial root.
#[derive(Clone, Debug)]
pub struct SingularSpaceBasis {
    pub root: IndicialRoot,
    pub elements: Vec<LogPowerElement>,
}

impl SingularSpaceBasis {
    pub fn dim(&self) -> usize {
        self.elements.len()
    }
}

/// Matrix of `(e_0, …, e_k) ↦` coefficients of `p(σ₀ − i∂_t) Σ e_j t^j`.
fn annihilation_matrix(p: &SelfAdjointPencil, sigma0: Complex64, degree: usize) -> CMatrix {
    let n = p.dim();
    let taylor = taylor_coefficients(p, sigma0);
    let size = n * (degree + 1);
    let mut m = CMatrix::zeros(size, size);
    for r in 0..=degree {
        for (k, pk) in taylor.iter().enumerate() {
            let j = r + k;
            if j > degree {
                break;
            }
            let block = pk * (minus_i_pow(k) * falling(j, k));
            m.view_mut((r * n, j * n), (n, n)).copy_from(&block);
        }
    }
    m
}

/// Reduced row echelon form of the rows of `rows`, with tiny entries zeroed.
fn reduced_echelon(mut rows: CMatrix) -> CMatrix {
    let (nr, nc) = rows.shape();
    let scale = rows.iter().fold(0.0f64, |a, z| a.max(z.norm())).max(f64::MIN_POSITIVE);
    let mut pivot_row = 0;
    for col in 0..nc {
        if pivot_row == nr {
            break;
        }
        let (best, best_abs) = (pivot_row..nr)
            .map(|r| (r, rows[(r, col)].norm()))
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .expect("non-empty range");
        if best_abs <= 1e-10 * scale {
            continue;
        }
        rows.swap_rows(pivot_row, best);
        let pivot = rows[(pivot_row, col)];
        let normalized = rows.row(pivot_row) / pivot;
        rows.set_row(pivot_row, &normalized);
        for r in 0..nr {
            if r != pivot_row {
                let factor = rows[(r, col)];
                if factor != c64(0.0, 0.0) {
                    let update = rows.row(pivot_row) * factor;
                    let new_row = rows.row(r) - update;
                    rows.set_row(r, &new_row);
                }
            }
        }
        pivot_row += 1;
    }
    for z in rows.iter_mut() {
        if z.re.abs() <= 1e-13 {
            z.re = 0.0;
        }
        if z.im.abs() <= 1e-13 {
            z.im = 0.0;
        }
    }
    rows
}

/// Basis of `E_{σ₀}(p)`: vector polynomials `φ` of degree `< alg_mult`
/// annihilated by `p(σ₀ − i∂_t)`, in reduced echelon order.
pub fn singular_space_basis_with(
    p: &SelfAdjointPencil,
    root: &IndicialRoot,
    cutoff: CutoffSpec,
    rank_tol: f64,
) -> Result<SingularSpaceBasis> {
    let n = p.dim();
    let threshold = rank_tol * p.magnitude_at(root.sigma0).max(f64::MIN_POSITIVE);
    let sv = singular_values(&p.evaluate(root.sigma0))?;
    if *sv.last().unwrap() > threshold {
        return Err(Error::NotARoot(root.sigma0));
    }
    let degree = root.alg_mult.saturating_sub(1);
    let kernel = kernel_basis_abs(&annihilation_matrix(p, root.sigma0, degree), threshold)?;
    let echelon = reduced_echelon(kernel.transpose());
    let elements = echelon
        .row_iter()
        .filter(|row| row.iter().any(|z| z.norm() > 0.0))
        .map(|row| {
            let coeffs = (0..=degree)
                .map(|j| CVector::from_iterator(n, (0..n).map(|i| row[j * n + i])))
                .collect::<Vec<_>>();
            let mut element = LogPowerElement::new(root.sigma0, coeffs, cutoff)?;
            while element.coeffs.len() > 1 && element.coeffs.last().unwrap().iter().all(|z| z.norm() == 0.0) {
                element.coeffs.pop();
            }
            Ok(element)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SingularSpaceBasis { root: *root, elements })
}

pub fn singular_space_basis(p: &SelfAdjointPencil, root: &IndicialRoot) -> Result<SingularSpaceBasis> {
    singular_space_basis_with(p, root, CutoffSpec::default(), BASIS_RANK_TOL)
}

/// Bases for every root in the open strip `|Im σ₀| < ½`.
pub fn strip_decomposition_with(
    p: &SelfAdjointPencil,
    root_tol: f64,
    cutoff: CutoffSpec,
) -> Result<Vec<SingularSpaceBasis>> {
    let roots = indicial_roots(p, root_tol)?;
    if let Some(r) = roots.iter().find(|r| (r.sigma0.im.abs() - 0.5).abs() <= root_tol) {
        return Err(Error::BoundaryRoot(r.sigma0));
    }
    roots
        .iter()
        .filter(|r| r.sigma0.im.abs() < 0.5)
        .map(|r| singular_space_basis_with(p, r, cutoff, BASIS_RANK_TOL))
        .collect()
}

pub fn strip_decomposition(p: &SelfAdjointPencil, root_tol: f64) -> Result<Vec<SingularSpaceBasis>> {
    strip_decomposition_with(p, root_tol, CutoffSpec::default())
}
