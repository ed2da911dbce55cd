//! Deterministic and seeded generators: circle Dirac families, random
//! Hermitian pencils, random Dirac maps and random cone realizations.
//!
//! Randomness is `ChaCha8Rng` seeded with `seed_from_u64`; entries are
//! standard Gaussian.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::cone_ode::{lagrangian_boundary, ConeRealization};
use crate::error::{Error, Result};
use crate::numerics::{c64, hermitian_eigen, real_diagonal, CMatrix, HermitianMatrix};
use crate::pencil::{dirac_block, indicial_roots, DiracData, SelfAdjointPencil, DEFAULT_ROOT_TOL};

pub const GENERATOR: &str = "ChaCha8Rng/seed_from_u64/StandardNormal";
const MIN_LEADING_EIGENVALUE: f64 = 0.1;
const MAX_REDRAWS: usize = 1000;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian(rng: &mut ChaCha8Rng) -> f64 {
    rng.sample(StandardNormal)
}

/// `rows × cols` complex matrix with independent `N(0, ½) + iN(0, ½)` entries.
pub fn random_complex(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> CMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    CMatrix::from_fn(rows, cols, |_, _| c64(s * gaussian(rng), s * gaussian(rng)))
}

/// `(G + G†)/2` for a complex Gaussian `G`.
pub fn random_hermitian(dim: usize, rng: &mut ChaCha8Rng) -> HermitianMatrix {
    let g = random_complex(dim, dim, rng);
    HermitianMatrix::new((&g + g.adjoint()).scale(0.5)).expect("symmetrized Gaussian is Hermitian")
}

/// Random unitary from the QR factorization of a complex Gaussian matrix.
pub fn random_unitary(dim: usize, rng: &mut ChaCha8Rng) -> CMatrix {
    random_complex(dim, dim, rng).qr().q()
}

/// Hermitian matrix with prescribed inertia and eigenvalue moduli in `[0.5, 2]`.
pub fn random_with_inertia(n_plus: usize, n_minus: usize, seed: u64) -> HermitianMatrix {
    let mut r = rng(seed);
    let values: Vec<f64> = (0..n_plus + n_minus)
        .map(|i| {
            let m = r.random_range(0.5..2.0);
            if i < n_plus { m } else { -m }
        })
        .collect();
    let u = random_unitary(values.len(), &mut r);
    HermitianMatrix::new(&u * real_diagonal(&values) * u.adjoint()).expect("unitary congruence of a real diagonal")
}

/// Seeded pencil with Gaussian Hermitian coefficients; `a_μ` is redrawn until
/// its smallest eigenvalue modulus is at least `0.1`.
pub fn random_pencil(dim: usize, mu: usize, seed: u64) -> Result<SelfAdjointPencil> {
    if dim == 0 || mu == 0 {
        return Err(Error::InvalidInput("dim and mu must be at least 1".into()));
    }
    let mut r = rng(seed);
    let mut coeffs: Vec<HermitianMatrix> = (0..mu).map(|_| random_hermitian(dim, &mut r)).collect();
    for _ in 0..MAX_REDRAWS {
        let lead = random_hermitian(dim, &mut r);
        if hermitian_eigen(&lead)?.min_abs_value() >= MIN_LEADING_EIGENVALUE {
            coeffs.push(lead);
            return SelfAdjointPencil::new(coeffs);
        }
    }
    Err(Error::ConstructionError("could not draw an invertible leading coefficient".into()))
}

/// Seeded `a × b` complex Gaussian map, `a = dim H₂` rows and `b = dim H₁` columns.
pub fn random_dirac(a: usize, b: usize, seed: u64) -> Result<DiracData> {
    DiracData::new(random_complex(a, b, &mut rng(seed)))
}

/// Rank-deficient variant: a product of `a × r` and `r × b` Gaussian factors.
pub fn random_dirac_with_rank(a: usize, b: usize, rank: usize, seed: u64) -> Result<DiracData> {
    let mut r = rng(seed);
    let left = random_complex(a, rank, &mut r);
    DiracData::new(left * random_complex(rank, b, &mut r))
}

fn well_separated(p: &SelfAdjointPencil) -> Result<bool> {
    let roots = indicial_roots(p, DEFAULT_ROOT_TOL)?;
    for (i, r) in roots.iter().enumerate() {
        if (r.sigma0.im.abs() - 0.5).abs() < 0.05 {
            return Ok(false);
        }
        for s in &roots[i + 1..] {
            // exponents ρ = iσ must not differ by integers or nearly collide
            let gap = c64(0.0, 1.0) * (s.sigma0 - r.sigma0);
            let m = gap.re.round();
            if gap.norm() < 1e-3 || (m != 0.0 && (gap - c64(m, 0.0)).norm() < 0.05) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Seeded `μ = 1` realization of dimension `2·half` with `sig(a₁) = 0` and
/// the canonical Lagrangian boundary condition. Draws whose indicial roots
/// sit near `|Im σ| = ½` or are resonant are redrawn.
pub fn random_cone(half: usize, seed: u64) -> Result<ConeRealization> {
    if half == 0 {
        return Err(Error::InvalidInput("cone dimension must be positive".into()));
    }
    let mut r = rng(seed);
    for _ in 0..MAX_REDRAWS {
        let a1 = random_with_inertia(half, half, r.random());
        let a0 = random_hermitian(2 * half, &mut r).scaled(0.5);
        let p = SelfAdjointPencil::new(vec![a0, a1])?;
        if well_separated(&p)? {
            let boundary = lagrangian_boundary(p.leading())?;
            return ConeRealization::new(p, boundary);
        }
    }
    Err(Error::ConstructionError("could not draw a non-resonant cone".into()))
}

/// Symbol on the circle with constant coefficients: `a_j(k) = Σ_m C_{j,m} k^m`
/// on the Fourier mode `e^{ikθ}`, truncated to `|k| ≤ truncation`.
#[derive(Clone, Debug)]
pub struct CircleSymbol {
    /// `coeffs[j][m]` multiplies `σ^j k^m`.
    pub coeffs: Vec<Vec<CMatrix>>,
    pub truncation: usize,
}

impl CircleSymbol {
    /// Dirac family of `D = −i∂_θ + c` on scalar functions: mode blocks
    /// `[[σ, k + c], [k + c, −σ]]`.
    pub fn dirac(c: f64, truncation: usize) -> Self {
        let a0_const = CMatrix::from_row_slice(2, 2, &[c64(0.0, 0.0), c64(c, 0.0), c64(c, 0.0), c64(0.0, 0.0)]);
        let a0_k = CMatrix::from_row_slice(2, 2, &[c64(0.0, 0.0), c64(1.0, 0.0), c64(1.0, 0.0), c64(0.0, 0.0)]);
        Self { coeffs: vec![vec![a0_const, a0_k], vec![real_diagonal(&[1.0, -1.0])]], truncation }
    }

    /// Degree in `k` of each coefficient.
    pub fn orders(&self) -> Vec<usize> {
        self.coeffs.iter().map(|c| c.len().saturating_sub(1)).collect()
    }

    pub fn modes(&self) -> impl Iterator<Item = i64> {
        let n = self.truncation as i64;
        -n..=n
    }

    /// Pencil of the single mode `k`.
    pub fn mode_pencil(&self, k: i64) -> Result<SelfAdjointPencil> {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(j, poly)| {
                let m = poly.iter().rev().fold(None::<CMatrix>, |acc, c| {
                    Some(match acc {
                        None => c.clone(),
                        Some(a) => a * c64(k as f64, 0.0) + c,
                    })
                });
                let m = m.ok_or_else(|| Error::ConstructionError(format!("coefficient {j} is empty")))?;
                HermitianMatrix::new(m)
                    .map_err(|e| Error::ConstructionError(format!("mode {k}, coefficient {j}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        SelfAdjointPencil::new(coeffs)
    }
}

/// Block-diagonal pencil `⊕_{|k| ≤ N} p_k(σ)`.
pub fn circle_pencil(sym: &CircleSymbol) -> Result<SelfAdjointPencil> {
    let mut modes = sym.modes();
    let first = modes.next().expect("at least the zero mode");
    let mut p = sym.mode_pencil(first)?;
    for k in modes {
        p = p.direct_sum(&sym.mode_pencil(k)?)?;
    }
    Ok(p)
}

/// A generated pencil with its expected integers and the generator that
/// produced it.
#[derive(Clone, Debug)]
pub struct Fixture {
    pub name: String,
    pub pencil: SelfAdjointPencil,
    pub seed: Option<u64>,
    pub expected_sf: i64,
    pub expected_ind: Option<i64>,
    pub generator: String,
}

impl Fixture {
    pub fn from_dirac(name: impl Into<String>, d: &DiracData, seed: Option<u64>) -> Result<Self> {
        let ind = d.index()?;
        Ok(Self {
            name: name.into(),
            pencil: dirac_block(d)?,
            seed,
            expected_sf: ind,
            expected_ind: Some(ind),
            generator: GENERATOR.into(),
        })
    }

    /// Expected value from the leading coefficient: `sig(a_μ)` for odd `μ`, else 0.
    pub fn from_pencil(name: impl Into<String>, pencil: SelfAdjointPencil, seed: Option<u64>) -> Result<Self> {
        let expected_sf = if pencil.mu() % 2 == 1 {
            let eig = hermitian_eigen(pencil.leading())?;
            eig.values.iter().map(|&v| v.signum() as i64).sum()
        } else {
            0
        };
        Ok(Self { name: name.into(), pencil, seed, expected_sf, expected_ind: None, generator: GENERATOR.into() })
    }
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct ZooConfig {
    pub seed: u64,
    pub random_pencils: usize,
    pub random_diracs: usize,
}

impl Default for ZooConfig {
    fn default() -> Self {
        Self { seed: 0, random_pencils: 10, random_diracs: 10 }
    }
}

/// The standard fixture set: hand-made Dirac maps, circle families, and
/// seeded random pencils and Dirac maps.
pub fn standard_fixtures(cfg: &ZooConfig) -> Result<Vec<Fixture>> {
    let mut out = vec![
        Fixture::from_dirac("dirac_zero_1x1", &DiracData::new(CMatrix::zeros(1, 1))?, None)?,
        Fixture::from_dirac(
            "dirac_1x2",
            &DiracData::new(CMatrix::from_row_slice(1, 2, &[c64(1.0, 0.0), c64(0.0, 0.0)]))?,
            None,
        )?,
        Fixture::from_dirac("dirac_random_3x5", &random_dirac(3, 5, cfg.seed)?, Some(cfg.seed))?,
    ];
    for (c, n) in [(0.0, 8), (0.3, 8)] {
        let mut f = Fixture::from_pencil(format!("circle_c{c}_n{n}"), circle_pencil(&CircleSymbol::dirac(c, n))?, None)?;
        f.expected_sf = 0;
        f.expected_ind = Some(0);
        out.push(f);
    }
    for i in 0..cfg.random_diracs {
        let seed = cfg.seed.wrapping_add(1000 + i as u64);
        let (a, b) = (1 + (seed % 4) as usize, 1 + ((seed / 4) % 4) as usize);
        out.push(Fixture::from_dirac(format!("dirac_random_{i}"), &random_dirac(a, b, seed)?, Some(seed))?);
    }
    for i in 0..cfg.random_pencils {
        let seed = cfg.seed.wrapping_add(2000 + i as u64);
        let (dim, mu) = (1 + (seed % 3) as usize, 1 + ((seed / 3) % 3) as usize);
        out.push(Fixture::from_pencil(format!("pencil_random_{i}"), random_pencil(dim, mu, seed)?, Some(seed))?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::max_abs;
    use crate::spectral_flow::{sf_endpoint, spectral_flow, SfTolerances};

    #[test]
    fn seeded_generators_are_reproducible() {
        let p = random_pencil(3, 2, 7).unwrap();
        let q = random_pencil(3, 2, 7).unwrap();
        assert_eq!(p, q);
        assert_ne!(p, random_pencil(3, 2, 8).unwrap());
        assert_eq!(random_dirac(2, 3, 1).unwrap(), random_dirac(2, 3, 1).unwrap());
    }

    #[test]
    fn leading_coefficient_is_conditioned() {
        for seed in 0..50 {
            let p = random_pencil(4, 3, seed).unwrap();
            assert!(hermitian_eigen(p.leading()).unwrap().min_abs_value() >= 0.1);
        }
    }

    #[test]
    fn dirac_fixtures() {
        let zero = DiracData::new(CMatrix::zeros(1, 1)).unwrap();
        assert_eq!(zero.index().unwrap(), 0);
        assert_eq!((zero.kernel().unwrap().ncols(), zero.cokernel().unwrap().ncols()), (1, 1));
        assert_eq!(random_dirac(3, 5, 11).unwrap().index().unwrap(), 2);
    }

    #[test]
    fn inertia_is_prescribed() {
        let a = random_with_inertia(2, 1, 3);
        let eig = hermitian_eigen(&a).unwrap();
        assert_eq!(eig.values.iter().filter(|&&v| v > 0.0).count(), 2);
        assert!(eig.min_abs_value() >= 0.5 - 1e-12);
    }

    #[test]
    fn circle_dirac_family() {
        let tol = SfTolerances::default();
        let p = circle_pencil(&CircleSymbol::dirac(0.0, 8)).unwrap();
        assert_eq!(p.dim(), 2 * 17);
        assert_eq!(spectral_flow(&p, &tol).unwrap().value, 0);
        let real: Vec<_> = indicial_roots(&p, DEFAULT_ROOT_TOL).unwrap().into_iter().filter(|r| r.is_real).collect();
        assert_eq!(real.len(), 1);
        assert_eq!(real[0].alg_mult, 2);

        let sym = CircleSymbol::dirac(0.3, 8);
        let p = circle_pencil(&sym).unwrap();
        assert!(indicial_roots(&p, DEFAULT_ROOT_TOL).unwrap().iter().all(|r| !r.is_real));
        let blocks: i64 = sym.modes().map(|k| spectral_flow(&sym.mode_pencil(k).unwrap(), &tol).unwrap().value).sum();
        assert_eq!(blocks, sf_endpoint(&p, 50.0, tol.zero_tol).unwrap());

        let single = circle_pencil(&CircleSymbol::dirac(0.3, 0)).unwrap();
        assert_eq!(single.dim(), 2);
        assert!(max_abs(&(single.coeffs()[0].matrix() - CMatrix::from_row_slice(2, 2, &[c64(0.0, 0.0), c64(0.3, 0.0), c64(0.3, 0.0), c64(0.0, 0.0)]))) < 1e-15);
    }

    #[test]
    fn non_hermitian_mode_is_rejected() {
        let mut sym = CircleSymbol::dirac(0.0, 2);
        sym.coeffs[0][1][(0, 1)] = c64(0.0, 1.0);
        assert!(matches!(circle_pencil(&sym), Err(Error::ConstructionError(_))));
    }

    #[test]
    fn random_cones_are_lagrangian() {
        for seed in 0..5 {
            let c = random_cone(1 + (seed as usize % 2), seed).unwrap();
            assert!(c.is_lagrangian());
        }
    }

    #[test]
    fn standard_fixture_set_builds() {
        let fx = standard_fixtures(&ZooConfig::default()).unwrap();
        assert_eq!(fx.len(), 5 + 20);
        assert_eq!(fx[1].expected_ind, Some(1));
    }
}
