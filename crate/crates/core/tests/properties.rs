use approx::assert_relative_eq;
use indicial::adjoint_pairing::{gram, pair};
use indicial::model_zoo::{random_complex, random_dirac_with_rank, random_pencil};
use indicial::numerics::{hermitian_signature, kernel_basis, numerical_rank, CMatrix, HermitianMatrix};
use indicial::pencil::{indicial_roots, indicial_roots_with, normalize_strip, RootMethod};
use indicial::singular_functions::strip_decomposition;
use indicial::spectral_flow::{spectral_flow, SfTolerances};
use indicial::SelfAdjointPencil;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn small_pencil() -> impl Strategy<Value = SelfAdjointPencil> {
    (1usize..=4, 1usize..=3, any::<u64>()).prop_map(|(dim, mu, seed)| random_pencil(dim, mu, seed).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn roots_come_in_conjugate_pairs(p in small_pencil()) {
        let roots = indicial_roots(&p, 1e-8).unwrap();
        let total: usize = roots.iter().map(|r| r.alg_mult).sum();
        prop_assert_eq!(total, p.dim() * p.mu());
        for r in roots.iter().filter(|r| !r.is_real) {
            let partner = roots
                .iter()
                .filter(|s| (s.sigma0 - r.sigma0.conj()).norm() < 1e-6 * r.sigma0.norm().max(1.0))
                .count();
            prop_assert_eq!(partner, 1);
        }
    }

    #[test]
    fn evaluation_is_selfadjoint_on_the_real_line(p in small_pencil(), re in -5.0f64..5.0, im in -5.0f64..5.0) {
        let z = Complex64::new(re, im);
        let lhs = p.evaluate(z.conj()).adjoint();
        let rhs = p.evaluate(z);
        let scale = rhs.norm().max(1.0);
        prop_assert!((lhs - rhs).norm() <= 1e-12 * scale);
    }

    #[test]
    fn root_routes_agree(dim in 1usize..=3, mu in 1usize..=2, seed in any::<u64>()) {
        let p = random_pencil(dim, mu, seed).unwrap();
        let a = indicial_roots_with(&p, 1e-8, RootMethod::Linearization).unwrap();
        let b = indicial_roots_with(&p, 1e-5, RootMethod::DeterminantInterpolation).unwrap();
        let count = |rs: &[indicial::IndicialRoot]| rs.iter().map(|r| r.alg_mult).sum::<usize>();
        prop_assert_eq!(count(&a), count(&b));
        for r in &a {
            let nearest = b.iter().map(|s| (s.sigma0 - r.sigma0).norm()).fold(f64::INFINITY, f64::min);
            prop_assert!(nearest <= 1e-6 * r.sigma0.norm().max(1.0), "root {} off by {}", r.sigma0, nearest);
        }
    }

    #[test]
    fn congruence_preserves_signature_and_flow(p in small_pencil(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = random_complex(p.dim(), p.dim(), &mut rng) + CMatrix::identity(p.dim(), p.dim());
        prop_assume!(numerical_rank(&s, 1e-6).unwrap() == p.dim());
        let q = SelfAdjointPencil::new(p.coeffs().iter().map(|a| a.congruence(&s)).collect::<Result<Vec<_>, _>>().unwrap()).unwrap();
        let sig_p = hermitian_signature(p.leading(), 1e-9).unwrap().signature();
        let sig_q = hermitian_signature(q.leading(), 1e-9).unwrap().signature();
        prop_assert_eq!(sig_p, sig_q);
        let tol = SfTolerances::default();
        prop_assert_eq!(spectral_flow(&p, &tol).unwrap().value, spectral_flow(&q, &tol).unwrap().value);
    }

    #[test]
    fn rank_plus_nullity(rows in 1usize..=6, cols in 1usize..=6, seed in any::<u64>()) {
        let rank = 1 + (seed as usize) % rows.min(cols);
        let d = random_dirac_with_rank(rows, cols, rank, seed).unwrap();
        prop_assert_eq!(numerical_rank(&d.d, 1e-9).unwrap(), rank);
        let k = kernel_basis(&d.d, 1e-9).unwrap();
        prop_assert_eq!(k.ncols(), cols - rank);
        prop_assert!((&d.d * &k).norm() <= 1e-10 * d.d.norm());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn gram_is_hermitian_and_pairs_distinct_roots_to_zero(p in small_pencil()) {
        let (_, pt) = normalize_strip(&p, 1e-8).unwrap();
        let g = gram(&pt).unwrap();
        prop_assert!(g.raw_asymmetry <= 1e-8);
        let bases = strip_decomposition(&pt, 1e-8).unwrap();
        for (i, a) in bases.iter().enumerate() {
            for b in bases.iter().skip(i + 1) {
                if (a.root.sigma0 - b.root.sigma0.conj()).norm() < 1e-8 {
                    continue;
                }
                for u in &a.elements {
                    for v in &b.elements {
                        prop_assert!(pair(&pt, u, v, 1e-10).unwrap().norm() < 1e-8);
                    }
                }
            }
        }
    }
}

#[test]
fn dirac_zero_gram_scales_linearly() {
    let zero = indicial::DiracData::new(CMatrix::zeros(1, 1)).unwrap();
    let base = gram(&indicial::pencil::dirac_block(&zero).unwrap()).unwrap();
    for t in [0.1, 0.25, 0.5] {
        let scaled = gram(&indicial::pencil::dirac_block(&zero).unwrap().scale(t).unwrap()).unwrap();
        for (a, b) in scaled.matrix.matrix().iter().zip(base.matrix.matrix().iter()) {
            assert_relative_eq!(a.re, t * b.re, epsilon = 1e-10);
            assert_relative_eq!(a.im, t * b.im, epsilon = 1e-10);
        }
    }
}

#[test]
fn hermitian_gate_rejects_asymmetric_input() {
    let m = CMatrix::from_row_slice(2, 2, &[Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)]);
    assert!(HermitianMatrix::new(m).is_err());
}
