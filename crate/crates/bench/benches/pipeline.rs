use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use indicial::adjoint_pairing::gram;
use indicial::cone_ode::deficiency_indices;
use indicial::model_zoo::{random_cone, random_dirac, random_pencil};
use indicial::pencil::{dirac_block, indicial_roots, normalize_strip};
use indicial::spectral_flow::{spectral_flow, SfTolerances};

fn roots(c: &mut Criterion) {
    let mut group = c.benchmark_group("roots");
    for (dim, mu) in [(2, 1), (4, 2), (5, 3)] {
        let p = random_pencil(dim, mu, 1).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(format!("{dim}x{mu}")), &p, |b, p| {
            b.iter(|| indicial_roots(black_box(p), 1e-8).unwrap())
        });
    }
    group.finish();
}

fn flow(c: &mut Criterion) {
    let tol = SfTolerances::default();
    let mut group = c.benchmark_group("spectral_flow");
    let p = random_pencil(5, 3, 2).unwrap();
    group.bench_function("pencil_5x3", |b| b.iter(|| spectral_flow(black_box(&p), &tol).unwrap()));
    let d = dirac_block(&random_dirac(8, 6, 3).unwrap()).unwrap();
    group.bench_function("dirac_8x6", |b| b.iter(|| spectral_flow(black_box(&d), &tol).unwrap()));
    group.finish();
}

fn pairing(c: &mut Criterion) {
    let mut group = c.benchmark_group("gram");
    group.sample_size(20);
    for (dim, mu) in [(2, 1), (3, 3)] {
        let (_, p) = normalize_strip(&random_pencil(dim, mu, 4).unwrap(), 1e-8).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(format!("{dim}x{mu}")), &p, |b, p| {
            b.iter(|| gram(black_box(p)).unwrap())
        });
    }
    group.finish();
}

fn cone(c: &mut Criterion) {
    let cone = random_cone(1, 5).unwrap();
    let mut group = c.benchmark_group("cone");
    group.sample_size(20);
    group.bench_function("deficiency_2x2", |b| b.iter(|| deficiency_indices(black_box(&cone), 1e-10).unwrap()));
    group.finish();
}

criterion_group!(benches, roots, flow, pairing, cone);
criterion_main!(benches);
