use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use num_complex::Complex64;
use std::hint::black_box;
use zenochain::model::{self, ChainConfig};
use zenochain::numerics;

fn chain(n: usize) -> ChainConfig {
    ChainConfig {
        n_spins: n,
        ..ChainConfig::default()
    }
}

fn bench_hermitian_eigen(c: &mut Criterion) {
    let mut group = c.benchmark_group("hermitian_eigendecompose");
    group.sample_size(10);
    for n in [6usize, 8] {
        let h = model::build_chain_hamiltonian(&chain(n)).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &h, |b, h| {
            b.iter(|| numerics::hermitian_eigendecompose(black_box(h)).unwrap())
        });
    }
    group.finish();
}

fn bench_general_eigen(c: &mut Criterion) {
    let mut group = c.benchmark_group("general_eigendecompose");
    group.sample_size(10);
    for n in [6usize, 8] {
        let h = model::build_effective_hamiltonian(&chain(n)).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &h, |b, h| {
            b.iter(|| numerics::general_eigendecompose(black_box(h)).unwrap())
        });
    }
    group.finish();
}

fn bench_matrix_exponential(c: &mut Criterion) {
    let mut group = c.benchmark_group("matrix_exponential");
    group.sample_size(20);
    let cfg = chain(6);
    let scale = Complex64::new(0.0, -cfg.tau);
    let hermitian = model::build_total_hamiltonian(&cfg).unwrap();
    group.bench_function("spectral_128", |b| {
        b.iter(|| numerics::matrix_exponential(black_box(&hermitian), scale).unwrap())
    });
    let non_hermitian = model::build_effective_hamiltonian(&cfg).unwrap();
    group.bench_function("pade_64", |b| {
        b.iter(|| numerics::matrix_exponential(black_box(&non_hermitian), scale).unwrap())
    });
    group.finish();
}

fn bench_subspace(c: &mut Criterion) {
    let mut group = c.benchmark_group("build_nondecaying_basis");
    group.sample_size(10);
    for n in [6usize, 8, 10] {
        group.bench_with_input(BenchmarkId::from_parameter(n), &chain(n), |b, cfg| {
            b.iter(|| zenochain::subspace::build_nondecaying_basis(black_box(cfg)).unwrap())
        });
    }
    group.finish();
}

criterion_group!(
    benches,
    bench_hermitian_eigen,
    bench_general_eigen,
    bench_matrix_exponential,
    bench_subspace
);
criterion_main!(benches);
