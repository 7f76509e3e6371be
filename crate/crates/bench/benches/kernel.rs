use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use laguerre_core::dynamics::evolve_nls;
use laguerre_core::kernel::{kernel_matrix, kernel_value, rational};
use laguerre_core::oracles::{kernel_2f1, kernel_moment_exact, FiniteSection};
use laguerre_core::polynomials::{g_eval, g_sweep};
use laguerre_core::{EvolutionState, NlsConfig, PolyIndex};

fn matrix(c: &mut Criterion) {
    let mut group = c.benchmark_group("kernel_matrix");
    group.sample_size(10);
    for dim in [64, 256, 1024] {
        group.bench_with_input(BenchmarkId::from_parameter(dim), &dim, |b, &dim| {
            b.iter(|| kernel_matrix(dim, black_box(1.3)).unwrap())
        });
    }
    group.finish();
}

fn entries(c: &mut Criterion) {
    let mut group = c.benchmark_group("entry");
    group.bench_function("closed_form_40_80", |b| b.iter(|| kernel_value(black_box(40), 80, 2.0)));
    group.bench_function("hypergeometric_10_20", |b| b.iter(|| kernel_2f1(black_box(10), 20, 0.8)));
    let t = rational(3, 1);
    group.bench_function("moment_exact_12_12", |b| b.iter(|| kernel_moment_exact(black_box(12), 12, &t)));
    let section = FiniteSection::new(256).unwrap();
    group.bench_function("finite_section_256", |b| b.iter(|| section.kernel(black_box(8), 16, 1.0)));
    group.finish();
}

fn polynomials(c: &mut Criterion) {
    let mut group = c.benchmark_group("jacobi");
    group.bench_function("g_eval_500", |b| b.iter(|| g_eval(PolyIndex::new(500, 30, 0), black_box(0.37))));
    group.bench_function("g_sweep_500", |b| b.iter(|| g_sweep(30, 0, 501, black_box(0.37))));
    group.finish();
}

fn nls(c: &mut Criterion) {
    let psi0 = EvolutionState::new(vec![1.0.into(), 0.5.into()], 0.0);
    let cfg = NlsConfig::new(1, 1.0 / 16.0, 1.0, 32);
    let mut group = c.benchmark_group("evolve");
    group.sample_size(10);
    group.bench_function("strang_T1_dt1_16", |b| b.iter(|| evolve_nls(black_box(&psi0), &cfg).unwrap()));
    group.finish();
}

criterion_group!(benches, matrix, entries, polynomials, nls);
criterion_main!(benches);
