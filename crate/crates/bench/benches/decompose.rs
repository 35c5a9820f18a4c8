use std::hint::black_box;

use afd_core::signals::synth_f1;
use afd_core::{decompose, DecomposeOptions, Engine, ParameterGrid};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn decompose_ten_terms(c: &mut Criterion) {
    let mut group = c.benchmark_group("decompose");
    group.sample_size(20);
    for n in [256usize, 1024, 4096] {
        let g = synth_f1(n).unwrap();
        let grid = ParameterGrid::standard(n).unwrap();
        let fft = DecomposeOptions::default();
        group.bench_with_input(BenchmarkId::new("fft", n), &n, |b, _| {
            b.iter(|| decompose(black_box(&g), &grid, &fft).unwrap())
        });
        let parallel = DecomposeOptions {
            parallel: true,
            ..DecomposeOptions::default()
        };
        group.bench_with_input(BenchmarkId::new("fft-parallel", n), &n, |b, _| {
            b.iter(|| decompose(black_box(&g), &grid, &parallel).unwrap())
        });
        if n <= 1024 {
            let direct = DecomposeOptions::default().with_engine(Engine::Direct);
            group.bench_with_input(BenchmarkId::new("direct", n), &n, |b, _| {
                b.iter(|| decompose(black_box(&g), &grid, &direct).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, decompose_ten_terms);
criterion_main!(benches);
