use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use irs_bench::{fixture_path, SIZES};
use irs_core::{
    deletion_set, ito_sum, k_of_n, sample_path, strat_average_sum, strat_midpoint_sum, Integrand, Partition,
    SeedSpec, Strategy,
};
use std::hint::black_box;

fn path_sampling(c: &mut Criterion) {
    let mut group = c.benchmark_group("sample_path");
    for n in SIZES {
        let grid = Partition::equal(1.0, n).unwrap();
        group.throughput(Throughput::Elements(n as u64));
        group.bench_with_input(BenchmarkId::from_parameter(n), &grid, |b, grid| {
            b.iter(|| sample_path(grid, black_box(SeedSpec::new(1, 2))))
        });
    }
    group.finish();
}

fn incomplete_sums(c: &mut Criterion) {
    let phi = Integrand::identity();
    let mut group = c.benchmark_group("incomplete_sum");
    for n in SIZES {
        let path = fixture_path(n);
        let del = deletion_set(n, k_of_n(n, 0.5).unwrap(), Strategy::Random, 3).unwrap();
        group.throughput(Throughput::Elements(n as u64));
        group.bench_with_input(BenchmarkId::new("ito", n), &n, |b, _| {
            b.iter(|| ito_sum(&path, &phi, &del).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("strat_midpoint", n), &n, |b, _| {
            b.iter(|| strat_midpoint_sum(&path, &phi, &del).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("strat_average", n), &n, |b, _| {
            b.iter(|| strat_average_sum(&path, &phi, &del).unwrap())
        });
    }
    group.finish();
}

fn random_deletion(c: &mut Criterion) {
    let n = 100_000;
    let mut group = c.benchmark_group("deletion_set_random");
    for r in [0.3, 0.6, 0.9] {
        let k = k_of_n(n, r).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(k), &k, |b, &k| {
            b.iter(|| deletion_set(n, k, Strategy::Random, black_box(7)).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, path_sampling, incomplete_sums, random_deletion);
criterion_main!(benches);
