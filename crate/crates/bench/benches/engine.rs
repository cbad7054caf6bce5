use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use oksos_bench::prolongation_cone;
use oksos_core::analysis::{min_rank_diag, MinRankOptions};
use oksos_core::polytope::{extreme_rays_bruteforce, extreme_rays_dd, AdjacencyTest, DdOptions, InsertionOrder};
use oksos_core::prolongation::{build_jnd_direct, build_jnd_recursive};
use std::hint::black_box;

fn jmat(c: &mut Criterion) {
    let mut g = c.benchmark_group("jmat");
    for (n, d) in [(4, 4), (6, 3), (11, 2)] {
        let id = format!("{n},{d}");
        g.bench_with_input(BenchmarkId::new("direct", &id), &(n, d), |b, &(n, d)| b.iter(|| build_jnd_direct(n, d)));
        g.bench_with_input(BenchmarkId::new("recursive", &id), &(n, d), |b, &(n, d)| {
            b.iter(|| build_jnd_recursive(n, d))
        });
    }
    g.finish();
}

fn full_enumeration(c: &mut Criterion) {
    let mut g = c.benchmark_group("dd");
    g.sample_size(10);
    for (n, d) in [(3, 3), (4, 2), (3, 4), (4, 3)] {
        let cone = prolongation_cone(n, d);
        let id = format!("{n},{d}");
        for (label, order) in [("sparse", InsertionOrder::SparseFirst), ("natural", InsertionOrder::Natural)] {
            let opts = DdOptions { order, ..DdOptions::default() };
            g.bench_with_input(BenchmarkId::new(label, &id), &cone, |b, cone| {
                b.iter(|| extreme_rays_dd(black_box(cone), &opts).unwrap())
            });
        }
        let opts = DdOptions { adjacency: AdjacencyTest::Algebraic, ..DdOptions::default() };
        g.bench_with_input(BenchmarkId::new("algebraic", &id), &cone, |b, cone| {
            b.iter(|| extreme_rays_dd(black_box(cone), &opts).unwrap())
        });
    }
    let cone = prolongation_cone(3, 3);
    g.bench_function("bruteforce/3,3", |b| b.iter(|| extreme_rays_bruteforce(black_box(&cone)).unwrap()));
    g.finish();
}

fn min_rank(c: &mut Criterion) {
    let mut g = c.benchmark_group("min_rank");
    g.sample_size(10);
    for (n, d) in [(4, 3), (6, 2), (5, 3), (4, 4)] {
        g.bench_with_input(BenchmarkId::from_parameter(format!("{n},{d}")), &(n, d), |b, &(n, d)| {
            b.iter(|| min_rank_diag(n, d, &MinRankOptions::default()).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, jmat, full_enumeration, min_rank);
criterion_main!(benches);
