use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use quasifree::entropy::{entropy_scan_cached, majorana_entropy};
use quasifree::{pi_block, BlockCache, Boundary, FiniteChain, ModelSpec};
use std::hint::black_box;

const TOL: f64 = 1e-12;

fn blocks(c: &mut Criterion) {
    let critical = ModelSpec::nearest_neighbor(1.0, 1.0, 2.0).unwrap();
    let gapped = ModelSpec::nearest_neighbor(0.7, 0.4, 0.3).unwrap();
    let mut g = c.benchmark_group("pi_block");
    for l in [1i64, 64, 512] {
        g.bench_with_input(BenchmarkId::new("critical", l), &l, |b, &l| b.iter(|| pi_block(&critical, l, TOL).unwrap()));
        g.bench_with_input(BenchmarkId::new("gapped", l), &l, |b, &l| b.iter(|| pi_block(&gapped, l, TOL).unwrap()));
    }
    g.finish();
}

fn entropy(c: &mut Criterion) {
    let model = ModelSpec::nearest_neighbor(1.0, 1.0, 0.5).unwrap();
    let cache = BlockCache::new(&model, TOL).unwrap();
    cache.ensure(-1024, 1024).unwrap();
    let mut g = c.benchmark_group("thermo_entropy");
    g.sample_size(20);
    for l in [64usize, 256, 512] {
        let cm = cache.correlation_matrix(l).unwrap();
        g.bench_with_input(BenchmarkId::new("majorana_entropy", l), &cm, |b, cm| {
            b.iter(|| majorana_entropy(black_box(&cm.data)).unwrap())
        });
    }
    g.bench_function("scan_1_to_128", |b| {
        let ls: Vec<usize> = (1..=128).collect();
        b.iter(|| entropy_scan_cached(&cache, &ls).unwrap())
    });
    g.finish();
}

fn finite(c: &mut Criterion) {
    let model = ModelSpec::nearest_neighbor(1.0, 1.0, 0.4).unwrap();
    let mut g = c.benchmark_group("finite_chain");
    g.sample_size(10);
    for n in [64usize, 256] {
        g.bench_with_input(BenchmarkId::new("ground_state", n), &n, |b, &n| {
            b.iter(|| FiniteChain::new(&model, n, Boundary::Open).unwrap().ground_state().unwrap())
        });
    }
    let state = FiniteChain::new(&model, 256, Boundary::Open).unwrap().ground_state().unwrap();
    g.bench_function("block_entropy_128_of_256", |b| b.iter(|| state.block_entropy(0, 128).unwrap()));
    g.finish();
}

criterion_group!(benches, blocks, entropy, finite);
criterion_main!(benches);
