use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sparsefair_core::groups::GroupId;
use sparsefair_core::metrics::sp_regression_ks;
use sparsefair_core::sparsity::{gini, pq_index};
use sparsefair_core::{MeasureSpec, NonNegVector, Partition, RegressionData};

fn random_vector(d: usize, seed: u64) -> NonNegVector {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    NonNegVector::new((0..d).map(|_| rng.random_range(0.0..1.0)).collect()).unwrap()
}

fn bench_measures(c: &mut Criterion) {
    let mut group = c.benchmark_group("measures");
    for d in [16, 1024, 65_536] {
        let w = random_vector(d, 7);
        group.bench_with_input(BenchmarkId::new("pq_index", d), &w, |b, w| {
            b.iter(|| pq_index(black_box(w), 1.0, 2.0).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("gini", d), &w, |b, w| b.iter(|| gini(black_box(w))));
    }
    group.finish();
}

fn bench_ks(c: &mut Criterion) {
    let mut group = c.benchmark_group("sp_regression_ks");
    for (n, groups) in [(1_000, 2), (10_000, 5)] {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let pred: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..100.0)).collect();
        let ids: Vec<GroupId> = (0..n).map(|i| GroupId(i % groups)).collect();
        let data = RegressionData::new(pred.clone(), pred, ids).unwrap();
        let part = Partition::from_ids(data.groups());
        group.bench_function(BenchmarkId::new("pq", format!("{n}x{groups}")), |b| {
            b.iter(|| sp_regression_ks(black_box(&data), &part, &MeasureSpec::default()).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_measures, bench_ks);
criterion_main!(benches);
