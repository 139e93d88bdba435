use std::time::Duration;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use gwnull_core::suite::{classical_cases, run_cases, sample, StandardOracle};
use gwnull_core::{decide, DeciderConfig, GwInstance, Permutation};

fn p(v: &[usize]) -> Permutation {
    Permutation::new(v.to_vec()).unwrap()
}

fn instances() -> Vec<(&'static str, GwInstance)> {
    vec![
        ("p1-pt3-d1", GwInstance::complete(vec![1], p(&[2, 1]), p(&[2, 1]), p(&[2, 1])).unwrap()),
        ("fl3-213-132-213", GwInstance::complete(vec![0, 0], p(&[2, 1, 3]), p(&[1, 3, 2]), p(&[2, 1, 3])).unwrap()),
        ("fl3-312-s1-312-q10", GwInstance::complete(vec![1, 0], p(&[3, 1, 2]), p(&[2, 1, 3]), p(&[3, 1, 2])).unwrap()),
    ]
}

fn bench_decide(c: &mut Criterion) {
    let mut group = c.benchmark_group("decide");
    group.sample_size(10).measurement_time(Duration::from_secs(20));
    for (name, inst) in instances() {
        for parallel in [true, false] {
            let cfg = DeciderConfig { parallel, ..DeciderConfig::default() };
            let label = if parallel { "parallel" } else { "sequential" };
            group.bench_with_input(BenchmarkId::new(label, name), &inst, |b, inst| b.iter(|| decide(inst, &cfg).unwrap()));
        }
    }
    group.finish();
}

fn bench_suite(c: &mut Criterion) {
    let cases = sample(classical_cases(3, &StandardOracle), 5);
    let mut group = c.benchmark_group("suite-s3-sample");
    group.sample_size(10).measurement_time(Duration::from_secs(20));
    for parallel in [true, false] {
        let cfg = DeciderConfig { parallel, ..DeciderConfig::default() };
        let label = if parallel { "parallel" } else { "sequential" };
        group.bench_function(label, |b| b.iter(|| run_cases("bench", &cases, &cfg)));
    }
    group.finish();
}

criterion_group!(benches, bench_decide, bench_suite);
criterion_main!(benches);
