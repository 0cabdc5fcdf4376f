use criterion::{criterion_group, criterion_main, Criterion};
use flexplan_core::lp::SolveOptions;
use flexplan_core::model::{build, ModelConfig};
use flexplan_core::scenarios::{kmeans, scenario_tree, standardize};
use flexplan_core::synthetic::{synthetic_days, SyntheticSpec};
use flexplan_core::{ProcessSpec, TechEconSpec};
use std::hint::black_box;

fn clustering(c: &mut Criterion) {
    let days = synthetic_days(&SyntheticSpec::new(365, 1));
    let features = standardize(&days).unwrap();
    c.bench_function("kmeans_365_days_k10", |b| {
        b.iter(|| kmeans(black_box(&features), 10, 7).unwrap())
    });
}

fn model(c: &mut Criterion) {
    let process = ProcessSpec::reference();
    let econ = TechEconSpec::reference(process.nominal_power);
    let (tree, _) = scenario_tree(&synthetic_days(&SyntheticSpec::new(10, 2)), 4, 2).unwrap();
    c.bench_function("build_10_days", |b| {
        b.iter(|| build(black_box(&tree), &process, &econ, &ModelConfig::default()).unwrap())
    });

    let (small, _) = scenario_tree(&synthetic_days(&SyntheticSpec::new(3, 3)), 2, 3).unwrap();
    let m = build(&small, &process, &econ, &ModelConfig::default()).unwrap();
    let mut group = c.benchmark_group("solve");
    group.sample_size(10);
    group.bench_function("tac_3_days", |b| {
        b.iter(|| m.solve(black_box(&SolveOptions::default())))
    });
    group.finish();
}

criterion_group!(benches, clustering, model);
criterion_main!(benches);
