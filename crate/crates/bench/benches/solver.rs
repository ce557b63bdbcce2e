use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use monopath_core::solver::{heuristic_partition, min_partition, sweep_colourings, SweepConfig};
use monopath_core::{ColouringSpec, Mode};

fn exact(c: &mut Criterion) {
    let mut group = c.benchmark_group("min_partition");
    for n in [8, 10, 12] {
        let g = "random:seed=7,r=3".parse::<ColouringSpec>().unwrap().build_finite(n).unwrap();
        for mode in [Mode::Any, Mode::Distinct] {
            group.bench_with_input(BenchmarkId::new(format!("{mode:?}"), n), &g, |b, g| {
                b.iter(|| min_partition(black_box(g), mode).unwrap())
            });
        }
    }
    group.finish();
}

fn heuristic(c: &mut Criterion) {
    let mut group = c.benchmark_group("heuristic_partition");
    for n in [20, 100, 400] {
        let g = "random:seed=7,r=3".parse::<ColouringSpec>().unwrap().build_finite(n).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &g, |b, g| b.iter(|| heuristic_partition(black_box(g))));
    }
    group.finish();
}

fn sweep(c: &mut Criterion) {
    let mut group = c.benchmark_group("sweep");
    group.sample_size(10);
    for (canonical, name) in [(false, "plain"), (true, "canonical")] {
        let cfg = SweepConfig { canonical, ..SweepConfig::new(5, 2, Mode::Distinct) };
        group.bench_function(name, |b| b.iter(|| sweep_colourings(black_box(&cfg), None).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, exact, heuristic, sweep);
criterion_main!(benches);
