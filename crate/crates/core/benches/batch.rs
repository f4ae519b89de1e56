use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use fdo_core::{run_seeds, run_seeds_sequential, Benchmark, FdoConfig, Objective, RandomMode};

fn seed_batches(c: &mut Criterion) {
    let mut group = c.benchmark_group("seed_batch");
    group.sample_size(10);
    let seeds: Vec<u64> = (0..16).collect();
    for (objective, dim) in [(Benchmark::Sphere, 10), (Benchmark::Rastrigin, 10)] {
        let space = objective.suggested_bounds(dim).unwrap();
        let config = FdoConfig {
            population: 30,
            iterations: 200,
            direction: objective.direction(),
            random_mode: RandomMode::SeededUniform { seed: 0 },
            ..FdoConfig::default()
        };
        group.bench_with_input(
            BenchmarkId::new("sequential", objective.name()),
            &seeds,
            |b, seeds| b.iter(|| run_seeds_sequential(&space, &objective, &config, seeds).unwrap()),
        );
        group.bench_with_input(
            BenchmarkId::new("parallel", objective.name()),
            &seeds,
            |b, seeds| b.iter(|| run_seeds(&space, &objective, &config, seeds).unwrap()),
        );
    }
    group.finish();
}

fn single_run(c: &mut Criterion) {
    let space = Benchmark::Sphere.suggested_bounds(30).unwrap();
    let config = FdoConfig {
        population: 30,
        iterations: 500,
        ..FdoConfig::default()
    };
    c.bench_function("run/sphere-30d", |b| {
        b.iter(|| fdo_core::run(&space, &Benchmark::Sphere, &config).unwrap())
    });
}

criterion_group!(benches, seed_batches, single_run);
criterion_main!(benches);
