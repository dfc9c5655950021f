use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use polaris::gen::{case_seeds, gen_random_minimal};
use polaris::polar::assemble_from_heights;
use polaris::realize::{realize, verify};
use polaris::{analyze, check, cycles, fixtures, AnalyzeOptions};

fn fixtures_analyze(c: &mut Criterion) {
    let mut group = c.benchmark_group("analyze");
    for name in ["g32", "fig2", "note", "join"] {
        let g = fixtures::get(name).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(name), &g, |b, g| {
            b.iter(|| analyze(black_box(g), &AnalyzeOptions::default()).unwrap())
        });
    }
    group.finish();
}

fn cycles_on_random(c: &mut Criterion) {
    let graphs: Vec<_> = case_seeds(1, 16).into_iter().map(|s| gen_random_minimal(s, 12)).collect();
    c.bench_function("giraud_delta/16 random, <= 12 vertices", |b| {
        b.iter(|| graphs.iter().map(|g| cycles::giraud_delta(black_box(g)).unwrap()).sum::<u64>())
    });
}

fn realization(c: &mut Criterion) {
    let t = assemble_from_heights(&fixtures::note()).unwrap().canonicalize();
    c.bench_function("realize+verify/note", |b| {
        b.iter(|| {
            let m = realize(black_box(&t)).unwrap();
            verify(&m, &t)
        })
    });
}

fn fuzz(c: &mut Criterion) {
    let mut group = c.benchmark_group("fuzz");
    group.sample_size(10);
    group.bench_function("20 graphs, <= 10 vertices", |b| b.iter(|| check::run_fuzz(black_box(42), 20, 10)));
    group.finish();
}

criterion_group!(benches, fixtures_analyze, cycles_on_random, realization, fuzz);
criterion_main!(benches);
