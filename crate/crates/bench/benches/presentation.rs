use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use detmod_bench::{default_set, module};
use detmod_core::determinacy::is_s_determined;
use detmod_core::presentation::{build_presentation, default_test_points, verify_presentation};
use detmod_core::DEFAULT_MARGIN;

fn determinacy(c: &mut Criterion) {
    let mut group = c.benchmark_group("determinacy");
    for (n, side) in [(2, 4), (2, 8), (3, 3)] {
        let m = module(n, side, 3, 3, 1);
        let s = default_set(m.grid_box());
        group.bench_with_input(BenchmarkId::from_parameter(format!("{n}d-{side}")), &m, |b, m| {
            b.iter(|| is_s_determined(&m.view(), black_box(&s), true, DEFAULT_MARGIN).unwrap())
        });
    }
    group.finish();
}

fn presentation(c: &mut Criterion) {
    let mut group = c.benchmark_group("presentation");
    for (n, side) in [(2, 4), (2, 6), (3, 3)] {
        let m = module(n, side, 4, 4, 2);
        let s = default_set(m.grid_box());
        let id = format!("{n}d-{side}");
        group.bench_with_input(BenchmarkId::new("build", &id), &m, |b, m| {
            b.iter(|| build_presentation(&m.view(), black_box(&s), DEFAULT_MARGIN).unwrap())
        });
        let v = m.view();
        let p = build_presentation(&v, &s, DEFAULT_MARGIN).unwrap();
        let tests = default_test_points(&v, &s, DEFAULT_MARGIN).unwrap();
        group.bench_with_input(BenchmarkId::new("verify", &id), &p, |b, p| {
            b.iter(|| verify_presentation(&v, black_box(p), &tests).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, determinacy, presentation);
criterion_main!(benches);
