use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use pmtext_bench::synthetic_log;
use pmtext_core::abstraction::{abstract_dfg, abstract_variants, Budget};
use pmtext_core::discovery::{discover_dfg, discover_temporal_profile, discover_variants};

fn discovery(c: &mut Criterion) {
    let mut group = c.benchmark_group("discovery");
    for cases in [1_000usize, 10_000] {
        let log = synthetic_log(42, cases);
        group.bench_with_input(BenchmarkId::new("dfg", cases), &log, |b, log| b.iter(|| discover_dfg(black_box(log))));
        group.bench_with_input(BenchmarkId::new("variants", cases), &log, |b, log| {
            b.iter(|| discover_variants(black_box(log)))
        });
        group.bench_with_input(BenchmarkId::new("temporal-profile", cases), &log, |b, log| {
            b.iter(|| discover_temporal_profile(black_box(log)))
        });
    }
    group.finish();
}

fn abstraction(c: &mut Criterion) {
    let log = synthetic_log(42, 10_000);
    let dfg = discover_dfg(&log);
    let variants = discover_variants(&log);
    let mut group = c.benchmark_group("abstraction");
    for budget in [1_000usize, 10_000] {
        group.bench_with_input(BenchmarkId::new("dfg", budget), &budget, |b, &n| {
            b.iter(|| abstract_dfg(black_box(&dfg), Budget::chars(n)))
        });
        group.bench_with_input(BenchmarkId::new("variants", budget), &budget, |b, &n| {
            b.iter(|| abstract_variants(black_box(&variants), Budget::chars(n)))
        });
    }
    group.finish();
}

criterion_group!(benches, discovery, abstraction);
criterion_main!(benches);
