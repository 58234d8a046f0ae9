use std::time::Duration;

use circumpoly::*;
use circumpoly_bench::corpus;
use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

fn solve_corpus(c: &mut Criterion) {
    let mut group = c.benchmark_group("solve");
    for n in [3, 5, 8] {
        let fams = corpus(n, 20);
        group.bench_with_input(BenchmarkId::new("segments", n), &fams, |b, fams| {
            b.iter(|| {
                fams.iter()
                    .filter(|f| solve(f, &SolveConfig::default()).unwrap().verdict.is_feasible())
                    .count()
            })
        });
    }
    group.finish();
}

fn brute_vs_pruned(c: &mut Criterion) {
    let fams = corpus(4, 10);
    let mut group = c.benchmark_group("4 segments");
    group.bench_function("pruned", |b| {
        b.iter(|| {
            fams.iter()
                .map(|f| solve(f, &SolveConfig::default()).unwrap().stats.nodes_expanded)
                .sum::<u64>()
        })
    });
    group.bench_function("no prunes", |b| {
        let cfg = SolveConfig::default().with_no_prunes();
        b.iter(|| {
            fams.iter()
                .map(|f| solve(f, &cfg).unwrap().stats.nodes_expanded)
                .sum::<u64>()
        })
    });
    group.bench_function("brute force", |b| {
        b.iter(|| {
            fams.iter()
                .filter(|f| brute_force_solve(f, 12).unwrap().verdict.is_feasible())
                .count()
        })
    });
    group.finish();
}

fn s2(c: &mut Criterion) {
    let lf = build_s2();
    c.bench_function("replay_s2", |b| b.iter(|| replay_s2(black_box(&lf)).unwrap().overall));
    // a fixed slice of the full search, for node throughput
    let cfg = SolveConfig {
        node_limit: 100_000,
        time_limit: Duration::from_secs(60),
        ..SolveConfig::default()
    };
    let mut group = c.benchmark_group("s2");
    group.sample_size(10);
    group.bench_function("100k nodes", |b| {
        b.iter(|| solve(lf.family(), &cfg).unwrap().stats.nodes_expanded)
    });
    group.finish();
}

criterion_group!(benches, solve_corpus, brute_vs_pruned, s2);
criterion_main!(benches);
