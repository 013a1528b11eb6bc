//! Benchmarks for the expand / reduce / kernelize / search pipeline, plus a
//! comparison of the data-parallel kernelizer against a single worker.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use qbffpt::cgis::build_cgis;
use qbffpt::expansion::{expand_all, Expansion};
use qbffpt::forge::{random_qdcnf, PrefixShape};
use qbffpt::formula::QbfInstance;
use qbffpt::kernel::{kernelize, KernelMode};
use qbffpt::search::{solve, Method, SolveOptions};

fn workload(n: usize) -> QbfInstance {
    random_qdcnf(n, 2, 3, 2 * n, PrefixShape::Ae, 0xBE7C).expect("feasible workload")
}

fn bench_solve(c: &mut Criterion) {
    let mut group = c.benchmark_group("fpt_solve");
    group.sample_size(10);
    for n in [100usize, 1_000, 10_000] {
        let inst = workload(n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &inst, |b, inst| {
            b.iter(|| solve(inst, Method::Fpt, &SolveOptions::default()).unwrap())
        });
    }
    group.finish();
}

fn bench_stages(c: &mut Criterion) {
    let inst = workload(1_000);
    let taut = match expand_all(&inst, true) {
        Expansion::Open(t) => t,
        Expansion::Decided(_) => unreachable!("workload stays open"),
    };
    let graph = build_cgis(&taut);

    let mut group = c.benchmark_group("stages");
    group.sample_size(10);
    group.bench_function("expand", |b| b.iter(|| expand_all(&inst, true)));
    group.bench_function("reduce", |b| b.iter(|| build_cgis(&taut)));
    group.bench_function("kernelize", |b| {
        b.iter(|| kernelize(&graph, KernelMode::Safe))
    });
    group.finish();
}

/// Same kernelization workload on the default pool and on a single-thread
/// pool, to measure what the data parallelism buys (or costs) on this host.
#[cfg(feature = "parallel")]
fn bench_thread_pools(c: &mut Criterion) {
    let inst = workload(10_000);
    let taut = match expand_all(&inst, true) {
        Expansion::Open(t) => t,
        Expansion::Decided(_) => unreachable!("workload stays open"),
    };
    let graph = build_cgis(&taut);

    let single = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .expect("single-thread pool");

    let mut group = c.benchmark_group("kernelize_pools");
    group.sample_size(10);
    group.bench_function("default_pool", |b| {
        b.iter(|| kernelize(&graph, KernelMode::Safe))
    });
    group.bench_function("one_thread", |b| {
        b.iter(|| single.install(|| kernelize(&graph, KernelMode::Safe)))
    });
    group.finish();
}

#[cfg(not(feature = "parallel"))]
fn bench_thread_pools(_: &mut Criterion) {}

criterion_group!(benches, bench_solve, bench_stages, bench_thread_pools);
criterion_main!(benches);
