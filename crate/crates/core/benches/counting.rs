//! Parallel versus sequential brute-force counting on the workbench's two
//! hot loops: enumerating interpretations of one counting problem and
//! sweeping counts across sampled orders.

use criterion::{criterion_group, criterion_main, Criterion};
use specker_core::catalog::formulas;
use specker_core::counting::{check_coi, specker_count, CoiStrategy, CountTask};
use std::hint::black_box;

fn with_threads<T>(threads: usize, f: impl FnOnce() -> T + Send) -> T
where
    T: Send,
{
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .expect("pool")
        .install(f)
}

fn bench_specker_count(c: &mut Criterion) {
    let (vocab, phi) = formulas::equivalence_relations();
    let mut group = c.benchmark_group("specker_count/equivalence_n4");
    group.sample_size(10);
    group.bench_function("sequential", |b| {
        b.iter(|| {
            with_threads(1, || {
                let task = CountTask::new(&vocab, &phi, 4);
                black_box(specker_count(&task).unwrap())
            })
        })
    });
    group.bench_function("parallel", |b| {
        b.iter(|| {
            let task = CountTask::new(&vocab, &phi, 4);
            black_box(specker_count(&task).unwrap())
        })
    });
    group.finish();
}

fn bench_coi_sweep(c: &mut Criterion) {
    let (vocab, phi) = formulas::stirling2_ordered(2);
    let mut group = c.benchmark_group("coi_sweep/stirling2_ordered_n6");
    group.sample_size(10);
    group.bench_function("sequential", |b| {
        b.iter(|| {
            with_threads(1, || {
                let task = CountTask::new(&vocab, &phi, 6).ordered_natural();
                black_box(check_coi(&task, CoiStrategy::Sampled { seed: 7 }).unwrap())
            })
        })
    });
    group.bench_function("parallel", |b| {
        b.iter(|| {
            let task = CountTask::new(&vocab, &phi, 6).ordered_natural();
            black_box(check_coi(&task, CoiStrategy::Sampled { seed: 7 }).unwrap())
        })
    });
    group.finish();
}

criterion_group!(benches, bench_specker_count, bench_coi_sweep);
criterion_main!(benches);
