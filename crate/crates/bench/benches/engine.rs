use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use nrecur_bench::shuffled_family;
use nrecur_core::engine::dense_oracle_run;

const STEPS: u64 = 100_000;

fn sparse_engine(c: &mut Criterion) {
    let mut group = c.benchmark_group("engine/sparse");
    group.throughput(Throughput::Elements(STEPS));
    for m in [6, 11, 16] {
        let (y, cs) = shuffled_family(m).swap_remove(0);
        group.bench_with_input(BenchmarkId::new("y", m), &m, |b, _| {
            b.iter(|| {
                let mut sim = cs.simulate(&y.init).unwrap();
                sim.skip_steps(STEPS);
                sim.state().popcount()
            })
        });
    }
    group.finish();
}

fn dense_oracle(c: &mut Criterion) {
    let mut group = c.benchmark_group("engine/dense_oracle");
    group.sample_size(10);
    let steps = 2_000;
    group.throughput(Throughput::Elements(steps));
    let (y, _) = shuffled_family(6).swap_remove(0);
    group.bench_function("y/6", |b| {
        b.iter(|| dense_oracle_run(&y, &y.init, steps).unwrap())
    });
    group.finish();
}

criterion_group!(benches, sparse_engine, dense_oracle);
criterion_main!(benches);
