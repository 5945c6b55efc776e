use criterion::{criterion_group, criterion_main, Criterion};
use nrecur_bench::shuffled_family;
use nrecur_core::cycles::{detect_cycle, verify_predicted};

fn detection(c: &mut Criterion) {
    let mut group = c.benchmark_group("cycles");
    group.sample_size(10);
    let family = shuffled_family(11);
    let (y, cs) = &family[0];
    group.bench_function("detect/y/11", |b| {
        b.iter(|| detect_cycle(cs, &y.init, 1_000_000).unwrap())
    });
    group.bench_function("verify/y/11", |b| {
        b.iter(|| verify_predicted(cs, &y.init, 0, 62031).unwrap())
    });
    let (z, cs) = &family[3];
    group.bench_function("detect/z2/11", |b| {
        b.iter(|| detect_cycle(cs, &z.init, 1_000_000).unwrap())
    });
    group.finish();
}

criterion_group!(benches, detection);
criterion_main!(benches);
