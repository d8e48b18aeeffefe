//! Degreewise work on a single-thread pool versus the default rayon pool.

use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use gdpa::algebra::AlgebraContext;
use gdpa::module::{resolve, PresentedModule};
use gdpa::ring::Ring;

fn workloads() -> Vec<(&'static str, PresentedModule, i64)> {
    let z = Ring::Integers;
    let ctx = AlgebraContext::classical(&z);
    let rels: Vec<(i64, _)> = (1..=24).map(|n| (n, z.one())).collect();
    let residue = PresentedModule::cyclic(&ctx, &rels).unwrap();
    let mixed = PresentedModule::from_i64(&ctx, vec![0, 1, 2], vec![3, 4], &[vec![6, 2, 1], vec![0, 4, 3]]).unwrap();
    vec![("residue_z", residue, 24), ("mixed_z", mixed, 30)]
}

fn bench(c: &mut Criterion) {
    let single = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let mut group = c.benchmark_group("resolve");
    group.sample_size(10);
    for (name, m, horizon) in workloads() {
        group.bench_with_input(BenchmarkId::new("sequential", name), &m, |b, m| {
            b.iter(|| single.install(|| black_box(resolve(m, 3, horizon).unwrap())))
        });
        group.bench_with_input(BenchmarkId::new("parallel", name), &m, |b, m| {
            b.iter(|| black_box(resolve(m, 3, horizon).unwrap()))
        });
    }
    group.finish();
}

criterion_group!(benches, bench);
criterion_main!(benches);
