use std::sync::Arc;

use criterion::{criterion_group, criterion_main, Criterion};

use ghwlab::code::{CodeParams, CyclicCode};
use ghwlab::field::build_field;
use ghwlab::ghw;

fn build(p: u64, s: u32, m: u32, e: u64, t: usize, a: u64, delta: Vec<u64>) -> CyclicCode {
    let spec = Arc::new(build_field(p, s, m).unwrap());
    CyclicCode::build(spec, CodeParams { e, t, a, delta }).unwrap()
}

fn bench_oracle(c: &mut Criterion) {
    let progression = build(7, 1, 2, 3, 2, 1, vec![0, 1]);
    let binary = build(2, 1, 4, 3, 2, 1, vec![0, 1]);

    let mut group = c.benchmark_group("rank2_oracle");
    group.bench_function("q7_progression_default", |b| {
        b.iter(|| ghw::ghw_bruteforce(&progression, 2, 1 << 30).unwrap())
    });
    group.bench_function("q7_progression_sequential", |b| {
        b.iter(|| ghw::ghw_bruteforce_seq(&progression, 2, 1 << 30).unwrap())
    });
    group.bench_function("q2_m4_default", |b| {
        b.iter(|| ghw::ghw_bruteforce(&binary, 2, 1 << 30).unwrap())
    });
    group.bench_function("q2_m4_sequential", |b| {
        b.iter(|| ghw::ghw_bruteforce_seq(&binary, 2, 1 << 30).unwrap())
    });
    group.finish();
}

criterion_group!(benches, bench_oracle);
criterion_main!(benches);
