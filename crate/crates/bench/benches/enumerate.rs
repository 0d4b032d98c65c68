use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use schubert_bench::{full_flag, lie};
use schubert_core::enumerate_cosets;

fn cosets(c: &mut Criterion) {
    let mut g = c.benchmark_group("enumerate");
    g.bench_function("F4/P1", |b| b.iter(|| enumerate_cosets(black_box(lie("F4")), &[1]).unwrap()));
    g.bench_function("E7/P2", |b| b.iter(|| enumerate_cosets(black_box(lie("E7")), &[2]).unwrap()));
    g.bench_function("F4/T", |b| b.iter(|| full_flag(black_box(lie("F4")), None)));
    g.sample_size(10);
    g.bench_function("E6/T", |b| b.iter(|| full_flag(black_box(lie("E6")), None)));
    g.finish();
}

criterion_group!(benches, cosets);
criterion_main!(benches);
