use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use pfc_bench::{block_cyclic, sparse_cycle};
use pfc_core::structure::{cyclic_normal_form, is_irreducible, is_primitive};

fn structure(c: &mut Criterion) {
    let mut group = c.benchmark_group("structure");
    for n in [16, 64, 128] {
        let a = sparse_cycle(n, 5);
        group.bench_with_input(BenchmarkId::new("is_irreducible", n), &a, |b, a| {
            b.iter(|| is_irreducible(black_box(a)))
        });
        group.bench_with_input(BenchmarkId::new("is_primitive", n), &a, |b, a| {
            b.iter(|| is_primitive(black_box(a)))
        });
    }
    let a = block_cyclic(6, 8);
    group.bench_function("cyclic_normal_form/48", |b| {
        b.iter(|| cyclic_normal_form(black_box(&a)).unwrap())
    });
    group.finish();
}

criterion_group!(benches, structure);
criterion_main!(benches);
