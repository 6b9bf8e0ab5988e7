use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use pfc_bench::{block_cyclic, dense};
use pfc_core::perron::{perron_irreducible, simplicity_check, DEFAULT_TOL};

fn perron(c: &mut Criterion) {
    let mut group = c.benchmark_group("perron_irreducible");
    for n in [4, 10, 32, 64] {
        let a = dense(n);
        group.bench_with_input(BenchmarkId::new("dense", n), &a, |b, a| {
            b.iter(|| perron_irreducible(black_box(a), DEFAULT_TOL).unwrap())
        });
    }
    for m in [2, 5] {
        let a = block_cyclic(m, 4);
        group.bench_with_input(BenchmarkId::new("periodic", m), &a, |b, a| {
            b.iter(|| perron_irreducible(black_box(a), DEFAULT_TOL).unwrap())
        });
    }
    group.finish();

    let a = dense(10);
    let rho = perron_irreducible(&a, DEFAULT_TOL).unwrap().rho;
    c.bench_function("simplicity_check/10", |b| {
        b.iter(|| simplicity_check(black_box(&a), rho).unwrap())
    });
}

criterion_group!(benches, perron);
criterion_main!(benches);
