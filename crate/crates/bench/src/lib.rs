//! Deterministic fixtures shared by the benchmarks.

use pfc_core::NonnegativeMatrix;

/// Dense positive matrix with entries in `[0.1, 1.1)` from a fixed
/// quadratic-residue pattern.
pub fn dense(n: usize) -> NonnegativeMatrix {
    let entries = (0..n * n)
        .map(|k| 0.1 + ((k * k + 7 * k + 3) % 101) as f64 / 101.0)
        .collect();
    NonnegativeMatrix::new(n, entries).expect("valid size")
}

/// Irreducible matrix with a Hamiltonian cycle plus every `stride`-th
/// extra edge; period 1 unless `stride` is 0.
pub fn sparse_cycle(n: usize, stride: usize) -> NonnegativeMatrix {
    let mut entries = vec![0.0; n * n];
    for i in 0..n {
        entries[i * n + (i + 1) % n] = 1.0;
        if stride > 0 && i % stride == 0 {
            entries[i * n + i] = 0.5;
        }
    }
    NonnegativeMatrix::new(n, entries).expect("valid size")
}

/// Block-cyclic matrix with `m` classes of `size` indices each.
pub fn block_cyclic(m: usize, size: usize) -> NonnegativeMatrix {
    let n = m * size;
    let mut entries = vec![0.0; n * n];
    for i in 0..n {
        let next = (i / size + 1) % m;
        for j in next * size..(next + 1) * size {
            entries[i * n + j] = 0.2 + ((i * 31 + j * 17) % 13) as f64 / 13.0;
        }
    }
    NonnegativeMatrix::new(n, entries).expect("valid size")
}
