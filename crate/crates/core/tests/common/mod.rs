#![allow(dead_code)]

use pfc_core::nalgebra::DMatrix;
use pfc_core::num_complex::Complex64;
use pfc_core::structure::is_irreducible;
use pfc_core::NonnegativeMatrix;
use rand::seq::SliceRandom;
use rand::Rng;

/// Dense `U[0,1]` entries, or with probability `sparse` each entry zeroed.
pub fn random_nonnegative<R: Rng>(rng: &mut R, n: usize, sparse: f64) -> NonnegativeMatrix {
    let entries = (0..n * n)
        .map(|_| {
            if rng.random_bool(sparse) {
                0.0
            } else {
                rng.random::<f64>()
            }
        })
        .collect();
    NonnegativeMatrix::new(n, entries).unwrap()
}

pub fn random_irreducible<R: Rng>(rng: &mut R, n: usize, sparse: f64) -> NonnegativeMatrix {
    loop {
        let a = random_nonnegative(rng, n, sparse);
        if is_irreducible(&a).irreducible {
            return a;
        }
    }
}

/// Irreducible matrix whose support edges run from class `k` to class
/// `k + 1 mod m`, with `size` indices per class, shuffled. Returns the
/// matrix and the class of each index.
pub fn random_block_cyclic<R: Rng>(
    rng: &mut R,
    m: usize,
    size: usize,
) -> (NonnegativeMatrix, Vec<usize>) {
    let n = m * size;
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    // order[position] = index; class of position p is p / size
    let mut class = vec![0; n];
    for (pos, &i) in order.iter().enumerate() {
        class[i] = pos / size;
    }
    loop {
        let mut entries = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                if class[j] == (class[i] + 1) % m && !rng.random_bool(0.3) {
                    entries[i * n + j] = 0.1 + rng.random::<f64>();
                }
            }
        }
        let a = NonnegativeMatrix::new(n, entries).unwrap();
        if is_irreducible(&a).irreducible {
            return (a, class);
        }
    }
}

/// Eigenvalues from `nalgebra` directly, sorted by decreasing modulus.
pub fn oracle_eigenvalues(a: &NonnegativeMatrix) -> Vec<Complex64> {
    let n = a.dim();
    let m = DMatrix::from_row_slice(n, n, a.entries());
    let mut ev: Vec<Complex64> = m.complex_eigenvalues().iter().copied().collect();
    ev.sort_by(|x, y| y.norm().total_cmp(&x.norm()));
    ev
}

pub fn oracle_radius(a: &NonnegativeMatrix) -> f64 {
    oracle_eigenvalues(a).first().map_or(0.0, |z| z.norm())
}

/// Largest distance under a minimum-cost-first greedy matching.
pub fn multiset_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let mut pairs: Vec<(f64, usize, usize)> = Vec::new();
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            pairs.push(((x - y).norm(), i, j));
        }
    }
    pairs.sort_by(|p, q| p.0.total_cmp(&q.0));
    let mut used_a = vec![false; a.len()];
    let mut used_b = vec![false; b.len()];
    let mut worst: f64 = 0.0;
    for (d, i, j) in pairs {
        if !used_a[i] && !used_b[j] {
            used_a[i] = true;
            used_b[j] = true;
            worst = worst.max(d);
        }
    }
    worst
}

/// `(I + A)^(n-1) > 0` with saturating 0/1 arithmetic.
pub fn boolean_oracle(a: &NonnegativeMatrix) -> bool {
    let n = a.dim();
    let base: Vec<u8> = (0..n * n)
        .map(|k| u8::from(a.entries()[k] > 0.0 || k / n == k % n))
        .collect();
    let mut acc: Vec<u8> = (0..n * n).map(|k| u8::from(k / n == k % n)).collect();
    for _ in 1..n {
        let mut next = vec![0u8; n * n];
        for i in 0..n {
            for j in 0..n {
                next[i * n + j] =
                    u8::from((0..n).any(|k| acc[i * n + k] == 1 && base[k * n + j] == 1));
            }
        }
        acc = next;
    }
    acc.iter().all(|&v| v == 1)
}
