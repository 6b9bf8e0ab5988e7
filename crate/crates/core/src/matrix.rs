//! Dense nonnegative matrices, complex matrices and ordered vectors.
//!
//! Storage is row-major. A [`NonnegativeMatrix`] can only be built from
//! entries that are nonnegative; tiny negative values produced by upstream
//! round-off (down to `-CLAMP_TOL`) are clamped to zero and the matrix
//! remembers that it was clamped.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest supported dimension.
pub const MAX_DIM: usize = 512;

/// Negative entries down to this magnitude are clamped to zero.
pub const CLAMP_TOL: f64 = 1e-12;

/// A normalized coordinate counts as strictly positive above this threshold.
pub const POSITIVITY_TOL: f64 = 1e-12;

fn check_dim(n: usize) -> Result<()> {
    if n == 0 || n > MAX_DIM {
        return Err(Error::InvalidDimension(n));
    }
    Ok(())
}

/// Verdict of the entrywise partial order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EntrywiseOrder {
    Eq,
    StrictLt,
    Leq,
    StrictGt,
    Geq,
    Incomparable,
}

/// Compares two equally sized slices in the entrywise order.
///
/// `StrictLt`/`StrictGt` require strict inequality in every coordinate and
/// take precedence over `Leq`/`Geq`.
pub fn entrywise_cmp(a: &[f64], b: &[f64]) -> Result<EntrywiseOrder> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    let (mut lt, mut gt, mut eq) = (0usize, 0usize, 0usize);
    for (x, y) in a.iter().zip(b) {
        if x < y {
            lt += 1;
        } else if x > y {
            gt += 1;
        } else if x == y {
            eq += 1;
        } else {
            return Ok(EntrywiseOrder::Incomparable);
        }
    }
    let n = a.len();
    Ok(match (lt, gt) {
        (0, 0) if eq == n => EntrywiseOrder::Eq,
        (l, 0) if l == n => EntrywiseOrder::StrictLt,
        (_, 0) => EntrywiseOrder::Leq,
        (0, g) if g == n => EntrywiseOrder::StrictGt,
        (0, _) => EntrywiseOrder::Geq,
        _ => EntrywiseOrder::Incomparable,
    })
}

/// Square matrix with entrywise nonnegative real entries.
#[derive(Debug, Clone, PartialEq)]
pub struct NonnegativeMatrix {
    n: usize,
    entries: Vec<f64>,
    clamped: bool,
}

impl NonnegativeMatrix {
    pub fn new(n: usize, entries: Vec<f64>) -> Result<Self> {
        check_dim(n)?;
        if entries.len() != n * n {
            return Err(Error::EntryCount {
                expected: n * n,
                got: entries.len(),
            });
        }
        let mut entries = entries;
        let mut clamped = false;
        for (k, v) in entries.iter_mut().enumerate() {
            let (row, col) = (k / n, k % n);
            if !v.is_finite() {
                return Err(Error::NonFiniteEntry { row, col });
            }
            if *v < -CLAMP_TOL {
                return Err(Error::NegativeEntry {
                    row,
                    col,
                    value: *v,
                });
            }
            if *v < 0.0 {
                *v = 0.0;
                clamped = true;
            }
        }
        Ok(NonnegativeMatrix {
            n,
            entries,
            clamped,
        })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for r in rows {
            let r = r.as_ref();
            if r.len() != n {
                return Err(Error::DimensionMismatch {
                    left: n,
                    right: r.len(),
                });
            }
            entries.extend_from_slice(r);
        }
        Self::new(n, entries)
    }

    pub fn zeros(n: usize) -> Result<Self> {
        Self::new(n, vec![0.0; n * n])
    }

    pub fn identity(n: usize) -> Result<Self> {
        let mut m = Self::zeros(n)?;
        for i in 0..n {
            m.entries[i * n + i] = 1.0;
        }
        Ok(m)
    }

    /// Permutation matrix sending basis vector `j` to `perm[j]`.
    pub fn permutation(perm: &[usize]) -> Result<Self> {
        let n = perm.len();
        let mut m = Self::zeros(n)?;
        for (j, &i) in perm.iter().enumerate() {
            m.entries[i * n + j] = 1.0;
        }
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    /// Whether construction clamped round-off negatives to zero.
    pub fn clamped(&self) -> bool {
        self.clamped
    }

    pub fn is_strictly_positive(&self) -> bool {
        self.entries.iter().all(|&v| v > 0.0)
    }

    /// Maximum absolute column sum.
    pub fn norm1(&self) -> f64 {
        (0..self.n)
            .map(|j| (0..self.n).map(|i| self.get(i, j)).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub(crate) fn mul_slice(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn apply(&self, x: &OrderedVector) -> Result<OrderedVector> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: x.len(),
            });
        }
        Ok(OrderedVector::from_vec(self.mul_slice(x.coords())))
    }

    pub fn matmul(&self, other: &NonnegativeMatrix) -> Result<NonnegativeMatrix> {
        if other.n != self.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: other.n,
            });
        }
        let n = self.n;
        let mut out = vec![0.0; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.entries[i * n + k];
                if a == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out[i * n + j] += a * other.entries[k * n + j];
                }
            }
        }
        Ok(NonnegativeMatrix {
            n,
            entries: out,
            clamped: false,
        })
    }

    /// `self^p` by repeated squaring; `p = 0` gives the identity.
    pub fn pow(&self, mut p: u64) -> NonnegativeMatrix {
        let mut result = NonnegativeMatrix::identity(self.n).expect("valid dimension");
        let mut base = self.clone();
        while p > 0 {
            if p & 1 == 1 {
                result = result.matmul(&base).expect("same dimension");
            }
            p >>= 1;
            if p > 0 {
                base = base.matmul(&base).expect("same dimension");
            }
        }
        result
    }

    /// `(I + A) / 2`, which has the same eigenvectors as `A`.
    pub fn half_shifted(&self) -> NonnegativeMatrix {
        let n = self.n;
        let mut entries: Vec<f64> = self.entries.iter().map(|v| 0.5 * v).collect();
        for i in 0..n {
            entries[i * n + i] += 0.5;
        }
        NonnegativeMatrix {
            n,
            entries,
            clamped: false,
        }
    }

    /// `P^T A P` for the permutation listing old indices in their new order
    /// (`perm[new] = old`).
    pub fn permuted(&self, perm: &[usize]) -> Result<NonnegativeMatrix> {
        if perm.len() != self.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: perm.len(),
            });
        }
        let n = self.n;
        let entries = (0..n * n)
            .map(|k| self.get(perm[k / n], perm[k % n]))
            .collect();
        Ok(NonnegativeMatrix {
            n,
            entries,
            clamped: false,
        })
    }

    /// Principal submatrix with row and column `j` deleted, row-major.
    pub(crate) fn minor_without(&self, j: usize) -> Vec<f64> {
        let n = self.n;
        let mut out = Vec::with_capacity((n - 1) * (n - 1));
        for r in (0..n).filter(|&r| r != j) {
            for c in (0..n).filter(|&c| c != j) {
                out.push(self.get(r, c));
            }
        }
        out
    }

    pub fn cmp_entrywise(&self, other: &NonnegativeMatrix) -> Result<EntrywiseOrder> {
        entrywise_cmp(&self.entries, &other.entries)
    }

    pub fn to_dmatrix(&self) -> DMatrix<f64> {
        DMatrix::from_row_slice(self.n, self.n, &self.entries)
    }
}

/// Square matrix with complex entries.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    n: usize,
    entries: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn new(n: usize, entries: Vec<Complex64>) -> Result<Self> {
        check_dim(n)?;
        if entries.len() != n * n {
            return Err(Error::EntryCount {
                expected: n * n,
                got: entries.len(),
            });
        }
        if let Some(k) = entries
            .iter()
            .position(|z| !(z.re.is_finite() && z.im.is_finite()))
        {
            return Err(Error::NonFiniteEntry {
                row: k / n,
                col: k % n,
            });
        }
        Ok(ComplexMatrix { n, entries })
    }

    pub fn from_rows<R: AsRef<[Complex64]>>(rows: &[R]) -> Result<Self> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for r in rows {
            let r = r.as_ref();
            if r.len() != n {
                return Err(Error::DimensionMismatch {
                    left: n,
                    right: r.len(),
                });
            }
            entries.extend_from_slice(r);
        }
        Self::new(n, entries)
    }

    pub fn from_real(n: usize, entries: &[f64]) -> Result<Self> {
        Self::new(n, entries.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.n + j]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn mul_vec(&self, x: &[Complex64]) -> Vec<Complex64> {
        (0..self.n)
            .map(|i| {
                self.entries[i * self.n..(i + 1) * self.n]
                    .iter()
                    .zip(x)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    pub fn to_dmatrix(&self) -> DMatrix<Complex64> {
        DMatrix::from_row_slice(self.n, self.n, &self.entries)
    }
}

/// Entrywise modulus `|M|`.
pub fn entrywise_abs(m: &ComplexMatrix) -> NonnegativeMatrix {
    NonnegativeMatrix {
        n: m.n,
        entries: m.entries.iter().map(|z| z.norm()).collect(),
        clamped: false,
    }
}

/// Real vector with its 1-norm cached.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderedVector {
    coords: Vec<f64>,
    norm1: f64,
}

impl OrderedVector {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if let Some(index) = coords.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteEntry { row: index, col: 0 });
        }
        Ok(Self::from_vec(coords))
    }

    pub(crate) fn from_vec(coords: Vec<f64>) -> Self {
        let norm1 = coords.iter().map(|v| v.abs()).sum();
        OrderedVector { coords, norm1 }
    }

    /// Barycenter of the unit simplex.
    pub fn uniform(n: usize) -> Self {
        Self::from_vec(vec![1.0 / n as f64; n])
    }

    pub fn basis(n: usize, i: usize) -> Self {
        let mut c = vec![0.0; n];
        c[i] = 1.0;
        Self::from_vec(c)
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.coords
    }

    pub fn norm1(&self) -> f64 {
        self.norm1
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.coords.iter().all(|&v| v >= 0.0)
    }

    /// Every coordinate of the 1-normalized vector exceeds [`POSITIVITY_TOL`].
    pub fn is_strictly_positive(&self) -> bool {
        self.norm1 > 0.0 && self.coords.iter().all(|&v| v / self.norm1 > POSITIVITY_TOL)
    }

    pub(crate) fn check_nonnegative(&self) -> Result<()> {
        if let Some((index, &value)) = self.coords.iter().enumerate().find(|(_, v)| **v < 0.0) {
            return Err(Error::NegativeCoordinate { index, value });
        }
        if self.norm1 == 0.0 {
            return Err(Error::ZeroVector);
        }
        Ok(())
    }

    pub fn normalize_1(&self) -> Result<OrderedVector> {
        if self.norm1 == 0.0 {
            return Err(Error::ZeroVector);
        }
        let coords: Vec<f64> = self.coords.iter().map(|v| v / self.norm1).collect();
        Ok(Self::from_vec(coords))
    }

    pub fn cmp_entrywise(&self, other: &OrderedVector) -> Result<EntrywiseOrder> {
        entrywise_cmp(&self.coords, &other.coords)
    }
}

/// Matrix-vector product `A x`.
pub fn apply(a: &NonnegativeMatrix, x: &OrderedVector) -> Result<OrderedVector> {
    a.apply(x)
}

/// Rescales `x` to unit 1-norm.
pub fn normalize_1(x: &OrderedVector) -> Result<OrderedVector> {
    x.normalize_1()
}
