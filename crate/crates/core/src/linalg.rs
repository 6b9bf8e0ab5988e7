//! Small dense kernels shared by the solvers: LU with partial pivoting on
//! row-major real data, and a few vector helpers.

pub(crate) struct Lu {
    n: usize,
    data: Vec<f64>,
    perm: Vec<usize>,
    sign: f64,
    singular: bool,
}

impl Lu {
    pub(crate) fn factor(n: usize, mut data: Vec<f64>) -> Lu {
        debug_assert_eq!(data.len(), n * n);
        let mut perm: Vec<usize> = (0..n).collect();
        let mut sign = 1.0;
        let mut singular = false;
        for k in 0..n {
            let mut pivot = k;
            let mut best = data[k * n + k].abs();
            for i in (k + 1)..n {
                let v = data[i * n + k].abs();
                if v > best {
                    best = v;
                    pivot = i;
                }
            }
            if best == 0.0 {
                singular = true;
                continue;
            }
            if pivot != k {
                for j in 0..n {
                    data.swap(k * n + j, pivot * n + j);
                }
                perm.swap(k, pivot);
                sign = -sign;
            }
            let d = data[k * n + k];
            for i in (k + 1)..n {
                let f = data[i * n + k] / d;
                if f == 0.0 {
                    continue;
                }
                data[i * n + k] = f;
                for j in (k + 1)..n {
                    data[i * n + j] -= f * data[k * n + j];
                }
            }
        }
        Lu {
            n,
            data,
            perm,
            sign,
            singular,
        }
    }

    pub(crate) fn det(&self) -> f64 {
        if self.singular {
            return 0.0;
        }
        (0..self.n).fold(self.sign, |acc, k| acc * self.data[k * self.n + k])
    }

    pub(crate) fn solve(&self, b: &[f64]) -> Option<Vec<f64>> {
        if self.singular {
            return None;
        }
        let n = self.n;
        let mut x: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let row = &self.data[i * n..i * n + i];
            x[i] -= row.iter().zip(&x[..i]).map(|(l, v)| l * v).sum::<f64>();
        }
        for i in (0..n).rev() {
            let row = &self.data[i * n + i + 1..(i + 1) * n];
            let s = x[i] - row.iter().zip(&x[i + 1..]).map(|(u, v)| u * v).sum::<f64>();
            x[i] = s / self.data[i * n + i];
        }
        x.iter().all(|v| v.is_finite()).then_some(x)
    }
}

/// Determinant of a row-major `n x n` matrix; the empty matrix has determinant 1.
pub(crate) fn det(n: usize, data: Vec<f64>) -> f64 {
    if n == 0 {
        return 1.0;
    }
    Lu::factor(n, data).det()
}

pub(crate) fn norm1(x: &[f64]) -> f64 {
    x.iter().map(|v| v.abs()).sum()
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn det_of_small_matrices() {
        assert_eq!(det(0, vec![]), 1.0);
        assert!((det(2, vec![1.0, 2.0, 3.0, 4.0]) + 2.0).abs() < 1e-14);
        // needs a row swap
        assert!((det(2, vec![0.0, 1.0, 1.0, 0.0]) + 1.0).abs() < 1e-14);
        assert_eq!(det(2, vec![1.0, 2.0, 2.0, 4.0]), 0.0);
    }

    #[test]
    fn solve_recovers_rhs() {
        let a = vec![4.0, 1.0, 0.0, 1.0, 3.0, 1.0, 0.0, 1.0, 2.0];
        let lu = Lu::factor(3, a.clone());
        let x = lu.solve(&[1.0, 2.0, 3.0]).unwrap();
        for i in 0..3 {
            let r: f64 = (0..3).map(|j| a[i * 3 + j] * x[j]).sum();
            assert!((r - (i as f64 + 1.0)).abs() < 1e-13);
        }
        assert!(Lu::factor(2, vec![1.0, 1.0, 1.0, 1.0])
            .solve(&[1.0, 0.0])
            .is_none());
    }
}
