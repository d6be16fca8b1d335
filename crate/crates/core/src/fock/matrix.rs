use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use num_complex::Complex64;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Dense square complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl DenseMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Self { dim, data }
    }

    /// `|u><v|`.
    pub fn outer(u: &[Complex64], v: &[Complex64]) -> Self {
        assert_eq!(u.len(), v.len());
        Self::from_fn(u.len(), |i, j| u[i] * v[j].conj())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.dim).map(|i| self[(i, j)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)])
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim);
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            let out_row = &mut out.data[i * n..(i + 1) * n];
            for (k, &a) in self.row(i).iter().enumerate() {
                if a == ZERO {
                    continue;
                }
                for (o, &b) in out_row.iter_mut().zip(rhs.row(k)) {
                    *o += a * b;
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.dim, v.len());
        (0..self.dim)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|x| x * c).collect(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim);
        Self {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim);
        Self {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    /// Explicit Kronecker product `self (x) rhs`, first factor major.
    pub fn kron(&self, rhs: &Self) -> Self {
        let (n, m) = (self.dim, rhs.dim);
        Self::from_fn(n * m, |r, c| self[(r / m, c / m)] * rhs[(r % m, c % m)])
    }

    pub fn max_abs(&self) -> f64 {
        self.max_abs_on_block(self.dim)
    }

    /// Largest entry magnitude within the leading `block x block` sub-matrix.
    pub fn max_abs_on_block(&self, block: usize) -> f64 {
        let block = block.min(self.dim);
        let mut max = 0.0f64;
        for i in 0..block {
            for x in &self.row(i)[..block] {
                max = max.max(x.norm());
            }
        }
        max
    }

    /// `max |M - M^dagger|`.
    pub fn hermiticity_residual(&self) -> f64 {
        let mut max = 0.0f64;
        for i in 0..self.dim {
            for j in i..self.dim {
                max = max.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        max
    }
}

impl Index<(usize, usize)> for DenseMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for DenseMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.dim + j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn matmul_against_hand_product() {
        let a = DenseMatrix::from_fn(2, |i, j| c((i + 2 * j) as f64, 1.0));
        let b = DenseMatrix::from_fn(2, |i, j| c(1.0, (i * j) as f64));
        let p = a.matmul(&b);
        for i in 0..2 {
            for j in 0..2 {
                let expected: Complex64 = (0..2).map(|k| a[(i, k)] * b[(k, j)]).sum();
                assert_eq!(p[(i, j)], expected);
            }
        }
    }

    #[test]
    fn kron_layout() {
        let a = DenseMatrix::from_fn(2, |i, j| c((2 * i + j) as f64, 0.0));
        let b = DenseMatrix::from_fn(3, |i, j| c(0.0, (3 * i + j) as f64));
        let k = a.kron(&b);
        assert_eq!(k.dim(), 6);
        assert_eq!(k[(4, 2)], a[(1, 0)] * b[(1, 2)]);
        assert_eq!(k[(5, 5)], a[(1, 1)] * b[(2, 2)]);
    }

    #[test]
    fn outer_is_hermitian_for_equal_vectors() {
        let v = [c(0.3, -0.2), c(1.0, 0.5), c(-0.7, 0.1)];
        assert_eq!(DenseMatrix::outer(&v, &v).hermiticity_residual(), 0.0);
    }
}
