//! Small dense complex matrices and vectors.
//!
//! Everything here is row-major and sized for systems of a few qudits
//! (a few thousand basis states at most), so no blocking or BLAS.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::scalar::Real;

pub type C<T> = Complex<T>;

#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix<T: Real> {
    rows: usize,
    cols: usize,
    data: Vec<C<T>>,
}

impl<T: Real> CMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix {
            rows,
            cols,
            data: vec![C::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = C::one();
        }
        m
    }

    pub fn from_rows(rows: usize, cols: usize, data: Vec<C<T>>) -> Self {
        assert_eq!(
            data.len(),
            rows * cols,
            "row-major data has the wrong length"
        );
        CMatrix { rows, cols, data }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C<T>) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        CMatrix { rows, cols, data }
    }

    /// `|v⟩⟨v|`.
    pub fn outer(v: &[C<T>]) -> Self {
        Self::from_fn(v.len(), v.len(), |i, j| v[i] * v[j].conj())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> C<T> {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: C<T>) {
        self.data[i * self.cols + j] = v;
    }

    pub fn column(&self, j: usize) -> Vec<C<T>> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn scale(&self, s: C<T>) -> Self {
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&v| v * s).collect(),
        }
    }

    pub fn trace(&self) -> C<T> {
        (0..self.rows.min(self.cols))
            .map(|i| self.get(i, i))
            .fold(C::zero(), |a, b| a + b)
    }

    pub fn kron(&self, other: &Self) -> Self {
        let (r, c) = (self.rows * other.rows, self.cols * other.cols);
        Self::from_fn(r, c, |i, j| {
            self.get(i / other.rows, j / other.cols) * other.get(i % other.rows, j % other.cols)
        })
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matmul shape mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                let row = &other.data[k * other.cols..(k + 1) * other.cols];
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, &b) in dst.iter_mut().zip(row) {
                    *d = *d + a * b;
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[C<T>]) -> Vec<C<T>> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape mismatch");
        (0..self.rows)
            .map(|i| {
                self.data[i * self.cols..(i + 1) * self.cols]
                    .iter()
                    .zip(v)
                    .fold(C::zero(), |acc, (&a, &b)| acc + a * b)
            })
            .collect()
    }

    pub fn frobenius_norm(&self) -> T {
        self.data
            .iter()
            .fold(T::zero(), |acc, v| acc + v.norm_sqr())
            .sqrt()
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |acc, v| acc.max(v.norm()))
    }

    /// Largest singular value, by power iteration on `M†M`.
    ///
    /// The Frobenius norm bounds the result from above, so a zero matrix
    /// returns exactly zero.
    pub fn operator_norm(&self) -> T {
        let fro = self.frobenius_norm();
        if fro == T::zero() {
            return T::zero();
        }
        let gram = self.adjoint().matmul(self);
        let n = gram.rows;
        // Deterministic, generic start vector with support on every coordinate.
        let mut v: Vec<C<T>> = (0..n)
            .map(|i| {
                C::new(
                    T::one() + T::of(0.37 * i as f64).sin(),
                    T::of(0.11 * i as f64).cos(),
                )
            })
            .collect();
        normalize(&mut v);
        let mut lambda = T::zero();
        for _ in 0..500 {
            let mut w = gram.apply(&v);
            let nw = vec_norm(&w);
            if nw == T::zero() {
                break;
            }
            for x in w.iter_mut() {
                *x = *x / C::from(nw);
            }
            let converged = (nw - lambda).abs() <= T::of(1e-15) * nw.max(T::one());
            lambda = nw;
            v = w;
            if converged {
                break;
            }
        }
        lambda.sqrt().min(fro)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.is_square() && (self - &self.adjoint()).max_abs().as_f64() < tol
    }

    pub fn is_identity(&self, tol: f64) -> bool {
        self.is_square() && (self - &Self::identity(self.rows)).max_abs().as_f64() < tol
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && (self - other).max_abs().as_f64() < tol
    }

    /// Orthonormal basis of the column space, by modified Gram-Schmidt.
    pub fn column_basis(&self, tol: f64) -> Vec<Vec<C<T>>> {
        let mut basis: Vec<Vec<C<T>>> = Vec::new();
        for j in 0..self.cols {
            let mut v = self.column(j);
            for b in &basis {
                let c = inner(b, &v);
                for (x, &y) in v.iter_mut().zip(b) {
                    *x = *x - c * y;
                }
            }
            // Second pass for numerical orthogonality.
            for b in &basis {
                let c = inner(b, &v);
                for (x, &y) in v.iter_mut().zip(b) {
                    *x = *x - c * y;
                }
            }
            let n = vec_norm(&v);
            if n.as_f64() > tol.sqrt().max(1e-6) {
                for x in v.iter_mut() {
                    *x = *x / C::from(n);
                }
                basis.push(v);
            }
            if basis.len() == self.rows {
                break;
            }
        }
        basis
    }
}

impl<T: Real> Add for &CMatrix<T> {
    type Output = CMatrix<T>;

    fn add(self, rhs: &CMatrix<T>) -> CMatrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(&a, &b)| a + b)
                .collect(),
        }
    }
}

impl<T: Real> Sub for &CMatrix<T> {
    type Output = CMatrix<T>;

    fn sub(self, rhs: &CMatrix<T>) -> CMatrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(&a, &b)| a - b)
                .collect(),
        }
    }
}

impl<T: Real> Mul for &CMatrix<T> {
    type Output = CMatrix<T>;

    fn mul(self, rhs: &CMatrix<T>) -> CMatrix<T> {
        self.matmul(rhs)
    }
}

/// `⟨a|b⟩`, antilinear in the first argument.
pub fn inner<T: Real>(a: &[C<T>], b: &[C<T>]) -> C<T> {
    assert_eq!(
        a.len(),
        b.len(),
        "inner product of vectors of different length"
    );
    a.iter()
        .zip(b)
        .fold(C::zero(), |acc, (&x, &y)| acc + x.conj() * y)
}

pub fn vec_norm<T: Real>(v: &[C<T>]) -> T {
    v.iter().fold(T::zero(), |acc, x| acc + x.norm_sqr()).sqrt()
}

pub fn normalize<T: Real>(v: &mut [C<T>]) {
    let n = vec_norm(v);
    if n > T::zero() {
        for x in v.iter_mut() {
            *x = *x / C::from(n);
        }
    }
}

pub fn kron_vec<T: Real>(a: &[C<T>], b: &[C<T>]) -> Vec<C<T>> {
    a.iter()
        .flat_map(|&x| b.iter().map(move |&y| x * y))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C<f64> {
        C::new(re, im)
    }

    #[test]
    fn kron_of_paulis() {
        let x = CMatrix::from_rows(2, 2, vec![c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)]);
        let z = CMatrix::from_rows(2, 2, vec![c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)]);
        let xz = x.kron(&z);
        assert_eq!(xz.get(0, 2), c(1., 0.));
        assert_eq!(xz.get(1, 3), c(-1., 0.));
        assert!((&xz * &xz).is_identity(1e-15));
    }

    #[test]
    fn operator_norm_of_rank_one() {
        let v = vec![c(3., 0.), c(0., 4.)];
        let m = CMatrix::outer(&v);
        assert!((m.operator_norm() - 25.0).abs() < 1e-10);
        assert_eq!(CMatrix::<f64>::zeros(3, 3).operator_norm(), 0.0);
    }

    #[test]
    fn column_basis_drops_dependent_columns() {
        let m = CMatrix::from_rows(
            2,
            3,
            vec![
                c(1., 0.),
                c(2., 0.),
                c(0., 0.),
                c(1., 0.),
                c(2., 0.),
                c(0., 0.),
            ],
        );
        assert_eq!(m.column_basis(1e-10).len(), 1);
        assert_eq!(CMatrix::<f64>::identity(4).column_basis(1e-10).len(), 4);
    }
}
