use num_complex::Complex64;

use super::scalar::Scalar;

/// A dense square matrix, row-major, tied to the prime `p` that fixes
/// `omega` for its entries.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<T> {
    dim: usize,
    p: u32,
    data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    pub fn from_rows(rows: Vec<Vec<T>>, p: u32) -> Option<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return None;
        }
        Some(Matrix { dim, p, data: rows.into_iter().flatten().collect() })
    }

    pub fn zeros(dim: usize, p: u32) -> Self {
        Matrix { dim, p, data: vec![T::zero(p); dim * dim] }
    }

    pub fn identity(dim: usize, p: u32) -> Self {
        Self::scalar(dim, T::one(p), p)
    }

    /// `c * I`.
    pub fn scalar(dim: usize, c: T, p: u32) -> Self {
        let mut m = Self::zeros(dim, p);
        for k in 0..dim {
            m.data[k * dim + k] = c.clone();
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    pub fn get(&self, r: usize, c: usize) -> &T {
        &self.data[r * self.dim + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: T) {
        self.data[r * self.dim + c] = v;
    }

    pub fn rows(&self) -> Vec<Vec<T>> {
        self.data.chunks(self.dim.max(1)).map(<[T]>::to_vec).take(self.dim).collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        Matrix {
            dim: self.dim,
            p: self.p,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.clone() + b.clone()).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        Matrix {
            dim: self.dim,
            p: self.p,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.clone() - b.clone()).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let d = self.dim;
        let mut data = Vec::with_capacity(d * d);
        for r in 0..d {
            for c in 0..d {
                let mut acc: Option<T> = None;
                for k in 0..d {
                    let a = &self.data[r * d + k];
                    let b = &other.data[k * d + c];
                    if a.is_zero() || b.is_zero() {
                        continue;
                    }
                    let term = a.clone() * b.clone();
                    acc = Some(match acc {
                        Some(s) => s + term,
                        None => term,
                    });
                }
                data.push(acc.unwrap_or_else(|| T::zero(self.p)));
            }
        }
        Matrix { dim: d, p: self.p, data }
    }

    pub fn scale(&self, c: &T) -> Self {
        Matrix { dim: self.dim, p: self.p, data: self.data.iter().map(|a| a.clone() * c.clone()).collect() }
    }

    pub fn div_p(&self) -> Self {
        Matrix { dim: self.dim, p: self.p, data: self.data.iter().map(|a| a.div_p(self.p)).collect() }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let d = self.dim;
        let mut data = Vec::with_capacity(d * d);
        for r in 0..d {
            for c in 0..d {
                data.push(self.data[c * d + r].conj());
            }
        }
        Matrix { dim: d, p: self.p, data }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::identity(self.dim, self.p);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(Scalar::abs_sqr).sum::<f64>().sqrt()
    }

    /// `||self - other||_F`.
    pub fn distance(&self, other: &Self) -> f64 {
        self.sub(other).frobenius_norm()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn trace(&self) -> T {
        let d = self.dim;
        (0..d).fold(T::zero(self.p), |acc, k| acc + self.data[k * d + k].clone())
    }

    pub fn to_complex(&self) -> Matrix<Complex64> {
        Matrix { dim: self.dim, p: self.p, data: self.data.iter().map(Scalar::to_complex).collect() }
    }
}
