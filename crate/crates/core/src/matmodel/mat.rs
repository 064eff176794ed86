//! Small dense complex matrices.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::scalar::Real;

#[derive(Clone, Debug, PartialEq)]
pub struct Mat<T> {
    n: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> Mat<T> {
    pub fn zeros(n: usize) -> Self {
        Mat {
            n,
            data: vec![Complex::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = Complex::one();
        }
        m
    }

    pub fn from_real(n: usize, rows: &[T]) -> Self {
        assert_eq!(rows.len(), n * n);
        Mat {
            n,
            data: rows.iter().map(|&x| Complex::new(x, T::zero())).collect(),
        }
    }

    pub fn from_rows(rows: Vec<Vec<Complex<T>>>) -> Self {
        let n = rows.len();
        let data: Vec<_> = rows.into_iter().flatten().collect();
        assert_eq!(data.len(), n * n);
        Mat { n, data }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> Complex<T> {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Complex<T>) {
        self.data[i * self.n + j] = v;
    }

    pub fn rows(&self) -> Vec<Vec<Complex<T>>> {
        self.data.chunks(self.n.max(1)).map(<[_]>::to_vec).collect()
    }

    pub fn adjoint(&self) -> Self {
        let n = self.n;
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m.data[j * n + i] = self.data[i * n + j].conj();
            }
        }
        m
    }

    pub fn scale(&self, c: Complex<T>) -> Self {
        Mat {
            n: self.n,
            data: self.data.iter().map(|&x| x * c).collect(),
        }
    }

    pub fn frobenius(&self) -> T {
        self.data
            .iter()
            .fold(T::zero(), |acc, x| acc + x.norm_sqr())
            .sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn kron(&self, other: &Self) -> Self {
        let (a, b) = (self.n, other.n);
        let n = a * b;
        let mut m = Self::zeros(n);
        for i in 0..a {
            for j in 0..a {
                let x = self.get(i, j);
                if x.is_zero() {
                    continue;
                }
                for k in 0..b {
                    for l in 0..b {
                        m.data[(i * b + k) * n + j * b + l] = x * other.get(k, l);
                    }
                }
            }
        }
        m
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let (a, b) = (self.n, other.n);
        let n = a + b;
        let mut m = Self::zeros(n);
        for i in 0..a {
            for j in 0..a {
                m.data[i * n + j] = self.get(i, j);
            }
        }
        for i in 0..b {
            for j in 0..b {
                m.data[(a + i) * n + a + j] = other.get(i, j);
            }
        }
        m
    }

    /// Householder reflection `1 − 2vv*/(v*v)`.
    pub fn householder(v: &[Complex<T>]) -> Self {
        let n = v.len();
        let norm = v.iter().fold(T::zero(), |acc, x| acc + x.norm_sqr());
        let two = T::one() + T::one();
        let mut m = Self::identity(n);
        for i in 0..n {
            for j in 0..n {
                let d = v[i] * v[j].conj() * Complex::new(two / norm, T::zero());
                m.data[i * n + j] = m.data[i * n + j] - d;
            }
        }
        m
    }
}

impl<T: Real> Add for &Mat<T> {
    type Output = Mat<T>;
    fn add(self, rhs: &Mat<T>) -> Mat<T> {
        assert_eq!(self.n, rhs.n);
        Mat {
            n: self.n,
            data: self.data.iter().zip(&rhs.data).map(|(&a, &b)| a + b).collect(),
        }
    }
}

impl<T: Real> Sub for &Mat<T> {
    type Output = Mat<T>;
    fn sub(self, rhs: &Mat<T>) -> Mat<T> {
        assert_eq!(self.n, rhs.n);
        Mat {
            n: self.n,
            data: self.data.iter().zip(&rhs.data).map(|(&a, &b)| a - b).collect(),
        }
    }
}

impl<T: Real> Mul for &Mat<T> {
    type Output = Mat<T>;
    fn mul(self, rhs: &Mat<T>) -> Mat<T> {
        assert_eq!(self.n, rhs.n);
        let n = self.n;
        let mut m = Mat::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    m.data[i * n + j] = m.data[i * n + j] + a * rhs.data[k * n + j];
                }
            }
        }
        m
    }
}
