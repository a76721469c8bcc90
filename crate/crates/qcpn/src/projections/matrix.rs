//! Small dense matrices over QScalar and over NCPoly.

use crate::ncpoly::{NCPoly, Presentation};
use crate::qcoeff::QScalar;
use rayon::prelude::*;

/// Dense square-or-rectangular matrix of exact scalars.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QMatrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<QScalar>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix { rows, cols, data: vec![QScalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::diag(&vec![QScalar::one(); n])
    }

    pub fn diag(d: &[QScalar]) -> Self {
        let mut m = Self::zeros(d.len(), d.len());
        for (i, x) in d.iter().enumerate() {
            m[(i, i)] = x.clone();
        }
        m
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, o: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, o.rows);
        let mut m = Self::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = &o[(k, j)];
                    if !b.is_zero() {
                        m[(i, j)] += &(a * b);
                    }
                }
            }
        }
        m
    }

    pub fn add(&self, o: &QMatrix) -> QMatrix {
        self.zip(o, |a, b| a + b)
    }

    pub fn sub(&self, o: &QMatrix) -> QMatrix {
        self.zip(o, |a, b| a - b)
    }

    pub fn scale(&self, c: &QScalar) -> QMatrix {
        QMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * c).collect() }
    }

    fn zip(&self, o: &QMatrix, f: impl Fn(&QScalar, &QScalar) -> QScalar) -> QMatrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| f(a, b)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    /// Numeric values at q0.
    pub fn eval(&self, q0: f64) -> nalgebra::DMatrix<f64> {
        nalgebra::DMatrix::from_fn(self.rows, self.cols, |i, j| self[(i, j)].at(q0))
    }
}

impl std::ops::Index<(usize, usize)> for QMatrix {
    type Output = QScalar;
    fn index(&self, (i, j): (usize, usize)) -> &QScalar {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for QMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut QScalar {
        &mut self.data[i * self.cols + j]
    }
}

/// Square matrix with entries in the sphere algebra, all in normal form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix {
    pub size: usize,
    data: Vec<NCPoly>,
}

impl PolyMatrix {
    pub fn from_fn(size: usize, f: impl Fn(usize, usize) -> NCPoly + Sync) -> Self {
        let data = (0..size * size).into_par_iter().map(|k| f(k / size, k % size)).collect();
        PolyMatrix { size, data }
    }

    pub fn get(&self, i: usize, j: usize) -> &NCPoly {
        &self.data[i * self.size + j]
    }

    pub fn entries(&self) -> impl Iterator<Item = &NCPoly> {
        self.data.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|p| p.is_zero())
    }

    /// Conjugate transpose: (A^dag)_ij = (A_ji)^*.
    pub fn adjoint(&self, pres: Presentation) -> Self {
        Self::from_fn(self.size, |i, j| self.get(j, i).star().normalize(pres))
    }

    /// `self * diag(d) * other` in the algebra.
    pub fn mul_weighted(&self, d: &[QScalar], other: &PolyMatrix, pres: Presentation) -> Self {
        let n = self.size;
        Self::from_fn(n, |i, j| {
            let mut acc = NCPoly::zero();
            for (k, dk) in d.iter().enumerate() {
                let a = self.get(i, k);
                let b = other.get(k, j);
                if a.is_zero() || b.is_zero() {
                    continue;
                }
                acc.add_scaled(&a.mul_nf(b, pres), dk);
            }
            acc
        })
    }

    /// `self * m` for a scalar matrix m.
    pub fn mul_scalar_right(&self, m: &QMatrix) -> Self {
        let n = self.size;
        Self::from_fn(n, |i, j| {
            let mut acc = NCPoly::zero();
            for k in 0..n {
                acc.add_scaled(self.get(i, k), &m[(k, j)]);
            }
            acc
        })
    }

    /// `m * self` for a scalar matrix m.
    pub fn mul_scalar_left(&self, m: &QMatrix) -> Self {
        let n = self.size;
        Self::from_fn(n, |i, j| {
            let mut acc = NCPoly::zero();
            for k in 0..n {
                acc.add_scaled(self.get(k, j), &m[(i, k)]);
            }
            acc
        })
    }

    pub fn sub(&self, o: &PolyMatrix) -> Self {
        Self::from_fn(self.size, |i, j| self.get(i, j).sub(o.get(i, j)))
    }

    pub fn add(&self, o: &PolyMatrix) -> Self {
        Self::from_fn(self.size, |i, j| self.get(i, j).add(o.get(i, j)))
    }

    pub fn map(&self, f: impl Fn(&NCPoly) -> NCPoly + Sync) -> Self {
        Self::from_fn(self.size, |i, j| f(self.get(i, j)))
    }
}
