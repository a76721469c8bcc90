//! Finite sparse real matrices on a truncated orthonormal basis.

use std::collections::BTreeMap;

/// Row-major sparse matrix; `rows[i]` maps column index to value.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseOperator {
    dim: usize,
    rows: Vec<BTreeMap<usize, f64>>,
}

impl SparseOperator {
    pub fn zeros(dim: usize) -> Self {
        SparseOperator { dim, rows: vec![BTreeMap::new(); dim] }
    }

    pub fn identity(dim: usize) -> Self {
        Self::diagonal(&vec![1.0; dim])
    }

    pub fn diagonal(d: &[f64]) -> Self {
        let mut m = Self::zeros(d.len());
        for (i, &x) in d.iter().enumerate() {
            m.add_entry(i, i, x);
        }
        m
    }

    pub fn from_triplets(dim: usize, t: impl IntoIterator<Item = (usize, usize, f64)>) -> Self {
        let mut m = Self::zeros(dim);
        for (i, j, v) in t {
            m.add_entry(i, j, v);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn add_entry(&mut self, i: usize, j: usize, v: f64) {
        if v == 0.0 {
            return;
        }
        *self.rows[i].entry(j).or_insert(0.0) += v;
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.rows[i].get(&j).copied().unwrap_or(0.0)
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(|r| r.len()).sum()
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.rows.iter().enumerate().flat_map(|(i, r)| r.iter().map(move |(&j, &v)| (i, j, v)))
    }

    pub fn transpose(&self) -> Self {
        Self::from_triplets(self.dim, self.triplets().map(|(i, j, v)| (j, i, v)))
    }

    /// Real matrices: the adjoint is the transpose.
    pub fn adjoint(&self) -> Self {
        self.transpose()
    }

    pub fn scale(&self, c: f64) -> Self {
        Self::from_triplets(self.dim, self.triplets().map(|(i, j, v)| (i, j, c * v)))
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(self.dim, o.dim);
        let mut m = self.clone();
        for (i, j, v) in o.triplets() {
            m.add_entry(i, j, v);
        }
        m
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(-1.0))
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.dim, o.dim);
        let mut m = Self::zeros(self.dim);
        for (i, row) in self.rows.iter().enumerate() {
            for (&k, &a) in row {
                for (&j, &b) in &o.rows[k] {
                    m.add_entry(i, j, a * b);
                }
            }
        }
        m
    }

    pub fn commutator(&self, o: &Self) -> Self {
        self.mul(o).sub(&o.mul(self))
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        self.rows.iter().map(|r| r.iter().map(|(&j, &v)| v * x[j]).sum()).collect()
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    /// Largest absolute entry over rows and columns accepted by `window`.
    pub fn max_abs_on(&self, window: impl Fn(usize) -> bool) -> f64 {
        self.triplets()
            .filter(|&(i, j, _)| window(i) && window(j))
            .map(|(_, _, v)| v.abs())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.max_abs_on(|_| true)
    }

    /// Dense copy of the block with the given row and column index lists.
    pub fn block(&self, rows: &[usize], cols: &[usize]) -> nalgebra::DMatrix<f64> {
        let pos: std::collections::HashMap<usize, usize> = cols.iter().enumerate().map(|(k, &c)| (c, k)).collect();
        let mut m = nalgebra::DMatrix::zeros(rows.len(), cols.len());
        for (a, &r) in rows.iter().enumerate() {
            for (&j, &v) in &self.rows[r] {
                if let Some(&b) = pos.get(&j) {
                    m[(a, b)] = v;
                }
            }
        }
        m
    }

    pub fn to_dense(&self) -> nalgebra::DMatrix<f64> {
        let all: Vec<usize> = (0..self.dim).collect();
        self.block(&all, &all)
    }
}
