use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Largest dimension for which dense storage is allowed.
pub const DENSE_LIMIT: usize = 4096;

/// Entries smaller than this are dropped from sparse columns.
pub const DROP_TOL: f64 = 1e-14;

pub type SparseVec = Vec<(usize, C64)>;

#[derive(Clone, Debug)]
pub enum Storage {
    Dense(DMatrix<C64>),
    Sparse(Vec<SparseVec>),
}

/// A linear map `C^cols → C^rows`.
#[derive(Clone, Debug)]
pub struct LinearOp {
    pub rows: usize,
    pub cols: usize,
    storage: Storage,
}

fn zero() -> C64 {
    C64::new(0.0, 0.0)
}

/// Sorts by row, merges duplicates and drops negligible entries.
pub fn compact(mut v: SparseVec) -> SparseVec {
    v.sort_by_key(|e| e.0);
    let mut out: SparseVec = Vec::with_capacity(v.len());
    for (r, x) in v {
        match out.last_mut() {
            Some(last) if last.0 == r => last.1 += x,
            _ => out.push((r, x)),
        }
    }
    out.retain(|e| e.1.norm() > DROP_TOL);
    out
}

/// Scratch accumulator for sparse linear combinations.
pub(crate) struct Accumulator {
    values: Vec<C64>,
    touched: Vec<usize>,
    seen: Vec<bool>,
}

impl Accumulator {
    pub(crate) fn new(n: usize) -> Self {
        Accumulator {
            values: vec![zero(); n],
            touched: Vec::new(),
            seen: vec![false; n],
        }
    }

    pub(crate) fn add(&mut self, i: usize, x: C64) {
        if !self.seen[i] {
            self.seen[i] = true;
            self.touched.push(i);
        }
        self.values[i] += x;
    }

    pub(crate) fn drain(&mut self) -> SparseVec {
        self.touched.sort_unstable();
        let mut out = Vec::with_capacity(self.touched.len());
        for &i in &self.touched {
            let x = self.values[i];
            if x.norm() > DROP_TOL {
                out.push((i, x));
            }
            self.values[i] = zero();
            self.seen[i] = false;
        }
        self.touched.clear();
        out
    }
}

impl LinearOp {
    pub fn identity(n: usize) -> Self {
        Self::from_columns(
            n,
            n,
            (0..n).map(|i| vec![(i, C64::new(1.0, 0.0))]).collect(),
        )
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_columns(rows, cols, vec![Vec::new(); cols])
    }

    /// Sparse operator from explicit columns.
    pub fn from_columns(rows: usize, cols: usize, columns: Vec<SparseVec>) -> Self {
        assert_eq!(columns.len(), cols);
        let columns = columns.into_iter().map(compact).collect();
        LinearOp {
            rows,
            cols,
            storage: Storage::Sparse(columns),
        }
    }

    pub fn from_dense(m: DMatrix<C64>) -> Result<Self> {
        if m.nrows() > DENSE_LIMIT || m.ncols() > DENSE_LIMIT {
            return Err(Error::Resource(format!(
                "dense {}x{} exceeds the dense limit {DENSE_LIMIT}",
                m.nrows(),
                m.ncols()
            )));
        }
        Ok(LinearOp {
            rows: m.nrows(),
            cols: m.ncols(),
            storage: Storage::Dense(m),
        })
    }

    /// Builds an operator column by column from a basis-image function.
    pub fn from_fn<F: FnMut(usize) -> SparseVec>(rows: usize, cols: usize, mut f: F) -> Self {
        Self::from_columns(rows, cols, (0..cols).map(&mut f).collect())
    }

    pub fn is_sparse(&self) -> bool {
        matches!(self.storage, Storage::Sparse(_))
    }

    pub fn storage(&self) -> &Storage {
        &self.storage
    }

    pub fn nnz(&self) -> usize {
        match &self.storage {
            Storage::Dense(m) => m.iter().filter(|x| x.norm() > DROP_TOL).count(),
            Storage::Sparse(c) => c.iter().map(|v| v.len()).sum(),
        }
    }

    pub fn column(&self, j: usize) -> SparseVec {
        match &self.storage {
            Storage::Dense(m) => m
                .column(j)
                .iter()
                .enumerate()
                .filter(|(_, x)| x.norm() > DROP_TOL)
                .map(|(i, x)| (i, *x))
                .collect(),
            Storage::Sparse(c) => c[j].clone(),
        }
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        match &self.storage {
            Storage::Dense(m) => m[(i, j)],
            Storage::Sparse(c) => c[j]
                .binary_search_by_key(&i, |e| e.0)
                .map(|k| c[j][k].1)
                .unwrap_or_else(|_| zero()),
        }
    }

    pub fn apply(&self, v: &[C64]) -> Result<Vec<C64>> {
        if v.len() != self.cols {
            return Err(Error::Dimension(format!(
                "operator with {} columns applied to vector of length {}",
                self.cols,
                v.len()
            )));
        }
        let mut out = vec![zero(); self.rows];
        match &self.storage {
            Storage::Dense(m) => {
                for j in 0..self.cols {
                    if v[j] == zero() {
                        continue;
                    }
                    for i in 0..self.rows {
                        out[i] += m[(i, j)] * v[j];
                    }
                }
            }
            Storage::Sparse(c) => {
                for (j, col) in c.iter().enumerate() {
                    if v[j] == zero() {
                        continue;
                    }
                    for &(i, x) in col {
                        out[i] += x * v[j];
                    }
                }
            }
        }
        Ok(out)
    }

    /// Applies the operator to a sparse vector.
    pub fn apply_sparse(&self, v: &[(usize, C64)]) -> SparseVec {
        let mut acc = Accumulator::new(self.rows);
        for &(j, y) in v {
            for (i, x) in self.column(j) {
                acc.add(i, x * y);
            }
        }
        acc.drain()
    }

    /// Composition `self ∘ other`.
    pub fn mul(&self, other: &LinearOp) -> Result<LinearOp> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot compose {}x{} with {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        match (&self.storage, &other.storage) {
            (Storage::Dense(a), Storage::Dense(b)) => LinearOp::from_dense(a * b),
            (Storage::Sparse(a), Storage::Sparse(b)) => {
                let mut acc = Accumulator::new(self.rows);
                let cols = b
                    .iter()
                    .map(|col| {
                        for &(k, y) in col {
                            for &(i, x) in &a[k] {
                                acc.add(i, x * y);
                            }
                        }
                        acc.drain()
                    })
                    .collect();
                Ok(LinearOp {
                    rows: self.rows,
                    cols: other.cols,
                    storage: Storage::Sparse(cols),
                })
            }
            _ => LinearOp::from_dense(self.to_dense()? * other.to_dense()?),
        }
    }

    pub fn pow(&self, n: u32) -> Result<LinearOp> {
        let mut acc = LinearOp::identity(self.rows);
        for _ in 0..n {
            acc = self.mul(&acc)?;
        }
        Ok(acc)
    }

    pub fn adjoint(&self) -> LinearOp {
        match &self.storage {
            Storage::Dense(m) => LinearOp {
                rows: self.cols,
                cols: self.rows,
                storage: Storage::Dense(m.adjoint()),
            },
            Storage::Sparse(c) => {
                let mut cols: Vec<SparseVec> = vec![Vec::new(); self.rows];
                for (j, col) in c.iter().enumerate() {
                    for &(i, x) in col {
                        cols[i].push((j, x.conj()));
                    }
                }
                LinearOp::from_columns(self.cols, self.rows, cols)
            }
        }
    }

    pub fn scale(&self, s: C64) -> LinearOp {
        match &self.storage {
            Storage::Dense(m) => LinearOp {
                storage: Storage::Dense(m * s),
                ..*self
            },
            Storage::Sparse(c) => LinearOp::from_columns(
                self.rows,
                self.cols,
                c.iter()
                    .map(|col| col.iter().map(|&(i, x)| (i, x * s)).collect())
                    .collect(),
            ),
        }
    }

    pub fn add(&self, other: &LinearOp) -> Result<LinearOp> {
        self.check_shape(other)?;
        match (&self.storage, &other.storage) {
            (Storage::Sparse(a), Storage::Sparse(b)) => Ok(LinearOp::from_columns(
                self.rows,
                self.cols,
                a.iter()
                    .zip(b)
                    .map(|(x, y)| x.iter().chain(y).copied().collect())
                    .collect(),
            )),
            _ => LinearOp::from_dense(self.to_dense()? + other.to_dense()?),
        }
    }

    pub fn sub(&self, other: &LinearOp) -> Result<LinearOp> {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    fn check_shape(&self, other: &LinearOp) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Dimension(format!(
                "shape {}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn to_dense(&self) -> Result<DMatrix<C64>> {
        match &self.storage {
            Storage::Dense(m) => Ok(m.clone()),
            Storage::Sparse(c) => {
                if self.rows > DENSE_LIMIT || self.cols > DENSE_LIMIT {
                    return Err(Error::Resource(format!(
                        "{}x{} operator is above the dense limit {DENSE_LIMIT}",
                        self.rows, self.cols
                    )));
                }
                let mut m = DMatrix::from_element(self.rows, self.cols, zero());
                for (j, col) in c.iter().enumerate() {
                    for &(i, x) in col {
                        m[(i, j)] = x;
                    }
                }
                Ok(m)
            }
        }
    }

    /// Dense copy of this operator.
    pub fn densified(&self) -> Result<LinearOp> {
        LinearOp::from_dense(self.to_dense()?)
    }

    /// Sparse copy of this operator.
    pub fn sparsified(&self) -> LinearOp {
        LinearOp::from_fn(self.rows, self.cols, |j| self.column(j))
    }

    /// Largest entry-wise deviation `max |A_ij − B_ij|`.
    pub fn max_abs_diff(&self, other: &LinearOp) -> Result<f64> {
        self.check_shape(other)?;
        let mut worst: f64 = 0.0;
        for j in 0..self.cols {
            let a = self.column(j);
            let b = other.column(j);
            let (mut p, mut r) = (0, 0);
            while p < a.len() || r < b.len() {
                let dev = match (a.get(p), b.get(r)) {
                    (Some(x), Some(y)) if x.0 == y.0 => {
                        p += 1;
                        r += 1;
                        (x.1 - y.1).norm()
                    }
                    (Some(x), Some(y)) if x.0 < y.0 => {
                        p += 1;
                        x.1.norm()
                    }
                    (Some(x), None) => {
                        p += 1;
                        x.1.norm()
                    }
                    (_, Some(y)) => {
                        r += 1;
                        y.1.norm()
                    }
                    (None, None) => unreachable!(),
                };
                worst = worst.max(dev);
            }
        }
        Ok(worst)
    }

    /// Location and size of the largest deviation.
    pub fn max_abs_diff_at(&self, other: &LinearOp) -> Result<(usize, usize, f64)> {
        self.check_shape(other)?;
        let mut best = (0, 0, 0.0);
        for j in 0..self.cols {
            let mut merged: SparseVec = self.column(j);
            merged.extend(other.column(j).into_iter().map(|(i, x)| (i, -x)));
            for (i, x) in compact(merged) {
                if x.norm() > best.2 {
                    best = (i, j, x.norm());
                }
            }
        }
        Ok(best)
    }

    pub fn unitarity_defect(&self) -> Result<f64> {
        if self.rows != self.cols {
            return Err(Error::Dimension("unitarity needs a square operator".into()));
        }
        let prod = self.adjoint().mul(self)?;
        prod.max_abs_diff(&LinearOp::identity(self.rows))
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_defect().map(|e| e < tol).unwrap_or(false)
    }

    /// Kronecker product `self ⊗ other` (first factor most significant).
    pub fn kron(&self, other: &LinearOp) -> LinearOp {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        LinearOp::from_fn(rows, cols, |j| {
            let (ja, jb) = (j / other.cols, j % other.cols);
            let a = self.column(ja);
            let b = other.column(jb);
            let mut out = Vec::with_capacity(a.len() * b.len());
            for &(ia, x) in &a {
                for &(ib, y) in &b {
                    out.push((ia * other.rows + ib, x * y));
                }
            }
            out
        })
    }

    /// Normalized trace `Tr(A) / rows`.
    pub fn normalized_trace(&self) -> C64 {
        let n = self.rows.min(self.cols);
        let t: C64 = (0..n).map(|i| self.get(i, i)).sum();
        t / self.rows as f64
    }
}

impl fmt::Display for LinearOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|j| {
                    let x = self.get(i, j);
                    format!("{:+.6}{:+.6}i", x.re, x.im)
                })
                .collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn sample() -> LinearOp {
        LinearOp::from_columns(
            3,
            3,
            vec![
                vec![(1, c(1.0, 0.0))],
                vec![(0, c(0.0, 2.0)), (2, c(-1.0, 0.0))],
                vec![(2, c(0.5, 0.5))],
            ],
        )
    }

    #[test]
    fn dense_and_sparse_agree() {
        let s = sample();
        let d = s.densified().unwrap();
        let v = vec![c(1.0, 2.0), c(-0.3, 0.1), c(0.7, -0.4)];
        let a = s.apply(&v).unwrap();
        let b = d.apply(&v).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).norm() < 1e-15);
        }
        let p1 = s.mul(&s).unwrap();
        let p2 = d.mul(&d).unwrap();
        assert!(p1.max_abs_diff(&p2).unwrap() < 1e-15);
        assert!(s.adjoint().max_abs_diff(&d.adjoint()).unwrap() < 1e-15);
    }

    #[test]
    fn kron_identity() {
        let i2 = LinearOp::identity(2);
        let s = sample();
        let k = i2.kron(&s);
        assert_eq!(k.rows, 6);
        assert_eq!(k.get(4, 4), s.get(1, 1));
        assert_eq!(k.get(3, 4), s.get(0, 1));
        assert_eq!(k.get(0, 4), c(0.0, 0.0));
    }

    #[test]
    fn dense_limit_enforced() {
        let big = LinearOp::identity(DENSE_LIMIT + 1);
        assert!(matches!(big.to_dense(), Err(Error::Resource(_))));
        assert!(big.mul(&big).is_ok());
    }
}
