//! Small dense linear algebra over any [`Scalar`].

use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use crate::error::{check_dim, Result};
use crate::scalar::{Arithmetic, Scalar};

/// Row-major dense matrix.
#[derive(Clone, PartialEq)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: fmt::Debug> fmt::Debug for Matrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.data.chunks(self.cols.max(1))).finish()
    }
}

impl<S: fmt::Display> fmt::Display for Matrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.data.chunks(self.cols.max(1)).enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
            write!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

impl<S: Scalar> Matrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![S::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = S::one();
        }
        m
    }

    pub fn from_rows(rows: &[Vec<S>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            check_dim(cols, r.len())?;
            data.extend(r.iter().cloned());
        }
        Ok(Matrix { rows: rows.len(), cols, data })
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vec<S>]) -> Result<Self> {
        Ok(Self::from_rows(cols)?.transpose())
    }

    pub fn from_flat(rows: usize, cols: usize, data: Vec<S>) -> Result<Self> {
        check_dim(rows * cols, data.len())?;
        Ok(Matrix { rows, cols, data })
    }

    /// `column · rowᵀ`.
    pub fn outer(column: &[S], row: &[S]) -> Self {
        let data = crate::scalar::kron(column, row);
        Matrix { rows: column.len(), cols: row.len(), data }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }
    pub fn ncols(&self) -> usize {
        self.cols
    }
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }
    pub fn as_flat(&self) -> &[S] {
        &self.data
    }
    pub fn into_flat(self) -> Vec<S> {
        self.data
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<S> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[S]> {
        (0..self.rows).map(move |i| self.row(i))
    }

    pub fn to_rows(&self) -> Vec<Vec<S>> {
        self.row_iter().map(<[S]>::to_vec).collect()
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

    pub fn mul_vec(&self, v: &[S]) -> Vec<S> {
        debug_assert_eq!(self.cols, v.len());
        self.row_iter().map(|r| crate::scalar::dot(r, v)).collect()
    }

    /// `vᵀ · self`.
    pub fn vec_mul(&self, v: &[S]) -> Vec<S> {
        debug_assert_eq!(self.rows, v.len());
        let mut out = vec![S::zero(); self.cols];
        for (i, vi) in v.iter().enumerate() {
            for (j, o) in out.iter_mut().enumerate() {
                *o = o.clone() + vi.clone() * self[(i, j)].clone();
            }
        }
        out
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matmul shape mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero_tol(0.0) {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] = out[(i, j)].clone() + a.clone() * other[(k, j)].clone();
                }
            }
        }
        out
    }

    pub fn scaled(&self, c: &S) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x.clone() * c.clone()).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: crate::scalar::add(&self.data, &other.data),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: crate::scalar::sub(&self.data, &other.data),
        }
    }

    /// Kronecker product, consistent with [`crate::scalar::kron`] on vectors.
    pub fn kron(&self, other: &Self) -> Self {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut out = Self::zeros(rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        out[(i * other.rows + k, j * other.cols + l)] =
                            self[(i, j)].clone() * other[(k, l)].clone();
                    }
                }
            }
        }
        out
    }

    pub fn approx_eq(&self, other: &Self, eps: f64) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && crate::scalar::vec_approx_eq(&self.data, &other.data, eps)
    }

    pub fn is_zero(&self, eps: f64) -> bool {
        crate::scalar::is_zero_vec(&self.data, eps)
    }

    /// Reduced row echelon form in place; returns pivot columns.
    fn rref(&mut self, eps: f64) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            // Exact arithmetic: any nonzero pivot. Floats: largest magnitude.
            let mut best: Option<usize> = None;
            for i in r..self.rows {
                if self[(i, c)].is_zero_tol(eps) {
                    continue;
                }
                match best {
                    None => best = Some(i),
                    Some(b)
                        if S::ARITHMETIC == Arithmetic::Float
                            && self[(i, c)].abs() > self[(b, c)].abs() =>
                    {
                        best = Some(i)
                    }
                    _ => {}
                }
            }
            let Some(p) = best else { continue };
            self.swap_rows(r, p);
            let inv = S::one() / self[(r, c)].clone();
            for j in 0..self.cols {
                self[(r, j)] = self[(r, j)].clone() * inv.clone();
            }
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let f = self[(i, c)].clone();
                if f.is_zero_tol(0.0) {
                    continue;
                }
                for j in 0..self.cols {
                    self[(i, j)] = self[(i, j)].clone() - f.clone() * self[(r, j)].clone();
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self, eps: f64) -> usize {
        self.clone().rref(eps).len()
    }

    pub fn inverse(&self, eps: f64) -> Option<Self> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = S::one();
        }
        let pivots = aug.rref(eps);
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv[(i, j)] = aug[(i, n + j)].clone();
            }
        }
        Some(inv)
    }

    /// Basis of the right null space `{x : self · x = 0}`.
    pub fn nullspace(&self, eps: f64) -> Vec<Vec<S>> {
        let mut m = self.clone();
        let pivots = m.rref(eps);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![S::zero(); self.cols];
                v[f] = S::one();
                for (r, &p) in pivots.iter().enumerate() {
                    v[p] = -m[(r, f)].clone();
                }
                v
            })
            .collect()
    }

    /// Some solution of `self · x = b`, if one exists.
    pub fn solve(&self, b: &[S], eps: f64) -> Option<Vec<S>> {
        let mut aug = Self::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, self.cols)] = b[i].clone();
        }
        let pivots = aug.rref(eps);
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![S::zero(); self.cols];
        for (r, &p) in pivots.iter().enumerate() {
            x[p] = aug[(r, self.cols)].clone();
        }
        // Float rref can accept a nearly inconsistent system; confirm the residual.
        let resid = crate::scalar::sub(&self.mul_vec(&x), b);
        crate::scalar::is_zero_vec(&resid, eps.max(0.0) * 1e3).then_some(x)
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Matrix<T> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }
}

/// Rank of a list of vectors of equal length.
pub fn rank_of<S: Scalar>(vectors: &[Vec<S>], eps: f64) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    Matrix::from_rows(vectors).map(|m| m.rank(eps)).unwrap_or(0)
}

/// Indices of a maximal linearly independent subset, chosen greedily in order.
pub fn independent_subset<S: Scalar>(vectors: &[Vec<S>], eps: f64) -> Vec<usize> {
    let mut chosen: Vec<usize> = Vec::new();
    let mut rows: Vec<Vec<S>> = Vec::new();
    for (i, v) in vectors.iter().enumerate() {
        rows.push(v.clone());
        if rank_of(&rows, eps) == rows.len() {
            chosen.push(i);
        } else {
            rows.pop();
        }
    }
    chosen
}

impl<S> Index<(usize, usize)> for Matrix<S> {
    type Output = S;
    fn index(&self, (i, j): (usize, usize)) -> &S {
        &self.data[i * self.cols + j]
    }
}

impl<S> IndexMut<(usize, usize)> for Matrix<S> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut S {
        &mut self.data[i * self.cols + j]
    }
}

impl<S: Scalar> Mul for &Matrix<S> {
    type Output = Matrix<S>;
    fn mul(self, rhs: Self) -> Matrix<S> {
        self.matmul(rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, qv, Rational};

    fn m(rows: &[&[i64]]) -> Matrix<Rational> {
        Matrix::from_rows(&rows.iter().map(|r| qv(r)).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn inverse_roundtrip_exact() {
        let a = m(&[&[1, -1, 0], &[1, 1, 0], &[0, 0, 1]]);
        let inv = a.inverse(0.0).unwrap();
        assert_eq!(&a * &inv, Matrix::identity(3));
        assert_eq!(inv[(0, 0)], q("1/2"));
    }

    #[test]
    fn singular_has_no_inverse() {
        let a = m(&[&[1, 2], &[2, 4]]);
        assert!(a.inverse(0.0).is_none());
        assert_eq!(a.rank(0.0), 1);
        let ns = a.nullspace(0.0);
        assert_eq!(ns.len(), 1);
        assert!(crate::scalar::is_zero_vec(&a.mul_vec(&ns[0]), 0.0));
    }

    #[test]
    fn solve_detects_inconsistency() {
        let a = m(&[&[1, 1], &[2, 2]]);
        assert!(a.solve(&qv(&[1, 3]), 0.0).is_none());
        assert_eq!(a.solve(&qv(&[1, 2]), 0.0).unwrap(), qv(&[1, 0]));
    }

    #[test]
    fn kron_matches_vector_kron() {
        let a = m(&[&[1, 2], &[3, 4]]);
        let b = m(&[&[0, 1], &[1, 0]]);
        let x = qv(&[1, -1]);
        let y = qv(&[2, 5]);
        let lhs = a.kron(&b).mul_vec(&crate::scalar::kron(&x, &y));
        let rhs = crate::scalar::kron(&a.mul_vec(&x), &b.mul_vec(&y));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn float_rank_with_tolerance() {
        let a = Matrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 4.0 + 1e-12]]).unwrap();
        assert_eq!(a.rank(1e-9), 1);
    }
}
