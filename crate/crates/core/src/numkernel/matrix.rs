//! Small dense complex matrices with an LU solver. Systems here are at most
//! 6x6 (the two-mode scattering problem), so simplicity and determinism win
//! over cleverness.

use num_complex::Complex64;

use super::SINGULAR_TOL;
use crate::error::{Error, Result};

/// Row-major dense complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![Complex64::new(0.0, 0.0); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == ncols), "ragged rows");
        Self { rows: nrows, cols: ncols, data: rows.concat() }
    }

    /// Diagonal matrix from the given entries.
    pub fn diagonal(entries: &[Complex64]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, &e) in entries.iter().enumerate() {
            m[(i, i)] = e;
        }
        m
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

    pub fn mul(&self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        let mut out = ComplexMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        out
    }

    pub fn add(&self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let mut out = self.clone();
        for (o, r) in out.data.iter_mut().zip(&rhs.data) {
            *o += r;
        }
        out
    }

    pub fn scale(&self, s: Complex64) -> ComplexMatrix {
        let mut out = self.clone();
        for v in &mut out.data {
            *v *= s;
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        assert!(self.is_square());
        (0..self.rows).map(|i| self[(i, i)]).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Solve `self * X = rhs` by LU with partial pivoting.
    ///
    /// Fails with [`Error::SingularMatrix`] when a pivot drops below
    /// `SINGULAR_TOL` times the largest entry magnitude.
    pub fn solve(&self, rhs: &ComplexMatrix) -> Result<ComplexMatrix> {
        assert!(self.is_square(), "solve requires a square matrix");
        assert_eq!(self.rows, rhs.rows, "rhs row count mismatch");
        let n = self.rows;
        let scale = self.max_abs();
        if scale == 0.0 {
            return Err(Error::SingularMatrix { pivot_ratio: 0.0 });
        }

        let mut lu = self.clone();
        let mut x = rhs.clone();
        for col in 0..n {
            // partial pivot on the largest remaining magnitude
            let (pivot_row, pivot_mag) = (col..n)
                .map(|r| (r, lu[(r, col)].norm()))
                .max_by(|a, b| a.1.total_cmp(&b.1))
                .expect("nonempty column");
            if pivot_mag <= SINGULAR_TOL * scale {
                return Err(Error::SingularMatrix { pivot_ratio: pivot_mag / scale });
            }
            if pivot_row != col {
                lu.swap_rows(col, pivot_row);
                x.swap_rows(col, pivot_row);
            }
            let pivot = lu[(col, col)];
            for r in col + 1..n {
                let factor = lu[(r, col)] / pivot;
                if factor == Complex64::new(0.0, 0.0) {
                    continue;
                }
                lu[(r, col)] = factor;
                for c in col + 1..n {
                    let sub = factor * lu[(col, c)];
                    lu[(r, c)] -= sub;
                }
                for c in 0..x.cols {
                    let sub = factor * x[(col, c)];
                    x[(r, c)] -= sub;
                }
            }
        }
        // back substitution
        for col in (0..n).rev() {
            let pivot = lu[(col, col)];
            for c in 0..x.cols {
                let mut v = x[(col, c)];
                for k in col + 1..n {
                    v -= lu[(col, k)] * x[(k, c)];
                }
                x[(col, c)] = v / pivot;
            }
        }
        Ok(x)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        &mut self.data[r * self.cols + c]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn identity_solve_returns_rhs() {
        let id = ComplexMatrix::identity(3);
        let mut b = ComplexMatrix::zeros(3, 1);
        b[(0, 0)] = c(1.0, 2.0);
        b[(1, 0)] = c(-3.0, 0.5);
        b[(2, 0)] = c(0.0, -1.0);
        let x = id.solve(&b).unwrap();
        assert_eq!(x, b);
    }

    #[test]
    fn diagonal_solve() {
        // [[2, 0], [0, i]] X = [2, i]^T  ->  X = [1, 1]^T
        let m = ComplexMatrix::diagonal(&[c(2.0, 0.0), c(0.0, 1.0)]);
        let mut b = ComplexMatrix::zeros(2, 1);
        b[(0, 0)] = c(2.0, 0.0);
        b[(1, 0)] = c(0.0, 1.0);
        let x = m.solve(&b).unwrap();
        assert!((x[(0, 0)] - c(1.0, 0.0)).norm() < 1e-15);
        assert!((x[(1, 0)] - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn singular_matrix_detected() {
        let mut m = ComplexMatrix::zeros(2, 2);
        m[(0, 0)] = c(1.0, 0.0);
        m[(0, 1)] = c(2.0, 0.0);
        m[(1, 0)] = c(0.5, 0.0);
        m[(1, 1)] = c(1.0, 0.0);
        let b = ComplexMatrix::identity(2);
        assert!(matches!(m.solve(&b), Err(Error::SingularMatrix { .. })));
    }

    fn residual(m: &ComplexMatrix, x: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
        let r = m.mul(x);
        let mut num: f64 = 0.0;
        let mut den: f64 = 0.0;
        for i in 0..b.rows() {
            for j in 0..b.cols() {
                num = num.max((r[(i, j)] - b[(i, j)]).norm());
                den = den.max(b[(i, j)].norm());
            }
        }
        num / den.max(1e-300)
    }

    proptest! {
        // Residual self-check on random systems up to 8x8: the multiply-back
        // residual is the oracle for the solver.
        #[test]
        fn solve_residual_small(
            n in 2usize..=8,
            seed in proptest::collection::vec(-1.0f64..1.0, 2 * 64 + 2 * 8)
        ) {
            let mut m = ComplexMatrix::zeros(n, n);
            let mut idx = 0;
            for i in 0..n {
                for j in 0..n {
                    m[(i, j)] = c(seed[idx], seed[idx + 1]);
                    idx += 2;
                }
                // diagonal dominance keeps the condition number benign
                m[(i, i)] += c(4.0, 0.0);
            }
            let mut b = ComplexMatrix::zeros(n, 1);
            for i in 0..n {
                b[(i, 0)] = c(seed[128 + 2 * i], seed[128 + 2 * i + 1]);
            }
            let x = m.solve(&b).unwrap();
            prop_assert!(residual(&m, &x, &b) <= 1e-10);
        }
    }

    #[test]
    fn random_6x6_residual() {
        // fixed deterministic 6x6 system, relative residual <= 1e-10
        let n = 6;
        let mut m = ComplexMatrix::zeros(n, n);
        let mut s = 0.37f64;
        let mut next = || {
            s = (s * 997.0 + 0.1234).fract();
            2.0 * s - 1.0
        };
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = c(next(), next());
            }
        }
        let mut b = ComplexMatrix::zeros(n, 2);
        for i in 0..n {
            b[(i, 0)] = c(next(), next());
            b[(i, 1)] = c(next(), next());
        }
        let x = m.solve(&b).unwrap();
        assert!(residual(&m, &x, &b) <= 1e-10);
    }
}
