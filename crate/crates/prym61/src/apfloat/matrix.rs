use std::fmt;
use std::ops::{Add, Mul, Sub};

use super::complex::BigComplex;
use super::real::BigFloat;
use super::ApfloatError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveError {
    Singular,
    Inconsistent,
}

/// Dense complex matrix; all entries share the declared precision.
#[derive(Clone, PartialEq, Eq)]
pub struct ComplexMatrix {
    pub rows: usize,
    pub cols: usize,
    pub digits: u32,
    data: Vec<BigComplex>,
}

impl ComplexMatrix {
    pub fn zero(rows: usize, cols: usize, digits: u32) -> Self {
        ComplexMatrix { rows, cols, digits, data: vec![BigComplex::zero(digits); rows * cols] }
    }

    pub fn identity(n: usize, digits: u32) -> Self {
        let mut m = Self::zero(n, n, digits);
        for i in 0..n {
            m[(i, i)] = BigComplex::one(digits);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigComplex>>) -> Self {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        let digits = rows[0][0].digits();
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            for e in row {
                assert_eq!(e.digits(), digits, "precision mismatch");
                data.push(e);
            }
        }
        ComplexMatrix { rows: r, cols: c, digits, data }
    }

    pub fn from_fn(rows: usize, cols: usize, digits: u32, mut f: impl FnMut(usize, usize) -> BigComplex) -> Self {
        let mut m = Self::zero(rows, cols, digits);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, self.digits, |i, j| self[(j, i)].clone())
    }

    pub fn conj_transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, self.digits, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, z: &BigComplex) -> Self {
        Self::from_fn(self.rows, self.cols, self.digits, |i, j| &self[(i, j)] * z)
    }

    pub fn max_abs(&self) -> BigFloat {
        let mut best = BigFloat::zero(self.digits);
        for e in &self.data {
            let a = e.abs();
            if a > best {
                best = a;
            }
        }
        best
    }

    pub fn with_digits(&self, digits: u32) -> Self {
        let mut out = Self::zero(self.rows, self.cols, digits);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self[(i, j)].with_digits(digits);
            }
        }
        out
    }

    /// Solve `A X = B` for `X` by Gaussian elimination with full column
    /// pivoting on `A` (rows >= cols, rank = cols expected). Surplus rows act
    /// as consistency equations; the largest violation is returned alongside
    /// the solution.
    pub fn solve_right(&self, b: &ComplexMatrix) -> Result<(ComplexMatrix, BigFloat), ApfloatError> {
        if self.rows != b.rows {
            return Err(ApfloatError::Dimension);
        }
        let digits = self.digits;
        let (m, n, k) = (self.rows, self.cols, b.cols);
        if m < n {
            return Err(ApfloatError::Dimension);
        }
        let mut a = self.clone();
        let mut rhs = b.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let pivot_floor = BigFloat::pow10((-(digits as i64) + 50).min(-10), digits);
        for col in 0..n {
            // pivot: largest |entry| over remaining rows and columns
            let mut best = (col, col, BigFloat::zero(digits));
            for i in col..m {
                for j in col..n {
                    let mag = a[(i, j)].abs();
                    if mag > best.2 {
                        best = (i, j, mag);
                    }
                }
            }
            if best.2 <= pivot_floor {
                return Err(ApfloatError::Inconsistent(best.2.to_decimal_string(10)));
            }
            let (pi, pj, _) = best;
            a.swap_rows(col, pi);
            rhs.swap_rows(col, pi);
            a.swap_cols(col, pj);
            perm.swap(col, pj);
            let inv = a[(col, col)].inv();
            for i in (col + 1)..m {
                if a[(i, col)].is_zero() {
                    continue;
                }
                let f = &a[(i, col)] * &inv;
                for j in col..n {
                    let v = &a[(i, j)] - &(&f * &a[(col, j)]);
                    a[(i, j)] = v;
                }
                for j in 0..k {
                    let v = &rhs[(i, j)] - &(&f * &rhs[(col, j)]);
                    rhs[(i, j)] = v;
                }
            }
        }
        // residual from the surplus rows
        let mut residual = BigFloat::zero(digits);
        for i in n..m {
            for j in 0..k {
                let r = rhs[(i, j)].abs();
                if r > residual {
                    residual = r;
                }
            }
        }
        // back substitution
        let mut x = ComplexMatrix::zero(n, k, digits);
        for j in 0..k {
            for i in (0..n).rev() {
                let mut acc = rhs[(i, j)].clone();
                for l in (i + 1)..n {
                    acc = &acc - &(&a[(i, l)] * &x[(l, j)]);
                }
                x[(i, j)] = &acc * &a[(i, i)].inv();
            }
        }
        // undo column permutation
        let mut out = ComplexMatrix::zero(n, k, digits);
        for i in 0..n {
            for j in 0..k {
                out[(perm[i], j)] = x[(i, j)].clone();
            }
        }
        Ok((out, residual))
    }

    pub fn inverse(&self) -> Result<ComplexMatrix, ApfloatError> {
        assert_eq!(self.rows, self.cols, "inverse of non-square matrix");
        let (inv, _) = self.solve_right(&ComplexMatrix::identity(self.rows, self.digits))?;
        Ok(inv)
    }

    /// Hermitian positive-definiteness via Cholesky. Pivots must clear
    /// `10^(-D/2)`; a non-Hermitian input is an error.
    pub fn is_positive_definite(&self) -> Result<bool, ApfloatError> {
        assert_eq!(self.rows, self.cols);
        let digits = self.digits;
        let tol = BigFloat::pow10(-(digits as i64) + 50, digits);
        let dev = (self - &self.conj_transpose()).max_abs();
        let scale = self.max_abs();
        let herm_tol = if scale > BigFloat::one(digits) { &scale * &tol } else { tol.clone() };
        if dev > herm_tol {
            return Err(ApfloatError::NotHermitian(dev.to_decimal_string(10)));
        }
        Ok(self.cholesky().is_some())
    }

    /// Lower-triangular Cholesky factor, or `None` when a pivot drops below
    /// `10^(-D/2)`.
    pub fn cholesky(&self) -> Option<ComplexMatrix> {
        let n = self.rows;
        let digits = self.digits;
        let floor = BigFloat::pow10(-(digits as i64) / 2, digits);
        let mut l = ComplexMatrix::zero(n, n, digits);
        for j in 0..n {
            let mut d = self[(j, j)].re.clone();
            for k in 0..j {
                d = &d - &l[(j, k)].abs2();
            }
            if d <= floor {
                return None;
            }
            let dj = d.sqrt().expect("positive pivot");
            l[(j, j)] = BigComplex::from_real(dj.clone());
            for i in (j + 1)..n {
                let mut acc = self[(i, j)].clone();
                for k in 0..j {
                    acc = &acc - &(&l[(i, k)] * &l[(j, k)].conj());
                }
                l[(i, j)] = BigComplex::new(&acc.re / &dj, &acc.im / &dj);
            }
        }
        Some(l)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = BigComplex;
    fn index(&self, (i, j): (usize, usize)) -> &BigComplex {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigComplex {
        &mut self.data[i * self.cols + j]
    }
}

impl Mul<&ComplexMatrix> for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        let mut out = ComplexMatrix::zero(self.rows, rhs.cols, self.digits);
        for i in 0..self.rows {
            for j in 0..rhs.cols {
                let mut acc = BigComplex::zero(self.digits);
                for k in 0..self.cols {
                    acc = &acc + &(&self[(i, k)] * &rhs[(k, j)]);
                }
                out[(i, j)] = acc;
            }
        }
        out
    }
}

impl Add<&ComplexMatrix> for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix::from_fn(self.rows, self.cols, self.digits, |i, j| &self[(i, j)] + &rhs[(i, j)])
    }
}

impl Sub<&ComplexMatrix> for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix::from_fn(self.rows, self.cols, self.digits, |i, j| &self[(i, j)] - &rhs[(i, j)])
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} (D={})", self.rows, self.cols, self.digits)?;
        for i in 0..self.rows {
            for j in 0..self.cols {
                write!(f, " {:?}", self[(i, j)])?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: i64, im: i64, d: u32) -> BigComplex {
        BigComplex::new(BigFloat::from_i64(re, d), BigFloat::from_i64(im, d))
    }

    #[test]
    fn identity_solve_returns_rhs() {
        let d = 60;
        let a = ComplexMatrix::identity(3, d);
        let b = ComplexMatrix::from_rows(vec![
            vec![c(1, 2, d), c(3, 0, d)],
            vec![c(0, -1, d), c(5, 5, d)],
            vec![c(7, 0, d), c(0, 0, d)],
        ]);
        let (x, res) = a.solve_right(&b).unwrap();
        assert!((&x - &b).max_abs() < BigFloat::pow10(-50, d));
        assert!(res.is_zero());
    }

    #[test]
    fn random_system_residual() {
        // B = A X for a known X; solving must recover X to high accuracy.
        let d = 100;
        let mut seed = 0x9e3779b97f4a7c15u64;
        let mut rnd = || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((seed >> 33) as i64 % 19) - 9
        };
        let a = ComplexMatrix::from_fn(4, 4, d, |_, _| c(rnd(), rnd(), d));
        let x = ComplexMatrix::from_fn(4, 2, d, |_, _| c(rnd(), rnd(), d));
        let b = &a * &x;
        let (got, _res) = a.solve_right(&b).unwrap();
        assert!((&got - &x).max_abs() < BigFloat::pow10(-80, d));
    }

    #[test]
    fn definiteness_signs() {
        let d = 60;
        let id = ComplexMatrix::identity(2, d);
        assert!(id.is_positive_definite().unwrap());
        let mut neg = ComplexMatrix::identity(2, d);
        neg[(1, 1)] = c(-1, 0, d);
        assert!(!neg.is_positive_definite().unwrap());
        let mut skew = ComplexMatrix::identity(2, d);
        skew[(0, 1)] = c(1, 0, d);
        assert!(skew.is_positive_definite().is_err());
    }

    #[test]
    fn cholesky_reconstructs() {
        let d = 80;
        // H = M M* is positive definite
        let m = ComplexMatrix::from_rows(vec![
            vec![c(2, 1, d), c(0, 0, d), c(1, -1, d)],
            vec![c(0, 3, d), c(1, 0, d), c(0, 0, d)],
            vec![c(1, 1, d), c(0, 2, d), c(4, 0, d)],
        ]);
        let h = &m * &m.conj_transpose();
        let l = h.cholesky().expect("positive definite");
        let back = &l * &l.conj_transpose();
        assert!((&back - &h).max_abs() < BigFloat::pow10(-(d as i64) + 60, d));
    }
}
