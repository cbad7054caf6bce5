//! Fraction-free (Bareiss) elimination and exact linear solves.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::gaussian::GaussianInt;
use super::matrix::Matrix;
use super::rational::{primitive_integer_row, Rational};

/// Integral domain with exact division, as needed by Bareiss elimination.
pub(crate) trait ExactRing: Clone {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn mul(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    /// `self / rhs`, which the caller guarantees is exact.
    fn div_exact(&self, rhs: &Self) -> Self;
    /// Pivot-selection key; larger is preferred.
    fn magnitude(&self) -> BigInt;
}

impl ExactRing for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn div_exact(&self, rhs: &Self) -> Self {
        debug_assert!(Zero::is_zero(&(self % rhs)));
        self / rhs
    }
    fn magnitude(&self) -> BigInt {
        self.abs()
    }
}

impl ExactRing for GaussianInt {
    fn zero() -> Self {
        GaussianInt::default()
    }
    fn one() -> Self {
        GaussianInt::new(<BigInt as One>::one(), <BigInt as Zero>::zero())
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(&self.re) && Zero::is_zero(&self.im)
    }
    fn mul(&self, rhs: &Self) -> Self {
        GaussianInt::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
    fn sub(&self, rhs: &Self) -> Self {
        GaussianInt::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
    fn div_exact(&self, rhs: &Self) -> Self {
        let n = rhs.norm();
        let re = &self.re * &rhs.re + &self.im * &rhs.im;
        let im = &self.im * &rhs.re - &self.re * &rhs.im;
        debug_assert!(Integer::is_multiple_of(&re, &n) && Integer::is_multiple_of(&im, &n));
        GaussianInt::new(re / &n, im / n)
    }
    fn magnitude(&self) -> BigInt {
        self.norm()
    }
}

/// Rank by Bareiss elimination with full pivoting. The pivot is the entry of
/// largest magnitude in the remaining block, first in row-major order on ties.
pub(crate) fn bareiss_rank<T: ExactRing>(mut a: Matrix<T>) -> usize {
    let (rows, cols) = (a.rows(), a.cols());
    let mut prev = T::one();
    let mut rank = 0;
    for k in 0..rows.min(cols) {
        let mut best: Option<(usize, usize, BigInt)> = None;
        for i in k..rows {
            for j in k..cols {
                if a[(i, j)].is_zero() {
                    continue;
                }
                let mag = a[(i, j)].magnitude();
                if best.as_ref().is_none_or(|(_, _, b)| mag > *b) {
                    best = Some((i, j, mag));
                }
            }
        }
        let Some((pi, pj, _)) = best else { break };
        if pi != k {
            for j in 0..cols {
                let tmp = a[(k, j)].clone();
                a[(k, j)] = a[(pi, j)].clone();
                a[(pi, j)] = tmp;
            }
        }
        if pj != k {
            for i in 0..rows {
                let tmp = a[(i, k)].clone();
                a[(i, k)] = a[(i, pj)].clone();
                a[(i, pj)] = tmp;
            }
        }
        rank += 1;
        let pivot = a[(k, k)].clone();
        for i in (k + 1)..rows {
            let factor = a[(i, k)].clone();
            for j in (k + 1)..cols {
                let v = a[(i, j)].mul(&pivot).sub(&factor.mul(&a[(k, j)]));
                a[(i, j)] = v.div_exact(&prev);
            }
            a[(i, k)] = T::zero();
        }
        prev = pivot;
    }
    rank
}

/// Exact rank of a rational matrix.
pub fn rational_rank(m: &Matrix<Rational>) -> usize {
    let rows: Vec<Vec<BigInt>> = (0..m.rows()).map(|i| primitive_integer_row(m.row(i))).collect();
    if rows.is_empty() || m.cols() == 0 {
        return 0;
    }
    bareiss_rank(Matrix::from_rows(rows).expect("rows share a width"))
}

/// Exact rank of an integer matrix given as rows.
pub fn integer_rank(rows: &[Vec<BigInt>]) -> usize {
    if rows.is_empty() || rows[0].is_empty() {
        return 0;
    }
    bareiss_rank(Matrix::from_rows(rows.to_vec()).expect("rows share a width"))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolveOutcome {
    Unique(Vec<Rational>),
    Infeasible,
    Underdetermined,
}

/// Solves `A x = b` exactly by Gauss-Jordan elimination.
pub fn solve_exact(a: &Matrix<Rational>, b: &[Rational]) -> SolveOutcome {
    assert_eq!(a.rows(), b.len(), "right-hand side length must match row count");
    let (rows, cols) = (a.rows(), a.cols());
    let mut aug: Vec<Vec<Rational>> = (0..rows)
        .map(|i| {
            let mut r = a.row(i).to_vec();
            r.push(b[i].clone());
            r
        })
        .collect();
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !aug[i][c].is_zero()) else { continue };
        aug.swap(r, p);
        let inv = aug[r][c].recip();
        for v in aug[r].iter_mut() {
            *v *= &inv;
        }
        for i in 0..rows {
            if i != r && !aug[i][c].is_zero() {
                let f = aug[i][c].clone();
                for j in c..=cols {
                    let delta = &f * &aug[r][j];
                    aug[i][j] -= delta;
                }
            }
        }
        pivot_cols.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    if aug[r..].iter().any(|row| !row[cols].is_zero()) {
        return SolveOutcome::Infeasible;
    }
    if pivot_cols.len() < cols {
        return SolveOutcome::Underdetermined;
    }
    let mut x = vec![Rational::zero(); cols];
    for (i, &c) in pivot_cols.iter().enumerate() {
        x[c] = aug[i][cols].clone();
    }
    SolveOutcome::Unique(x)
}

/// A nonzero integer vector spanning the kernel of `rows`, when that kernel
/// is one-dimensional.
pub fn kernel_line(rows: &[Vec<BigInt>], dim: usize) -> Option<Vec<BigInt>> {
    let mut m: Vec<Vec<Rational>> = rows
        .iter()
        .map(|r| r.iter().map(|v| Rational::from_integer(v.clone())).collect())
        .collect();
    // Reduced row echelon form.
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..dim {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for v in m[r].iter_mut() {
            *v *= &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..dim {
                    let delta = &f * &m[r][j];
                    m[i][j] -= delta;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if pivots.len() + 1 != dim {
        return None;
    }
    let free = (0..dim).find(|c| !pivots.contains(c)).expect("one free column");
    let mut x = vec![Rational::zero(); dim];
    x[free] = Rational::one();
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = -m[i][free].clone();
    }
    Some(primitive_integer_row(&x))
}
