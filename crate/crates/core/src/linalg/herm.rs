//! Hermitian coefficient matrices and exact spectral predicates.
//!
//! Eigenvalues are never computed. Positivity and rank are read off the
//! characteristic polynomial, and each predicate has a second, independent
//! route (pivoted LDL* and Bareiss elimination respectively).

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::elim::bareiss_rank;
use super::gaussian::{GaussianInt, GaussianRational};
use super::matrix::Matrix;
use super::rational::{common_denominator, Rational};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HermMatrix(Matrix<GaussianRational>);

impl HermMatrix {
    /// Validates `entries[i][j] == conj(entries[j][i])`.
    pub fn new(entries: Matrix<GaussianRational>) -> Result<Self> {
        if !entries.is_square() {
            return Err(Error::DimensionMismatch { expected: entries.rows(), got: entries.cols() });
        }
        for i in 0..entries.rows() {
            for j in i..entries.cols() {
                if entries[(i, j)] != entries[(j, i)].conj() {
                    return Err(Error::NotHermitian { row: i, col: j });
                }
            }
        }
        Ok(HermMatrix(entries))
    }

    pub fn from_rows(rows: Vec<Vec<GaussianRational>>) -> Result<Self> {
        Self::new(Matrix::from_rows(rows)?)
    }

    pub fn diagonal(values: &[Rational]) -> Self {
        HermMatrix(Matrix::from_fn(values.len(), values.len(), |i, j| {
            if i == j {
                GaussianRational::real(values[i].clone())
            } else {
                GaussianRational::zero()
            }
        }))
    }

    pub fn identity(size: usize) -> Self {
        Self::diagonal(&vec![Rational::from_integer(1.into()); size])
    }

    pub fn zero(size: usize) -> Self {
        HermMatrix(Matrix::filled(size, size, GaussianRational::zero()))
    }

    pub fn size(&self) -> usize {
        self.0.rows()
    }

    pub fn entries(&self) -> &Matrix<GaussianRational> {
        &self.0
    }

    pub fn get(&self, i: usize, j: usize) -> &GaussianRational {
        &self.0[(i, j)]
    }

    pub fn diagonal_values(&self) -> Vec<Rational> {
        (0..self.size()).map(|i| self.0[(i, i)].re.clone()).collect()
    }

    pub fn trace(&self) -> Rational {
        (0..self.size()).map(|i| self.0[(i, i)].re.clone()).sum()
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.size()).all(|i| (0..self.size()).all(|j| i == j || self.0[(i, j)].is_zero()))
    }

    /// Entrywise sum.
    pub fn add(&self, other: &HermMatrix) -> Result<HermMatrix> {
        if self.size() != other.size() {
            return Err(Error::DimensionMismatch { expected: self.size(), got: other.size() });
        }
        Ok(HermMatrix(Matrix::from_fn(self.size(), self.size(), |i, j| {
            &self.0[(i, j)] + &other.0[(i, j)]
        })))
    }

    pub(crate) fn from_trusted(entries: Matrix<GaussianRational>) -> Self {
        debug_assert!(HermMatrix::new(entries.clone()).is_ok());
        HermMatrix(entries)
    }
}

fn mat_mul(a: &Matrix<GaussianRational>, b: &Matrix<GaussianRational>) -> Matrix<GaussianRational> {
    let k = a.rows();
    Matrix::from_fn(k, k, |i, j| {
        let mut acc = GaussianRational::zero();
        for l in 0..k {
            if a[(i, l)].is_zero() || b[(l, j)].is_zero() {
                continue;
            }
            acc += &(&a[(i, l)] * &b[(l, j)]);
        }
        acc
    })
}

/// Coefficients of `det(tI - H)` from `t^k` down to the constant term,
/// by the Faddeev-LeVerrier recurrence.
pub fn char_poly(h: &HermMatrix) -> Vec<Rational> {
    let k = h.size();
    let a = h.entries();
    let mut coeffs = vec![Rational::from_integer(1.into())];
    // m holds M_j; the recurrence is M_1 = I, M_{j+1} = A M_j + c_{k-j} I.
    let mut m = Matrix::from_fn(k, k, |i, j| {
        if i == j {
            GaussianRational::one()
        } else {
            GaussianRational::zero()
        }
    });
    for step in 1..=k {
        let am = mat_mul(a, &m);
        let mut tr = GaussianRational::zero();
        for i in 0..k {
            tr += &am[(i, i)];
        }
        assert!(tr.is_real(), "trace of A·M_j is real for Hermitian A");
        let c = -tr.re / Rational::from_integer(BigInt::from(step));
        coeffs.push(c.clone());
        if step < k {
            m = am;
            for i in 0..k {
                m[(i, i)] += &GaussianRational::real(c.clone());
            }
        }
    }
    coeffs
}

/// Positive semidefiniteness from the characteristic polynomial: writing it
/// as `t^k - e_1 t^{k-1} + e_2 t^{k-2} - ...`, a Hermitian matrix is PSD
/// exactly when every `e_j >= 0`.
pub fn psd_check(h: &HermMatrix) -> bool {
    char_poly(h).iter().enumerate().all(|(j, c)| {
        let e = if j % 2 == 0 { c.clone() } else { -c.clone() };
        !e.is_negative()
    })
}

/// Positive semidefiniteness by symmetric-pivoted LDL* elimination.
pub fn psd_check_ldl(h: &HermMatrix) -> bool {
    let k = h.size();
    let mut a: Vec<Vec<GaussianRational>> = h.entries().to_rows();
    let mut active: Vec<usize> = (0..k).collect();
    while !active.is_empty() {
        // Largest diagonal among the remaining indices, first on ties.
        let (pos, &p) = active
            .iter()
            .enumerate()
            .max_by(|(ia, &x), (ib, &y)| a[x][x].re.cmp(&a[y][y].re).then(ib.cmp(ia)))
            .expect("non-empty");
        let d = a[p][p].re.clone();
        if d.is_negative() {
            return false;
        }
        if d.is_zero() {
            // Every remaining diagonal is zero; PSD forces the block to vanish.
            return active.iter().all(|&i| active.iter().all(|&j| a[i][j].is_zero()));
        }
        active.remove(pos);
        let pivot = GaussianRational::real(d);
        for &i in &active {
            let l = a[i][p].div(&pivot);
            if l.is_zero() {
                continue;
            }
            for &j in &active {
                let delta = &l * &a[p][j];
                a[i][j] = &a[i][j] - &delta;
            }
        }
    }
    true
}

fn to_gaussian_int_matrix(h: &HermMatrix) -> Matrix<GaussianInt> {
    let den = common_denominator(
        h.entries().to_rows().iter().flatten().flat_map(|z| [&z.re, &z.im]).collect::<Vec<_>>(),
    );
    let scale = |r: &Rational| r.numer() * (&den / r.denom());
    Matrix::from_fn(h.size(), h.size(), |i, j| {
        let z = h.get(i, j);
        GaussianInt::new(scale(&z.re), scale(&z.im))
    })
}

/// Rank by Bareiss elimination over the Gaussian integers.
pub fn herm_rank_elimination(h: &HermMatrix) -> usize {
    if h.size() == 0 {
        return 0;
    }
    bareiss_rank(to_gaussian_int_matrix(h))
}

/// Rank as `size` minus the multiplicity of zero as a root of the
/// characteristic polynomial; valid because Hermitian matrices are
/// diagonalizable.
pub fn herm_rank_charpoly(h: &HermMatrix) -> usize {
    let coeffs = char_poly(h);
    let trailing_zeros = coeffs.iter().rev().take_while(|c| c.is_zero()).count();
    h.size() - trailing_zeros
}

/// Exact rank, computed two ways and cross-checked.
pub fn herm_rank(h: &HermMatrix) -> Result<usize> {
    let by_elimination = herm_rank_elimination(h);
    let by_charpoly = herm_rank_charpoly(h);
    if by_elimination != by_charpoly {
        return Err(Error::InternalInconsistency(format!(
            "rank by elimination {by_elimination} != rank by characteristic polynomial {by_charpoly}"
        )));
    }
    Ok(by_elimination)
}
