//! The prolongation map `A -> A·‖z‖²` on bihomogeneous coefficients.
//!
//! On diagonal coefficient vectors the map is the sparse matrix `J_{n,d}` of
//! shape `C(n+d, d+1) × C(n+d-1, d)`. It is built two ways: by the block
//! recursion over the exponent of `z_1`, and directly from monomial shifts.
//! The two must agree entrywise.

use std::fmt;
use std::str::FromStr;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::{GaussianRational, HermMatrix, Matrix, Rational};
use crate::monomial::{basis_size, enumerate_monomials, shift_index, MultiIndex};

/// Coefficient of each `|z_i|^2` in the norm form; `+1` everywhere is the
/// standard Euclidean norm.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SignVector(Vec<i8>);

impl SignVector {
    pub fn new(signs: Vec<i8>) -> Result<Self> {
        if signs.iter().any(|s| !matches!(s, -1..=1)) {
            return Err(Error::InvalidInput("signs must be -1, 0 or +1".into()));
        }
        if signs.iter().all(|&s| s == 0) {
            return Err(Error::InvalidInput("sign vector needs a nonzero entry".into()));
        }
        Ok(SignVector(signs))
    }

    pub fn standard(n: usize) -> Self {
        SignVector(vec![1; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn signs(&self) -> &[i8] {
        &self.0
    }

    pub fn is_standard(&self) -> bool {
        self.0.iter().all(|&s| s == 1)
    }

    /// `Σ s_i`, the trace scaling factor of the signed prolongation.
    pub fn sum(&self) -> i64 {
        self.0.iter().map(|&s| i64::from(s)).sum()
    }
}

impl fmt::Display for SignVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<&str> = self
            .0
            .iter()
            .map(|s| match s {
                1 => "+",
                -1 => "-",
                _ => "0",
            })
            .collect();
        write!(f, "{}", parts.join(","))
    }
}

impl FromStr for SignVector {
    type Err = Error;

    /// Parses `+,-,0,...`.
    fn from_str(s: &str) -> Result<Self> {
        let signs = s
            .split(',')
            .map(|t| match t.trim() {
                "+" | "+1" | "1" => Ok(1),
                "-" | "-1" => Ok(-1),
                "0" => Ok(0),
                other => Err(Error::InvalidInput(format!("bad sign {other:?}"))),
            })
            .collect::<Result<Vec<i8>>>()?;
        SignVector::new(signs)
    }
}

/// Sparse `{-1, 0, +1}` matrix of the (signed) prolongation on diagonal
/// coefficients. Entries are `(row, col, sign)` sorted by row then column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProlongationMatrix {
    n: usize,
    d: usize,
    rows: usize,
    cols: usize,
    entries: Vec<(usize, usize, i8)>,
}

impl ProlongationMatrix {
    fn from_entries(n: usize, d: usize, mut entries: Vec<(usize, usize, i8)>) -> Self {
        entries.sort_unstable();
        ProlongationMatrix { n, d, rows: basis_size(n, d + 1), cols: basis_size(n, d), entries }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[(usize, usize, i8)] {
        &self.entries
    }

    pub fn dense(&self) -> Vec<Vec<i64>> {
        let mut out = vec![vec![0i64; self.cols]; self.rows];
        for &(r, c, s) in &self.entries {
            out[r][c] = i64::from(s);
        }
        out
    }

    /// Rows as rational vectors, for use as cone constraints.
    pub fn rational_rows(&self) -> Vec<Vec<Rational>> {
        self.dense()
            .into_iter()
            .map(|r| r.into_iter().map(|v| Rational::from_integer(v.into())).collect())
            .collect()
    }

    pub fn column_sums(&self) -> Vec<i64> {
        let mut sums = vec![0i64; self.cols];
        for &(_, c, s) in &self.entries {
            sums[c] += i64::from(s);
        }
        sums
    }

    /// `J · v` with exact arithmetic.
    pub fn apply(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch { expected: self.cols, got: v.len() });
        }
        let mut out = vec![Rational::zero(); self.rows];
        for &(r, c, s) in &self.entries {
            if s > 0 {
                out[r] += &v[c];
            } else {
                out[r] -= &v[c];
            }
        }
        Ok(out)
    }
}

/// `J_{n,d}` assembled from the block recursion on the exponent of `z_1`.
pub fn build_jnd_recursive(n: usize, d: usize) -> ProlongationMatrix {
    build_signed_recursive(d, &SignVector::standard(n))
}

/// Signed variant of [`build_jnd_recursive`].
pub fn build_signed_recursive(d: usize, signs: &SignVector) -> ProlongationMatrix {
    let n = signs.len();
    assert!(n >= 1, "at least one variable is required");
    ProlongationMatrix::from_entries(n, d, recursive_entries(d, signs.signs()))
}

fn recursive_entries(d: usize, signs: &[i8]) -> Vec<(usize, usize, i8)> {
    let s1 = signs[0];
    if signs.len() == 1 {
        return if s1 == 0 { Vec::new() } else { vec![(0, 0, s1)] };
    }
    let rest = signs.len() - 1;
    // Column block k holds exponent d-k of z_1; row block k holds d+1-k.
    let mut col_off = vec![0usize; d + 2];
    for k in 0..=d {
        col_off[k + 1] = col_off[k] + basis_size(rest, k);
    }
    let mut row_off = vec![0usize; d + 3];
    for k in 0..=d + 1 {
        row_off[k + 1] = row_off[k] + basis_size(rest, k);
    }
    let mut entries = Vec::new();
    for k in 0..=d {
        if s1 != 0 {
            for t in 0..basis_size(rest, k) {
                entries.push((row_off[k] + t, col_off[k] + t, s1));
            }
        }
        for (r, c, s) in recursive_entries(k, &signs[1..]) {
            entries.push((row_off[k + 1] + r, col_off[k] + c, s));
        }
    }
    entries
}

/// `J_{n,d}` built directly: column `alpha` has an entry in row `alpha + e_i`
/// for every variable `i`.
pub fn build_jnd_direct(n: usize, d: usize) -> ProlongationMatrix {
    build_signed_direct(d, &SignVector::standard(n))
}

pub fn build_signed_direct(d: usize, signs: &SignVector) -> ProlongationMatrix {
    let n = signs.len();
    let bd = enumerate_monomials(n, d);
    let bd1 = enumerate_monomials(n, d + 1);
    let mut entries = Vec::with_capacity(n * bd.len());
    for (col, alpha) in bd.indices().iter().enumerate() {
        for (var, &s) in signs.signs().iter().enumerate() {
            if s != 0 {
                entries.push((shift_index(&bd, &bd1, alpha, var), col, s));
            }
        }
    }
    ProlongationMatrix::from_entries(n, d, entries)
}

/// Diagonal coefficient vector indexed by the canonical monomial order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagCoeffVector {
    n: usize,
    d: usize,
    coeffs: Vec<Rational>,
}

impl DiagCoeffVector {
    pub fn new(n: usize, d: usize, coeffs: Vec<Rational>) -> Result<Self> {
        let expected = basis_size(n, d);
        if coeffs.len() != expected {
            return Err(Error::DimensionMismatch { expected, got: coeffs.len() });
        }
        Ok(DiagCoeffVector { n, d, coeffs })
    }

    pub fn zero(n: usize, d: usize) -> Self {
        DiagCoeffVector { n, d, coeffs: vec![Rational::zero(); basis_size(n, d)] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn trace(&self) -> Rational {
        self.coeffs.iter().sum()
    }
}

/// `J · v`, a diagonal coefficient vector of degree `d + 1`.
pub fn prolong_diag(j: &ProlongationMatrix, v: &DiagCoeffVector) -> Result<DiagCoeffVector> {
    if v.n != j.n || v.d != j.d {
        return Err(Error::DimensionMismatch { expected: j.cols, got: v.coeffs.len() });
    }
    let coeffs = j.apply(&v.coeffs)?;
    Ok(DiagCoeffVector { n: j.n, d: j.d + 1, coeffs })
}

/// Prolongation of a full Hermitian coefficient matrix:
/// `out[beta, beta'] = Σ_i s_i · H[beta - e_i, beta' - e_i]`.
pub fn prolong_hermitian(n: usize, d: usize, h: &HermMatrix, signs: &SignVector) -> Result<HermMatrix> {
    let expected = basis_size(n, d);
    if h.size() != expected {
        return Err(Error::DimensionMismatch { expected, got: h.size() });
    }
    if signs.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: signs.len() });
    }
    let bd = enumerate_monomials(n, d);
    let bd1 = enumerate_monomials(n, d + 1);
    let shifts: Vec<Vec<usize>> = bd
        .indices()
        .iter()
        .map(|a| (0..n).map(|i| shift_index(&bd, &bd1, a, i)).collect())
        .collect();
    let size = bd1.len();
    let mut out = Matrix::filled(size, size, GaussianRational::zero());
    for a in 0..expected {
        for b in 0..expected {
            let v = h.get(a, b);
            if v.is_zero() {
                continue;
            }
            for (i, &s) in signs.signs().iter().enumerate() {
                match s {
                    1 => out[(shifts[a][i], shifts[b][i])] += v,
                    -1 => out[(shifts[a][i], shifts[b][i])] += &-v,
                    _ => {}
                }
            }
        }
    }
    Ok(HermMatrix::from_trusted(out))
}

/// Entry rule of [`prolong_hermitian`] evaluated literally, one output entry
/// at a time. Used to cross-check the scatter implementation.
pub fn prolong_hermitian_entry(
    n: usize,
    d: usize,
    h: &HermMatrix,
    signs: &SignVector,
    beta: &MultiIndex,
    beta_prime: &MultiIndex,
) -> Result<GaussianRational> {
    let bd = enumerate_monomials(n, d);
    let mut acc = GaussianRational::zero();
    for (i, &s) in signs.signs().iter().enumerate() {
        if s == 0 {
            continue;
        }
        if let (Some(a), Some(b)) = (beta.lowered(i), beta_prime.lowered(i)) {
            let v = h.get(bd.rank_of(&a)?, bd.rank_of(&b)?);
            acc += &if s > 0 { v.clone() } else { -v };
        }
    }
    Ok(acc)
}
