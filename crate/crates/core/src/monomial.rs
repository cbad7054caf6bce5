//! Degree-`d` monomials in `n` variables and their canonical ordering.
//!
//! Within a fixed degree, exponent vectors are listed in descending
//! lexicographic order: `z_1^d` first, `z_n^d` last. Every coefficient
//! vector and matrix in this crate is indexed by that order.

use std::fmt;

use crate::error::{Error, Result};

/// Binomial coefficient `C(n, k)`, zero when `k > n`.
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as usize
}

/// Number of exponent vectors of length `parts` summing to `total`.
fn compositions(parts: usize, total: usize) -> usize {
    if parts == 0 {
        usize::from(total == 0)
    } else {
        binomial(total + parts - 1, parts - 1)
    }
}

/// Number of degree-`d` monomials in `n` variables, `C(n+d-1, d)`.
pub fn basis_size(n: usize, d: usize) -> usize {
    compositions(n, d)
}

/// Exponent vector of a monomial `z^alpha`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(exponents: Vec<u32>) -> Self {
        MultiIndex(exponents)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn vars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> usize {
        self.0.iter().map(|&e| e as usize).sum()
    }

    /// `self + e_var`, i.e. multiplication by `z_var` (0-based).
    pub fn raised(&self, var: usize) -> MultiIndex {
        let mut e = self.0.clone();
        e[var] += 1;
        MultiIndex(e)
    }

    /// `self - e_var`, or `None` when the exponent of `z_var` is zero.
    pub fn lowered(&self, var: usize) -> Option<MultiIndex> {
        if self.0[var] == 0 {
            return None;
        }
        let mut e = self.0.clone();
        e[var] -= 1;
        Some(MultiIndex(e))
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

/// All degree-`d` monomials in `n` variables, in canonical order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialBasis {
    n: usize,
    d: usize,
    indices: Vec<MultiIndex>,
}

impl MonomialBasis {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn indices(&self) -> &[MultiIndex] {
        &self.indices
    }

    pub fn get(&self, rank: usize) -> Option<&MultiIndex> {
        self.indices.get(rank)
    }

    /// Position of `m` in this basis.
    pub fn rank_of(&self, m: &MultiIndex) -> Result<usize> {
        if m.vars() != self.n || m.degree() != self.d {
            return Err(Error::NotInBasis {
                index: format!("{m:?}"),
                n: self.n,
                d: self.d,
            });
        }
        Ok(rank_in_order(m.exponents()))
    }

    /// The exponent vector at position `rank` (inverse of [`Self::rank_of`]).
    pub fn unrank(&self, rank: usize) -> Option<MultiIndex> {
        if rank >= self.len() {
            return None;
        }
        let mut exps = vec![0u32; self.n];
        let mut remaining = self.d;
        let mut r = rank;
        for i in 0..self.n {
            if i + 1 == self.n {
                exps[i] = remaining as u32;
                break;
            }
            // Larger exponents come first.
            let mut v = remaining;
            loop {
                let block = compositions(self.n - i - 1, remaining - v);
                if r < block {
                    break;
                }
                r -= block;
                v -= 1;
            }
            exps[i] = v as u32;
            remaining -= v;
        }
        Some(MultiIndex(exps))
    }
}

/// Combinatorial rank of an exponent vector in descending lexicographic order
/// among vectors of the same length and total.
fn rank_in_order(exps: &[u32]) -> usize {
    let n = exps.len();
    let mut remaining: usize = exps.iter().map(|&e| e as usize).sum();
    let mut rank = 0;
    for i in 0..n.saturating_sub(1) {
        let a = exps[i] as usize;
        for v in (a + 1)..=remaining {
            rank += compositions(n - i - 1, remaining - v);
        }
        remaining -= a;
    }
    rank
}

/// Lists every degree-`d` monomial in `n` variables, `z_1^d` first.
pub fn enumerate_monomials(n: usize, d: usize) -> MonomialBasis {
    assert!(n >= 1, "at least one variable is required");
    let mut indices = Vec::with_capacity(basis_size(n, d));
    let mut current = vec![0u32; n];
    fill(&mut current, 0, d, &mut indices);
    MonomialBasis { n, d, indices }
}

fn fill(current: &mut [u32], pos: usize, remaining: usize, out: &mut Vec<MultiIndex>) {
    if pos + 1 == current.len() {
        current[pos] = remaining as u32;
        out.push(MultiIndex(current.to_vec()));
        return;
    }
    for v in (0..=remaining).rev() {
        current[pos] = v as u32;
        fill(current, pos + 1, remaining - v, out);
    }
    current[pos] = 0;
}

/// Rank in `basis_d1` of `m + e_var`: the index-level effect of multiplying
/// `|z^m|^2` by `|z_var|^2`.
pub fn shift_index(
    basis_d: &MonomialBasis,
    basis_d1: &MonomialBasis,
    m: &MultiIndex,
    var: usize,
) -> usize {
    debug_assert_eq!(basis_d.n(), basis_d1.n());
    debug_assert_eq!(basis_d.d() + 1, basis_d1.d());
    rank_in_order(m.raised(var).exponents())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashMap;

    fn mi(e: &[u32]) -> MultiIndex {
        MultiIndex::new(e.to_vec())
    }

    #[test]
    fn two_vars_degree_two() {
        let b = enumerate_monomials(2, 2);
        assert_eq!(b.indices(), &[mi(&[2, 0]), mi(&[1, 1]), mi(&[0, 2])]);
    }

    #[test]
    fn single_variable() {
        assert_eq!(enumerate_monomials(1, 5).indices(), &[mi(&[5])]);
    }

    #[test]
    fn three_vars_degree_two() {
        let b = enumerate_monomials(3, 2);
        assert_eq!(b.len(), 6);
        assert_eq!(b.indices()[0], mi(&[2, 0, 0]));
        assert_eq!(b.indices()[5], mi(&[0, 0, 2]));
    }

    #[test]
    fn degree_zero_is_the_constant() {
        assert_eq!(enumerate_monomials(4, 0).indices(), &[mi(&[0, 0, 0, 0])]);
    }

    #[test]
    fn rank_examples() {
        let b22 = enumerate_monomials(2, 2);
        assert_eq!(b22.rank_of(&mi(&[1, 1])).unwrap(), 1);
        assert_eq!(b22.rank_of(&mi(&[2, 0])).unwrap(), 0);
        let b32 = enumerate_monomials(3, 2);
        assert_eq!(b32.rank_of(&mi(&[0, 0, 2])).unwrap(), 5);
    }

    #[test]
    fn rank_rejects_foreign_indices() {
        let b = enumerate_monomials(2, 2);
        assert!(matches!(b.rank_of(&mi(&[1, 0])), Err(Error::NotInBasis { .. })));
        assert!(matches!(b.rank_of(&mi(&[1, 1, 0])), Err(Error::NotInBasis { .. })));
    }

    #[test]
    fn shift_examples() {
        let b2 = enumerate_monomials(2, 2);
        let b3 = enumerate_monomials(2, 3);
        assert_eq!(shift_index(&b2, &b3, &mi(&[1, 1]), 0), 1);
        assert_eq!(shift_index(&b2, &b3, &mi(&[0, 2]), 1), 3);
        let b1k = enumerate_monomials(1, 4);
        let b1k1 = enumerate_monomials(1, 5);
        assert_eq!(shift_index(&b1k, &b1k1, &mi(&[4]), 0), 0);
    }

    #[test]
    fn sizes_match_binomial() {
        for n in 1..=8 {
            for d in 0..=8 {
                assert_eq!(enumerate_monomials(n, d).len(), binomial(n + d - 1, d), "n={n} d={d}");
            }
        }
    }

    #[test]
    fn strictly_descending_and_rank_roundtrip() {
        for n in 1..=6 {
            for d in 0..=6 {
                let b = enumerate_monomials(n, d);
                for w in b.indices().windows(2) {
                    assert!(w[0] > w[1]);
                }
                for (r, m) in b.indices().iter().enumerate() {
                    assert_eq!(b.rank_of(m).unwrap(), r);
                    assert_eq!(b.unrank(r).as_ref(), Some(m));
                }
                assert_eq!(b.unrank(b.len()), None);
            }
        }
    }

    #[test]
    fn shift_agrees_with_lookup() {
        for n in 1..=7 {
            for d in 0..=(8 - n) {
                let bd = enumerate_monomials(n, d);
                let bd1 = enumerate_monomials(n, d + 1);
                let lookup: HashMap<_, _> =
                    bd1.indices().iter().enumerate().map(|(r, m)| (m.clone(), r)).collect();
                for m in bd.indices() {
                    for var in 0..n {
                        assert_eq!(shift_index(&bd, &bd1, m, var), lookup[&m.raised(var)]);
                    }
                }
            }
        }
    }
}
