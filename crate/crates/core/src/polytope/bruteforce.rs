//! Subset enumeration oracle for extreme rays.
//!
//! Every extreme ray of a pointed cone spans the kernel of some `N - 1`
//! tight rows of rank `N - 1`. Trying every such subset, keeping the feasible
//! kernel directions and deduplicating gives exactly the extreme rays.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::iter::{ParallelBridge, ParallelIterator};

use super::{canonical_orientation, HRepCone, Ray};
use crate::error::{Error, Result};
use crate::linalg::kernel_line;

/// Largest cone dimension the oracle accepts.
pub const BRUTEFORCE_MAX_DIM: usize = 12;

struct Combinations {
    n: usize,
    current: Option<Vec<usize>>,
}

impl Combinations {
    fn new(n: usize, k: usize) -> Self {
        Combinations { n, current: (k <= n).then(|| (0..k).collect()) }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.clone()?;
        let k = out.len();
        let mut next = out.clone();
        let mut i = k;
        loop {
            if i == 0 {
                self.current = None;
                break;
            }
            i -= 1;
            if next[i] < self.n - k + i {
                next[i] += 1;
                for j in i + 1..k {
                    next[j] = next[j - 1] + 1;
                }
                self.current = Some(next);
                break;
            }
        }
        Some(out)
    }
}

pub fn extreme_rays_bruteforce(cone: &HRepCone) -> Result<Vec<Ray>> {
    let dim = cone.dim();
    if dim > BRUTEFORCE_MAX_DIM {
        return Err(Error::TooLarge { dim, limit: BRUTEFORCE_MAX_DIM });
    }
    let rows = cone.int_rows();
    let found: BTreeSet<Vec<BigInt>> = Combinations::new(rows.len(), dim - 1)
        .par_bridge()
        .filter_map(|subset| {
            let sub: Vec<Vec<BigInt>> = subset.iter().map(|&i| rows[i].clone()).collect();
            let mut u = kernel_line(&sub, dim)?;
            canonical_orientation(&mut u);
            if cone.contains(&u) {
                return Some(u);
            }
            let neg: Vec<BigInt> = u.iter().map(|v| -v).collect();
            cone.contains(&neg).then_some(neg)
        })
        .collect();
    Ok(found
        .into_iter()
        .filter(|u| u.iter().any(|v| !v.is_zero()))
        .map(|u| Ray::from_coords(cone, u))
        .collect())
}
