//! Exact extreme-ray and vertex enumeration for pointed rational cones.
//!
//! [`extreme_rays_dd`] is the production engine. [`extreme_rays_bruteforce`]
//! is an independent oracle for small dimensions, and [`certify_vertex`]
//! checks a single point by the rank of its tight constraints.

mod bruteforce;
mod dd;
mod bits;
mod scalar;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

pub use bruteforce::{extreme_rays_bruteforce, BRUTEFORCE_MAX_DIM};
pub use dd::{AdjacencyTest, DdOptions, InsertionOrder};

use crate::error::{Error, Result};
use crate::linalg::{primitive_integer_row, rational_rank, Matrix, Rational};

/// The cone `{x in Q^N : A x >= 0}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HRepCone {
    dim: usize,
    constraints: Vec<Vec<Rational>>,
    int_rows: Vec<Vec<BigInt>>,
}

impl HRepCone {
    pub fn new(dim: usize, constraints: Vec<Vec<Rational>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidInput("cone dimension must be positive".into()));
        }
        for (i, row) in constraints.iter().enumerate() {
            if row.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: row.len() });
            }
            if row.iter().all(Zero::is_zero) {
                return Err(Error::InvalidInput(format!("constraint {i} is the zero row")));
            }
        }
        let int_rows = constraints.iter().map(|r| primitive_integer_row(r)).collect();
        Ok(HRepCone { dim, constraints, int_rows })
    }

    pub fn from_integer_rows(dim: usize, rows: &[Vec<i64>]) -> Result<Self> {
        let constraints = rows
            .iter()
            .map(|r| r.iter().map(|&v| Rational::from_integer(v.into())).collect())
            .collect();
        Self::new(dim, constraints)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn constraints(&self) -> &[Vec<Rational>] {
        &self.constraints
    }

    pub fn constraint_count(&self) -> usize {
        self.constraints.len()
    }

    pub(crate) fn int_rows(&self) -> &[Vec<BigInt>] {
        &self.int_rows
    }

    pub fn rank(&self) -> usize {
        if self.constraints.is_empty() {
            return 0;
        }
        rational_rank(&Matrix::from_rows(self.constraints.clone()).expect("uniform width"))
    }

    /// `A x >= 0` for an integer direction.
    pub fn contains(&self, coords: &[BigInt]) -> bool {
        dd::is_feasible(&self.int_rows, coords)
    }

    pub fn tight_rows(&self, coords: &[BigInt]) -> Vec<usize> {
        dd::tight_rows(&self.int_rows, coords)
    }

    /// A nonzero feasible direction is extreme iff its tight rows have rank `N - 1`.
    pub fn certify_ray(&self, coords: &[BigInt]) -> bool {
        if coords.iter().all(Zero::is_zero) || !self.contains(coords) {
            return false;
        }
        let tight: Vec<Vec<BigInt>> =
            self.tight_rows(coords).into_iter().map(|i| self.int_rows[i].clone()).collect();
        crate::linalg::integer_rank(&tight) + 1 == self.dim
    }
}

/// An extreme ray: a primitive integer direction and the constraints tight on it.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Ray {
    pub coords: Vec<BigInt>,
    pub tight_set: Vec<usize>,
}

impl Ray {
    pub(crate) fn from_coords(cone: &HRepCone, mut coords: Vec<BigInt>) -> Ray {
        let g = coords.iter().fold(BigInt::zero(), |acc, v| num_integer::Integer::gcd(&acc, v));
        if !g.is_zero() && !g.is_one() {
            coords.iter_mut().for_each(|v| *v /= &g);
        }
        let tight_set = cone.tight_rows(&coords);
        Ray { coords, tight_set }
    }
}

/// Orients a direction so that its coordinate sum is positive, or its first
/// nonzero coordinate when the sum vanishes.
pub fn canonical_orientation(coords: &mut [BigInt]) {
    let sum: BigInt = coords.iter().sum();
    let flip = if !sum.is_zero() {
        sum.is_negative()
    } else {
        coords.iter().find(|v| !v.is_zero()).is_some_and(|v| v.is_negative())
    };
    if flip {
        coords.iter_mut().for_each(|v| *v = -v.clone());
    }
}

type EngineRun = fn(&[Vec<BigInt>], usize, &[usize], &[usize], &DdOptions) -> Result<Vec<dd::RawRay>, dd::Failure>;

/// Extreme rays of a pointed cone by double description, sorted by
/// coordinates. Runs on 32-bit integers and repeats on wider
/// ones whenever an intermediate value overflows.
pub fn extreme_rays_dd(cone: &HRepCone, opts: &DdOptions) -> Result<Vec<Ray>> {
    let rows = cone.int_rows();
    let order = dd::insertion_order(rows, opts.order);
    let basis = dd::select_basis(rows, &order, cone.dim());
    if basis.len() < cone.dim() {
        return Err(Error::NotPointed { rank: basis.len(), dim: cone.dim() });
    }
    let run = |attempt: EngineRun| {
        attempt(rows, cone.dim(), &order, &basis, opts)
    };
    let raw = match run(dd::run::<i32>) {
        Err(dd::Failure::Overflow) => match run(dd::run::<i64>) {
            Err(dd::Failure::Overflow) => run(dd::run::<BigInt>),
            r => r,
        },
        r => r,
    };
    let raw = match raw {
        Ok(r) => r,
        Err(dd::Failure::Fatal(e)) => return Err(e),
        Err(dd::Failure::Overflow) => unreachable!("big integers do not overflow"),
    };
    let mut rays: Vec<Ray> = raw.into_iter().map(|(coords, tight_set)| Ray { coords, tight_set }).collect();
    rays.sort();
    rays.dedup();
    Ok(rays)
}

/// A point of a polytope together with the constraint rows tight at it.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Vertex {
    pub coords: Vec<Rational>,
    /// Tight cone rows; the two rows of the slicing hyperplane are implicit.
    pub tight_set: Vec<usize>,
    pub is_unit_vector: bool,
}

impl Vertex {
    pub fn has_negative_coordinate(&self) -> bool {
        self.coords.iter().any(Signed::is_negative)
    }
}

fn is_unit_vector(coords: &[Rational]) -> bool {
    let mut nonzero = coords.iter().filter(|v| !v.is_zero());
    matches!((nonzero.next(), nonzero.next()), (Some(v), None) if v.is_one())
}

/// Scales each ray so that `functional · x == level`.
pub fn slice_to_vertices(rays: &[Ray], functional: &[Rational], level: &Rational) -> Result<Vec<Vertex>> {
    let mut out = Vec::with_capacity(rays.len());
    for (i, ray) in rays.iter().enumerate() {
        if ray.coords.len() != functional.len() {
            return Err(Error::DimensionMismatch { expected: functional.len(), got: ray.coords.len() });
        }
        let value: Rational = functional
            .iter()
            .zip(&ray.coords)
            .map(|(f, x)| f * Rational::from_integer(x.clone()))
            .sum();
        if !value.is_positive() {
            return Err(Error::NonPositiveLevel { ray: i });
        }
        let scale = level / value;
        let coords: Vec<Rational> =
            ray.coords.iter().map(|x| Rational::from_integer(x.clone()) * &scale).collect();
        let unit = is_unit_vector(&coords);
        out.push(Vertex { coords, tight_set: ray.tight_set.clone(), is_unit_vector: unit });
    }
    Ok(out)
}

/// The inequality system `{Tr x >= 1, -Tr x >= -1, A x >= 0}` of the
/// trace-one slice of a cone.
pub fn trace_slice_system(cone: &HRepCone) -> (Vec<Vec<Rational>>, Vec<Rational>) {
    let n = cone.dim();
    let mut rows = vec![vec![Rational::one(); n], vec![-Rational::one(); n]];
    rows.extend(cone.constraints().iter().cloned());
    let mut rhs = vec![Rational::one(), -Rational::one()];
    rhs.extend(std::iter::repeat_n(Rational::zero(), cone.constraint_count()));
    (rows, rhs)
}

/// Decides whether a feasible `p` is an extreme point of
/// `{x : <a_i, x> >= k_i}`: it is exactly when the tight rows have full rank.
pub fn certify_vertex(rows: &[Vec<Rational>], rhs: &[Rational], p: &[Rational]) -> Result<bool> {
    if rows.len() != rhs.len() {
        return Err(Error::DimensionMismatch { expected: rows.len(), got: rhs.len() });
    }
    let mut tight = Vec::new();
    for (i, (row, k)) in rows.iter().zip(rhs).enumerate() {
        if row.len() != p.len() {
            return Err(Error::DimensionMismatch { expected: p.len(), got: row.len() });
        }
        let value: Rational = row.iter().zip(p).map(|(a, x)| a * x).sum();
        match value.cmp(k) {
            std::cmp::Ordering::Less => return Err(Error::Infeasible { row: i }),
            std::cmp::Ordering::Equal => tight.push(row.clone()),
            std::cmp::Ordering::Greater => {}
        }
    }
    if tight.is_empty() {
        return Ok(p.is_empty());
    }
    Ok(rational_rank(&Matrix::from_rows(tight)?) == p.len())
}
