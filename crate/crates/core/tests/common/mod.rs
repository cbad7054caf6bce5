#![allow(dead_code)]

use oksos_core::linalg::{GaussianRational, HermMatrix, Matrix};
use oksos_core::polytope::HRepCone;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Hermitian matrix with Gaussian-integer entries in `[-bound, bound]`.
pub fn random_hermitian(rng: &mut ChaCha8Rng, size: usize, bound: i64) -> HermMatrix {
    let mut m = Matrix::filled(size, size, GaussianRational::zero());
    for i in 0..size {
        m[(i, i)] = GaussianRational::from_ints(rng.gen_range(-bound..=bound), 0);
        for j in i + 1..size {
            let z = GaussianRational::from_ints(rng.gen_range(-bound..=bound), rng.gen_range(-bound..=bound));
            m[(j, i)] = z.conj();
            m[(i, j)] = z;
        }
    }
    HermMatrix::new(m).unwrap()
}

/// `B B*` for a random `size x inner` matrix `B`, so PSD of rank at most `inner`.
pub fn random_gram(rng: &mut ChaCha8Rng, size: usize, inner: usize) -> HermMatrix {
    let b: Vec<Vec<GaussianRational>> = (0..size)
        .map(|_| (0..inner).map(|_| GaussianRational::from_ints(rng.gen_range(-2..=2), rng.gen_range(-2..=2))).collect())
        .collect();
    let m = Matrix::from_fn(size, size, |i, j| {
        let mut acc = GaussianRational::zero();
        for k in 0..inner {
            acc += &(&b[i][k] * &b[j][k].conj());
        }
        acc
    });
    HermMatrix::new(m).unwrap()
}

/// Mix of indefinite, PSD and nearly PSD samples of sizes 2..=8.
pub fn hermitian_samples(rng: &mut ChaCha8Rng, count: usize) -> Vec<HermMatrix> {
    (0..count)
        .map(|k| {
            let size = rng.gen_range(2..=8);
            match k % 3 {
                0 => random_hermitian(rng, size, 5),
                1 => {
                    let inner = rng.gen_range(0..=size);
                    random_gram(rng, size, inner)
                }
                _ => {
                    let inner = rng.gen_range(1..size);
                    let g = random_gram(rng, size, inner);
                    let mut shift = vec![oksos_core::linalg::rat(0); size];
                    shift[rng.gen_range(0..size)] = oksos_core::linalg::rat(rng.gen_range(-1..=1));
                    g.add(&HermMatrix::diagonal(&shift)).unwrap()
                }
            }
        })
        .collect()
}

/// Full-dimensional pointed cone: rows oriented to be nonnegative at a
/// positive interior point, retried until the rows have full rank.
pub fn random_pointed_cone(rng: &mut ChaCha8Rng, dim: usize) -> HRepCone {
    loop {
        let x0: Vec<i64> = (0..dim).map(|_| rng.gen_range(1..=3)).collect();
        let count = rng.gen_range(dim..=dim + 6);
        let mut rows = Vec::new();
        while rows.len() < count {
            let mut row: Vec<i64> = (0..dim).map(|_| rng.gen_range(-3..=3)).collect();
            if row.iter().all(|&v| v == 0) {
                continue;
            }
            let at: i64 = row.iter().zip(&x0).map(|(a, b)| a * b).sum();
            if at < 0 {
                row.iter_mut().for_each(|v| *v = -*v);
            }
            rows.push(row);
        }
        let cone = HRepCone::from_integer_rows(dim, &rows).unwrap();
        if cone.rank() == dim {
            return cone;
        }
    }
}
