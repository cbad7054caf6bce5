//! Incremental double description for pointed cones `{x : A x >= 0}`.
//!
//! Start from a simplicial cone cut out by `N` linearly independent rows,
//! whose extreme rays are the columns of the inverse, then add the remaining
//! rows one at a time. A new row splits the current rays into positive, zero
//! and negative classes. Negative rays are dropped and every adjacent
//! positive/negative pair is replaced by the ray where the row is tight.

use std::time::Instant;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::bits;
use super::scalar::{make_primitive, DdScalar};
use crate::error::Error;
use crate::linalg::{integer_rank, primitive_integer_row, Rational};

/// Order in which constraints are inserted after the initial simplicial cone.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum InsertionOrder {
    /// Ascending number of nonzeros, ties by row index.
    #[default]
    SparseFirst,
    Natural,
    /// Uniform shuffle from a fixed seed.
    Seeded(u64),
}

/// How a positive/negative ray pair is judged adjacent.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum AdjacencyTest {
    /// No third ray is tight on every row the pair shares.
    #[default]
    Combinatorial,
    /// The rows shared by the pair have rank `N - 2`.
    Algebraic,
}

#[derive(Clone, Debug, Default)]
pub struct DdOptions {
    pub order: InsertionOrder,
    pub adjacency: AdjacencyTest,
    /// Abort with [`Error::TimedOut`] once this instant has passed.
    pub deadline: Option<Instant>,
    /// Keep only rays on which at most this many rows are strictly positive.
    /// The result is then exactly the extreme rays with that property: a
    /// ray created from a pair is slack on the union of the pair's slack
    /// rows, and any ray refuting adjacency of the pair is slack on a subset
    /// of that union.
    pub max_slack: Option<usize>,
}

impl DdOptions {
    fn check_deadline(&self) -> Result<(), Failure> {
        match self.deadline {
            Some(t) if Instant::now() >= t => Err(Failure::Fatal(Error::TimedOut)),
            _ => Ok(()),
        }
    }
}

pub(crate) enum Failure {
    Overflow,
    Fatal(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Fatal(e)
    }
}

pub(crate) fn insertion_order(rows: &[Vec<BigInt>], order: InsertionOrder) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..rows.len()).collect();
    match order {
        InsertionOrder::Natural => {}
        InsertionOrder::SparseFirst => {
            idx.sort_by_key(|&i| (rows[i].iter().filter(|v| !Zero::is_zero(*v)).count(), i));
        }
        InsertionOrder::Seeded(seed) => {
            idx.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        }
    }
    idx
}

/// First `dim` linearly independent rows in `order`, or all independent rows
/// found when the matrix is rank deficient.
pub(crate) fn select_basis(rows: &[Vec<BigInt>], order: &[usize], dim: usize) -> Vec<usize> {
    // Echelon rows with their pivot columns; later rows vanish at earlier pivots.
    let mut echelon: Vec<(usize, Vec<BigInt>)> = Vec::new();
    let mut basis = Vec::new();
    for &i in order {
        if basis.len() == dim {
            break;
        }
        let mut r = rows[i].clone();
        for (pc, b) in &echelon {
            if Zero::is_zero(&r[*pc]) {
                continue;
            }
            let (f, g) = (b[*pc].clone(), r[*pc].clone());
            for (x, y) in r.iter_mut().zip(b.iter()) {
                *x = &*x * &f - y * &g;
            }
            let rat: Vec<Rational> = r.iter().map(|v| Rational::from_integer(v.clone())).collect();
            r = primitive_integer_row(&rat);
        }
        if let Some(pc) = r.iter().position(|v| !Zero::is_zero(v)) {
            echelon.push((pc, r));
            basis.push(i);
        }
    }
    basis
}

/// Columns of the inverse of the square matrix formed by `basis` rows,
/// each scaled to a primitive integer vector.
fn inverse_columns(rows: &[Vec<BigInt>], basis: &[usize], dim: usize) -> Vec<Vec<BigInt>> {
    let mut aug: Vec<Vec<Rational>> = basis
        .iter()
        .enumerate()
        .map(|(k, &i)| {
            let mut r: Vec<Rational> = rows[i].iter().map(|v| Rational::from_integer(v.clone())).collect();
            r.extend((0..dim).map(|j| Rational::from_integer(BigInt::from(u8::from(j == k)))));
            r
        })
        .collect();
    for c in 0..dim {
        let p = (c..dim).find(|&i| !aug[i][c].is_zero()).expect("basis rows are independent");
        aug.swap(c, p);
        let inv = aug[c][c].recip();
        for v in aug[c].iter_mut() {
            *v *= &inv;
        }
        for i in 0..dim {
            if i != c && !aug[i][c].is_zero() {
                let f = aug[i][c].clone();
                for j in c..2 * dim {
                    let delta = &f * &aug[c][j];
                    aug[i][j] -= delta;
                }
            }
        }
    }
    (0..dim)
        .map(|k| {
            let col: Vec<Rational> = (0..dim).map(|i| aug[i][dim + k].clone()).collect();
            primitive_integer_row(&col)
        })
        .collect()
}

/// Current rays stored contiguously: `dim` coordinates and `words` zero-set
/// words per ray. The zero set of a ray is the set of inserted rows it is
/// tight on.
struct RayStore<S> {
    dim: usize,
    words: usize,
    coords: Vec<S>,
    zeros: Vec<u64>,
}

impl<S: DdScalar> RayStore<S> {
    fn new(dim: usize, words: usize) -> Self {
        RayStore { dim, words, coords: Vec::new(), zeros: Vec::new() }
    }

    fn len(&self) -> usize {
        self.zeros.len() / self.words
    }

    fn coords(&self, i: usize) -> &[S] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    fn zeros(&self, i: usize) -> &[u64] {
        &self.zeros[i * self.words..(i + 1) * self.words]
    }

    fn push(&mut self, coords: impl IntoIterator<Item = S>, zeros: &[u64]) {
        self.coords.extend(coords);
        self.zeros.extend_from_slice(zeros);
    }

    fn append(&mut self, other: RayStore<S>) {
        self.coords.extend(other.coords);
        self.zeros.extend(other.zeros);
    }

    /// Inserted rows on which ray `i` is not tight.
    fn slack(&self, i: usize, inserted: &[u64]) -> Vec<u32> {
        let z = self.zeros(i);
        let w: Vec<u64> = inserted.iter().zip(z).map(|(a, b)| a & !b).collect();
        bits::ones(&w).map(|r| r as u32).collect()
    }
}

/// Primitive integer coordinates and tight rows.
pub(crate) type RawRay = (Vec<BigInt>, Vec<usize>);

fn dot<S: DdScalar>(row: &[(usize, S)], coords: &[S]) -> Option<S> {
    let mut acc = S::zero();
    for (j, a) in row {
        if coords[*j].is_zero() {
            continue;
        }
        acc = acc.add(&a.mul(&coords[*j])?)?;
    }
    Some(acc)
}

/// Runs the engine over scalar type `S`. Returns every extreme ray as a
/// primitive integer vector with its tight rows.
pub(crate) fn run<S: DdScalar>(
    rows: &[Vec<BigInt>],
    dim: usize,
    order: &[usize],
    basis: &[usize],
    opts: &DdOptions,
) -> Result<Vec<RawRay>, Failure> {
    let m = rows.len();
    let words = bits::words_for(m);
    let sparse: Vec<Vec<(usize, S)>> = rows
        .iter()
        .map(|r| {
            r.iter()
                .enumerate()
                .filter(|(_, v)| !Zero::is_zero(*v))
                .map(|(j, v)| S::from_bigint(v).map(|s| (j, s)))
                .collect::<Option<Vec<_>>>()
        })
        .collect::<Option<Vec<_>>>()
        .ok_or(Failure::Overflow)?;
    let small_rows: Option<Vec<Vec<i64>>> =
        rows.iter().map(|r| r.iter().map(|v| i64::try_from(v).ok()).collect()).collect();

    let mut store = RayStore::<S>::new(dim, words);
    for (k, col) in inverse_columns(rows, basis, dim).into_iter().enumerate() {
        let coords = col.iter().map(S::from_bigint).collect::<Option<Vec<_>>>().ok_or(Failure::Overflow)?;
        let mut zeros = vec![0u64; words];
        for (l, &b) in basis.iter().enumerate() {
            if l != k {
                bits::insert(&mut zeros, b);
            }
        }
        store.push(coords, &zeros);
    }

    let mut inserted = vec![0u64; words];
    basis.iter().for_each(|&b| bits::insert(&mut inserted, b));
    let remaining: Vec<usize> = order.iter().copied().filter(|&i| !bits::contains(&inserted, i)).collect();
    for row in remaining {
        opts.check_deadline()?;
        let vals = (0..store.len())
            .into_par_iter()
            .map(|i| dot(&sparse[row], store.coords(i)))
            .collect::<Option<Vec<S>>>()
            .ok_or(Failure::Overflow)?;
        let neg: Vec<usize> = (0..vals.len()).filter(|&i| vals[i].is_negative()).collect();
        if neg.is_empty() && opts.max_slack.is_none() {
            for (i, v) in vals.iter().enumerate() {
                if v.is_zero() {
                    bits::insert(&mut store.zeros[i * words..(i + 1) * words], row);
                }
            }
            bits::insert(&mut inserted, row);
            continue;
        }
        let pos: Vec<usize> = (0..vals.len()).filter(|&i| vals[i].is_positive()).collect();

        // A pair can only be adjacent if it shares at least `dim - 2` tight
        // rows, i.e. its slack rows together number at most `limit`.
        let cap = opts.max_slack.unwrap_or(usize::MAX);
        let limit = (bits::count(&inserted) + 2 - dim).min(cap);
        // A packed linear scan beats the trie search until the negative side
        // gets large.
        let use_scan = neg.len() * words <= SCAN_LIMIT;
        let neg_slack: Vec<u64> = neg
            .iter()
            .flat_map(|&q| inserted.iter().zip(store.zeros(q)).map(|(a, b)| a & !b))
            .collect();
        let neg_trie = (!use_scan).then(|| SlackTrie::build(neg.iter().map(|&q| (store.slack(q, &inserted), q as u32)).collect()));
        let all_trie = (opts.adjacency == AdjacencyTest::Combinatorial && !neg.is_empty())
            .then(|| SlackTrie::build((0..store.len()).map(|i| (store.slack(i, &inserted), i as u32)).collect()));

        let created = pos
            .par_iter()
            .map(|&p| -> Result<RayStore<S>, Failure> {
                opts.check_deadline()?;
                let mut out = RayStore::new(dim, words);
                let pz = store.zeros(p);
                let p_slack: Vec<u64> = inserted.iter().zip(pz).map(|(a, b)| a & !b).collect();
                let Some(budget) = limit.checked_sub(bits::count(&p_slack)) else { return Ok(out) };
                let mut candidates = Vec::new();
                if use_scan {
                    for (qi, q_slack) in neg_slack.chunks_exact(words).enumerate() {
                        let extra: usize = q_slack.iter().zip(&p_slack).map(|(a, b)| (a & !b).count_ones() as usize).sum();
                        if extra <= budget {
                            candidates.push(neg[qi] as u32);
                        }
                    }
                } else {
                    neg_trie.as_ref().unwrap().within(&p_slack, budget, &mut candidates);
                    candidates.sort_unstable();
                }
                for q in candidates {
                    let q = q as usize;
                    let common: Vec<u64> = pz.iter().zip(store.zeros(q)).map(|(a, b)| a & b).collect();
                    let adjacent = match &all_trie {
                        Some(trie) => {
                            let union: Vec<u64> = inserted.iter().zip(&common).map(|(a, b)| a & !b).collect();
                            !trie.has_subset_of(&union, p as u32, q as u32)
                        }
                        None => rank_of_rows(rows, &small_rows, &common) + 2 == dim,
                    };
                    if !adjacent {
                        continue;
                    }
                    // vals[p] > 0 > vals[q]: vals[p]·q - vals[q]·p is tight on `row`.
                    let wp = &vals[p];
                    let wq = vals[q].neg().ok_or(Failure::Overflow)?;
                    let mut coords = Vec::with_capacity(dim);
                    for (xp, xq) in store.coords(p).iter().zip(store.coords(q)) {
                        let v = wp.mul(xq).and_then(|a| wq.mul(xp).and_then(|b| a.add(&b)));
                        coords.push(v.ok_or(Failure::Overflow)?);
                    }
                    make_primitive(&mut coords);
                    let mut zeros = common;
                    bits::insert(&mut zeros, row);
                    out.push(coords, &zeros);
                }
                Ok(out)
            })
            .collect::<Result<Vec<_>, Failure>>()?;
        drop(all_trie);
        drop(neg_trie);

        let mut next = RayStore::new(dim, words);
        for (i, v) in vals.iter().enumerate() {
            if v.is_negative() || (v.is_positive() && store.slack(i, &inserted).len() >= cap) {
                continue;
            }
            let mut zeros = store.zeros(i).to_vec();
            if v.is_zero() {
                bits::insert(&mut zeros, row);
            }
            next.push(store.coords(i).iter().cloned(), &zeros);
        }
        drop(store);
        for chunk in created {
            next.append(chunk);
        }
        store = next;
        bits::insert(&mut inserted, row);
    }

    Ok((0..store.len())
        .map(|i| (store.coords(i).iter().map(S::to_bigint).collect(), bits::ones(store.zeros(i)).collect()))
        .collect())
}

const SCAN_LIMIT: usize = 32768;

/// Prefix tree over sorted slack-row lists, one terminal per ray.
struct SlackTrie {
    nodes: Vec<TrieNode>,
}

#[derive(Clone, Copy)]
struct TrieNode {
    row: u32,
    ray: u32,
    first_child: u32,
    next_sibling: u32,
}

const NONE: u32 = u32::MAX;

impl SlackTrie {
    fn build(mut keyed: Vec<(Vec<u32>, u32)>) -> Self {
        keyed.sort_unstable();
        let root = TrieNode { row: NONE, ray: NONE, first_child: NONE, next_sibling: NONE };
        let mut nodes = vec![root];
        // Nodes on the current path by depth, and the last child added under each.
        let mut path: Vec<u32> = vec![0];
        let mut last_child: Vec<u32> = vec![NONE];
        let mut prev: &[u32] = &[];
        for (seq, ray) in &keyed {
            let shared = seq.iter().zip(prev).take_while(|(a, b)| a == b).count();
            path.truncate(shared + 1);
            last_child.truncate(shared + 1);
            for &row in &seq[shared..] {
                let id = nodes.len() as u32;
                nodes.push(TrieNode { row, ray: NONE, first_child: NONE, next_sibling: NONE });
                let depth = path.len() - 1;
                match last_child[depth] {
                    NONE => nodes[path[depth] as usize].first_child = id,
                    sib => nodes[sib as usize].next_sibling = id,
                }
                last_child[depth] = id;
                path.push(id);
                last_child.push(NONE);
            }
            nodes[path[path.len() - 1] as usize].ray = *ray;
            prev = seq;
        }
        SlackTrie { nodes }
    }

    /// Whether a ray other than `p` and `q` has every slack row in `union`.
    /// Such a ray is tight wherever both `p` and `q` are.
    fn has_subset_of(&self, union: &[u64], p: u32, q: u32) -> bool {
        let mut stack = vec![self.nodes[0].first_child];
        while let Some(mut c) = stack.pop() {
            while c != NONE {
                let node = self.nodes[c as usize];
                if bits::contains(union, node.row as usize) {
                    if node.ray != NONE && node.ray != p && node.ray != q {
                        return true;
                    }
                    if node.first_child != NONE {
                        stack.push(node.first_child);
                    }
                }
                c = node.next_sibling;
            }
        }
        false
    }

    /// Rays with at most `budget` slack rows outside `base`.
    fn within(&self, base: &[u64], budget: usize, out: &mut Vec<u32>) {
        let mut stack = vec![(self.nodes[0].first_child, budget)];
        while let Some((mut c, left)) = stack.pop() {
            while c != NONE {
                let node = self.nodes[c as usize];
                let cost = usize::from(!bits::contains(base, node.row as usize));
                if cost <= left {
                    if node.ray != NONE {
                        out.push(node.ray);
                    }
                    if node.first_child != NONE {
                        stack.push((node.first_child, left - cost));
                    }
                }
                c = node.next_sibling;
            }
        }
    }
}

/// Rank of the rows listed in `subset`, on machine integers when they fit.
fn rank_of_rows(rows: &[Vec<BigInt>], small: &Option<Vec<Vec<i64>>>, subset: &[u64]) -> usize {
    if let Some(small) = small {
        let mut a: Vec<Vec<i64>> = bits::ones(subset).map(|i| small[i].clone()).collect();
        if let Some(r) = bareiss_rank_i64(&mut a) {
            return r;
        }
    }
    let sub: Vec<Vec<BigInt>> = bits::ones(subset).map(|i| rows[i].clone()).collect();
    integer_rank(&sub)
}

/// Fraction-free elimination; `None` on overflow.
fn bareiss_rank_i64(a: &mut [Vec<i64>]) -> Option<usize> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut prev: i64 = 1;
    let mut rank = 0;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&i| a[i][c] != 0) else { continue };
        a.swap(rank, p);
        let pivot = a[rank][c];
        let (top, rest) = a.split_at_mut(rank + 1);
        let prow = &top[rank];
        for r in rest.iter_mut() {
            let f = r[c];
            if f == 0 {
                if pivot != 1 || prev != 1 {
                    for j in c + 1..cols {
                        r[j] = r[j].checked_mul(pivot)? / prev;
                    }
                }
                continue;
            }
            for j in c + 1..cols {
                r[j] = r[j].checked_mul(pivot)?.checked_sub(f.checked_mul(prow[j])?)? / prev;
            }
            r[c] = 0;
        }
        prev = pivot;
        rank += 1;
    }
    Some(rank)
}

/// Tight rows of `coords` under `rows`.
pub(crate) fn tight_rows(rows: &[Vec<BigInt>], coords: &[BigInt]) -> Vec<usize> {
    rows.iter()
        .enumerate()
        .filter(|(_, r)| Zero::is_zero(&r.iter().zip(coords).map(|(a, x)| a * x).sum::<BigInt>()))
        .map(|(i, _)| i)
        .collect()
}

/// `A x >= 0` componentwise.
pub(crate) fn is_feasible(rows: &[Vec<BigInt>], coords: &[BigInt]) -> bool {
    rows.iter().all(|r| !Signed::is_negative(&r.iter().zip(coords).map(|(a, x)| a * x).sum::<BigInt>()))
}
