//! Minimal prolonged rank over the diagonal slice, conjectured bounds and
//! checks on individual Hermitian candidates.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{herm_rank, psd_check, HermMatrix, Rational};
use crate::monomial::{basis_size, binomial};
use crate::polytope::{
    certify_vertex, extreme_rays_bruteforce, extreme_rays_dd, slice_to_vertices, trace_slice_system, DdOptions,
    HRepCone, Ray, Vertex,
};
use crate::prolongation::{
    build_jnd_direct, build_signed_direct, prolong_diag, prolong_hermitian, DiagCoeffVector, ProlongationMatrix,
    SignVector,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinRankReport {
    pub n: usize,
    pub d: usize,
    /// `None` when every vertex is a unit vector.
    pub value: Option<usize>,
    /// Every minimizing vertex, sorted by coordinates.
    pub witnesses: Vec<Vertex>,
    /// Vertices of the slice that were enumerated: all of them when
    /// `support_cap` is `None`, otherwise those of support at most the cap.
    pub vertex_count: usize,
    pub excluded_unit_vertices: usize,
    pub support_cap: Option<usize>,
    pub conjecture_bound: usize,
    /// `None` when `value` is `None`.
    pub bound_satisfied: Option<bool>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum RayBackend {
    #[default]
    DoubleDescription,
    BruteForce,
}

#[derive(Clone, Debug, Default)]
pub struct MinRankOptions {
    pub backend: RayBackend,
    pub dd: DdOptions,
    /// Enumerate every vertex instead of raising a support cap until a
    /// non-unit vertex appears.
    pub full_enumeration: bool,
}

/// Support size of `J_{n,d} v`.
pub fn diag_rank_of_prolongation(n: usize, d: usize, v: &DiagCoeffVector) -> Result<usize> {
    let j = build_jnd_direct(n, d);
    let image = prolong_diag(&j, v)?;
    let mut support = 0;
    for (position, c) in image.coeffs().iter().enumerate() {
        if c.is_negative() {
            return Err(Error::NotSos { position });
        }
        if !c.is_zero() {
            support += 1;
        }
    }
    Ok(support)
}

/// The unit coordinate vectors, i.e. the vertices of the standard simplex.
pub fn delta1_extreme_points(n: usize, d: usize) -> Vec<Vertex> {
    let size = basis_size(n, d);
    (0..size)
        .map(|k| {
            let coords = (0..size).map(|i| if i == k { Rational::one() } else { Rational::zero() }).collect();
            Vertex { coords, tight_set: Vec::new(), is_unit_vector: true }
        })
        .collect()
}

/// `n(k+1) - k(k+1)/2 - 1` with `k` the largest integer such that `k(k+1)/2 < n`.
pub fn conjecture_bound(n: usize) -> usize {
    assert!(n >= 2, "bound is defined for n >= 2");
    let mut k = 1;
    while (k + 1) * (k + 2) / 2 < n {
        k += 1;
    }
    n * (k + 1) - k * (k + 1) / 2 - 1
}

/// The cone `{x : J x >= 0}`. Rows that vanish identically, which occur
/// when a sign is zero, are left out, so cone row indices are positions among
/// the nonzero rows of `J`.
pub fn j_cone(j: &ProlongationMatrix) -> Result<HRepCone> {
    let rows = j.rational_rows().into_iter().filter(|r| r.iter().any(|v| !v.is_zero())).collect();
    HRepCone::new(j.cols(), rows)
}

fn nonzero_rows(j: &ProlongationMatrix) -> usize {
    let mut rows: Vec<usize> = j.entries().iter().map(|e| e.0).collect();
    rows.dedup();
    rows.len()
}

fn min_rank_for(j: &ProlongationMatrix, start: usize, opts: &MinRankOptions) -> Result<MinRankReport> {
    let cone = j_cone(j)?;
    match opts.backend {
        RayBackend::BruteForce => return min_rank_from_rays(j, &extreme_rays_bruteforce(&cone)?),
        RayBackend::DoubleDescription if opts.full_enumeration => {
            return min_rank_from_rays(j, &extreme_rays_dd(&cone, &opts.dd)?)
        }
        RayBackend::DoubleDescription => {}
    }
    min_rank_search(j, start, |cap| extreme_rays_dd(&cone, &DdOptions { max_slack: cap, ..opts.dd.clone() }))
}

/// Raises a support cap from `start` until a non-unit vertex appears.
/// `rays(cap)` must return exactly the extreme rays of the `J`-cone that are
/// slack on at most `cap` rows, or all of them for `None`.
pub fn min_rank_search<F>(j: &ProlongationMatrix, start: usize, mut rays: F) -> Result<MinRankReport>
where
    F: FnMut(Option<usize>) -> Result<Vec<Ray>>,
{
    // An extreme ray is tight on at least N - 1 rows.
    let most = (nonzero_rows(j) + 1).saturating_sub(j.cols());
    let mut cap = start.min(most);
    loop {
        let limit = (cap < most).then_some(cap);
        let mut report = min_rank_from_rays(j, &rays(limit)?)?;
        if report.value.is_some() || limit.is_none() {
            report.support_cap = limit;
            return Ok(report);
        }
        cap += 1;
    }
}

/// Minimal support of `J_{n,d} x` over the non-unit vertices of the
/// trace-one slice of `{x : J_{n,d} x >= 0}`.
pub fn min_rank_diag(n: usize, d: usize, opts: &MinRankOptions) -> Result<MinRankReport> {
    if n < 2 || d < 1 {
        return Err(Error::InvalidInput(format!("need n >= 2 and d >= 1, got n={n}, d={d}")));
    }
    min_rank_for(&build_jnd_direct(n, d), n, opts)
}

/// Signed analogue. The signed cone is not known to be pointed, so this
/// fails with [`Error::NotPointed`] or [`Error::NonPositiveLevel`] when the
/// slice is not a polytope.
pub fn min_rank_diag_signed(d: usize, signs: &SignVector, opts: &MinRankOptions) -> Result<MinRankReport> {
    if signs.len() < 2 || d < 1 {
        return Err(Error::InvalidInput(format!("need n >= 2 and d >= 1, got n={}, d={d}", signs.len())));
    }
    // Without a sign on the rays' levels the cap search could miss a ray of
    // non-positive level, so the signed pipeline always enumerates fully.
    let full = MinRankOptions { full_enumeration: true, ..opts.clone() };
    min_rank_for(&build_signed_direct(d, signs), signs.len(), &full)
}

fn is_unit_ray(coords: &[BigInt]) -> bool {
    coords.iter().filter(|v| !v.is_zero()).count() == 1
}

/// The reduction step on an already enumerated ray set of the `J`-cone.
pub fn min_rank_from_rays(j: &ProlongationMatrix, rays: &[Ray]) -> Result<MinRankReport> {
    if let Some(ray) = rays.iter().position(|r| !r.coords.iter().sum::<BigInt>().is_positive()) {
        return Err(Error::NonPositiveLevel { ray });
    }
    let m = nonzero_rows(j);
    let supports: Vec<Option<usize>> =
        rays.par_iter().map(|r| (!is_unit_ray(&r.coords)).then(|| m - r.tight_set.len())).collect();
    let excluded = supports.iter().filter(|s| s.is_none()).count();
    let value = supports.iter().flatten().min().copied();
    let minimizers: Vec<Ray> = match value {
        Some(v) => rays.iter().zip(&supports).filter(|(_, s)| **s == Some(v)).map(|(r, _)| r.clone()).collect(),
        None => Vec::new(),
    };
    let trace = vec![Rational::one(); j.cols()];
    let mut witnesses = slice_to_vertices(&minimizers, &trace, &Rational::one())?;
    witnesses.sort();
    let bound = conjecture_bound(j.n());
    Ok(MinRankReport {
        n: j.n(),
        d: j.d(),
        value,
        witnesses,
        vertex_count: rays.len(),
        excluded_unit_vertices: excluded,
        support_cap: None,
        conjecture_bound: bound,
        bound_satisfied: value.map(|v| v >= bound),
    })
}

/// Re-derives every witness property from scratch: certified vertex of the
/// slice, a negative coordinate, trace one, nonnegative prolongation with
/// support equal to the reported value.
pub fn verify_report(report: &MinRankReport, signs: Option<&SignVector>) -> Result<()> {
    let j = match signs {
        Some(s) => build_signed_direct(report.d, s),
        None => build_jnd_direct(report.n, report.d),
    };
    let (rows, rhs) = trace_slice_system(&j_cone(&j)?);
    if report.value.is_some() == report.witnesses.is_empty() {
        return Err(Error::InternalInconsistency("value and witness list disagree".into()));
    }
    for w in &report.witnesses {
        let fail = |what: &str| Err(Error::InternalInconsistency(format!("witness {:?}: {what}", w.coords)));
        if !certify_vertex(&rows, &rhs, &w.coords)? {
            return fail("not a vertex");
        }
        if !w.has_negative_coordinate() || w.is_unit_vector {
            return fail("lies in the simplex");
        }
        if w.coords.iter().sum::<Rational>() != Rational::one() {
            return fail("trace is not one");
        }
        let image = j.apply(&w.coords)?;
        if image.iter().any(Signed::is_negative) {
            return fail("prolongation is not nonnegative");
        }
        let support = image.iter().filter(|c| !c.is_zero()).count();
        if Some(support) != report.value {
            return fail("support differs from the reported value");
        }
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HermCandidateReport {
    pub a_is_sos: bool,
    pub prolong_is_sos: bool,
    pub prolong_rank: usize,
    pub trace_a: Rational,
    pub trace_prolong: Rational,
    pub qualifies: bool,
}

pub fn check_candidate_hermitian(n: usize, d: usize, h: &HermMatrix) -> Result<HermCandidateReport> {
    let expected = basis_size(n, d);
    if h.size() != expected {
        return Err(Error::DimensionMismatch { expected, got: h.size() });
    }
    let p = prolong_hermitian(n, d, h, &SignVector::standard(n))?;
    let trace_a = h.trace();
    let trace_prolong = p.trace();
    if trace_prolong != Rational::from_integer(BigInt::from(n)) * &trace_a {
        return Err(Error::InternalInconsistency("prolonged trace is not n times the trace".into()));
    }
    let a_is_sos = psd_check(h);
    let prolong_is_sos = psd_check(&p);
    Ok(HermCandidateReport {
        a_is_sos,
        prolong_is_sos,
        prolong_rank: herm_rank(&p)?,
        trace_a,
        trace_prolong,
        qualifies: !a_is_sos && prolong_is_sos,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RowStatus {
    Ok,
    Timeout,
    Error(String),
}

impl RowStatus {
    pub fn label(&self) -> &str {
        match self {
            RowStatus::Ok => "ok",
            RowStatus::Timeout => "timeout",
            RowStatus::Error(_) => "error",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableRow {
    pub n: usize,
    pub d: usize,
    pub status: RowStatus,
    pub report: Option<MinRankReport>,
    pub elapsed: Duration,
}

impl TableRow {
    pub fn value(&self) -> Option<usize> {
        self.report.as_ref().and_then(|r| r.value)
    }

    pub fn witness_count(&self) -> Option<usize> {
        self.report.as_ref().map(|r| r.witnesses.len())
    }
}

#[derive(Clone, Debug, Default)]
pub struct TableOptions {
    /// Rows computed concurrently; `0` means the rayon default.
    pub workers: usize,
    pub time_limit: Option<Duration>,
    pub min_rank: MinRankOptions,
}

/// Runs [`min_rank_diag`] on each pair. Failures are recorded per row.
pub fn reproduce_table(pairs: &[(usize, usize)], opts: &TableOptions) -> Vec<TableRow> {
    reproduce_table_with(pairs, opts.workers, opts.time_limit, |n, d, deadline| {
        let mut mr = opts.min_rank.clone();
        mr.dd.deadline = deadline;
        min_rank_diag(n, d, &mr)
    })
}

/// Table driver over an arbitrary per-pair computation, which receives the
/// row's deadline. Rows keep the order of `pairs`.
pub fn reproduce_table_with<F>(
    pairs: &[(usize, usize)],
    workers: usize,
    time_limit: Option<Duration>,
    compute: F,
) -> Vec<TableRow>
where
    F: Fn(usize, usize, Option<Instant>) -> Result<MinRankReport> + Sync,
{
    let run = || {
        pairs
            .par_iter()
            .with_max_len(1)
            .map(|&(n, d)| {
                let start = Instant::now();
                let deadline = time_limit.map(|t| start + t);
                let (status, report) = match compute(n, d, deadline) {
                    Ok(r) => (RowStatus::Ok, Some(r)),
                    Err(Error::TimedOut) => (RowStatus::Timeout, None),
                    Err(e) => (RowStatus::Error(e.to_string()), None),
                };
                TableRow { n, d, status, report, elapsed: start.elapsed() }
            })
            .collect()
    };
    match rayon::ThreadPoolBuilder::new().num_threads(workers).build() {
        Ok(pool) => pool.install(run),
        Err(_) => run(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternCheck {
    pub name: &'static str,
    pub passed: bool,
    /// Pairs violating the check.
    pub violations: Vec<(usize, usize)>,
}

/// Consistency checks over computed `(n, d, value)` entries:
/// `bound` value >= conjecture_bound(n); `gap` value >= n;
/// `monotone` non-increasing in d for fixed n, an empty minimum counting as
/// infinity; `closing` value = C(n+1, 2) - 1 for n >= 5.
pub fn pattern_checks(entries: &[(usize, usize, Option<usize>)]) -> Vec<PatternCheck> {
    let check = |name, bad: Vec<(usize, usize)>| PatternCheck { name, passed: bad.is_empty(), violations: bad };
    let valued = || entries.iter().filter_map(|&(n, d, v)| v.map(|v| (n, d, v)));

    let bound = valued().filter(|&(n, _, v)| v < conjecture_bound(n)).map(|(n, d, _)| (n, d)).collect();
    let gap = valued().filter(|&(n, _, v)| v < n).map(|(n, d, _)| (n, d)).collect();

    let mut sorted: Vec<(usize, usize, Option<usize>)> = entries.to_vec();
    sorted.sort_by_key(|&(n, d, _)| (n, d));
    let mut monotone = Vec::new();
    for w in sorted.windows(2) {
        let ((n0, _, v0), (n1, d1, v1)) = (w[0], w[1]);
        let inf = |v: Option<usize>| v.unwrap_or(usize::MAX);
        if n0 == n1 && inf(v1) > inf(v0) {
            monotone.push((n1, d1));
        }
    }

    let closing =
        valued().filter(|&(n, _, v)| n >= 5 && v + 1 != binomial(n + 1, 2)).map(|(n, d, _)| (n, d)).collect();

    vec![check("bound", bound), check("gap", gap), check("monotone", monotone), check("closing", closing)]
}
