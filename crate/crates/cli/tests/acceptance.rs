//! One line per acceptance criterion. Runs as a plain binary so the lines
//! show up in `cargo test` output.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use num_traits::{One, Signed, Zero};
use oksos_core::analysis::{j_cone, min_rank_diag, pattern_checks, verify_report, MinRankOptions, RayBackend};
use oksos_core::linalg::{
    herm_rank_charpoly, herm_rank_elimination, psd_check, psd_check_ldl, rat, GaussianRational, HermMatrix, Matrix,
    Rational,
};
use oksos_core::monomial::{basis_size, binomial};
use oksos_core::polytope::{
    certify_vertex, extreme_rays_bruteforce, extreme_rays_dd, slice_to_vertices, trace_slice_system, DdOptions,
    HRepCone, InsertionOrder,
};
use oksos_core::prolongation::{build_jnd_direct, build_jnd_recursive, prolong_hermitian};
use oksos_core::SignVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

const TABLE: &[(usize, usize, usize)] = &[
    (2, 2, 2),
    (2, 3, 2),
    (2, 4, 2),
    (2, 5, 2),
    (2, 6, 2),
    (2, 7, 2),
    (3, 2, 5),
    (3, 3, 5),
    (3, 4, 5),
    (3, 5, 5),
    (3, 6, 5),
    (3, 7, 5),
    (4, 2, 8),
    (4, 3, 8),
    (4, 4, 8),
    (5, 2, 14),
    (5, 3, 14),
    (6, 2, 20),
];

/// Not gating. Rows beyond n = 8 run only with OKSOS_STRETCH set.
const STRETCH: &[(usize, usize, usize)] = &[(7, 2, 27), (8, 2, 35), (9, 2, 44), (10, 2, 54), (11, 2, 65)];

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn table_reproduction(computed: &mut Vec<(usize, usize, Option<usize>)>) -> Outcome {
    let mut slowest = (0, 0, Duration::ZERO);
    for &(n, d, expected) in TABLE {
        let t = Instant::now();
        let r = min_rank_diag(n, d, &MinRankOptions::default()).map_err(|e| format!("({n},{d}): {e}"))?;
        verify_report(&r, None).map_err(|e| format!("({n},{d}): {e}"))?;
        let elapsed = t.elapsed();
        computed.push((n, d, r.value));
        ensure(r.value == Some(expected), || format!("({n},{d}): got {:?}, expected {expected}", r.value))?;
        let budget = if (n, d) == (6, 2) { 15 * 60 } else { 5 * 60 };
        if n + d <= 7 || (n, d) == (6, 2) {
            ensure(elapsed <= Duration::from_secs(budget), || format!("({n},{d}) took {elapsed:?}"))?;
        }
        if elapsed > slowest.2 {
            slowest = (n, d, elapsed);
        }
    }
    Ok(format!("{} rows match; slowest ({},{}) in {:.2?}", TABLE.len(), slowest.0, slowest.1, slowest.2))
}

fn stretch_rows(computed: &mut Vec<(usize, usize, Option<usize>)>) {
    let all = std::env::var_os("OKSOS_STRETCH").is_some();
    for &(n, d, expected) in STRETCH {
        if n > 8 && !all {
            println!("  stretch ({n},{d}): skipped (set OKSOS_STRETCH=1)");
            continue;
        }
        let t = Instant::now();
        let opts = MinRankOptions {
            dd: DdOptions { deadline: Some(t + Duration::from_secs(3600)), ..DdOptions::default() },
            ..MinRankOptions::default()
        };
        match min_rank_diag(n, d, &opts) {
            Ok(r) => {
                computed.push((n, d, r.value));
                let mark = if r.value == Some(expected) { "match" } else { "MISMATCH" };
                println!("  stretch ({n},{d}): {:?} vs {expected} {mark} in {:.2?}", r.value, t.elapsed());
            }
            Err(e) => println!("  stretch ({n},{d}): {e} after {:.2?}", t.elapsed()),
        }
    }
}

fn random_pointed_cone(rng: &mut ChaCha8Rng, dim: usize) -> HRepCone {
    loop {
        let x0: Vec<i64> = (0..dim).map(|_| rng.gen_range(1..=3)).collect();
        let count = rng.gen_range(dim..=dim + 6);
        let mut rows: Vec<Vec<i64>> = Vec::new();
        while rows.len() < count {
            let mut row: Vec<i64> = (0..dim).map(|_| rng.gen_range(-3..=3)).collect();
            if row.iter().all(|&v| v == 0) {
                continue;
            }
            if row.iter().zip(&x0).map(|(a, b)| a * b).sum::<i64>() < 0 {
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

fn oracle_equivalence() -> Outcome {
    let mut j_cones = 0;
    for n in 2..=10 {
        for d in 1..=9 {
            if basis_size(n, d) > 10 {
                continue;
            }
            let cone = j_cone(&build_jnd_direct(n, d)).map_err(|e| e.to_string())?;
            let dd = extreme_rays_dd(&cone, &DdOptions::default()).map_err(|e| e.to_string())?;
            if d == 1 && n >= 8 {
                // Subset enumeration is out of reach here; the cone is the orthant.
                let orthant = dd.len() == n
                    && dd.iter().all(|r| r.coords.iter().filter(|v| !v.is_zero()).count() == 1)
                    && dd.iter().all(|r| r.coords.iter().all(|v| !v.is_negative()));
                ensure(orthant, || format!("J({n},1) rays are not the unit vectors"))?;
            } else {
                let bf = extreme_rays_bruteforce(&cone).map_err(|e| e.to_string())?;
                ensure(dd == bf, || format!("J({n},{d}): dd {} rays, oracle {}", dd.len(), bf.len()))?;
            }
            j_cones += 1;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0xacce);
    for k in 0..50 {
        let cone = random_pointed_cone(&mut rng, 2 + k % 5);
        let dd = extreme_rays_dd(&cone, &DdOptions::default()).map_err(|e| e.to_string())?;
        let bf = extreme_rays_bruteforce(&cone).map_err(|e| e.to_string())?;
        ensure(dd == bf, || format!("random cone {k} disagrees: {:?}", cone.constraints()))?;
    }
    Ok(format!("{j_cones} J-cones and 50 random cones agree"))
}

fn construction_cross_check() -> Outcome {
    let mut count = 0;
    for n in 1..=8 {
        for d in 0..=(9 - n) {
            let a = build_jnd_recursive(n, d);
            let b = build_jnd_direct(n, d);
            ensure(a == b, || format!("constructions differ at ({n},{d})"))?;
            ensure((a.rows(), a.cols()) == (binomial(n + d, d + 1), binomial(n + d - 1, d)), || {
                format!("shape of J({n},{d}) is {}x{}", a.rows(), a.cols())
            })?;
            ensure(a.column_sums().iter().all(|&s| s == n as i64), || format!("column sums of J({n},{d})"))?;
            count += 1;
        }
    }
    Ok(format!("{count} pairs with n+d <= 9"))
}

fn random_hermitian(rng: &mut ChaCha8Rng, size: usize, bound: i64) -> HermMatrix {
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

fn random_signs(rng: &mut ChaCha8Rng, n: usize) -> SignVector {
    loop {
        if let Ok(s) = SignVector::new((0..n).map(|_| rng.gen_range(-1..=1)).collect()) {
            return s;
        }
    }
}

fn trace_lemma() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x7e57);
    let mut checked = 0;
    for n in 2..=5 {
        for d in 2..=5 {
            let size = basis_size(n, d);
            let plus = SignVector::standard(n);
            for _ in 0..100 {
                let h = random_hermitian(&mut rng, size, 5);
                let p = prolong_hermitian(n, d, &h, &plus).map_err(|e| e.to_string())?;
                ensure(p.trace() == rat(n as i64) * h.trace(), || format!("trace fails at ({n},{d})"))?;
                let s = random_signs(&mut rng, n);
                let q = prolong_hermitian(n, d, &h, &s).map_err(|e| e.to_string())?;
                ensure(q.trace() == rat(s.sum()) * h.trace(), || format!("signed trace fails for {s}, d={d}"))?;
                checked += 2;
            }
        }
    }
    Ok(format!("{checked} prolongations"))
}

fn conjecture_consistency(computed: &[(usize, usize, Option<usize>)]) -> Outcome {
    let failed: Vec<String> = pattern_checks(computed)
        .into_iter()
        .filter(|c| !c.passed)
        .map(|c| format!("{} at {:?}", c.name, c.violations))
        .collect();
    ensure(failed.is_empty(), || failed.join("; "))?;
    Ok(format!("bound, gap, monotone and closing hold on {} values", computed.len()))
}

fn certification() -> Outcome {
    let mut certified = 0;
    for &(n, d, _) in TABLE.iter().filter(|&&(n, d, _)| n + d <= 7) {
        let cone = j_cone(&build_jnd_direct(n, d)).map_err(|e| e.to_string())?;
        let rays = extreme_rays_dd(&cone, &DdOptions::default()).map_err(|e| e.to_string())?;
        let (rows, rhs) = trace_slice_system(&cone);
        let trace = vec![Rational::one(); cone.dim()];
        let verts = slice_to_vertices(&rays, &trace, &Rational::one()).map_err(|e| e.to_string())?;
        for v in &verts {
            ensure(certify_vertex(&rows, &rhs, &v.coords) == Ok(true), || format!("({n},{d}) vertex {:?}", v.coords))?;
        }
        certified += verts.len();
    }
    for &(n, d, _) in TABLE {
        let r = min_rank_diag(n, d, &MinRankOptions::default()).map_err(|e| e.to_string())?;
        verify_report(&r, None).map_err(|e| format!("({n},{d}): {e}"))?;
    }
    let expected = vec![rat(1), rat(-1), rat(1)];
    let mut variants = vec![
        MinRankOptions::default(),
        MinRankOptions { full_enumeration: true, ..Default::default() },
        MinRankOptions { backend: RayBackend::BruteForce, ..Default::default() },
    ];
    for order in [InsertionOrder::Natural, InsertionOrder::Seeded(1)] {
        variants.push(MinRankOptions { dd: DdOptions { order, ..DdOptions::default() }, ..Default::default() });
    }
    for opts in &variants {
        let r = min_rank_diag(2, 2, opts).map_err(|e| e.to_string())?;
        let coords: Vec<&Vec<Rational>> = r.witnesses.iter().map(|w| &w.coords).collect();
        ensure(coords == vec![&expected], || format!("(2,2) witnesses {coords:?}"))?;
    }
    Ok(format!("{certified} vertices certified; (2,2) witness set is {{(1,-1,1)}}"))
}

fn random_gram(rng: &mut ChaCha8Rng, size: usize) -> HermMatrix {
    let inner = rng.gen_range(0..=size);
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

fn linalg_dual_methods() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xd0a1);
    let mut psd = 0;
    for k in 0..200 {
        let size = rng.gen_range(2..=8);
        let h = if k % 2 == 0 { random_hermitian(&mut rng, size, 5) } else { random_gram(&mut rng, size) };
        let p = psd_check(&h);
        ensure(p == psd_check_ldl(&h), || format!("PSD methods disagree on {h:?}"))?;
        ensure(herm_rank_elimination(&h) == herm_rank_charpoly(&h), || format!("rank methods disagree on {h:?}"))?;
        psd += usize::from(p);
    }
    Ok(format!("200 matrices, {psd} PSD"))
}

fn run_cli(args: &[&str]) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_oksos")).args(args).output().map_err(|e| e.to_string())?;
    ensure(out.status.success(), || {
        format!("oksos {} exited with {}: {}", args.join(" "), out.status, String::from_utf8_lossy(&out.stderr))
    })?;
    Ok(out.stdout)
}

fn determinism() -> Outcome {
    let max = std::thread::available_parallelism().map_or(1, |n| n.get()).to_string();
    let cache = tempfile::tempdir().map_err(|e| e.to_string())?;
    let cache_dir = cache.path().to_str().unwrap();
    let mut compared = 0;
    let commands: [&[&str]; 4] = [
        &["table", "--max-sum", "6", "--no-timing"],
        &["table", "--max-sum", "6", "--no-timing", "--format", "json"],
        &["minrank", "--n", "3", "--d", "3"],
        &["vertices", "--n", "3", "--d", "2"],
    ];
    for cmd in commands {
        let mut outputs = Vec::new();
        for workers in ["1", "4", max.as_str()] {
            let mut args = cmd.to_vec();
            args.extend(["--workers", workers]);
            outputs.push(run_cli(&args)?);
            // Second run with a shared cache: a cold run then cache hits.
            args.extend(["--cache-dir", cache_dir]);
            outputs.push(run_cli(&args)?);
        }
        ensure(outputs.windows(2).all(|w| w[0] == w[1]), || format!("outputs differ for `{}`", cmd.join(" ")))?;
        compared += outputs.len();
    }
    Ok(format!("{compared} runs byte-identical across workers 1, 4, {max} with and without cache"))
}

fn report(number: usize, name: &str, f: impl FnOnce() -> Outcome) -> bool {
    let t = Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
        Err(p.downcast_ref::<String>().cloned().or(p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
    });
    let secs = t.elapsed().as_secs_f64();
    match &outcome {
        Ok(detail) => println!("criterion {number} {name}: PASS ({detail}; {secs:.1}s)"),
        Err(why) => println!("criterion {number} {name}: FAIL ({why}; {secs:.1}s)"),
    }
    outcome.is_ok()
}

fn main() {
    let mut computed = Vec::new();
    let mut results = Vec::new();
    results.push(report(1, "table reproduction", || table_reproduction(&mut computed)));
    stretch_rows(&mut computed);
    results.push(report(2, "oracle equivalence", oracle_equivalence));
    results.push(report(3, "construction cross-check", construction_cross_check));
    results.push(report(4, "trace lemma", trace_lemma));
    results.push(report(5, "conjecture consistency", || conjecture_consistency(&computed)));
    results.push(report(6, "certification", certification));
    results.push(report(7, "linalg dual methods", linalg_dual_methods));
    results.push(report(8, "determinism", determinism));
    let passed = results.iter().filter(|&&ok| ok).count();
    println!("acceptance: {passed}/{} criteria passed", results.len());
    if passed != results.len() {
        std::process::exit(1);
    }
}
