//! Text formats: prolongation matrices, Hermitian matrices, point sets,
//! ray caches, min-rank reports and the summary table.

use std::fmt::Write as _;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::analysis::{HermCandidateReport, MinRankReport, PatternCheck, RowStatus, TableRow};
use crate::error::{Error, Result};
use crate::linalg::{format_rational, GaussianRational, HermMatrix, Matrix, Rational};
use crate::polytope::Ray;
use crate::prolongation::ProlongationMatrix;

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn csv_lines<I, R>(rows: I) -> String
where
    I: IntoIterator<Item = R>,
    R: IntoIterator<Item = String>,
{
    let mut out = String::new();
    for row in rows {
        out.push_str(&row.into_iter().collect::<Vec<_>>().join(","));
        out.push('\n');
    }
    out
}

#[derive(Serialize, Deserialize)]
struct JmatFile {
    n: usize,
    d: usize,
    rows: usize,
    cols: usize,
    entries: Vec<(usize, usize, i8)>,
}

pub fn jmat_json(j: &ProlongationMatrix) -> String {
    to_json(&JmatFile { n: j.n(), d: j.d(), rows: j.rows(), cols: j.cols(), entries: j.entries().to_vec() })
}

pub fn jmat_csv(j: &ProlongationMatrix) -> String {
    csv_lines(j.dense().into_iter().map(|r| r.into_iter().map(|v| v.to_string())))
}

#[derive(Serialize)]
struct HermFile<'a> {
    size: usize,
    entries: Vec<Vec<&'a GaussianRational>>,
}

pub fn herm_json(h: &HermMatrix) -> String {
    let size = h.size();
    let entries = (0..size).map(|i| (0..size).map(|j| h.get(i, j)).collect()).collect();
    to_json(&HermFile { size, entries })
}

/// Reads `{"size": k, "entries": ...}` where entries are row-major, either as
/// `k` rows of `k` objects or as one flat list of `k * k` objects.
pub fn read_herm_json(text: &str) -> Result<HermMatrix> {
    let bad = |msg: &str| Error::InvalidInput(msg.to_string());
    let v: Value = serde_json::from_str(text).map_err(|e| bad(&e.to_string()))?;
    let size = v.get("size").and_then(Value::as_u64).ok_or_else(|| bad("missing integer field \"size\""))? as usize;
    let entries = v.get("entries").and_then(Value::as_array).ok_or_else(|| bad("missing array field \"entries\""))?;
    let flat: Vec<&Value> = if entries.iter().all(Value::is_array) {
        if entries.len() != size {
            return Err(Error::DimensionMismatch { expected: size, got: entries.len() });
        }
        let mut flat = Vec::new();
        for row in entries {
            let row = row.as_array().expect("checked");
            if row.len() != size {
                return Err(Error::DimensionMismatch { expected: size, got: row.len() });
            }
            flat.extend(row.iter());
        }
        flat
    } else {
        entries.iter().collect()
    };
    if flat.len() != size * size {
        return Err(Error::DimensionMismatch { expected: size * size, got: flat.len() });
    }
    let data = flat
        .into_iter()
        .map(|e| {
            serde_json::from_value::<GaussianRational>(e.clone()).map_err(|err| match err.to_string() {
                s if s.contains("invalid rational") => Error::ParseRational(s),
                s => bad(&s),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let rows = data.chunks(size.max(1)).map(<[_]>::to_vec).take(size).collect();
    HermMatrix::new(Matrix::from_rows(rows)?)
}

fn rational_row(v: &[Rational]) -> Vec<String> {
    v.iter().map(format_rational).collect()
}

/// A point set as a JSON array of coordinate arrays in rational text form.
pub fn points_json(points: &[Vec<Rational>]) -> String {
    to_json(&points.iter().map(|p| rational_row(p)).collect::<Vec<_>>())
}

pub fn points_csv(points: &[Vec<Rational>]) -> String {
    csv_lines(points.iter().map(|p| rational_row(p)))
}

#[derive(Serialize, Deserialize)]
struct RayEntry {
    coords: Vec<String>,
    tight: Vec<usize>,
}

/// Ray sets with tight rows, as stored in the cache.
pub fn rays_json(rays: &[Ray]) -> String {
    let entries: Vec<RayEntry> = rays
        .iter()
        .map(|r| RayEntry { coords: r.coords.iter().map(BigInt::to_string).collect(), tight: r.tight_set.clone() })
        .collect();
    let mut s = serde_json::to_string(&entries).expect("serializable");
    s.push('\n');
    s
}

pub fn read_rays_json(text: &str) -> Result<Vec<Ray>> {
    let entries: Vec<RayEntry> = serde_json::from_str(text).map_err(|e| Error::InvalidInput(e.to_string()))?;
    entries
        .into_iter()
        .map(|e| {
            let coords = e
                .coords
                .iter()
                .map(|c| c.parse::<BigInt>().map_err(|_| Error::InvalidInput(format!("bad integer {c:?}"))))
                .collect::<Result<Vec<_>>>()?;
            Ok(Ray { coords, tight_set: e.tight })
        })
        .collect()
}

#[derive(Serialize)]
struct ReportChecks {
    bound: Option<bool>,
    gap: Option<bool>,
    verified: Option<bool>,
}

#[derive(Serialize)]
struct ReportFile {
    n: usize,
    d: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    signs: Option<String>,
    value: Option<usize>,
    witnesses: Vec<Vec<String>>,
    vertex_count: usize,
    excluded_unit_vertices: usize,
    support_cap: Option<usize>,
    conjecture_bound: usize,
    checks: ReportChecks,
}

/// `verified` is `None` when verification was skipped.
pub fn report_json(report: &MinRankReport, signs: Option<&str>, verified: Option<bool>) -> String {
    to_json(&ReportFile {
        n: report.n,
        d: report.d,
        signs: signs.map(str::to_string),
        value: report.value,
        witnesses: report.witnesses.iter().map(|w| rational_row(&w.coords)).collect(),
        vertex_count: report.vertex_count,
        excluded_unit_vertices: report.excluded_unit_vertices,
        support_cap: report.support_cap,
        conjecture_bound: report.conjecture_bound,
        checks: ReportChecks {
            bound: report.bound_satisfied,
            gap: report.value.map(|v| v >= report.n),
            verified,
        },
    })
}

#[derive(Serialize)]
struct CandidateFile {
    a_is_sos: bool,
    prolong_is_sos: bool,
    prolong_rank: usize,
    trace_a: String,
    trace_prolong: String,
    qualifies: bool,
}

pub fn candidate_json(r: &HermCandidateReport) -> String {
    to_json(&CandidateFile {
        a_is_sos: r.a_is_sos,
        prolong_is_sos: r.prolong_is_sos,
        prolong_rank: r.prolong_rank,
        trace_a: format_rational(&r.trace_a),
        trace_prolong: format_rational(&r.trace_prolong),
        qualifies: r.qualifies,
    })
}

pub fn candidate_csv(r: &HermCandidateReport) -> String {
    format!(
        "a_is_sos,prolong_is_sos,prolong_rank,trace_a,trace_prolong,qualifies\n{},{},{},{},{},{}\n",
        r.a_is_sos,
        r.prolong_is_sos,
        r.prolong_rank,
        format_rational(&r.trace_a),
        format_rational(&r.trace_prolong),
        r.qualifies
    )
}

pub const TABLE_HEADER: &str = "n,d,R_diag,witnesses,status,elapsed_ms";

/// Table CSV. With `timing` off the elapsed column is left empty so that
/// output does not depend on the machine.
pub fn table_csv(rows: &[TableRow], timing: bool) -> String {
    let mut out = String::from(TABLE_HEADER);
    out.push('\n');
    for r in rows {
        let value = match (&r.report, r.value()) {
            (Some(_), Some(v)) => v.to_string(),
            (Some(_), None) => "none".to_string(),
            (None, _) => String::new(),
        };
        let witnesses = r.witness_count().map(|w| w.to_string()).unwrap_or_default();
        let elapsed = if timing { r.elapsed.as_millis().to_string() } else { String::new() };
        let _ = writeln!(out, "{},{},{},{},{},{}", r.n, r.d, value, witnesses, r.status.label(), elapsed);
    }
    out
}

#[derive(Serialize)]
struct TableJsonRow {
    n: usize,
    d: usize,
    value: Option<usize>,
    witnesses: Option<usize>,
    status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
    elapsed_ms: Option<u128>,
}

#[derive(Serialize)]
struct TableFile {
    rows: Vec<TableJsonRow>,
    checks: std::collections::BTreeMap<&'static str, bool>,
}

pub fn table_json(rows: &[TableRow], checks: &[PatternCheck], timing: bool) -> String {
    to_json(&TableFile {
        rows: rows
            .iter()
            .map(|r| TableJsonRow {
                n: r.n,
                d: r.d,
                value: r.value(),
                witnesses: r.witness_count(),
                status: r.status.label().to_string(),
                error: match &r.status {
                    RowStatus::Error(e) => Some(e.clone()),
                    _ => None,
                },
                elapsed_ms: timing.then_some(r.elapsed.as_millis()),
            })
            .collect(),
        checks: checks.iter().map(|c| (c.name, c.passed)).collect(),
    })
}

/// One line per check, `name: pass` or `name: FAIL (n:d, ...)`.
pub fn pattern_summary(checks: &[PatternCheck]) -> String {
    let mut out = String::new();
    for c in checks {
        if c.passed {
            let _ = writeln!(out, "{}: pass", c.name);
        } else {
            let pairs: Vec<String> = c.violations.iter().map(|(n, d)| format!("{n}:{d}")).collect();
            let _ = writeln!(out, "{}: FAIL ({})", c.name, pairs.join(", "));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::{min_rank_diag, MinRankOptions};
    use crate::linalg::rat;
    use crate::prolongation::build_jnd_direct;

    #[test]
    fn jmat_formats() {
        let j = build_jnd_direct(2, 1);
        assert_eq!(jmat_csv(&j), "1,0\n1,1\n0,1\n");
        let v: Value = serde_json::from_str(&jmat_json(&j)).unwrap();
        assert_eq!(v["rows"], 3);
        assert_eq!(v["entries"], serde_json::json!([[0, 0, 1], [1, 0, 1], [1, 1, 1], [2, 1, 1]]));
    }

    #[test]
    fn herm_round_trip() {
        let h = HermMatrix::from_rows(vec![
            vec![GaussianRational::from_ints(1, 0), GaussianRational::from_ints(0, 1)],
            vec![GaussianRational::from_ints(0, -1), GaussianRational::from_ints(2, 0)],
        ])
        .unwrap();
        assert_eq!(read_herm_json(&herm_json(&h)).unwrap(), h);
        let flat = r#"{"size": 2, "entries": [{"re":"1","im":"0"},{"re":"0","im":"1"},{"re":"0","im":"-1"},{"re":"2","im":"0"}]}"#;
        assert_eq!(read_herm_json(flat).unwrap(), h);
    }

    #[test]
    fn herm_rejects_bad_input() {
        let skew = r#"{"size": 2, "entries": [[{"re":"1","im":"0"},{"re":"0","im":"1"}],[{"re":"0","im":"1"},{"re":"2","im":"0"}]]}"#;
        assert!(matches!(read_herm_json(skew), Err(Error::NotHermitian { .. })));
        assert!(read_herm_json(r#"{"size": 2, "entries": []}"#).is_err());
        assert!(read_herm_json("not json").is_err());
    }

    #[test]
    fn rays_round_trip() {
        let rays = vec![Ray { coords: vec![BigInt::from(1), BigInt::from(-1), BigInt::from(1)], tight_set: vec![1, 2] }];
        assert_eq!(read_rays_json(&rays_json(&rays)).unwrap(), rays);
    }

    #[test]
    fn points_and_report() {
        let pts = vec![vec![rat(1), rat(-1), rat(1)]];
        assert_eq!(points_csv(&pts), "1,-1,1\n");
        let r = min_rank_diag(2, 2, &MinRankOptions::default()).unwrap();
        let v: Value = serde_json::from_str(&report_json(&r, None, Some(true))).unwrap();
        assert_eq!(v["value"], 2);
        assert_eq!(v["witnesses"], serde_json::json!([["1", "-1", "1"]]));
        assert_eq!(v["checks"]["bound"], true);
        let r = min_rank_diag(2, 1, &MinRankOptions::default()).unwrap();
        let v: Value = serde_json::from_str(&report_json(&r, None, None)).unwrap();
        assert!(v["value"].is_null() && v["checks"]["verified"].is_null());
    }
}
