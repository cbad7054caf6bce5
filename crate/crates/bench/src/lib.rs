//! Shared fixtures for the benchmarks.

use oksos_core::analysis::j_cone;
use oksos_core::polytope::HRepCone;
use oksos_core::prolongation::build_jnd_direct;

/// The cone `{x : J_{n,d} x >= 0}`.
pub fn prolongation_cone(n: usize, d: usize) -> HRepCone {
    j_cone(&build_jnd_direct(n, d)).expect("prolongation cones are well formed")
}
