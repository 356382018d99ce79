//! Discrete comparison and cutting checks.

use serde::Serialize;

use super::{solve_peps, ProblemSpec, SolveConfig};
use crate::error::{Error, Result};
use crate::grid::ScalarField;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CheckReport {
    pub passed: bool,
    /// Largest violation (comparison) or largest discrepancy (cutting).
    pub worst: f64,
    pub worst_node: usize,
    pub threshold: f64,
}

/// `sub <= sup + tol` at every node.
pub fn comparison_check(sub: &ScalarField, sup: &ScalarField, tol: f64) -> Result<CheckReport> {
    if sub.grid() != sup.grid() {
        return Err(Error::Precondition("fields live on different grids".into()));
    }
    let (worst_node, worst) = sub
        .values()
        .iter()
        .zip(sup.values())
        .map(|(a, b)| a - b)
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |acc, (k, d)| if d > acc.1 { (k, d) } else { acc });
    Ok(CheckReport { passed: worst <= tol, worst, worst_node, threshold: tol })
}

/// Solves the homogeneous problem with and without the degeneracy factor
/// and compares the two solutions.
pub fn cutting_check(spec: &ProblemSpec, cfg: &SolveConfig) -> Result<(CheckReport, ScalarField, ScalarField)> {
    if !spec.reaction().is_trivial() {
        return Err(Error::Precondition("cutting_check needs Q = 0 and f_eps = 0".into()));
    }
    let degenerate = solve_peps(spec, cfg)?.u;
    let pure = solve_peps(&spec.with_degeneracy(None)?, cfg)?.u;
    let (worst_node, worst) = degenerate
        .values()
        .iter()
        .zip(pure.values())
        .map(|(a, b)| (a - b).abs())
        .enumerate()
        .fold((0, 0.0), |acc, (k, d)| if d > acc.1 { (k, d) } else { acc });
    let threshold = 10.0 * cfg.tol;
    Ok((CheckReport { passed: worst <= threshold, worst, worst_node, threshold }, degenerate, pure))
}
