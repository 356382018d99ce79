//! Descending sweeps in `eps`.

use serde::{Deserialize, Serialize};

use super::{solve_from, supersolution_init, ProblemSpec, SolveConfig, SolveResult};
use crate::error::{Error, Result};
use crate::geometry::{analyze, hausdorff_distance, positivity_mask, GeometryOptions, GeometryReport};

/// Where each solve of a sweep starts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepStart {
    /// The supersolution of the constant-right-side problem. It does not
    /// depend on `eps`, so it is computed once and every descent is monotone.
    #[default]
    Supersolution,
    /// The previous solution; not a supersolution for the next `eps` in
    /// general, so descent may be non-monotone.
    Previous,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SweepOptions {
    pub geometry: GeometryOptions,
    pub start: SweepStart,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepEntry {
    pub eps: f64,
    pub result: SolveResult,
    pub geometry: std::result::Result<GeometryReport, String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SweepSummary {
    pub eps: Vec<f64>,
    pub successive_sup: Vec<f64>,
    pub successive_hausdorff: Vec<Option<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub entries: Vec<SweepEntry>,
    /// `sup |u^{eps_k} - u^{eps_{k+1}}|`.
    pub successive_sup: Vec<f64>,
    /// Hausdorff distance between `{u > c1 eps}` at consecutive entries;
    /// `None` when either set is empty.
    pub successive_hausdorff: Vec<Option<f64>>,
}

impl SweepResult {
    pub fn summary(&self) -> SweepSummary {
        SweepSummary {
            eps: self.entries.iter().map(|e| e.eps).collect(),
            successive_sup: self.successive_sup.clone(),
            successive_hausdorff: self.successive_hausdorff.clone(),
        }
    }
}

/// Solves at each `eps` of a non-increasing list and measures every solution.
pub fn eps_sweep(spec: &ProblemSpec, cfg: &SolveConfig, eps_list: &[f64], opts: &SweepOptions) -> Result<SweepResult> {
    if eps_list.is_empty() {
        return Err(Error::invalid("epsList", "need at least one eps"));
    }
    if eps_list.windows(2).any(|w| w[1] > w[0]) {
        return Err(Error::invalid("epsList", "eps values must be non-increasing"));
    }
    for &eps in eps_list {
        spec.with_eps(eps)?.check_resolvable()?;
    }
    let grid = *spec.grid();
    cfg.validate()?;
    let (init, init_iterations) = supersolution_init(spec, cfg)?;
    let mut entries: Vec<SweepEntry> = Vec::with_capacity(eps_list.len());
    for &eps in eps_list {
        let s = spec.with_eps(eps)?;
        let start = match (opts.start, entries.last()) {
            (SweepStart::Previous, Some(prev)) => prev.result.u.clone(),
            _ => init.clone(),
        };
        let mut result = solve_from(&s, cfg, start)?;
        if entries.is_empty() {
            result.init_iterations = init_iterations;
        }
        log::info!("eps = {eps}: {} iterations, residual {:.3e}", result.iterations, result.final_residual);
        let geometry = analyze(&result.u, eps, &opts.geometry).map_err(|e| e.to_string());
        entries.push(SweepEntry { eps, result, geometry });
    }
    let c1 = opts.geometry.c1;
    let mut successive_sup = Vec::new();
    let mut successive_hausdorff = Vec::new();
    for w in entries.windows(2) {
        successive_sup.push(w[0].result.u.sup_distance(&w[1].result.u)?);
        let a = positivity_mask(&w[0].result.u, c1 * w[0].eps);
        let b = positivity_mask(&w[1].result.u, c1 * w[1].eps);
        successive_hausdorff.push(hausdorff_distance(&grid, &a, &b).ok());
    }
    Ok(SweepResult { entries, successive_sup, successive_hausdorff })
}
