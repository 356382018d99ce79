//! Pseudo-time descent for `H(x, grad u) F(D^2 u) = zeta_eps(x, u)` with
//! `u = g` on the boundary.
//!
//! The scheme is an explicit Jacobi update
//! `u <- max(u + dt (H F - zeta_eps), 0)` started from a supersolution, so
//! iterates decrease towards the steady state.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{Grid, ScalarField};
use crate::operators::{DegeneracyParams, OperatorKind};
use crate::reaction::ReactionParams;

mod checks;
mod sweep;

pub use checks::{comparison_check, cutting_check, CheckReport};
pub use sweep::{eps_sweep, SweepEntry, SweepOptions, SweepResult, SweepStart, SweepSummary};

/// A full problem instance.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemSpec {
    grid: Grid,
    deg: Option<DegeneracyParams>,
    op: OperatorKind,
    reaction: ReactionParams,
    g: ScalarField,
}

impl ProblemSpec {
    /// `deg = None` stands for `H = 1`. Only the boundary values of `g` are used.
    pub fn new(
        deg: Option<DegeneracyParams>,
        op: OperatorKind,
        reaction: ReactionParams,
        g: ScalarField,
    ) -> Result<Self> {
        let grid = *g.grid();
        op.validate()?;
        if let Some(d) = &deg {
            if d.a().grid() != &grid {
                return Err(Error::invalid("a", "modulating function lives on another grid"));
            }
        }
        if reaction.q().grid() != &grid {
            return Err(Error::invalid("Q", "reaction data live on another grid"));
        }
        if let Some(k) = (0..grid.len()).find(|&k| grid.is_boundary(k) && g.get(k) < 0.0) {
            return Err(Error::invalid(
                "g",
                format!("boundary datum must be nonnegative, got {} at node {k}", g.get(k)),
            ));
        }
        Ok(ProblemSpec { grid, deg, op, reaction, g })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn deg(&self) -> Option<&DegeneracyParams> {
        self.deg.as_ref()
    }

    pub fn op(&self) -> &OperatorKind {
        &self.op
    }

    pub fn reaction(&self) -> &ReactionParams {
        &self.reaction
    }

    pub fn g(&self) -> &ScalarField {
        &self.g
    }

    /// Same problem with the reaction at another `eps`.
    pub fn with_eps(&self, eps: f64) -> Result<Self> {
        Ok(ProblemSpec { reaction: self.reaction.with_eps(eps)?, ..self.clone() })
    }

    pub fn with_reaction(&self, reaction: ReactionParams) -> Result<Self> {
        Self::new(self.deg.clone(), self.op, reaction, self.g.clone())
    }

    pub fn with_boundary(&self, g: ScalarField) -> Result<Self> {
        Self::new(self.deg.clone(), self.op, self.reaction.clone(), g)
    }

    pub fn with_degeneracy(&self, deg: Option<DegeneracyParams>) -> Result<Self> {
        Self::new(deg, self.op, self.reaction.clone(), self.g.clone())
    }

    /// Whether the reaction carries a singular part.
    pub fn is_singular(&self) -> bool {
        self.reaction.q().max() > 0.0
    }

    /// A singular layer must span at least four cells.
    pub fn check_resolvable(&self) -> Result<()> {
        let h = self.grid.h_max();
        let eps = self.reaction.eps();
        if self.is_singular() && eps < 4.0 * h * (1.0 - 1e-12) {
            return Err(Error::invalid(
                "eps",
                format!("layer unresolvable: eps = {eps} < 4h = {} (need eps >= 4h)", 4.0 * h),
            ));
        }
        Ok(())
    }

    /// Scale turning `sup |HF - zeta|` into the reported residual.
    pub(crate) fn residual_scale(&self) -> f64 {
        if self.is_singular() {
            self.reaction.eps()
        } else {
            1.0
        }
    }
}

/// How the pseudo-time step is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StepRule {
    /// Per-node step from the frozen-coefficient stability bound at that node.
    #[default]
    Local,
    /// One step for all nodes: `cfl h^2 / (2 N Lambda Hmax)`, capped by the
    /// smallest per-node step.
    Global,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "camelCase")]
pub struct SolveConfig {
    pub cfl: f64,
    pub tol: f64,
    pub max_iter: usize,
    pub project_nonneg: bool,
    pub step: StepRule,
    /// Residual target for the supersolution start; defaults to `tol`.
    pub init_tol: Option<f64>,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig {
            cfl: 0.4,
            tol: 1e-8,
            max_iter: 1_000_000,
            project_nonneg: true,
            step: StepRule::Local,
            init_tol: None,
        }
    }
}

impl SolveConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.cfl > 0.0 && self.cfl < 1.0) {
            return Err(Error::invalid("cfl", format!("need 0 < cfl < 1, got {}", self.cfl)));
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::invalid("tol", format!("need tol > 0, got {}", self.tol)));
        }
        if let Some(t) = self.init_tol {
            if !(t > 0.0 && t.is_finite()) {
                return Err(Error::invalid("initTol", format!("need initTol > 0, got {t}")));
            }
        }
        if self.max_iter == 0 {
            return Err(Error::invalid("maxIter", "need at least one iteration"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveResult {
    pub u: ScalarField,
    pub iterations: usize,
    pub final_residual: f64,
    pub monotone_violations: usize,
    /// Iterations spent building the supersolution start.
    pub init_iterations: usize,
}

/// Right side of the marched equation.
#[derive(Debug, Clone, Copy)]
enum Rhs {
    Reaction,
    Constant(f64),
}

/// Outcome of one pseudo-time march.
struct March {
    u: Vec<f64>,
    iterations: usize,
    residual: f64,
    violations: usize,
}

/// Smallest run of nodes handed to one worker.
const PAR_CHUNK: usize = 1024;
const TRACE_EVERY: usize = 1000;

/// Node data packed for the inner loop.
struct Kernel<'a> {
    spec: &'a ProblemSpec,
    rhs: Rhs,
    project: bool,
    cfl: f64,
    inv_h: [f64; 2],
    stencil_weight: f64,
    floor: f64,
    react_stiff: f64,
}

impl<'a> Kernel<'a> {
    fn new(spec: &'a ProblemSpec, rhs: Rhs, cfg: &SolveConfig) -> Self {
        let g = spec.grid();
        let inv = |a: usize| if a < g.dim() { 1.0 / g.h(a) } else { 0.0 };
        let inv_h = [inv(0), inv(1)];
        let stencil_weight = 2.0 * (inv_h[0] * inv_h[0] + inv_h[1] * inv_h[1]);
        let eps = spec.reaction().eps();
        let react_stiff = match rhs {
            Rhs::Reaction => spec.reaction().profile().derivative_sup() / (eps * eps),
            Rhs::Constant(_) => 0.0,
        };
        Kernel {
            spec,
            rhs,
            project: cfg.project_nonneg,
            cfl: cfg.cfl,
            inv_h,
            stencil_weight,
            floor: 1e-6 * stencil_weight,
            react_stiff,
        }
    }

    /// `(Psi, D, |grad|)` at an interior node: the defect `H F - rhs` and the
    /// local stiffness used for the step.
    #[inline]
    fn eval(&self, u: &[f64], k: usize) -> (f64, f64, f64) {
        let grid = self.spec.grid();
        let xi = crate::grid::gradient_raw(grid, u, k);
        let r = (xi[0] * xi[0] + xi[1] * xi[1]).sqrt();
        let hess = crate::grid::hessian_raw(grid, u, k);
        let f = self.spec.op().eval(&hess);
        let (h, dh) = match self.spec.deg() {
            None => (1.0, 0.0),
            Some(d) => {
                let a = d.a().get(k);
                let dh = if r > 0.0 {
                    d.p() * crate::operators::pow_abs(r, d.p() - 1.0)
                        + a * d.q() * crate::operators::pow_abs(r, d.q() - 1.0)
                } else {
                    0.0
                };
                (d.law(a, r), dh)
            }
        };
        let (rhs, stiff_r) = match self.rhs {
            Rhs::Reaction => {
                let re = self.spec.reaction();
                let uk = u[k];
                let stiff = if uk < re.eps() { re.q().get(k) * self.react_stiff } else { 0.0 };
                (re.zeta_eps(k, uk), stiff)
            }
            Rhs::Constant(c) => (c, 0.0),
        };
        let slope = self.spec.op().slope(&hess);
        let diff = slope * h * self.stencil_weight + dh * f.abs() * (self.inv_h[0] + self.inv_h[1]) + stiff_r;
        (h * f - rhs, diff.max(self.floor), r)
    }

    /// Residual contribution of a node: complementarity at the floor.
    #[inline]
    fn residual(&self, psi: f64, uk: f64) -> f64 {
        if self.project && uk <= 0.0 && psi <= 0.0 {
            0.0
        } else {
            psi.abs()
        }
    }
}

fn interior_nodes(grid: &Grid) -> Vec<usize> {
    (0..grid.len()).filter(|&k| grid.is_interior(k)).collect()
}

fn sup_interior(u: &[f64], interior: &[usize]) -> f64 {
    interior.iter().map(|&k| u[k]).fold(f64::NEG_INFINITY, f64::max)
}

fn march(spec: &ProblemSpec, rhs: Rhs, mut u: Vec<f64>, cfg: &SolveConfig, tol: f64) -> Result<March> {
    let grid = *spec.grid();
    let kernel = Kernel::new(spec, rhs, cfg);
    let interior = interior_nodes(&grid);
    let scale = spec.residual_scale();
    let (_, big_lambda) = spec.op().ellipticity();
    let mut next = u.clone();
    let mut trace = Vec::new();
    let mut violations = 0usize;
    let mut global_dt = 0.0;
    let mut sup_prev = sup_interior(&u, &interior);

    for it in 0..=cfg.max_iter {
        // Evaluate defects and steps from the current iterate only.
        let evals: Vec<(f64, f64, f64)> =
            interior.par_iter().with_min_len(PAR_CHUNK).map(|&k| kernel.eval(&u, k)).collect();
        let residual =
            scale * interior.iter().zip(&evals).map(|(&k, e)| kernel.residual(e.0, u[k])).fold(0.0, f64::max);
        if it % TRACE_EVERY == 0 {
            trace.push((it, residual));
            log::trace!("iteration {it}: residual {residual:.3e}");
        }
        if residual <= tol {
            return Ok(March { u, iterations: it, residual, violations });
        }
        if it == cfg.max_iter {
            trace.push((it, residual));
            return Err(Error::NotConverged { iterations: it, residual, trace });
        }
        if cfg.step == StepRule::Global {
            let rmax = evals.iter().map(|e| e.2).fold(0.0, f64::max);
            let hmax = match spec.deg() {
                None => 1.0,
                Some(d) => d.law(d.a_sup(), rmax),
            }
            .max(1e-12);
            let h = grid.h_min();
            let mut dt = cfg.cfl * h * h / (2.0 * grid.dim() as f64 * big_lambda * hmax);
            if kernel.react_stiff > 0.0 {
                dt = dt.min(cfg.cfl / (spec.reaction().q().max() * kernel.react_stiff));
            }
            let dmax = evals.iter().map(|e| e.1).fold(0.0, f64::max);
            if dmax > 0.0 {
                dt = dt.min(kernel.cfl / dmax);
            }
            global_dt = dt;
        }
        next.copy_from_slice(&u);
        let updates: Vec<f64> = interior
            .par_iter()
            .zip(evals.par_iter())
            .with_min_len(PAR_CHUNK)
            .map(|(&k, &(psi, d, _))| {
                let dt = match cfg.step {
                    StepRule::Local => kernel.cfl / d,
                    StepRule::Global => global_dt,
                };
                let v = u[k] + dt * psi;
                if kernel.project {
                    v.max(0.0)
                } else {
                    v
                }
            })
            .collect();
        for (&k, &v) in interior.iter().zip(&updates) {
            if !v.is_finite() {
                return Err(Error::NonFinite { node: k, iteration: it + 1 });
            }
            next[k] = v;
        }
        std::mem::swap(&mut u, &mut next);
        let sup_now = sup_interior(&u, &interior);
        if sup_now > sup_prev + 1e-12 {
            violations += 1;
        }
        sup_prev = sup_now;
    }
    unreachable!("loop returns on convergence or at max_iter")
}

/// Boundary values of `g` with `value` on every interior node.
fn boundary_fill(spec: &ProblemSpec, value: f64) -> Vec<f64> {
    let grid = spec.grid();
    (0..grid.len()).map(|k| if grid.is_boundary(k) { spec.g().get(k) } else { value }).collect()
}

/// Solves `H F(D^2 u) = B0` from the constant start `max g`, which is a
/// supersolution since `B0 >= 0`; the result dominates the solution of the
/// singular problem.
pub fn supersolution_init(spec: &ProblemSpec, cfg: &SolveConfig) -> Result<(ScalarField, usize)> {
    cfg.validate()?;
    let b0 = spec.reaction().b0();
    let start = boundary_fill(spec, spec.g().boundary_max().max(0.0));
    let tol = cfg.init_tol.unwrap_or(cfg.tol);
    let m = march(spec, Rhs::Constant(b0), start, cfg, tol)?;
    Ok((ScalarField::new(*spec.grid(), m.u)?, m.iterations))
}

/// Solves the singular problem from the supersolution start.
pub fn solve_peps(spec: &ProblemSpec, cfg: &SolveConfig) -> Result<SolveResult> {
    cfg.validate()?;
    spec.check_resolvable()?;
    let (init, init_iterations) = supersolution_init(spec, cfg)?;
    let mut res = solve_from(spec, cfg, init)?;
    res.init_iterations = init_iterations;
    Ok(res)
}

/// Solves the singular problem from a given start; boundary values are
/// reset to `g`.
pub fn solve_from(spec: &ProblemSpec, cfg: &SolveConfig, start: ScalarField) -> Result<SolveResult> {
    cfg.validate()?;
    spec.check_resolvable()?;
    if start.grid() != spec.grid() {
        return Err(Error::Precondition("start field lives on another grid".into()));
    }
    let grid = *spec.grid();
    let mut u = start.into_values();
    for (k, v) in u.iter_mut().enumerate() {
        if grid.is_boundary(k) {
            *v = spec.g().get(k);
        } else if cfg.project_nonneg {
            *v = v.max(0.0);
        }
    }
    let m = march(spec, Rhs::Reaction, u, cfg, cfg.tol)?;
    Ok(SolveResult {
        u: ScalarField::new(grid, m.u)?,
        iterations: m.iterations,
        final_residual: m.residual,
        monotone_violations: m.violations,
        init_iterations: 0,
    })
}

/// Scaled residual `s * sup |H F - zeta_eps|` of a field, with the
/// complementarity convention at the floor.
pub fn residual(spec: &ProblemSpec, u: &ScalarField, project_nonneg: bool) -> Result<f64> {
    if u.grid() != spec.grid() {
        return Err(Error::Precondition("field lives on another grid".into()));
    }
    let cfg = SolveConfig { project_nonneg, ..SolveConfig::default() };
    let kernel = Kernel::new(spec, Rhs::Reaction, &cfg);
    let vals = u.values();
    let r = interior_nodes(spec.grid())
        .iter()
        .map(|&k| kernel.residual(kernel.eval(vals, k).0, vals[k]))
        .fold(0.0, f64::max);
    Ok(spec.residual_scale() * r)
}
