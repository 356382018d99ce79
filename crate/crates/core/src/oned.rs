//! One-dimensional profiles and the limiting free-boundary slope.
//!
//! In 1D the equation `(|u'|^p + k |u'|^q) u'' = zeta_eps(u)` has the first
//! integral `|u'|^(p+2)/(p+2) + k |u'|^(q+2)/(q+2) = int_0^(u/eps) zeta`, so the
//! slope above the layer solves the same law with the full mass `I`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{Grid, ScalarField};
use crate::operators::{DegeneracyParams, OperatorKind};
use crate::reaction::{Profile, ReactionParams};
use crate::solver::{solve_peps, ProblemSpec, SolveConfig};

/// Start offset of the profile, as a fraction of `eps`.
pub const START_OFFSET: f64 = 1e-8;

const QUAD_TOL: f64 = 1e-10;

/// `s^(p+2)/(p+2) + kappa s^(q+2)/(q+2) = I`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SlopeLaw {
    pub p: f64,
    pub q: f64,
    pub kappa: f64,
    #[serde(rename = "I")]
    pub i: f64,
}

impl SlopeLaw {
    pub fn new(p: f64, q: f64, kappa: f64, i: f64) -> Result<Self> {
        let law = SlopeLaw { p, q, kappa, i };
        law.validate()?;
        Ok(law)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.p >= 0.0 && self.p.is_finite()) {
            return Err(Error::invalid("p", format!("need p >= 0, got {}", self.p)));
        }
        if !(self.q >= self.p && self.q.is_finite()) {
            return Err(Error::invalid("q", format!("need p <= q < inf, got {}", self.q)));
        }
        if !(self.kappa >= 0.0 && self.kappa.is_finite()) {
            return Err(Error::invalid("kappa", format!("need kappa >= 0, got {}", self.kappa)));
        }
        if !(self.i > 0.0 && self.i.is_finite()) {
            return Err(Error::invalid("I", format!("need I > 0, got {}", self.i)));
        }
        Ok(())
    }

    /// Left side of the law at slope `s >= 0`.
    pub fn lhs(&self, s: f64) -> f64 {
        law_lhs(self.p, self.q, self.kappa, s)
    }
}

fn law_lhs(p: f64, q: f64, kappa: f64, s: f64) -> f64 {
    s.powf(p + 2.0) / (p + 2.0) + kappa * s.powf(q + 2.0) / (q + 2.0)
}

/// Root of the law for any `level >= 0`; zero at `level = 0`.
fn solve_law(p: f64, q: f64, kappa: f64, level: f64) -> f64 {
    if level <= 0.0 {
        return 0.0;
    }
    let f = |s: f64| law_lhs(p, q, kappa, s) - level;
    let mut hi = 1.0;
    while f(hi) < 0.0 {
        hi *= 2.0;
    }
    let mut lo = 0.0;
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if f(lo).abs() <= f(hi).abs() {
        lo
    } else {
        hi
    }
}

/// The positive slope satisfying the law, by bisection to float resolution.
pub fn slope_from_law(law: &SlopeLaw) -> Result<f64> {
    law.validate()?;
    Ok(solve_law(law.p, law.q, law.kappa, law.i))
}

/// One point of an integrated profile. `x` is the distance below the top
/// level `u = eps`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProfileSample {
    pub u: f64,
    pub slope: f64,
    pub x: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ProfileResult {
    /// `|u'|` at `u = eps`.
    pub slope_top: f64,
    pub law_slope: f64,
    /// Samples ordered from the top level downwards.
    pub samples: Vec<ProfileSample>,
    /// `max |s^(p+2)/(p+2) + kappa s^(q+2)/(q+2) - Z(u/eps)|` over the samples.
    pub identity_residual: f64,
}

/// Integrates the 1D profile through the first integral.
///
/// The reaction must carry `Q = 1` and `f_eps = 0`. Samples sit at
/// `u = eps k / n` for `k = n, ..., 1`, plus `u = START_OFFSET * eps`, and
/// stop early once the slope underflows to zero.
pub fn integrate_profile(
    p: f64,
    q: f64,
    kappa: f64,
    reaction: &ReactionParams,
    samples: usize,
) -> Result<ProfileResult> {
    if !(p > 0.0) {
        return Err(Error::invalid("p", format!("profiles need p > 0, got {p}")));
    }
    SlopeLaw::new(p, q, kappa, 1.0)?;
    if samples == 0 {
        return Err(Error::invalid("samples", "need at least one sample"));
    }
    if reaction.q().values().iter().any(|&v| v != 1.0) || reaction.f_eps().values().iter().any(|&v| v != 0.0) {
        return Err(Error::Precondition("profiles need Q = 1 and f_eps = 0".into()));
    }
    let eps = reaction.eps();
    let profile = reaction.profile();
    let mass = profile.integral();
    let slope_at = |u: f64| solve_law(p, q, kappa, profile.cumulative(u / eps));

    let mut levels: Vec<f64> = (1..=samples).rev().map(|k| eps * k as f64 / samples as f64).collect();
    levels.push(START_OFFSET * eps);

    let mut out = Vec::with_capacity(levels.len());
    let mut identity = 0.0f64;
    let mut x = 0.0;
    let mut prev = eps;
    for u in levels {
        let s = slope_at(u);
        if s == 0.0 {
            break;
        }
        if u < prev {
            let piece = quadrature::integrate(|v| 1.0 / slope_at(v), u, prev, QUAD_TOL);
            if !piece.integral.is_finite() {
                return Err(Error::Quadrature(format!("depth integral between u = {u:e} and {prev:e} is not finite")));
            }
            x += piece.integral;
        }
        identity = identity.max((law_lhs(p, q, kappa, s) - profile.cumulative(u / eps)).abs());
        out.push(ProfileSample { u, slope: s, x });
        prev = u;
    }
    Ok(ProfileResult {
        slope_top: slope_at(eps),
        law_slope: solve_law(p, q, kappa, mass),
        samples: out,
        identity_residual: identity,
    })
}

/// The 1D two-point problem used to compare the solver with the law:
/// `u(0) = G`, `u(length) = 0`, `a = kappa`, `Q = 1`, `f_eps = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TwoPoint {
    pub p: f64,
    pub q: f64,
    pub kappa: f64,
    pub eps: f64,
    pub nodes: usize,
    #[serde(rename = "G")]
    pub g_left: f64,
    pub length: f64,
    pub profile: Profile,
}

impl Default for TwoPoint {
    fn default() -> Self {
        TwoPoint {
            p: 1.0,
            q: 2.0,
            kappa: 0.0,
            eps: 0.01,
            nodes: 201,
            g_left: 0.2,
            length: 0.25,
            profile: Profile::Smooth,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CrossValidation {
    pub law_slope: f64,
    pub solver_slope: f64,
    /// `|solver - law| / law`.
    pub discrepancy: f64,
    pub h: f64,
    pub iterations: usize,
}

impl TwoPoint {
    pub fn grid(&self) -> Result<Grid> {
        if !(self.length > 0.0 && self.length.is_finite()) {
            return Err(Error::invalid("length", format!("need length > 0, got {}", self.length)));
        }
        Grid::new_1d(0.0, self.length, self.nodes)
    }

    /// The same problem on a grid with half the spacing.
    pub fn refined(&self) -> Self {
        TwoPoint { nodes: 2 * self.nodes - 1, ..*self }
    }

    /// The problem instance with reaction weight `q_weight` (1 for the law).
    pub fn spec(&self, q_weight: f64) -> Result<ProblemSpec> {
        if !(self.g_left >= 0.0 && self.g_left.is_finite()) {
            return Err(Error::invalid("G", format!("need G >= 0, got {}", self.g_left)));
        }
        let grid = self.grid()?;
        let a = ScalarField::constant(grid, self.kappa);
        let deg = DegeneracyParams::new(self.p, self.q, a)?;
        let reaction = ReactionParams::with_profile(
            self.eps,
            ScalarField::constant(grid, q_weight),
            ScalarField::constant(grid, 0.0),
            self.profile,
        )?;
        let n = self.nodes;
        let g_left = self.g_left;
        let g = ScalarField::from_fn(grid, |x| if x[0] <= 0.0 { g_left } else { 0.0 })?;
        debug_assert_eq!(g.get(n - 1), 0.0);
        ProblemSpec::new(Some(deg), OperatorKind::Laplacian, reaction, g)
    }

    /// Solves the two-point problem and compares the slope just above the
    /// layer with the law.
    pub fn cross_validate(&self, cfg: &SolveConfig) -> Result<CrossValidation> {
        let spec = self.spec(1.0)?;
        let law = SlopeLaw::new(self.p, self.q, self.kappa, self.profile.integral())?;
        let law_slope = slope_from_law(&law)?;
        let res = solve_peps(&spec, cfg)?;
        let u = res.u.values();
        let h = spec.grid().h(0);
        let top = (0..u.len())
            .rev()
            .find(|&i| u[i] >= self.eps)
            .ok_or_else(|| Error::EmptySet(format!("no node reaches the top level eps = {}", self.eps)))?;
        if top == 0 {
            return Err(Error::Precondition("the layer touches the left boundary".into()));
        }
        let solver_slope = (u[top - 1] - u[top]) / h;
        Ok(CrossValidation {
            law_slope,
            solver_slope,
            discrepancy: (solver_slope - law_slope).abs() / law_slope,
            h,
            iterations: res.iterations,
        })
    }
}
