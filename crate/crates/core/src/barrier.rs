//! Explicit radial barrier: a flat core, a quadratic annulus, and a
//! power-law tail.
//!
//! ```text
//! Theta_L(r) = t0                          r < L
//!            = A0 (r - L)^2 + t0           L <= r < L + L0
//!            = psi - phi r^(-alpha)        r >= L + L0
//! ```

use serde::Serialize;

use crate::error::{Error, Result};
use crate::operators::{pow_abs, pucci_plus_spectrum};

/// Inputs to the constant selection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BarrierInput {
    pub dim: usize,
    pub lambda: f64,
    pub big_lambda: f64,
    pub l1: f64,
    pub l2: f64,
    pub p: f64,
    pub q: f64,
    pub a_sup: f64,
    pub t0: f64,
    pub t_big: f64,
    pub j_star: f64,
}

impl BarrierInput {
    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(Error::invalid("dim", "need N >= 1"));
        }
        if !(self.lambda > 0.0 && self.big_lambda >= self.lambda && self.big_lambda.is_finite()) {
            return Err(Error::invalid("lambda/Lambda", "need 0 < lambda <= Lambda"));
        }
        if !(self.l1 > 0.0 && self.l2 >= self.l1 && self.l2.is_finite()) {
            return Err(Error::invalid("L1/L2", "need 0 < L1 <= L2"));
        }
        if !(self.p > 0.0 && self.q >= self.p && self.q.is_finite()) {
            return Err(Error::invalid("p/q", "need 0 < p <= q < inf"));
        }
        if !(self.a_sup >= 0.0 && self.a_sup.is_finite()) {
            return Err(Error::invalid("a_sup", "need a finite nonnegative bound"));
        }
        check_levels(self.t0, self.t_big)?;
        if !(self.j_star > 0.0 && self.j_star.is_finite()) {
            return Err(Error::invalid("j_star", format!("need J* > 0, got {}", self.j_star)));
        }
        Ok(())
    }

    /// Annulus bound `4 A0 N Lambda L2 [s^p + a_sup s^q]`, `s = 2 sqrt(A0 (T0 - t0))`.
    pub fn annulus_bound(&self, a0: f64) -> f64 {
        let s = 2.0 * (a0 * (self.t_big - self.t0)).sqrt();
        4.0 * a0 * self.dim as f64 * self.big_lambda * self.l2 * (pow_abs(s, self.p) + self.a_sup * pow_abs(s, self.q))
    }
}

fn check_levels(t0: f64, t_big: f64) -> Result<()> {
    if !(t0 > 0.0 && t_big > t0 && t_big < 1.0) {
        return Err(Error::invalid("t0/T0", format!("need 0 < t0 < T0 < 1, got t0={t0}, T0={t_big}")));
    }
    Ok(())
}

/// The barrier's defining constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BarrierParams {
    pub dim: usize,
    pub t0: f64,
    #[serde(rename = "T0")]
    pub t_big: f64,
    #[serde(rename = "A0")]
    pub a0: f64,
    pub alpha: f64,
    #[serde(rename = "L")]
    pub l: f64,
}

/// Value and radial derivatives of the profile at one radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialJet {
    pub value: f64,
    pub d1: f64,
    pub d2: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Region {
    Core,
    Annulus,
    Outer,
}

/// Chooses `alpha = max((N-1) Lambda/lambda - 1, 1)` and the largest `A0`
/// satisfying the annulus inequality; `L` starts at `L0`.
pub fn select_params(input: &BarrierInput) -> Result<BarrierParams> {
    input.validate()?;
    let alpha = ((input.dim as f64 - 1.0) * input.big_lambda / input.lambda - 1.0).max(1.0);
    let j = input.j_star;
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while input.annulus_bound(hi) <= j {
        lo = hi;
        hi *= 2.0;
    }
    while input.annulus_bound(lo) > j {
        hi = lo.max(f64::MIN_POSITIVE);
        lo = 0.5 * hi;
        if lo == 0.0 {
            break;
        }
    }
    // Bisect until the bracket collapses in floating point.
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if input.annulus_bound(mid) <= j {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if !(lo > 0.0) {
        return Err(Error::CheckFailed {
            check: "select_params",
            detail: "no positive curvature constant satisfies the annulus inequality".into(),
        });
    }
    let mut bp = BarrierParams { dim: input.dim, t0: input.t0, t_big: input.t_big, a0: lo, alpha, l: 0.0 };
    bp.l = bp.l0();
    Ok(bp)
}

impl BarrierParams {
    /// Copy with inner radius `l`, which must be at least `L0`.
    pub fn with_l(&self, l: f64) -> Result<Self> {
        check_levels(self.t0, self.t_big)?;
        let l0 = self.l0();
        if !(l >= l0 * (1.0 - 1e-15)) || !l.is_finite() {
            return Err(Error::invalid("L", format!("need L >= L0 = {l0}, got {l}")));
        }
        Ok(BarrierParams { l, ..*self })
    }

    pub fn l0(&self) -> f64 {
        ((self.t_big - self.t0) / self.a0).sqrt()
    }

    /// Outer interface radius `L + L0`.
    pub fn r_outer(&self) -> f64 {
        self.l + self.l0()
    }

    pub fn phi(&self) -> f64 {
        (2.0 / self.alpha) * ((self.t_big - self.t0) * self.a0).sqrt() * self.r_outer().powf(1.0 + self.alpha)
    }

    pub fn psi(&self) -> f64 {
        self.t_big + self.phi() * self.r_outer().powf(-self.alpha)
    }

    pub fn kappa0(&self) -> f64 {
        (self.a0 * (self.t_big - self.t0)).sqrt() / (self.alpha * 2f64.powf(self.alpha + 1.0))
    }

    pub fn region(&self, r: f64) -> Region {
        if r < self.l {
            Region::Core
        } else if r < self.r_outer() {
            Region::Annulus
        } else {
            Region::Outer
        }
    }

    /// Profile value with first and second radial derivatives.
    pub fn jet(&self, r: f64) -> RadialJet {
        let r = r.abs();
        match self.region(r) {
            Region::Core => RadialJet { value: self.t0, d1: 0.0, d2: 0.0 },
            Region::Annulus => {
                let s = r - self.l;
                RadialJet { value: self.a0 * s * s + self.t0, d1: 2.0 * self.a0 * s, d2: 2.0 * self.a0 }
            }
            Region::Outer => {
                let phi = self.phi();
                let a = self.alpha;
                RadialJet {
                    value: self.psi() - phi * r.powf(-a),
                    d1: a * phi * r.powf(-a - 1.0),
                    d2: -a * (a + 1.0) * phi * r.powf(-a - 2.0),
                }
            }
        }
    }

    pub fn theta_radial(&self, r: f64) -> f64 {
        self.jet(r).value
    }

    /// `Theta_L(x)` for a point of the plane.
    pub fn theta(&self, x: [f64; 2]) -> f64 {
        self.theta_radial(x[0].hypot(x[1]))
    }

    /// Analytic gradient at a planar point.
    pub fn gradient(&self, x: [f64; 2]) -> [f64; 2] {
        let r = x[0].hypot(x[1]);
        if r == 0.0 {
            return [0.0, 0.0];
        }
        let d1 = self.jet(r).d1;
        [d1 * x[0] / r, d1 * x[1] / r]
    }

    /// Hessian eigenvalues at radius `r`: `Theta''` once and `Theta'/r`
    /// with multiplicity `N - 1`.
    pub fn hessian_spectrum(&self, r: f64) -> Vec<f64> {
        let jet = self.jet(r);
        let tangential = if r > 0.0 { jet.d1 / r } else { jet.d2 };
        let mut v = vec![tangential; self.dim];
        v[0] = jet.d2;
        v
    }

    /// Jumps in value and first derivative across the two interfaces.
    pub fn interface_jumps(&self) -> [f64; 4] {
        let inner = self.l;
        let outer = self.r_outer();
        let core = RadialJet { value: self.t0, d1: 0.0, d2: 0.0 };
        let ann = |r: f64| {
            let s = r - self.l;
            (self.a0 * s * s + self.t0, 2.0 * self.a0 * s)
        };
        let out = self.jet(outer);
        let (ai, di) = ann(inner);
        let (ao, d_o) = ann(outer);
        [(ai - core.value).abs(), (di - core.d1).abs(), (ao - out.value).abs(), (d_o - out.d1).abs()]
    }

    /// Scaled barrier `eps * Theta_{eta/(4 eps)}(x / eps)`.
    pub fn scaled(&self, eps: f64, eta: f64) -> Result<ScaledBarrier> {
        if !(eps > 0.0 && eta > 0.0) {
            return Err(Error::invalid("eps/eta", "need eps > 0 and eta > 0"));
        }
        Ok(ScaledBarrier { inner: self.with_l(eta / (4.0 * eps))?, eps, eta })
    }

    pub fn report(&self) -> BarrierReport {
        BarrierReport { params: *self, l0: self.l0(), phi: self.phi(), psi: self.psi(), kappa0: self.kappa0() }
    }
}

/// Barrier constants with every derived quantity, for serialization.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BarrierReport {
    #[serde(flatten)]
    pub params: BarrierParams,
    #[serde(rename = "L0")]
    pub l0: f64,
    pub phi: f64,
    pub psi: f64,
    pub kappa0: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledBarrier {
    inner: BarrierParams,
    eps: f64,
    eta: f64,
}

impl ScaledBarrier {
    pub fn unscaled(&self) -> &BarrierParams {
        &self.inner
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn eval(&self, x: [f64; 2]) -> f64 {
        self.eps * self.inner.theta([x[0] / self.eps, x[1] / self.eps])
    }
}

/// Data the supersolution inequality is tested against.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupersolutionData {
    pub lambda: f64,
    pub big_lambda: f64,
    pub l2: f64,
    pub p: f64,
    pub q: f64,
    pub a_sup: f64,
    pub j_star: f64,
}

impl From<&BarrierInput> for SupersolutionData {
    fn from(b: &BarrierInput) -> Self {
        SupersolutionData {
            lambda: b.lambda,
            big_lambda: b.big_lambda,
            l2: b.l2,
            p: b.p,
            q: b.q,
            a_sup: b.a_sup,
            j_star: b.j_star,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SupersolutionReport {
    pub passed: bool,
    pub samples: usize,
    /// `max (LHS - J*)` over annulus samples.
    pub annulus_margin: f64,
    /// `max LHS` over outer samples.
    pub outer_margin: f64,
    /// `max LHS` over core samples.
    pub core_margin: f64,
    /// First failing sample `(radius, margin)`, if any.
    pub first_violation: Option<(f64, f64)>,
}

const CHECK_TOL: f64 = 1e-10;

/// Left side `L2 K(|grad Theta|) M^+(D^2 Theta)` at radius `r`, with the
/// modulating function at its supremum.
pub fn supersolution_lhs(bp: &BarrierParams, data: &SupersolutionData, r: f64) -> f64 {
    let jet = bp.jet(r);
    let g = jet.d1.abs();
    let h = data.l2 * (pow_abs(g, data.p) + data.a_sup * pow_abs(g, data.q));
    if h == 0.0 {
        return 0.0;
    }
    h * pucci_plus_spectrum(data.lambda, data.big_lambda, &bp.hessian_spectrum(r))
}

/// Radii used by the checks: equal shares of the core, the annulus and the
/// tail out to `8 (L + L0)`.
pub fn sample_radii(bp: &BarrierParams, samples: usize) -> Vec<f64> {
    let per = (samples / 3).max(1);
    let rest = samples.saturating_sub(2 * per).max(1);
    let span = |a: f64, b: f64, n: usize, closed: bool| -> Vec<f64> {
        let denom = if closed { (n.max(2) - 1) as f64 } else { n as f64 };
        (0..n).map(move |i| a + (b - a) * i as f64 / denom).collect()
    };
    let ro = bp.r_outer();
    let mut out = span(0.0, bp.l, per, false);
    out.extend(span(bp.l, ro, per, false));
    out.extend(span(ro, 8.0 * ro, rest, true));
    out
}

/// Pointwise supersolution inequality on `samples` radii.
pub fn verify_supersolution(
    bp: &BarrierParams,
    data: &SupersolutionData,
    samples: usize,
) -> Result<SupersolutionReport> {
    if samples < 3 {
        return Err(Error::invalid("samples", "need at least 3 radii"));
    }
    let mut report = SupersolutionReport {
        passed: true,
        samples,
        annulus_margin: f64::NEG_INFINITY,
        outer_margin: f64::NEG_INFINITY,
        core_margin: f64::NEG_INFINITY,
        first_violation: None,
    };
    for r in sample_radii(bp, samples) {
        let lhs = supersolution_lhs(bp, data, r);
        let margin = match bp.region(r) {
            Region::Core => {
                report.core_margin = report.core_margin.max(lhs);
                lhs
            }
            Region::Annulus => {
                report.annulus_margin = report.annulus_margin.max(lhs - data.j_star);
                lhs - data.j_star
            }
            Region::Outer => {
                report.outer_margin = report.outer_margin.max(lhs);
                lhs
            }
        };
        if margin > CHECK_TOL && report.first_violation.is_none() {
            report.passed = false;
            report.first_violation = Some((r, margin));
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthReport {
    pub passed: bool,
    /// `min (Theta(r) - 4 kappa0 L)` over the tested radii.
    pub worst_margin: f64,
    pub radii: Vec<f64>,
}

/// `Theta_L(r) >= 4 kappa0 L` at `r` in `{4L, 5L, 8L, 16L}`.
pub fn growth_check(bp: &BarrierParams) -> Result<GrowthReport> {
    if bp.l < bp.l0() * (1.0 - 1e-15) {
        return Err(Error::Precondition(format!("L = {} is below L0 = {}", bp.l, bp.l0())));
    }
    let floor = 4.0 * bp.kappa0() * bp.l;
    let radii: Vec<f64> = [4.0, 5.0, 8.0, 16.0].iter().map(|k| k * bp.l).collect();
    let worst = radii.iter().map(|&r| bp.theta_radial(r) - floor).fold(f64::INFINITY, f64::min);
    Ok(GrowthReport { passed: worst >= -CHECK_TOL, worst_margin: worst, radii })
}
