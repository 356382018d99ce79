//! Degeneracy law, second-order operators and their product.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{gradient_raw, hessian_raw, ScalarField, SymMatrix};

/// `|xi|^e` with cheap paths for the common integer exponents.
#[inline]
pub(crate) fn pow_abs(x: f64, e: f64) -> f64 {
    if e == 1.0 {
        x
    } else if e == 2.0 {
        x * x
    } else if e == 0.0 {
        1.0
    } else if x == 0.0 {
        0.0
    } else {
        x.powf(e)
    }
}

/// Parameters of `H(x, xi) = |xi|^p + a(x) |xi|^q`.
#[derive(Debug, Clone, PartialEq)]
pub struct DegeneracyParams {
    p: f64,
    q: f64,
    a: ScalarField,
    l1: f64,
    l2: f64,
}

impl DegeneracyParams {
    /// Law with unit comparability constants.
    pub fn new(p: f64, q: f64, a: ScalarField) -> Result<Self> {
        Self::with_bounds(p, q, a, 1.0, 1.0)
    }

    pub fn with_bounds(p: f64, q: f64, a: ScalarField, l1: f64, l2: f64) -> Result<Self> {
        if !(p > 0.0 && p.is_finite()) {
            return Err(Error::invalid("p", format!("need p > 0, got {p}")));
        }
        if !(q >= p && q.is_finite()) {
            return Err(Error::invalid("q", format!("need p <= q < inf, got p={p}, q={q}")));
        }
        if let Some(k) = a.values().iter().position(|&v| v < 0.0) {
            return Err(Error::invalid("a", format!("negative modulating value at node {k}")));
        }
        if !(l1 > 0.0 && l2 >= l1 && l2.is_finite()) {
            return Err(Error::invalid("L1/L2", format!("need 0 < L1 <= L2, got {l1}, {l2}")));
        }
        Ok(DegeneracyParams { p, q, a, l1, l2 })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn a(&self) -> &ScalarField {
        &self.a
    }

    pub fn l1(&self) -> f64 {
        self.l1
    }

    pub fn l2(&self) -> f64 {
        self.l2
    }

    pub fn a_sup(&self) -> f64 {
        self.a.max()
    }

    /// `K(x, xi) = |xi|^p + a(x)|xi|^q` at a node.
    pub fn degeneracy(&self, node: usize, xi: [f64; 2]) -> f64 {
        self.law(self.a.get(node), xi[0].hypot(xi[1]))
    }

    /// The law for a given modulating value and gradient magnitude.
    #[inline]
    pub fn law(&self, a: f64, r: f64) -> f64 {
        pow_abs(r, self.p) + a * pow_abs(r, self.q)
    }
}

/// Uniformly elliptic second-order part `F(X)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum OperatorKind {
    PucciPlus {
        lambda: f64,
        #[serde(rename = "Lambda")]
        big_lambda: f64,
    },
    PucciMinus {
        lambda: f64,
        #[serde(rename = "Lambda")]
        big_lambda: f64,
    },
    Laplacian,
    HessianFm {
        m: u32,
        lambda: f64,
        #[serde(rename = "Lambda")]
        big_lambda: f64,
    },
}

impl OperatorKind {
    pub fn validate(&self) -> Result<()> {
        let (l, bl) = self.ellipticity();
        if !(l > 0.0 && bl >= l && bl.is_finite()) {
            return Err(Error::invalid("operator", format!("need 0 < lambda <= Lambda, got {l}, {bl}")));
        }
        if let OperatorKind::HessianFm { m, .. } = self {
            if m % 2 == 0 {
                return Err(Error::invalid("operator", format!("m must be odd, got {m}")));
            }
        }
        Ok(())
    }

    /// Ellipticity constants `(lambda, Lambda)`; `(1, 1)` for the Laplacian.
    pub fn ellipticity(&self) -> (f64, f64) {
        match *self {
            OperatorKind::PucciPlus { lambda, big_lambda }
            | OperatorKind::PucciMinus { lambda, big_lambda }
            | OperatorKind::HessianFm { lambda, big_lambda, .. } => (lambda, big_lambda),
            OperatorKind::Laplacian => (1.0, 1.0),
        }
    }

    pub fn eval(&self, x: &SymMatrix) -> f64 {
        match *self {
            OperatorKind::PucciPlus { lambda, big_lambda } => pucci_plus(lambda, big_lambda, x),
            OperatorKind::PucciMinus { lambda, big_lambda } => pucci_minus(lambda, big_lambda, x),
            OperatorKind::Laplacian => x.trace(),
            OperatorKind::HessianFm { m, .. } => hessian_fm(m, x),
        }
    }

    /// Upper bound on `dF/de_j` at `x`, used for explicit step sizes.
    pub(crate) fn slope(&self, x: &SymMatrix) -> f64 {
        match *self {
            OperatorKind::HessianFm { m, .. } => {
                x.eigenvalues().as_slice().iter().map(|&e| fm_root_slope(m, e)).fold(1.0, f64::max)
            }
            _ => self.ellipticity().1,
        }
    }
}

/// `M^+(X) = Lambda * sum(e > 0) + lambda * sum(e < 0)`.
pub fn pucci_plus(lambda: f64, big_lambda: f64, x: &SymMatrix) -> f64 {
    pucci_plus_spectrum(lambda, big_lambda, x.eigenvalues().as_slice())
}

/// `M^+` of any symmetric matrix given its eigenvalues.
pub fn pucci_plus_spectrum(lambda: f64, big_lambda: f64, eigenvalues: &[f64]) -> f64 {
    eigenvalues.iter().map(|&e| if e > 0.0 { big_lambda * e } else { lambda * e }).sum()
}

/// `M^-(X) = lambda * sum(e > 0) + Lambda * sum(e < 0)`.
pub fn pucci_minus(lambda: f64, big_lambda: f64, x: &SymMatrix) -> f64 {
    x.eigenvalues().as_slice().iter().map(|&e| if e > 0.0 { lambda * e } else { big_lambda * e }).sum()
}

/// Real `m`-th root, odd `m`.
#[inline]
fn signed_root(y: f64, m: u32) -> f64 {
    match m {
        1 => y,
        3 => y.cbrt(),
        _ => y.signum() * y.abs().powf(1.0 / m as f64),
    }
}

#[inline]
fn fm_term(m: u32, e: f64) -> f64 {
    signed_root(1.0 + e.powi(m as i32), m)
}

/// `d/de (1 + e^m)^(1/m)`, clamped where it blows up at `e = -1`.
fn fm_root_slope(m: u32, e: f64) -> f64 {
    if m == 1 {
        return 1.0;
    }
    let base = (1.0 + e.powi(m as i32)).abs();
    let s = e.powi(m as i32 - 1) * base.powf(1.0 / m as f64 - 1.0);
    if s.is_finite() {
        s.min(1e6)
    } else {
        1e6
    }
}

/// `F_m(X) = sum_j (1 + e_j^m)^(1/m) - N` with the real odd root.
pub fn hessian_fm(m: u32, x: &SymMatrix) -> f64 {
    let eig = x.eigenvalues();
    let ev = eig.as_slice();
    ev.iter().map(|&e| fm_term(m, e)).sum::<f64>() - ev.len() as f64
}

/// `tau * F(X / tau)`; tends to the recession operator as `tau -> 0+`.
pub fn recession(kind: &OperatorKind, x: &SymMatrix, tau: f64) -> Result<f64> {
    if !(tau > 0.0) {
        return Err(Error::invalid("tau", format!("need tau > 0, got {tau}")));
    }
    Ok(tau * kind.eval(&x.scale(1.0 / tau)))
}

/// Smallest constant `C` with `F_m(X) <= tr X + C` for all `X` of order `dim`.
///
/// Each eigenvalue contributes `(1 + e^m)^(1/m) - 1 - e`, which is positive
/// only on `(-1, 0)`; the maximum there is found by golden-section search.
pub fn acp_constant(m: u32, dim: usize) -> f64 {
    if m == 1 {
        return 0.0;
    }
    let g = |e: f64| fm_term(m, e) - 1.0 - e;
    let (mut a, mut b) = (-1.0f64, 0.0f64);
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    while b - a > 1e-13 {
        if g(c) > g(d) {
            b = d;
        } else {
            a = c;
        }
        c = b - inv_phi * (b - a);
        d = a + inv_phi * (b - a);
    }
    let best = g(0.5 * (a + b)).max(g(a)).max(g(b));
    dim as f64 * best
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AcpReport {
    pub passed: bool,
    /// `max (F_m(X) - tr X - C)` over the samples.
    pub worst_margin: f64,
    /// `max (F_m(X) - tr X)` over the samples.
    pub worst_trace_gap: f64,
    pub constant: f64,
    pub samples: usize,
}

/// Samples symmetric matrices with entries in `[-100, 100]` and checks
/// `F_m(X) <= tr X + C` with the identity as the linear part.
pub fn acp_check(kind: &OperatorKind, dim: usize, samples: usize, seed: u64) -> Result<AcpReport> {
    use rand::{Rng, SeedableRng};
    let OperatorKind::HessianFm { m, .. } = *kind else {
        return Err(Error::Precondition("acp_check needs a HessianFm operator".into()));
    };
    kind.validate()?;
    if dim != 1 && dim != 2 {
        return Err(Error::invalid("dim", "only orders 1 and 2 are supported"));
    }
    let constant = acp_constant(m, dim);
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut gap = f64::NEG_INFINITY;
    for _ in 0..samples {
        let x = if dim == 1 {
            SymMatrix::new_1d(rng.gen_range(-100.0..=100.0))
        } else {
            SymMatrix::new_2d(
                rng.gen_range(-100.0..=100.0),
                rng.gen_range(-100.0..=100.0),
                rng.gen_range(-100.0..=100.0),
            )
        };
        gap = gap.max(hessian_fm(m, &x) - x.trace());
    }
    let worst_margin = gap - constant;
    Ok(AcpReport { passed: worst_margin <= 1e-12, worst_margin, worst_trace_gap: gap, constant, samples })
}

/// `H(x, grad u) * F(D^2 u)` from central stencils at an interior node;
/// `deg = None` stands for `H = 1`.
pub fn product_operator(
    deg: Option<&DegeneracyParams>,
    op: &OperatorKind,
    field: &ScalarField,
    node: usize,
) -> Result<f64> {
    let grid = field.grid();
    if node >= grid.len() || !grid.is_interior(node) {
        return Err(Error::Precondition(format!("operator evaluation needs an interior node, got {node}")));
    }
    let u = field.values();
    let xi = gradient_raw(grid, u, node);
    let h = match deg {
        Some(d) => d.degeneracy(node, xi),
        None => 1.0,
    };
    if h == 0.0 {
        return Ok(0.0);
    }
    Ok(h * op.eval(&hessian_raw(grid, u, node)))
}

/// The full operator of a problem instance at an interior node.
pub fn full_operator(spec: &crate::solver::ProblemSpec, field: &ScalarField, node: usize) -> Result<f64> {
    if field.grid() != spec.grid() {
        return Err(Error::Precondition("field and problem live on different grids".into()));
    }
    product_operator(spec.deg(), spec.op(), field, node)
}
