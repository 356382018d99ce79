//! The singular reaction `zeta_eps(x, t) = Q(x) zeta(t / eps) / eps + f_eps(x)`.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::ScalarField;

/// Accuracy requested from the quadrature that normalizes the bump.
const NORMALIZATION_TOL: f64 = 1e-14;

#[inline]
fn raw_bump(t: f64) -> f64 {
    if t <= 0.0 || t >= 1.0 {
        0.0
    } else {
        (-1.0 / (t * (1.0 - t))).exp()
    }
}

/// Reciprocal of `int_0^1 exp(-1/(s(1-s))) ds`.
pub fn bump_constant() -> f64 {
    static C: OnceLock<f64> = OnceLock::new();
    *C.get_or_init(|| {
        // Symmetric about 1/2, so integrate one half and double it.
        let half = quadrature::integrate(raw_bump, 0.0, 0.5, NORMALIZATION_TOL).integral;
        1.0 / (2.0 * half)
    })
}

/// `zeta(t) = c exp(-1/(t(1-t)))` on `(0, 1)`, zero elsewhere, unit mass.
pub fn bump(t: f64) -> f64 {
    bump_constant() * raw_bump(t)
}

/// `zeta'(t)`.
pub fn bump_derivative(t: f64) -> f64 {
    if t <= 0.0 || t >= 1.0 {
        return 0.0;
    }
    let w = t * (1.0 - t);
    bump(t) * (1.0 - 2.0 * t) / (w * w)
}

/// `sup zeta = zeta(1/2) = c e^{-4}`.
pub fn bump_sup() -> f64 {
    bump(0.5)
}

/// `sup |zeta'|`, located by golden-section search on `(0, 1/2)`.
pub fn bump_derivative_sup() -> f64 {
    static S: OnceLock<f64> = OnceLock::new();
    *S.get_or_init(|| {
        let f = |t: f64| bump_derivative(t).abs();
        let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
        let (mut a, mut b) = (0.0f64, 0.5f64);
        while b - a > 1e-12 {
            let c = b - inv_phi * (b - a);
            let d = a + inv_phi * (b - a);
            if f(c) > f(d) {
                b = d;
            } else {
                a = c;
            }
        }
        f(0.5 * (a + b))
    })
}

/// Shape of the unit-mass profile `zeta` supported on `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Profile {
    /// The smooth bump `c exp(-1/(t(1-t)))`.
    #[default]
    Smooth,
    /// The indicator of `[0, 1]`.
    Box,
}

impl Profile {
    pub fn density(&self, t: f64) -> f64 {
        match self {
            Profile::Smooth => bump(t),
            Profile::Box => {
                if (0.0..=1.0).contains(&t) {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }

    pub fn derivative(&self, t: f64) -> f64 {
        match self {
            Profile::Smooth => bump_derivative(t),
            Profile::Box => 0.0,
        }
    }

    pub fn sup(&self) -> f64 {
        match self {
            Profile::Smooth => bump_sup(),
            Profile::Box => 1.0,
        }
    }

    pub fn derivative_sup(&self) -> f64 {
        match self {
            Profile::Smooth => bump_derivative_sup(),
            Profile::Box => 0.0,
        }
    }

    /// Total mass `int_0^1 zeta`.
    pub fn integral(&self) -> f64 {
        1.0
    }

    /// Cumulative mass `int_0^s zeta`.
    pub fn cumulative(&self, s: f64) -> f64 {
        if s <= 0.0 {
            return 0.0;
        }
        if s >= 1.0 {
            return 1.0;
        }
        match self {
            Profile::Box => s,
            Profile::Smooth => {
                // Integrate over the shorter side of 1/2 and use the symmetry.
                let c = bump_constant();
                if s <= 0.5 {
                    c * quadrature::integrate(raw_bump, 0.0, s, NORMALIZATION_TOL).integral
                } else {
                    1.0 - c * quadrature::integrate(raw_bump, s, 1.0, NORMALIZATION_TOL).integral
                }
            }
        }
    }
}

/// Data of the reaction family on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ReactionParams {
    eps: f64,
    q: ScalarField,
    f_eps: ScalarField,
    profile: Profile,
}

impl ReactionParams {
    pub fn new(eps: f64, q: ScalarField, f_eps: ScalarField) -> Result<Self> {
        Self::with_profile(eps, q, f_eps, Profile::Smooth)
    }

    /// `Q` may vanish, which switches the singular part off.
    pub fn with_profile(eps: f64, q: ScalarField, f_eps: ScalarField, profile: Profile) -> Result<Self> {
        if !(eps > 0.0 && eps.is_finite()) {
            return Err(Error::invalid("eps", format!("need eps > 0, got {eps}")));
        }
        if q.grid() != f_eps.grid() {
            return Err(Error::invalid("Q/f_eps", "fields live on different grids"));
        }
        if let Some(k) = q.values().iter().position(|&v| v < 0.0) {
            return Err(Error::invalid("Q", format!("negative value at node {k}")));
        }
        if let Some(k) = f_eps.values().iter().position(|&v| v < 0.0) {
            return Err(Error::invalid("f_eps", format!("negative value at node {k}")));
        }
        Ok(ReactionParams { eps, q, f_eps, profile })
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn q(&self) -> &ScalarField {
        &self.q
    }

    pub fn f_eps(&self) -> &ScalarField {
        &self.f_eps
    }

    pub fn profile(&self) -> Profile {
        self.profile
    }

    /// Same data at another `eps`.
    pub fn with_eps(&self, eps: f64) -> Result<Self> {
        Self::with_profile(eps, self.q.clone(), self.f_eps.clone(), self.profile)
    }

    /// `A = sup Q * sup zeta`.
    pub fn a_const(&self) -> f64 {
        self.q.max() * self.profile.sup()
    }

    /// `B0 = inf f_eps`.
    pub fn b0(&self) -> f64 {
        self.f_eps.min()
    }

    /// `B = sup f_eps`.
    pub fn b(&self) -> f64 {
        self.f_eps.max()
    }

    pub fn i_zeta(&self) -> f64 {
        self.profile.integral()
    }

    /// Whether the singular part vanishes identically.
    pub fn is_trivial(&self) -> bool {
        self.q.max() == 0.0 && self.f_eps.max() == 0.0
    }

    /// `zeta_eps(x, t)`; negative `t` takes the value at `t = 0`.
    #[inline]
    pub fn zeta_eps(&self, node: usize, t: f64) -> f64 {
        let s = t.max(0.0) / self.eps;
        let singular = if s < 1.0 { self.q.get(node) * self.profile.density(s) / self.eps } else { 0.0 };
        singular + self.f_eps.get(node)
    }

    /// `d zeta_eps / dt`, zero for `t <= 0`.
    #[inline]
    pub fn zeta_eps_slope(&self, node: usize, t: f64) -> f64 {
        if t <= 0.0 || t >= self.eps {
            return 0.0;
        }
        self.q.get(node) * self.profile.derivative(t / self.eps) / (self.eps * self.eps)
    }

    /// Bound constants and the non-degeneracy level over `[t0, T0]`.
    pub fn certify(&self, t0: f64, t_big: f64) -> Result<Certificate> {
        if !(t0 >= 0.0 && t_big > t0 && t_big.is_finite()) {
            return Err(Error::invalid("t0/T0", format!("need 0 <= t0 < T0 < inf, got {t0}, {t_big}")));
        }
        const SAMPLES: usize = 1000;
        let mut j_star = f64::INFINITY;
        for k in 0..self.q.grid().len() {
            let (qk, fk) = (self.q.get(k), self.f_eps.get(k));
            for i in 0..SAMPLES {
                let t = t0 + (t_big - t0) * i as f64 / (SAMPLES - 1) as f64;
                j_star = j_star.min(qk * self.profile.density(t) + self.eps * fk);
            }
        }
        if !(j_star > 0.0) {
            return Err(Error::CheckFailed {
                check: "certify",
                detail: format!(
                    "non-degeneracy level vanishes on [{t0}, {t_big}]: the reaction has no singular mass there"
                ),
            });
        }
        Ok(Certificate { a: self.a_const(), b0: self.b0(), b: self.b(), i_zeta: self.i_zeta(), j_star, t0, t_big })
    }
}

/// Constants certifying the bound and non-degeneracy conditions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Certificate {
    pub a: f64,
    pub b0: f64,
    pub b: f64,
    pub i_zeta: f64,
    pub j_star: f64,
    pub t0: f64,
    #[serde(rename = "T0")]
    pub t_big: f64,
}
