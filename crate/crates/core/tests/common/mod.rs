//! Shared fixtures and independent oracles for the integration tests.
#![allow(dead_code)]

use degenfb::{DegeneracyParams, Grid, OperatorKind, ProblemSpec, ReactionParams, ScalarField, SymMatrix};
use nalgebra::{Matrix2, SymmetricEigen};

pub fn to_na(x: &SymMatrix) -> Matrix2<f64> {
    let (a, b, c) = x.entries();
    Matrix2::new(a, b, b, c)
}

/// `sup { tr(A X) : lambda I <= A <= Lambda I }`, attained at the matrix
/// sharing the eigenvectors of `X` with `Lambda` on the positive part.
pub fn pucci_plus_oracle(lambda: f64, big_lambda: f64, x: &SymMatrix) -> f64 {
    let m = to_na(x);
    let eig = SymmetricEigen::new(m);
    let d = eig.eigenvalues.map(|e| if e > 0.0 { big_lambda } else { lambda });
    let a = eig.eigenvectors * Matrix2::from_diagonal(&d) * eig.eigenvectors.transpose();
    (a * m).trace()
}

/// A matrix of the class `lambda I <= A <= Lambda I` from an angle and two
/// eigenvalues in `[0, 1]` scaled into the class.
pub fn class_member(lambda: f64, big_lambda: f64, theta: f64, s1: f64, s2: f64) -> Matrix2<f64> {
    let (c, s) = (theta.cos(), theta.sin());
    let r = Matrix2::new(c, -s, s, c);
    let d = Matrix2::new(lambda + (big_lambda - lambda) * s1, 0.0, 0.0, lambda + (big_lambda - lambda) * s2);
    r * d * r.transpose()
}

/// Model problem on `[0, side]^2`: Laplacian, `H = |xi| + |xi|^2`, unit
/// reaction, ramp boundary datum `0.5 (1 - x / side)`.
pub fn model_spec(n: usize, side: f64, eps: f64) -> ProblemSpec {
    let grid = Grid::new_2d([0.0, 0.0], [side, side], [n, n]).unwrap();
    let g = ScalarField::from_fn(grid, |x| 0.5 * (1.0 - x[0] / side)).unwrap();
    let one = ScalarField::constant(grid, 1.0);
    let deg = DegeneracyParams::new(1.0, 2.0, one.clone()).unwrap();
    let reaction = ReactionParams::new(eps, one, ScalarField::constant(grid, 0.0)).unwrap();
    ProblemSpec::new(Some(deg), OperatorKind::Laplacian, reaction, g).unwrap()
}

/// Homogeneous problem (`Q = 0`, `f = 0`) with the given operator and datum.
pub fn homogeneous_spec(grid: Grid, op: OperatorKind, g: impl Fn([f64; 2]) -> f64) -> ProblemSpec {
    let zero = ScalarField::constant(grid, 0.0);
    let reaction = ReactionParams::new(1.0, zero.clone(), zero).unwrap();
    let deg = DegeneracyParams::new(1.0, 2.0, ScalarField::constant(grid, 1.0)).unwrap();
    ProblemSpec::new(Some(deg), op, reaction, ScalarField::from_fn(grid, g).unwrap()).unwrap()
}

/// Composite Simpson rule on `n` (even) panels.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    assert!(n.is_multiple_of(2));
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + h * i as f64);
    }
    s * h / 3.0
}

/// The raw bump `exp(-1/(t(1-t)))` on `(0, 1)`.
pub fn raw_bump(t: f64) -> f64 {
    if t <= 0.0 || t >= 1.0 {
        0.0
    } else {
        (-1.0 / (t * (1.0 - t))).exp()
    }
}

/// Root of an increasing function on `[0, inf)` by plain bisection.
pub fn bisect_increasing(f: impl Fn(f64) -> f64, target: f64) -> f64 {
    let mut hi = 1.0;
    while f(hi) < target {
        hi *= 2.0;
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
