//! Rectangular lattices, node-indexed scalar fields and discrete calculus.
//!
//! Nodes are numbered with the first axis varying fastest, so node
//! `i + n[0] * j` sits at `(x_i, y_j)`. One-dimensional grids carry a
//! degenerate second axis with a single node.

mod csv_io;
mod distance;

pub use csv_io::{read_csv, write_csv};
pub use distance::{dist_brute_force, dist_to_set, dist_two_pass};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Rectangular lattice over the box `[lo, hi]` with `n` nodes per axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GridSpec", into = "GridSpec")]
pub struct Grid {
    dim: usize,
    lo: [f64; 2],
    hi: [f64; 2],
    n: [usize; 2],
}

/// Serialized shape of a [`Grid`]: one entry per active axis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
    pub n: Vec<usize>,
}

impl TryFrom<GridSpec> for Grid {
    type Error = Error;

    fn try_from(spec: GridSpec) -> Result<Self> {
        match (spec.lo.as_slice(), spec.hi.as_slice(), spec.n.as_slice()) {
            ([lo], [hi], [n]) => Grid::new_1d(*lo, *hi, *n),
            ([lx, ly], [hx, hy], [nx, ny]) => Grid::new_2d([*lx, *ly], [*hx, *hy], [*nx, *ny]),
            _ => Err(Error::invalid("grid", "lo, hi and n must all have length 1 or all have length 2")),
        }
    }
}

impl From<Grid> for GridSpec {
    fn from(g: Grid) -> Self {
        let d = g.dim;
        GridSpec { lo: g.lo[..d].to_vec(), hi: g.hi[..d].to_vec(), n: g.n[..d].to_vec() }
    }
}

impl Grid {
    pub fn new_1d(lo: f64, hi: f64, n: usize) -> Result<Self> {
        Self::build(1, [lo, 0.0], [hi, 0.0], [n, 1])
    }

    pub fn new_2d(lo: [f64; 2], hi: [f64; 2], n: [usize; 2]) -> Result<Self> {
        Self::build(2, lo, hi, n)
    }

    fn build(dim: usize, lo: [f64; 2], hi: [f64; 2], n: [usize; 2]) -> Result<Self> {
        for axis in 0..dim {
            if !(lo[axis].is_finite() && hi[axis].is_finite()) {
                return Err(Error::invalid("grid", "corner coordinates must be finite"));
            }
            if hi[axis] <= lo[axis] {
                return Err(Error::invalid("grid", format!("hi must exceed lo on axis {axis}")));
            }
            if n[axis] < 3 {
                return Err(Error::invalid("grid", format!("need at least 3 nodes on axis {axis}, got {}", n[axis])));
            }
        }
        Ok(Grid { dim, lo, hi, n })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn lo(&self) -> [f64; 2] {
        self.lo
    }

    pub fn hi(&self) -> [f64; 2] {
        self.hi
    }

    pub fn n(&self) -> [usize; 2] {
        self.n
    }

    /// Spacing along `axis`; zero for the inactive axis of a 1D grid.
    pub fn h(&self, axis: usize) -> f64 {
        if axis >= self.dim {
            return 0.0;
        }
        (self.hi[axis] - self.lo[axis]) / (self.n[axis] - 1) as f64
    }

    /// Largest spacing over active axes.
    pub fn h_max(&self) -> f64 {
        (0..self.dim).map(|a| self.h(a)).fold(0.0, f64::max)
    }

    pub fn h_min(&self) -> f64 {
        (0..self.dim).map(|a| self.h(a)).fold(f64::INFINITY, f64::min)
    }

    pub fn len(&self) -> usize {
        self.n[0] * self.n[1]
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < self.n[0] && j < self.n[1]);
        i + self.n[0] * j
    }

    #[inline]
    pub fn ij(&self, node: usize) -> (usize, usize) {
        (node % self.n[0], node / self.n[0])
    }

    /// Coordinate of node `i` along `axis`. Reproduces `lo` and `hi` exactly
    /// at the extreme indices.
    #[inline]
    pub fn axis_coord(&self, axis: usize, i: usize) -> f64 {
        if axis >= self.dim {
            return 0.0;
        }
        let t = i as f64 / (self.n[axis] - 1) as f64;
        self.lo[axis] * (1.0 - t) + self.hi[axis] * t
    }

    #[inline]
    pub fn coord(&self, node: usize) -> [f64; 2] {
        let (i, j) = self.ij(node);
        [self.axis_coord(0, i), self.axis_coord(1, j)]
    }

    /// Number of nodes separating `node` from the nearest boundary node.
    pub fn interior_offset(&self, node: usize) -> usize {
        let (i, j) = self.ij(node);
        let mut off = i.min(self.n[0] - 1 - i);
        if self.dim == 2 {
            off = off.min(j.min(self.n[1] - 1 - j));
        }
        off
    }

    #[inline]
    pub fn is_interior(&self, node: usize) -> bool {
        self.interior_offset(node) >= 1
    }

    #[inline]
    pub fn is_boundary(&self, node: usize) -> bool {
        !self.is_interior(node)
    }

    /// Euclidean distance between two nodes, computed from index offsets.
    #[inline]
    pub fn node_distance(&self, a: usize, b: usize) -> f64 {
        let (ia, ja) = self.ij(a);
        let (ib, jb) = self.ij(b);
        let dx = (ia as f64 - ib as f64) * self.h(0);
        let dy = (ja as f64 - jb as f64) * self.h(1);
        (dx * dx + dy * dy).sqrt()
    }

    /// Node closest to `point` (clamped to the box).
    pub fn nearest_node(&self, point: [f64; 2]) -> usize {
        let mut idx = [0usize; 2];
        for axis in 0..self.dim {
            let t = (point[axis] - self.lo[axis]) / self.h(axis);
            let k = t.round().clamp(0.0, (self.n[axis] - 1) as f64);
            idx[axis] = k as usize;
        }
        self.index(idx[0], idx[1])
    }

    /// Nodes of the closed discrete ball `{x : |x - x(center)| <= radius}`.
    pub fn ball(&self, center: usize, radius: f64) -> Vec<usize> {
        let (ci, cj) = self.ij(center);
        let reach = |axis: usize| -> usize {
            if axis >= self.dim {
                0
            } else {
                (radius / self.h(axis)).floor() as usize
            }
        };
        let (ri, rj) = (reach(0), reach(1));
        let r2 = radius * radius * (1.0 + 1e-12);
        let (h0, h1) = (self.h(0), self.h(1));
        let mut out = Vec::new();
        for j in cj.saturating_sub(rj)..=(cj + rj).min(self.n[1] - 1) {
            let dy = (j as f64 - cj as f64) * h1;
            for i in ci.saturating_sub(ri)..=(ci + ri).min(self.n[0] - 1) {
                let dx = (i as f64 - ci as f64) * h0;
                if dx * dx + dy * dy <= r2 {
                    out.push(self.index(i, j));
                }
            }
        }
        out
    }

    /// Whether the closed ball of `radius` around `center` lies inside the box.
    pub fn ball_inside(&self, center: usize, radius: f64) -> bool {
        let x = self.coord(center);
        let tol = 1e-12 * self.h_max();
        (0..self.dim).all(|a| x[a] - radius >= self.lo[a] - tol && x[a] + radius <= self.hi[a] + tol)
    }
}

/// Node-indexed real values on a [`Grid`].
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    grid: Grid,
    values: Vec<f64>,
}

impl ScalarField {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::invalid("field", format!("expected {} values, got {}", grid.len(), values.len())));
        }
        if let Some(k) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::invalid("field", format!("non-finite value at node {k}")));
        }
        Ok(ScalarField { grid, values })
    }

    pub fn constant(grid: Grid, value: f64) -> Self {
        assert!(value.is_finite(), "constant field value must be finite");
        ScalarField { grid, values: vec![value; grid.len()] }
    }

    pub fn from_fn(grid: Grid, f: impl Fn([f64; 2]) -> f64) -> Result<Self> {
        let values = (0..grid.len()).map(|k| f(grid.coord(k))).collect();
        Self::new(grid, values)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    #[inline]
    pub fn get(&self, node: usize) -> f64 {
        self.values[node]
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Maximum over boundary nodes.
    pub fn boundary_max(&self) -> f64 {
        (0..self.grid.len())
            .filter(|&k| self.grid.is_boundary(k))
            .map(|k| self.values[k])
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// `sup |self - other|` over all nodes.
    pub fn sup_distance(&self, other: &ScalarField) -> Result<f64> {
        if self.grid != other.grid {
            return Err(Error::Precondition("fields live on different grids".into()));
        }
        Ok(self.values.iter().zip(&other.values).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<ScalarField> {
        Self::new(self.grid, self.values.iter().map(|&v| f(v)).collect())
    }
}

/// Symmetric matrix of order 1 or 2, stored by its upper triangle
/// `[[a, b], [b, c]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymMatrix {
    dim: usize,
    a: f64,
    b: f64,
    c: f64,
}

impl SymMatrix {
    pub fn new_1d(a: f64) -> Self {
        SymMatrix { dim: 1, a, b: 0.0, c: 0.0 }
    }

    pub fn new_2d(a: f64, b: f64, c: f64) -> Self {
        SymMatrix { dim: 2, a, b, c }
    }

    pub fn zero(dim: usize) -> Self {
        SymMatrix::diag(dim, [0.0, 0.0])
    }

    pub fn identity(dim: usize) -> Self {
        SymMatrix::diag(dim, [1.0, 1.0])
    }

    pub fn diag(dim: usize, d: [f64; 2]) -> Self {
        assert!(dim == 1 || dim == 2, "SymMatrix supports orders 1 and 2");
        if dim == 1 {
            SymMatrix::new_1d(d[0])
        } else {
            SymMatrix::new_2d(d[0], 0.0, d[1])
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Upper-triangle entries `(a, b, c)`.
    pub fn entries(&self) -> (f64, f64, f64) {
        (self.a, self.b, self.c)
    }

    pub fn trace(&self) -> f64 {
        if self.dim == 1 {
            self.a
        } else {
            self.a + self.c
        }
    }

    pub fn scale(&self, s: f64) -> Self {
        SymMatrix { a: self.a * s, b: self.b * s, c: self.c * s, ..*self }
    }

    /// Eigenvalues in ascending order, via half-trace plus or minus the
    /// half-discriminant root.
    pub fn eigenvalues(&self) -> Eigenvalues {
        if self.dim == 1 {
            return Eigenvalues { vals: [self.a, 0.0], len: 1 };
        }
        let mean = 0.5 * (self.a + self.c);
        let half_diff = 0.5 * (self.a - self.c);
        let rad = half_diff.hypot(self.b);
        Eigenvalues { vals: [mean - rad, mean + rad], len: 2 }
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.a.abs().max(self.b.abs()).max(self.c.abs())
    }
}

impl std::ops::Add for SymMatrix {
    type Output = SymMatrix;

    fn add(self, rhs: SymMatrix) -> SymMatrix {
        assert_eq!(self.dim, rhs.dim);
        SymMatrix { a: self.a + rhs.a, b: self.b + rhs.b, c: self.c + rhs.c, ..self }
    }
}

impl std::ops::Sub for SymMatrix {
    type Output = SymMatrix;

    fn sub(self, rhs: SymMatrix) -> SymMatrix {
        assert_eq!(self.dim, rhs.dim);
        SymMatrix { a: self.a - rhs.a, b: self.b - rhs.b, c: self.c - rhs.c, ..self }
    }
}

impl std::ops::Neg for SymMatrix {
    type Output = SymMatrix;

    fn neg(self) -> SymMatrix {
        self.scale(-1.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Eigenvalues {
    vals: [f64; 2],
    len: usize,
}

impl Eigenvalues {
    pub fn as_slice(&self) -> &[f64] {
        &self.vals[..self.len]
    }
}

#[inline]
pub(crate) fn gradient_raw(grid: &Grid, u: &[f64], node: usize) -> [f64; 2] {
    let n0 = grid.n[0];
    let gx = (u[node + 1] - u[node - 1]) / (2.0 * grid.h(0));
    let gy = if grid.dim == 2 { (u[node + n0] - u[node - n0]) / (2.0 * grid.h(1)) } else { 0.0 };
    [gx, gy]
}

#[inline]
pub(crate) fn hessian_raw(grid: &Grid, u: &[f64], node: usize) -> SymMatrix {
    let h0 = grid.h(0);
    let c = u[node];
    let uxx = (u[node + 1] - 2.0 * c + u[node - 1]) / (h0 * h0);
    if grid.dim == 1 {
        return SymMatrix::new_1d(uxx);
    }
    let n0 = grid.n[0];
    let h1 = grid.h(1);
    let uyy = (u[node + n0] - 2.0 * c + u[node - n0]) / (h1 * h1);
    let uxy = (u[node + n0 + 1] - u[node + n0 - 1] - u[node - n0 + 1] + u[node - n0 - 1]) / (4.0 * h0 * h1);
    SymMatrix::new_2d(uxx, uxy, uyy)
}

fn require_interior(grid: &Grid, node: usize, what: &str) -> Result<()> {
    if node >= grid.len() {
        return Err(Error::Precondition(format!("{what}: node {node} out of range")));
    }
    if !grid.is_interior(node) {
        return Err(Error::Precondition(format!("{what}: node {node} lies on the boundary")));
    }
    Ok(())
}

/// Central-difference gradient at an interior node.
pub fn gradient_at(field: &ScalarField, node: usize) -> Result<[f64; 2]> {
    require_interior(&field.grid, node, "gradient_at")?;
    Ok(gradient_raw(&field.grid, &field.values, node))
}

/// Central second differences with the four-point diagonal cross stencil.
pub fn hessian_at(field: &ScalarField, node: usize) -> Result<SymMatrix> {
    require_interior(&field.grid, node, "hessian_at")?;
    Ok(hessian_raw(&field.grid, &field.values, node))
}

pub fn sup_over(field: &ScalarField, region: impl Fn(usize) -> bool) -> Result<f64> {
    extremum(field, region, f64::max, f64::NEG_INFINITY)
}

pub fn inf_over(field: &ScalarField, region: impl Fn(usize) -> bool) -> Result<f64> {
    extremum(field, region, f64::min, f64::INFINITY)
}

fn extremum(field: &ScalarField, region: impl Fn(usize) -> bool, pick: fn(f64, f64) -> f64, init: f64) -> Result<f64> {
    let mut any = false;
    let mut acc = init;
    for k in (0..field.grid.len()).filter(|&k| region(k)) {
        any = true;
        acc = pick(acc, field.values[k]);
    }
    if any {
        Ok(acc)
    } else {
        Err(Error::EmptySet("region contains no nodes".into()))
    }
}

/// `(sup, inf)` of the field over the discrete ball around `center`.
pub fn ball_extrema(field: &ScalarField, center: usize, radius: f64) -> Result<(f64, f64)> {
    let nodes = field.grid.ball(center, radius);
    if nodes.is_empty() {
        return Err(Error::EmptySet("ball contains no nodes".into()));
    }
    Ok(nodes
        .iter()
        .fold((f64::NEG_INFINITY, f64::INFINITY), |(s, i), &k| (s.max(field.values[k]), i.min(field.values[k]))))
}
