//! Measurements of solutions near the transition layer.
//!
//! Every routine is a pure reduction over nodes. Distances to the
//! coincidence set `{u <= eps}` come from the exact transform in
//! [`crate::grid::dist_to_set`].

use rand::seq::SliceRandom;
use rand::SeedableRng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{ball_extrema, dist_to_set, gradient_raw, Grid, ScalarField};

/// Nodes with offset at least `margin` from the boundary.
fn inner_nodes(grid: &Grid, margin: usize) -> impl Iterator<Item = usize> + '_ {
    (0..grid.len()).filter(move |&k| grid.interior_offset(k) >= margin)
}

/// `max |grad u|` over nodes at least `margin` nodes from the boundary.
pub fn lipschitz_norm(u: &ScalarField, margin: usize) -> Result<f64> {
    if margin == 0 {
        return Err(Error::invalid("margin", "central differences need margin >= 1"));
    }
    let grid = u.grid();
    let mut any = false;
    let mut best = 0.0f64;
    for k in inner_nodes(grid, margin) {
        any = true;
        let g = gradient_raw(grid, u.values(), k);
        best = best.max(g[0].hypot(g[1]));
    }
    if !any {
        return Err(Error::EmptySet(format!("margin {margin} leaves no interior nodes")));
    }
    Ok(best)
}

/// `{u <= eps}` as a node mask.
pub fn coincidence_mask(u: &ScalarField, eps: f64) -> Vec<bool> {
    u.values().iter().map(|&v| v <= eps).collect()
}

/// `{u > level}` as a node mask.
pub fn positivity_mask(u: &ScalarField, level: f64) -> Vec<bool> {
    u.values().iter().map(|&v| v > level).collect()
}

/// Nodes of `{u > level}` with a lattice neighbour outside the set.
pub fn level_mask(u: &ScalarField, level: f64) -> Vec<bool> {
    let grid = u.grid();
    let inside = positivity_mask(u, level);
    let [nx, ny] = grid.n();
    (0..grid.len())
        .map(|k| {
            if !inside[k] {
                return false;
            }
            let (i, j) = grid.ij(k);
            let mut nb = Vec::with_capacity(4);
            if i > 0 {
                nb.push(k - 1);
            }
            if i + 1 < nx {
                nb.push(k + 1);
            }
            if grid.dim() == 2 {
                if j > 0 {
                    nb.push(k - nx);
                }
                if j + 1 < ny {
                    nb.push(k + nx);
                }
            }
            nb.into_iter().any(|m| !inside[m])
        })
        .collect()
}

/// `d_eps(x) = dist(x, {u <= eps})`.
pub fn layer_distance(u: &ScalarField, eps: f64) -> Result<ScalarField> {
    let mask = coincidence_mask(u, eps);
    if !mask.iter().any(|&b| b) {
        return Err(Error::EmptySet(format!("{{u <= {eps}}} is empty")));
    }
    dist_to_set(u.grid(), &mask)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GrowthSample {
    pub ratio: f64,
    pub node: usize,
    pub qualifying: usize,
}

/// `min u(x) / d_eps(x)` over nodes with `d_eps >= threshold * eps`.
pub fn growth_ratio(u: &ScalarField, eps: f64, threshold: f64, margin: usize) -> Result<GrowthSample> {
    let d = layer_distance(u, eps)?;
    let grid = u.grid();
    let mut best = (f64::INFINITY, usize::MAX);
    let mut count = 0;
    for k in inner_nodes(grid, margin) {
        let dk = d.get(k);
        if dk >= threshold * eps && dk > 0.0 {
            count += 1;
            let r = u.get(k) / dk;
            if r < best.0 {
                best = (r, k);
            }
        }
    }
    if count == 0 {
        return Err(Error::EmptySet("no far-field positivity nodes".into()));
    }
    Ok(GrowthSample { ratio: best.0, node: best.1, qualifying: count })
}

/// Admissible centers: nodes of `{u > eps}` at offset `>= margin` whose
/// closed ball of `radius` stays in the box.
pub fn admissible_centers(u: &ScalarField, eps: f64, radius: f64, margin: usize) -> Vec<usize> {
    let grid = u.grid();
    inner_nodes(grid, margin).filter(|&k| u.get(k) > eps && grid.ball_inside(k, radius)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct NondegSample {
    /// `min sup_{B_rho} u / rho`.
    pub lower_min: f64,
    /// `max sup_{B_rho} u / (rho + u(x0))`.
    pub upper_max: f64,
    pub centers: usize,
    /// Every tested ball had `u` constant.
    pub flat: bool,
}

/// Two-sided cone control of `sup_{B_rho(x0)} u` over `centers` and `radii`.
pub fn strong_nondegeneracy(u: &ScalarField, radii: &[f64], centers: &[Vec<usize>]) -> Result<NondegSample> {
    let mut out = NondegSample { lower_min: f64::INFINITY, upper_max: 0.0, centers: 0, flat: true };
    for (rho, cs) in radii.iter().zip(centers) {
        for &c in cs {
            let (sup, inf) = ball_extrema(u, c, *rho)?;
            out.lower_min = out.lower_min.min(sup / rho);
            out.upper_max = out.upper_max.max(sup / (rho + u.get(c)));
            out.flat &= sup == inf;
            out.centers += 1;
        }
    }
    if out.centers == 0 {
        return Err(Error::EmptySet("no admissible centers".into()));
    }
    Ok(out)
}

/// `min |B_rho ∩ {u > eps}| / |B_rho|` by node counts.
pub fn density(u: &ScalarField, eps: f64, rho: f64, centers: &[usize]) -> Result<f64> {
    if centers.is_empty() {
        return Err(Error::EmptySet("no admissible centers".into()));
    }
    let grid = u.grid();
    let mut best = f64::INFINITY;
    for &c in centers {
        let ball = grid.ball(c, rho);
        let pos = ball.iter().filter(|&&k| u.get(k) > eps).count();
        best = best.min(pos as f64 / ball.len() as f64);
    }
    Ok(best)
}

/// `max sup/inf` of `u` over `B_{d/2}(x)`, `d = d_eps(x) >= eps`, for
/// centers whose ball lies in the box.
pub fn harnack_ratio(u: &ScalarField, eps: f64, centers: &[usize]) -> Result<f64> {
    let d = layer_distance(u, eps)?;
    let grid = u.grid();
    let mut best = f64::NEG_INFINITY;
    for &c in centers {
        let dc = d.get(c);
        if u.get(c) <= eps || dc < eps || !grid.ball_inside(c, 0.5 * dc) {
            continue;
        }
        let (sup, inf) = ball_extrema(u, c, 0.5 * dc)?;
        if !(inf > 0.0) {
            return Err(Error::CheckFailed {
                check: "harnack_ratio",
                detail: format!("ball around node {c} reaches the zero set (inf = {inf})"),
            });
        }
        best = best.max(sup / inf);
    }
    if best == f64::NEG_INFINITY {
        return Err(Error::EmptySet("no admissible Harnack balls".into()));
    }
    Ok(best)
}

/// Box-count content of `mask ∩ B_rho(x0)` for each `delta`: the number
/// of cells of an axis-aligned tiling anchored at `x0 - rho` that contain a
/// mask node, times `delta^(N-1)`.
pub fn hausdorff_content(
    grid: &Grid,
    mask: &[bool],
    x0: [f64; 2],
    rho: f64,
    deltas: &[f64],
) -> Result<Vec<(f64, f64)>> {
    if mask.len() != grid.len() {
        return Err(Error::invalid("mask", "length does not match the grid"));
    }
    let h = grid.h_max();
    let dim = grid.dim();
    let mut out = Vec::with_capacity(deltas.len());
    for &delta in deltas {
        if delta < 2.0 * h * (1.0 - 1e-12) {
            return Err(Error::invalid("delta", format!("box size {delta} is below twice the spacing {h}")));
        }
        let mut boxes = std::collections::BTreeSet::new();
        for k in (0..grid.len()).filter(|&k| mask[k]) {
            let x = grid.coord(k);
            let dx = x[0] - x0[0];
            let dy = x[1] - x0[1];
            if dx * dx + dy * dy > rho * rho * (1.0 + 1e-12) {
                continue;
            }
            let bi = ((dx + rho) / delta).floor() as i64;
            let bj = if dim == 2 { ((dy + rho) / delta).floor() as i64 } else { 0 };
            boxes.insert((bi, bj));
        }
        out.push((delta, boxes.len() as f64 * delta.powi(dim as i32 - 1)));
    }
    Ok(out)
}

/// Largest `delta` in `{0.05, 0.10, ..., 0.50}` such that every tested mask
/// node `x` and radius `r` admit a node `y` whose ball `B_{delta r}(y)` lies in
/// `B_r(x)` and misses the mask. Mask nodes whose `B_r` leaves the box or
/// sits within `margin` nodes of the boundary are not tested.
pub fn porosity(grid: &Grid, mask: &[bool], radii: &[f64], margin: usize) -> Result<f64> {
    if !mask.iter().any(|&b| b) {
        return Err(Error::EmptySet("porosity of an empty set".into()));
    }
    if mask.iter().all(|&b| b) {
        return Ok(0.0);
    }
    let d = dist_to_set(grid, mask)?;
    // Worst clearance ratio over tested (x, r).
    let mut worst = f64::INFINITY;
    for x in (0..grid.len()).filter(|&k| mask[k] && grid.interior_offset(k) >= margin) {
        for &r in radii {
            if !grid.ball_inside(x, r) {
                continue;
            }
            let mut best = 0.0f64;
            for y in grid.ball(x, r) {
                let room = r - grid.node_distance(x, y);
                // The ball must miss every mask node, so stay strictly inside d(y).
                let clear = d.get(y) * (1.0 - 1e-12);
                best = best.max(room.min(clear));
            }
            worst = worst.min(best / r);
        }
    }
    let mut passed = 0.0;
    for step in 1..=10 {
        let delta = 0.05 * step as f64;
        if delta <= worst + 1e-12 {
            passed = delta;
        }
    }
    Ok(passed)
}

/// Hausdorff distance between two node sets.
pub fn hausdorff_distance(grid: &Grid, a: &[bool], b: &[bool]) -> Result<f64> {
    if !a.iter().any(|&v| v) || !b.iter().any(|&v| v) {
        return Err(Error::EmptySet("Hausdorff distance needs non-empty sets".into()));
    }
    let da = dist_to_set(grid, a)?;
    let db = dist_to_set(grid, b)?;
    let mut h = 0.0f64;
    for k in 0..grid.len() {
        if a[k] {
            h = h.max(db.get(k));
        }
        if b[k] {
            h = h.max(da.get(k));
        }
    }
    Ok(h)
}

/// How centers are drawn from the admissible set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum CenterSampling {
    #[default]
    All,
    Random {
        count: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "camelCase")]
pub struct GeometryOptions {
    /// Interior offset, in nodes, defining the inner subdomain.
    pub margin: usize,
    pub growth_threshold: f64,
    pub nondeg_radii: Vec<f64>,
    pub density_radius: f64,
    pub hausdorff_radii: Vec<f64>,
    /// Box sizes as fractions of each radius.
    pub hausdorff_delta_fractions: Vec<f64>,
    /// Center of the Hausdorff balls; defaults to the level node nearest
    /// the middle of the box.
    pub hausdorff_center: Option<[f64; 2]>,
    pub porosity_radii: Vec<f64>,
    /// Multiple of `eps` defining the positivity set `{u > c1 eps}`.
    pub c1: f64,
    pub centers: CenterSampling,
    pub seed: u64,
}

impl Default for GeometryOptions {
    fn default() -> Self {
        GeometryOptions {
            margin: 2,
            growth_threshold: 10.0,
            nondeg_radii: vec![0.05, 0.1],
            density_radius: 0.1,
            hausdorff_radii: vec![0.1, 0.2],
            hausdorff_delta_fractions: vec![0.2],
            hausdorff_center: None,
            porosity_radii: vec![0.05, 0.1],
            c1: 1.5,
            centers: CenterSampling::All,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct HausdorffEntry {
    pub rho: f64,
    pub delta: f64,
    pub content: f64,
    pub normalized: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct GeometryReport {
    pub eps: f64,
    pub lipschitz: f64,
    pub growth_min: f64,
    pub growth_qualifying: usize,
    pub nondeg_min: f64,
    pub nondeg_upper_max: f64,
    pub nondeg_flat: bool,
    pub density_min: f64,
    pub harnack_max: f64,
    pub porosity: f64,
    pub hausdorff: Vec<HausdorffEntry>,
    pub hausdorff_center: [f64; 2],
    pub level_nodes: usize,
    pub positive_fraction: f64,
}

impl GeometryReport {
    /// The scalars compared across `eps` halvings, with names.
    pub fn uniform_scalars(&self) -> Vec<(String, f64)> {
        let mut v = vec![
            ("lipschitz".to_string(), self.lipschitz),
            ("growthMin".to_string(), self.growth_min),
            ("nondegMin".to_string(), self.nondeg_min),
            ("densityMin".to_string(), self.density_min),
            ("harnackMax".to_string(), self.harnack_max),
        ];
        for e in &self.hausdorff {
            v.push((format!("hausdorff(rho={})", e.rho), e.normalized));
        }
        v
    }
}

fn pick(mut nodes: Vec<usize>, sampling: CenterSampling, rng: &mut rand_chacha::ChaCha8Rng) -> Vec<usize> {
    match sampling {
        CenterSampling::All => nodes,
        CenterSampling::Random { count } => {
            nodes.shuffle(rng);
            nodes.truncate(count);
            nodes.sort_unstable();
            nodes
        }
    }
}

/// Full report for one solution at one `eps`.
pub fn analyze(u: &ScalarField, eps: f64, opts: &GeometryOptions) -> Result<GeometryReport> {
    if !(eps > 0.0) {
        return Err(Error::invalid("eps", "need eps > 0"));
    }
    let grid = u.grid();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(opts.seed);

    let lipschitz = lipschitz_norm(u, opts.margin.max(1))?;
    let growth = growth_ratio(u, eps, opts.growth_threshold, opts.margin)?;

    let nd_centers: Vec<Vec<usize>> = opts
        .nondeg_radii
        .iter()
        .map(|&r| pick(admissible_centers(u, eps, r, opts.margin), opts.centers, &mut rng))
        .collect();
    let nondeg = strong_nondegeneracy(u, &opts.nondeg_radii, &nd_centers)?;

    let dens_centers = pick(admissible_centers(u, eps, opts.density_radius, opts.margin), opts.centers, &mut rng);
    let density_min = density(u, eps, opts.density_radius, &dens_centers)?;

    let harn_centers = pick(admissible_centers(u, eps, 0.0, opts.margin), opts.centers, &mut rng);
    let harnack_max = harnack_ratio(u, eps, &harn_centers)?;

    let level = level_mask(u, opts.c1 * eps);
    let level_nodes = level.iter().filter(|&&b| b).count();
    if level_nodes == 0 {
        return Err(Error::EmptySet(format!("no level nodes of {{u > {}}}", opts.c1 * eps)));
    }
    let porosity = porosity(grid, &level, &opts.porosity_radii, opts.margin)?;

    let x0 = match opts.hausdorff_center {
        Some(c) => c,
        None => {
            let mid = [0.5 * (grid.lo()[0] + grid.hi()[0]), 0.5 * (grid.lo()[1] + grid.hi()[1])];
            let target = grid.nearest_node(mid);
            let k = (0..grid.len())
                .filter(|&k| level[k])
                .min_by(|&a, &b| {
                    grid.node_distance(a, target).total_cmp(&grid.node_distance(b, target)).then(a.cmp(&b))
                })
                .expect("level set is non-empty");
            grid.coord(k)
        }
    };
    let mut hausdorff = Vec::new();
    for &rho in &opts.hausdorff_radii {
        let deltas: Vec<f64> = opts.hausdorff_delta_fractions.iter().map(|f| f * rho).collect();
        for (delta, content) in hausdorff_content(grid, &level, x0, rho, &deltas)? {
            let normalized = content / rho.powi(grid.dim() as i32 - 1);
            hausdorff.push(HausdorffEntry { rho, delta, content, normalized });
        }
    }

    let positive = u.values().iter().filter(|&&v| v > eps).count();
    Ok(GeometryReport {
        eps,
        lipschitz,
        growth_min: growth.ratio,
        growth_qualifying: growth.qualifying,
        nondeg_min: nondeg.lower_min,
        nondeg_upper_max: nondeg.upper_max,
        nondeg_flat: nondeg.flat,
        density_min,
        harnack_max,
        porosity,
        hausdorff,
        hausdorff_center: x0,
        level_nodes,
        positive_fraction: positive as f64 / grid.len() as f64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square(n: usize) -> Grid {
        Grid::new_2d([0.0, 0.0], [1.0, 1.0], [n, n]).unwrap()
    }

    #[test]
    fn lipschitz_of_simple_fields() {
        let g = square(21);
        let u = ScalarField::from_fn(g, |x| 2.0 * x[0] + 3.0 * x[1]).unwrap();
        assert!((lipschitz_norm(&u, 1).unwrap() - 13f64.sqrt()).abs() < 1e-12);
        let shifted = u.map(|v| v + 5.0).unwrap();
        assert!((lipschitz_norm(&shifted, 1).unwrap() - lipschitz_norm(&u, 1).unwrap()).abs() < 1e-12);
        assert_eq!(lipschitz_norm(&ScalarField::constant(g, 1.0), 1).unwrap(), 0.0);
        assert!(lipschitz_norm(&u, 11).is_err());
        assert!(lipschitz_norm(&u, 0).is_err());
    }

    #[test]
    fn lipschitz_of_sine_converges() {
        let g = Grid::new_1d(0.0, 1.0, 401).unwrap();
        let u = ScalarField::from_fn(g, |x| (std::f64::consts::PI * x[0]).sin()).unwrap();
        let l = lipschitz_norm(&u, 1).unwrap();
        let h = g.h(0);
        // Central differences of sin peak at the first interior node.
        let expected = (2.0 * std::f64::consts::PI * h).sin() / (2.0 * h);
        assert!((l - expected).abs() < 1e-12);
        assert!((l - std::f64::consts::PI).abs() < 25.0 * h * h);
    }

    #[test]
    fn growth_of_cone_functions() {
        let g = square(41);
        let cone = ScalarField::from_fn(g, |x| (x[0] - 0.5).max(0.0)).unwrap();
        let s = growth_ratio(&cone, 1e-9, 10.0, 1).unwrap();
        assert!((s.ratio - 1.0).abs() < 1e-12);
        let twice = cone.map(|v| 2.0 * v).unwrap();
        assert!((growth_ratio(&twice, 1e-9, 10.0, 1).unwrap().ratio - 2.0).abs() < 1e-12);
        let flat = ScalarField::constant(g, 0.0);
        assert!(growth_ratio(&flat, 0.1, 10.0, 1).is_err());
    }

    #[test]
    fn nondegeneracy_of_a_cone() {
        let g = square(41);
        let x0 = [0.5, 0.5];
        let cone = ScalarField::from_fn(g, |x| (x[0] - x0[0]).hypot(x[1] - x0[1])).unwrap();
        let c = g.nearest_node(x0);
        let s = strong_nondegeneracy(&cone, &[0.2], &[vec![c]]).unwrap();
        assert!((s.lower_min - 1.0).abs() < 1e-12);
        let flat = ScalarField::constant(g, 0.3);
        let s = strong_nondegeneracy(&flat, &[0.2], &[vec![c]]).unwrap();
        assert!(s.flat);
        assert!((s.lower_min - 1.5).abs() < 1e-12);
        assert!(strong_nondegeneracy(&flat, &[0.2], &[vec![]]).is_err());
    }

    #[test]
    fn density_of_a_half_plane() {
        let g = square(101);
        let u = ScalarField::from_fn(g, |x| x[0] - 0.5).unwrap();
        let c = g.nearest_node([0.5, 0.5]);
        let rho = 0.2;
        let d = density(&u, 0.0, rho, &[c]).unwrap();
        assert!((d - 0.5).abs() <= 2.0 * g.h(0) / rho);
        let deep = g.nearest_node([0.8, 0.5]);
        assert_eq!(density(&u, 0.0, 0.1, &[deep]).unwrap(), 1.0);
    }

    #[test]
    fn harnack_of_simple_fields() {
        let g = square(41);
        let c = ScalarField::constant(g, 2.0);
        // A constant field has no coincidence set; put one on the left edge.
        let mut v = c.values().to_vec();
        for j in 0..41 {
            v[g.index(0, j)] = 0.0;
        }
        let u = ScalarField::new(g, v).unwrap();
        let center = g.nearest_node([0.5, 0.5]);
        assert_eq!(harnack_ratio(&u, 0.1, &[center]).unwrap(), 2.0 / 2.0);
        let lin = ScalarField::from_fn(g, |x| x[0]).unwrap();
        let r = harnack_ratio(&lin, 0.1, &[center]).unwrap();
        // d = 0.4 (nearest node with x <= 0.1), ball radius 0.2: x in [0.3, 0.7].
        assert!((r - 0.7 / 0.3).abs() < 1e-12, "{r}");
    }

    #[test]
    fn content_of_a_segment_and_empty_mask() {
        let g = square(201);
        let mask: Vec<bool> = (0..g.len())
            .map(|k| {
                let x = g.coord(k);
                (x[1] - 0.5).abs() < 1e-12
            })
            .collect();
        let c = hausdorff_content(&g, &mask, [0.5, 0.5], 0.5, &[0.1]).unwrap();
        assert!(c[0].1 >= 1.0 - 1e-12 && c[0].1 <= 2.0 + 1e-12, "{c:?}");
        let none = vec![false; g.len()];
        assert_eq!(hausdorff_content(&g, &none, [0.5, 0.5], 0.3, &[0.1]).unwrap()[0].1, 0.0);
        assert!(hausdorff_content(&g, &mask, [0.5, 0.5], 0.3, &[0.001]).is_err());
    }

    #[test]
    fn content_of_a_circle() {
        let g = square(201);
        let r = 0.3;
        let u = ScalarField::from_fn(g, |x| r - (x[0] - 0.5).hypot(x[1] - 0.5)).unwrap();
        let mask = level_mask(&u, 0.0);
        let h = g.h(0);
        let deltas = [2.0 * h, 0.03, r / 4.0];
        for (_, c) in hausdorff_content(&g, &mask, [0.5, 0.5], 0.45, &deltas).unwrap() {
            let ratio = c / (std::f64::consts::TAU * r);
            assert!((0.5..=2.0).contains(&ratio), "{ratio}");
        }
    }

    #[test]
    fn porosity_examples() {
        let g = square(101);
        let line: Vec<bool> = (0..g.len()).map(|k| g.ij(k).1 == 50).collect();
        assert_eq!(porosity(&g, &line, &[0.1, 0.2], 1).unwrap(), 0.5);
        let mut single = vec![false; g.len()];
        single[g.index(50, 50)] = true;
        assert!(porosity(&g, &single, &[4.0 * g.h(0)], 1).unwrap() >= 0.45);
        assert_eq!(porosity(&g, &vec![true; g.len()], &[0.1], 1).unwrap(), 0.0);
        assert!(porosity(&g, &vec![false; g.len()], &[0.1], 1).is_err());
    }

    #[test]
    fn hausdorff_distance_examples() {
        let g = square(51);
        let a: Vec<bool> = (0..g.len()).map(|k| g.ij(k).0 == 10).collect();
        let b: Vec<bool> = (0..g.len()).map(|k| g.ij(k).0 == 30).collect();
        assert_eq!(hausdorff_distance(&g, &a, &a).unwrap(), 0.0);
        assert!((hausdorff_distance(&g, &a, &b).unwrap() - 0.4).abs() < 1e-12);
        assert!(hausdorff_distance(&g, &a, &vec![false; g.len()]).is_err());
    }

    #[test]
    fn level_mask_is_inner_boundary() {
        let g = square(11);
        let u = ScalarField::from_fn(g, |x| x[0] - 0.45).unwrap();
        let m = level_mask(&u, 0.0);
        for (k, &on) in m.iter().enumerate() {
            assert_eq!(on, g.ij(k).0 == 5, "node {k}");
        }
    }
}
