//! Exact Euclidean distance from every node to a marked node set.

use super::{Grid, ScalarField};
use crate::error::{Error, Result};

const BRUTE_FORCE_MAX_NODES_PER_AXIS: usize = 256;

/// Exact distance to the nearest `true` node of `mask`.
///
/// Small grids use the all-pairs scan; larger ones use the separable
/// lower-envelope transform, which is exact as well.
pub fn dist_to_set(grid: &Grid, mask: &[bool]) -> Result<ScalarField> {
    if grid.n()[0] <= BRUTE_FORCE_MAX_NODES_PER_AXIS && grid.n()[1] <= BRUTE_FORCE_MAX_NODES_PER_AXIS {
        dist_brute_force(grid, mask)
    } else {
        dist_two_pass(grid, mask)
    }
}

fn check_mask(grid: &Grid, mask: &[bool]) -> Result<Vec<usize>> {
    if mask.len() != grid.len() {
        return Err(Error::invalid("mask", format!("expected {} entries, got {}", grid.len(), mask.len())));
    }
    let marked: Vec<usize> = (0..mask.len()).filter(|&k| mask[k]).collect();
    if marked.is_empty() {
        return Err(Error::EmptySet("distance to an empty set is undefined".into()));
    }
    Ok(marked)
}

pub fn dist_brute_force(grid: &Grid, mask: &[bool]) -> Result<ScalarField> {
    let marked = check_mask(grid, mask)?;
    let (h0, h1) = (grid.h(0), grid.h(1));
    let coords: Vec<(f64, f64)> = marked
        .iter()
        .map(|&k| {
            let (i, j) = grid.ij(k);
            (i as f64, j as f64)
        })
        .collect();
    let values = (0..grid.len())
        .map(|k| {
            if mask[k] {
                return 0.0;
            }
            let (i, j) = grid.ij(k);
            let (fi, fj) = (i as f64, j as f64);
            let best = coords.iter().fold(f64::INFINITY, |best, &(mi, mj)| {
                let dx = (fi - mi) * h0;
                let dy = (fj - mj) * h1;
                best.min(dx * dx + dy * dy)
            });
            best.sqrt()
        })
        .collect();
    ScalarField::new(*grid, values)
}

/// Separable exact transform: 1D squared distances along the first axis,
/// then the lower envelope of parabolas along the second.
pub fn dist_two_pass(grid: &Grid, mask: &[bool]) -> Result<ScalarField> {
    check_mask(grid, mask)?;
    let [nx, ny] = grid.n();
    let (h0, h1) = (grid.h(0), grid.h(1));

    // Pass 1: nearest marked node within each row.
    let mut row_sq = vec![f64::INFINITY; grid.len()];
    for j in 0..ny {
        let mut last: Option<usize> = None;
        for i in 0..nx {
            if mask[grid.index(i, j)] {
                last = Some(i);
            }
            if let Some(m) = last {
                let d = (i - m) as f64 * h0;
                row_sq[grid.index(i, j)] = d * d;
            }
        }
        let mut next: Option<usize> = None;
        for i in (0..nx).rev() {
            if mask[grid.index(i, j)] {
                next = Some(i);
            }
            if let Some(m) = next {
                let d = (m - i) as f64 * h0;
                let k = grid.index(i, j);
                row_sq[k] = row_sq[k].min(d * d);
            }
        }
    }
    if ny == 1 {
        return ScalarField::new(*grid, row_sq.into_iter().map(f64::sqrt).collect());
    }

    // Pass 2: lower envelope along columns.
    let mut out = vec![0.0; grid.len()];
    let mut f = vec![0.0; ny];
    let mut sites: Vec<usize> = Vec::with_capacity(ny);
    let mut bounds: Vec<f64> = Vec::with_capacity(ny + 1);
    for i in 0..nx {
        for (j, fj) in f.iter_mut().enumerate() {
            *fj = row_sq[grid.index(i, j)];
        }
        sites.clear();
        bounds.clear();
        for q in 0..ny {
            if !f[q].is_finite() {
                continue;
            }
            loop {
                match sites.last() {
                    None => {
                        sites.push(q);
                        bounds.push(f64::NEG_INFINITY);
                        break;
                    }
                    Some(&r) => {
                        let s = intersection(&f, h1, r, q);
                        if s <= *bounds.last().unwrap() {
                            sites.pop();
                            bounds.pop();
                        } else {
                            sites.push(q);
                            bounds.push(s);
                            break;
                        }
                    }
                }
            }
        }
        let mut k = 0;
        for j in 0..ny {
            let y = j as f64 * h1;
            while k + 1 < sites.len() && bounds[k + 1] < y {
                k += 1;
            }
            let site = sites[k];
            let dy = (j as f64 - site as f64) * h1;
            out[grid.index(i, j)] = (dy * dy + f[site]).sqrt();
        }
    }
    ScalarField::new(*grid, out)
}

/// Abscissa (in physical units along the column) where the parabolas rooted
/// at `r < q` intersect.
fn intersection(f: &[f64], h: f64, r: usize, q: usize) -> f64 {
    let (yr, yq) = (r as f64 * h, q as f64 * h);
    ((f[q] + yq * yq) - (f[r] + yr * yr)) / (2.0 * (yq - yr))
}
