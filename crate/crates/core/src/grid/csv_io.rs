//! CSV serialization of fields: header `x[,y],value`, one row per node in
//! node order, 17 significant digits.

use std::io::{Read, Write};

use super::{Grid, ScalarField};
use crate::error::{Error, Result};

fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn write_csv<W: Write>(field: &ScalarField, writer: W) -> Result<()> {
    let grid = field.grid();
    let mut w = csv::Writer::from_writer(writer);
    if grid.dim() == 1 {
        w.write_record(["x", "value"])?;
    } else {
        w.write_record(["x", "y", "value"])?;
    }
    for k in 0..grid.len() {
        let x = grid.coord(k);
        if grid.dim() == 1 {
            w.write_record([fmt17(x[0]), fmt17(field.get(k))])?;
        } else {
            w.write_record([fmt17(x[0]), fmt17(x[1]), fmt17(field.get(k))])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Reads a field written by [`write_csv`]; the grid is recovered from the
/// coordinate columns.
pub fn read_csv<R: Read>(reader: R) -> Result<ScalarField> {
    let mut r = csv::Reader::from_reader(reader);
    let headers = r.headers()?.clone();
    let dim = match headers.iter().collect::<Vec<_>>().as_slice() {
        ["x", "value"] => 1,
        ["x", "y", "value"] => 2,
        other => return Err(Error::invalid("csv", format!("unexpected header {other:?}, want x[,y],value"))),
    };
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut values = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        let parse = |i: usize| -> Result<f64> {
            rec.get(i)
                .ok_or_else(|| Error::invalid("csv", "short record"))?
                .trim()
                .parse::<f64>()
                .map_err(|e| Error::invalid("csv", e.to_string()))
        };
        xs.push(parse(0)?);
        if dim == 2 {
            ys.push(parse(1)?);
        }
        values.push(parse(dim)?);
    }
    if values.is_empty() {
        return Err(Error::invalid("csv", "no data rows"));
    }
    let grid = if dim == 1 {
        Grid::new_1d(xs[0], xs[xs.len() - 1], xs.len())?
    } else {
        let nx = ys.iter().take_while(|&&y| y == ys[0]).count();
        if nx == 0 || values.len() % nx != 0 {
            return Err(Error::invalid("csv", "rows do not form a rectangular lattice"));
        }
        let ny = values.len() / nx;
        Grid::new_2d([xs[0], ys[0]], [xs[nx - 1], ys[values.len() - 1]], [nx, ny])?
    };
    let scale = grid.h_max();
    for k in 0..grid.len() {
        let c = grid.coord(k);
        let off = (c[0] - xs[k]).abs().max(if dim == 2 { (c[1] - ys[k]).abs() } else { 0.0 });
        if off > 1e-9 * scale {
            return Err(Error::invalid("csv", format!("row {k} coordinates do not match a uniform lattice")));
        }
    }
    ScalarField::new(grid, values)
}
