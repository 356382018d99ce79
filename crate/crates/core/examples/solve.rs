//! One singular solve of the model problem on a 65x65 grid.

use std::time::Instant;

use degenfb::solver::residual;
use degenfb::{DegeneracyParams, Grid, OperatorKind, ProblemSpec, ReactionParams, ScalarField, SolveConfig};

fn main() -> degenfb::Result<()> {
    let side = 0.75;
    let grid = Grid::new_2d([0.0, 0.0], [side, side], [65, 65])?;
    let one = ScalarField::constant(grid, 1.0);
    let deg = DegeneracyParams::new(1.0, 2.0, one.clone())?;
    let reaction = ReactionParams::new(0.1, one, ScalarField::constant(grid, 0.0))?;
    let g = ScalarField::from_fn(grid, |x| 0.5 * (1.0 - x[0] / side))?;
    let spec = ProblemSpec::new(Some(deg), OperatorKind::Laplacian, reaction, g)?;

    let cfg = SolveConfig { cfl: 0.9, tol: 1e-6, init_tol: Some(1e-3), ..SolveConfig::default() };
    let start = Instant::now();
    let res = degenfb::solver::solve_peps(&spec, &cfg)?;
    println!(
        "{} + {} iterations in {:.1} s, residual {:.2e} (recomputed {:.2e})",
        res.init_iterations,
        res.iterations,
        start.elapsed().as_secs_f64(),
        res.final_residual,
        residual(&spec, &res.u, true)?
    );
    println!(
        "sup u = {:.6} <= sup g = {:.6}, monotone violations {}",
        res.u.max(),
        spec.g().boundary_max(),
        res.monotone_violations
    );

    let mid = grid.n()[1] / 2;
    println!("\nmidline profile:");
    for i in (0..grid.n()[0]).step_by(8) {
        let k = grid.index(i, mid);
        println!("  x = {:.4}  u = {:.6}", grid.coord(k)[0], res.u.get(k));
    }
    let interior: Vec<f64> = (0..grid.len()).filter(|&k| grid.is_interior(k)).map(|k| res.u.get(k)).collect();
    let dead = interior.iter().filter(|&&v| v == 0.0).count();
    let layer = interior.iter().filter(|&&v| v > 0.0 && v < 0.1).count();
    println!("\ninterior nodes: {dead} with u = 0, {layer} with 0 < u < eps");
    Ok(())
}
