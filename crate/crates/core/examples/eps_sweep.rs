//! Model problem sweep: Laplacian with `H = |xi| + |xi|^2`, unit reaction,
//! ramp boundary data, and `eps` halved twice.

use std::time::Instant;

use degenfb::geometry::GeometryOptions;
use degenfb::solver::{eps_sweep, SweepOptions};
use degenfb::{DegeneracyParams, Grid, OperatorKind, ProblemSpec, ReactionParams, ScalarField, SolveConfig};

fn main() -> degenfb::Result<()> {
    env_logger::init();
    let n = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(129);
    let tol = std::env::args().nth(2).and_then(|s| s.parse().ok()).unwrap_or(1e-6);
    let side = 0.75;
    let grid = Grid::new_2d([0.0, 0.0], [side, side], [n, n])?;
    let g = ScalarField::from_fn(grid, |x| 0.5 * (1.0 - x[0] / side))?;
    let one = ScalarField::constant(grid, 1.0);
    let deg = DegeneracyParams::new(1.0, 2.0, one.clone())?;
    let reaction = ReactionParams::new(0.1, one, ScalarField::constant(grid, 0.0))?;
    let spec = ProblemSpec::new(Some(deg), OperatorKind::Laplacian, reaction, g)?;
    let cfg = SolveConfig { cfl: 0.9, tol, init_tol: Some(1e-3), ..SolveConfig::default() };
    let opts = SweepOptions {
        geometry: GeometryOptions { growth_threshold: 2.0, ..GeometryOptions::default() },
        ..SweepOptions::default()
    };
    let start = Instant::now();
    let sweep = eps_sweep(&spec, &cfg, &[0.1, 0.05, 0.025], &opts)?;
    for e in &sweep.entries {
        println!(
            "eps={} iterations={} init={} residual={:.3e} violations={}",
            e.eps, e.result.iterations, e.result.init_iterations, e.result.final_residual, e.result.monotone_violations
        );
        match &e.geometry {
            Ok(r) => {
                for (name, v) in r.uniform_scalars() {
                    println!("  {name} = {v:.4}");
                }
                println!("  porosity = {}", r.porosity);
            }
            Err(msg) => println!("  geometry failed: {msg}"),
        }
    }
    println!("successive sup differences: {:?}", sweep.successive_sup);
    println!("successive Hausdorff distances: {:?}", sweep.successive_hausdorff);
    println!("elapsed {:.1} s", start.elapsed().as_secs_f64());
    Ok(())
}
