//! Geometry of the transition layer for one solution: Lipschitz bound,
//! growth, non-degeneracy, density, Harnack ratio, Hausdorff content and
//! porosity.

use degenfb::geometry::{analyze, layer_distance, GeometryOptions};
use degenfb::solver::solve_peps;
use degenfb::{DegeneracyParams, Grid, OperatorKind, ProblemSpec, ReactionParams, ScalarField, SolveConfig};

fn main() -> degenfb::Result<()> {
    let side = 0.75;
    let eps = 0.1;
    let grid = Grid::new_2d([0.0, 0.0], [side, side], [65, 65])?;
    let one = ScalarField::constant(grid, 1.0);
    let deg = DegeneracyParams::new(1.0, 2.0, one.clone())?;
    let reaction = ReactionParams::new(eps, one, ScalarField::constant(grid, 0.0))?;
    let g = ScalarField::from_fn(grid, |x| 0.5 * (1.0 - x[0] / side))?;
    let spec = ProblemSpec::new(Some(deg), OperatorKind::Laplacian, reaction, g)?;
    let cfg = SolveConfig { cfl: 0.9, tol: 1e-6, init_tol: Some(1e-3), ..SolveConfig::default() };
    let u = solve_peps(&spec, &cfg)?.u;

    let d = layer_distance(&u, eps)?;
    println!("largest distance to the layer {:.4}", d.max());

    let opts =
        GeometryOptions { growth_threshold: 2.0, hausdorff_delta_fractions: vec![0.25], ..GeometryOptions::default() };
    let rep = analyze(&u, eps, &opts)?;
    for (name, v) in rep.uniform_scalars() {
        println!("{name:>18} = {v:.4}");
    }
    println!("{:>18} = {}", "growth centers", rep.growth_qualifying);
    println!("{:>18} = {}", "layer nodes", rep.level_nodes);
    println!("{:>18} = {:.3}", "positive fraction", rep.positive_fraction);
    println!("{:>18} = {:.3}", "porosity", rep.porosity);
    Ok(())
}
