//! Solver acceptance checks: the degeneracy can be cut from homogeneous
//! problems, and ordered right sides give ordered solutions.

use degenfb::solver::{comparison_check, cutting_check, supersolution_init};
use degenfb::{DegeneracyParams, Grid, OperatorKind, ProblemSpec, ReactionParams, ScalarField, SolveConfig};

fn homogeneous(grid: Grid, op: OperatorKind, g: impl Fn([f64; 2]) -> f64) -> degenfb::Result<ProblemSpec> {
    let zero = ScalarField::constant(grid, 0.0);
    let reaction = ReactionParams::new(1.0, zero.clone(), zero)?;
    let deg = DegeneracyParams::new(1.0, 2.0, ScalarField::constant(grid, 1.0))?;
    ProblemSpec::new(Some(deg), op, reaction, ScalarField::from_fn(grid, g)?)
}

fn main() -> degenfb::Result<()> {
    let grid = Grid::new_2d([0.0, 0.0], [1.0, 1.0], [33, 33])?;
    let cfg = SolveConfig { cfl: 0.9, tol: 1e-9, ..SolveConfig::default() };
    let smooth = |x: [f64; 2]| 1.0 + x[0].exp() * x[1].sin();
    for op in [OperatorKind::Laplacian, OperatorKind::PucciMinus { lambda: 1.0, big_lambda: 2.0 }] {
        let (rep, deg, _) = cutting_check(&homogeneous(grid, op, smooth)?, &cfg)?;
        println!(
            "{op:?}: |u_H - u| = {:.2e} (threshold {:.0e}), passed {}, sup u = {:.6}",
            rep.worst,
            rep.threshold,
            rep.passed,
            deg.max()
        );
    }

    let base = homogeneous(grid, OperatorKind::Laplacian, smooth)?;
    let c = SolveConfig { project_nonneg: false, ..cfg };
    let (u0, _) = supersolution_init(&base, &c)?;
    let forced = base.with_reaction(ReactionParams::new(
        1.0,
        ScalarField::constant(grid, 0.0),
        ScalarField::constant(grid, 1.0),
    )?)?;
    let (u1, _) = supersolution_init(&forced, &c)?;
    let rep = comparison_check(&u1, &u0, 1e-8)?;
    println!("\nH F(D2 u) = 1 lies below H F(D2 u) = 0: {} (worst excess {:.2e})", rep.passed, rep.worst);
    Ok(())
}
