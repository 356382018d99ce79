//! One-dimensional slope law, the first-integral profile, and the solver
//! checked against both on a two-point problem.

use degenfb::oned::{integrate_profile, slope_from_law, SlopeLaw, TwoPoint};
use degenfb::{Grid, ReactionParams, ScalarField, SolveConfig};

fn main() -> degenfb::Result<()> {
    for (p, q, kappa) in [(0.0, 0.0, 0.0), (1.0, 2.0, 0.0), (1.0, 2.0, 1.0), (0.5, 3.0, 4.0)] {
        let s = slope_from_law(&SlopeLaw::new(p, q, kappa, 1.0)?)?;
        println!("p={p} q={q} kappa={kappa}: slope {s:.6}");
    }

    let eps = 0.01;
    let line = Grid::new_1d(0.0, 1.0, 3)?;
    let react = ReactionParams::new(eps, ScalarField::constant(line, 1.0), ScalarField::constant(line, 0.0))?;
    let profile = integrate_profile(1.0, 2.0, 1.0, &react, 8)?;
    println!("\nprofile (p=1, q=2, kappa=1), identity residual {:.1e}", profile.identity_residual);
    for s in &profile.samples {
        println!("  u/eps={:.3}  |u'|={:.6}  depth={:.3e}", s.u / eps, s.slope, s.x);
    }

    let cfg = SolveConfig { cfl: 0.9, tol: 1e-8, ..SolveConfig::default() };
    let coarse = TwoPoint::default();
    for tp in [coarse, coarse.refined()] {
        let cv = tp.cross_validate(&cfg)?;
        println!(
            "\nh={:.2e}: solver slope {:.5}, law {:.5}, discrepancy {:.2}% ({} iterations)",
            cv.h,
            cv.solver_slope,
            cv.law_slope,
            100.0 * cv.discrepancy,
            cv.iterations
        );
    }
    Ok(())
}
