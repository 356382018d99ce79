//! The normalized bump, the singular reaction `zeta_eps`, and the
//! certificate constants it carries.

use degenfb::reaction::{bump, bump_constant, Profile};
use degenfb::{Grid, ReactionParams, ScalarField};

fn main() -> degenfb::Result<()> {
    println!("bump normalization 1 / int exp(-1/(t(1-t))) = {:.12}", bump_constant());
    for t in [0.1, 0.25, 0.5, 0.9] {
        println!("  zeta({t}) = {:.6}", bump(t));
    }

    let grid = Grid::new_2d([0.0, 0.0], [1.0, 1.0], [5, 5])?;
    let q = ScalarField::from_fn(grid, |x| 1.0 + x[0])?;
    let f = ScalarField::constant(grid, 0.2);
    for profile in [Profile::Smooth, Profile::Box] {
        let r = ReactionParams::with_profile(0.1, q.clone(), f.clone(), profile)?;
        println!("\n{profile:?} profile, eps = 0.1, node 12 (Q = {}):", r.q().get(12));
        for u in [0.0, 0.02, 0.05, 0.08, 0.1, 0.5] {
            println!("  zeta_eps(u = {u:.2}) = {:8.4}   slope {:9.3}", r.zeta_eps(12, u), r.zeta_eps_slope(12, u));
        }
        let c = r.certify(0.25, 0.75)?;
        println!("  A = {:.4}, B0 = {:.4}, B = {:.4}, I = {:.4}, J* = {:.6}", c.a, c.b0, c.b, c.i_zeta, c.j_star);
    }
    Ok(())
}
