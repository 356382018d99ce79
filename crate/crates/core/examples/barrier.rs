//! Radial barrier: constant selection, pointwise supersolution and growth
//! checks, and the rescaled barrier.

use degenfb::barrier::{growth_check, select_params, verify_supersolution, BarrierInput, SupersolutionData};

fn main() -> degenfb::Result<()> {
    let input = BarrierInput {
        dim: 2,
        lambda: 1.0,
        big_lambda: 2.0,
        l1: 1.0,
        l2: 1.0,
        p: 1.0,
        q: 2.0,
        a_sup: 1.0,
        t0: 0.25,
        t_big: 0.75,
        j_star: 1.0,
    };
    let bp = select_params(&input)?;
    let rep = bp.report();
    println!("A0 = {:.6e}, alpha = {:.4}, L = L0 = {:.6}", rep.params.a0, rep.params.alpha, rep.l0);
    println!("phi = {:.6}, psi = {:.6}, kappa0 = {:.6e}", rep.phi, rep.psi, rep.kappa0);
    println!("C1 jumps at the interfaces: {:?}", bp.interface_jumps());

    let data = SupersolutionData::from(&input);
    for l in [bp.l, 2.0 * bp.l] {
        let b = bp.with_l(l)?;
        let s = verify_supersolution(&b, &data, 1000)?;
        let g = growth_check(&b)?;
        println!(
            "\nL = {l:.4}: supersolution {} (margins core {:.1e}, annulus {:.1e}, outer {:.1e}); growth {} (worst {:.4})",
            s.passed, s.core_margin, s.annulus_margin, s.outer_margin, g.passed, g.worst_margin
        );
        for r in [0.0, 0.5 * l, l, b.r_outer(), 4.0 * l, 16.0 * l] {
            println!("  Theta({r:.4}) = {:.6}", b.theta_radial(r));
        }
    }

    let scaled = bp.scaled(0.01, 0.1)?;
    println!("\nscaled barrier, eps = 0.01, eta = 0.1, inner L = {:.4}:", scaled.unscaled().l);
    for x in [[0.0, 0.0], [0.025, 0.0], [0.05, 0.02], [0.2, 0.1]] {
        println!("  at {x:?}: {:.6}", scaled.eval(x));
    }
    Ok(())
}
