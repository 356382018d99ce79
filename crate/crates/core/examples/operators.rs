//! Pucci extremal operators, the Hessian-type family `F_m`, its recession
//! limit and the asymptotic concavity check.

use degenfb::operators::{acp_check, acp_constant, hessian_fm, pucci_minus, pucci_plus, recession};
use degenfb::{DegeneracyParams, Grid, OperatorKind, ScalarField, SymMatrix};

fn main() -> degenfb::Result<()> {
    let x = SymMatrix::new_2d(2.0, 1.0, -3.0);
    let ev = x.eigenvalues();
    println!("X = [[2, 1], [1, -3]], eigenvalues {:?}", ev.as_slice());
    for (l, big) in [(1.0, 1.0), (1.0, 2.0), (0.5, 4.0)] {
        println!(
            "  lambda={l} Lambda={big}: M+ = {:+.6}, M- = {:+.6}",
            pucci_plus(l, big, &x),
            pucci_minus(l, big, &x)
        );
    }

    for m in [1, 3, 5] {
        let f = OperatorKind::HessianFm { m, lambda: 1.0, big_lambda: 1.0 };
        println!("\nF_{m}(X) = {:+.6}, tr X = {:+.6}", hessian_fm(m, &x), x.trace());
        for tau in [1e-1, 1e-2, 1e-4] {
            println!("  tau={tau:e}: tau F(X/tau) = {:+.8}", recession(&f, &x, tau)?);
        }
        let rep = acp_check(&f, 2, 20_000, 7)?;
        println!(
            "  ACP: C* = {:.6} (exact {:.6}), worst F - tr = {:.6}, margin {:.2e}, passed {}",
            rep.constant,
            acp_constant(m, 2),
            rep.worst_trace_gap,
            rep.worst_margin,
            rep.passed
        );
    }

    let grid = Grid::new_2d([0.0, 0.0], [1.0, 1.0], [3, 3])?;
    let deg = DegeneracyParams::new(1.0, 2.0, ScalarField::constant(grid, 0.5))?;
    println!("\nH(x, xi) = |xi| + 0.5 |xi|^2");
    for r in [0.0, 0.1, 1.0, 10.0] {
        println!("  |xi| = {r:>4}: H = {:.4}", deg.degeneracy(4, [r, 0.0]));
    }
    Ok(())
}
