mod common;

use common::{raw_bump, simpson};
use degenfb::reaction::{bump, bump_constant, bump_derivative, Profile};
use degenfb::{Grid, ReactionParams, ScalarField};
use proptest::prelude::*;

fn reaction(eps: f64, q: f64, f: f64, profile: Profile) -> ReactionParams {
    let g = Grid::new_1d(0.0, 1.0, 3).unwrap();
    ReactionParams::with_profile(eps, ScalarField::constant(g, q), ScalarField::constant(g, f), profile).unwrap()
}

#[test]
fn bump_constant_matches_simpson() {
    let mass = simpson(raw_bump, 0.0, 1.0, 20_000);
    assert!((bump_constant() * mass - 1.0).abs() < 1e-10);
}

#[test]
fn scaled_mass_is_q() {
    for eps in [0.1, 0.01] {
        let r = reaction(eps, 2.5, 0.0, Profile::Smooth);
        let mass = simpson(|t| r.zeta_eps(1, t), 0.0, eps, 20_000);
        assert!((mass - 2.5).abs() < 1e-8, "{mass}");
    }
}

proptest! {
    #[test]
    fn support_and_sign(eps in 0.001..1.0f64, q in 0.0..5.0f64, f in 0.0..2.0f64, t in -1.0..3.0f64) {
        let r = reaction(eps, q, f, Profile::Smooth);
        let z = r.zeta_eps(0, t);
        prop_assert!(z >= f);
        if t >= eps || t <= 0.0 {
            prop_assert_eq!(z, f);
        }
        prop_assert!(z <= q * r.profile().sup() / eps + f + 1e-12);
    }

    #[test]
    fn derivative_matches_differences(t in 0.02..0.98f64) {
        let h = 1e-6;
        let fd = (bump(t + h) - bump(t - h)) / (2.0 * h);
        prop_assert!((bump_derivative(t) - fd).abs() <= 1e-6 * (1.0 + fd.abs()));
    }

    #[test]
    fn cumulative_is_monotone_and_symmetric(s in 0.0..1.0f64, d in 0.0..0.5f64) {
        for p in [Profile::Smooth, Profile::Box] {
            prop_assert!(p.cumulative(s + d) >= p.cumulative(s) - 1e-14);
            prop_assert!((p.cumulative(s) + p.cumulative(1.0 - s) - 1.0).abs() < 1e-10);
        }
    }
}

#[test]
fn cumulative_matches_simpson() {
    for s in [0.1, 0.3, 0.5, 0.77] {
        let z = bump_constant() * simpson(raw_bump, 0.0, s, 20_000);
        assert!((Profile::Smooth.cumulative(s) - z).abs() < 1e-10);
    }
}

#[test]
fn certificate_levels() {
    let r = reaction(0.1, 1.0, 0.0, Profile::Smooth);
    let c = r.certify(0.25, 0.75).unwrap();
    // The bump is smallest at the ends of the window.
    assert!((c.j_star - bump(0.25)).abs() < 1e-12);
    assert_eq!(c.b0, 0.0);
    let flat = reaction(0.1, 0.0, 0.0, Profile::Smooth);
    assert!(flat.certify(0.25, 0.75).is_err());
    let boxed = reaction(0.1, 1.0, 0.0, Profile::Box);
    assert_eq!(boxed.certify(0.1, 0.9).unwrap().j_star, 1.0);
    assert!(r.certify(0.6, 0.4).is_err());
}

#[test]
fn bad_reaction_parameters() {
    let g = Grid::new_1d(0.0, 1.0, 3).unwrap();
    let one = ScalarField::constant(g, 1.0);
    assert!(ReactionParams::new(0.0, one.clone(), one.clone()).is_err());
    assert!(ReactionParams::new(0.1, ScalarField::constant(g, -1.0), one.clone()).is_err());
    assert!(ReactionParams::new(0.1, one.clone(), ScalarField::constant(g, -0.5)).is_err());
}
