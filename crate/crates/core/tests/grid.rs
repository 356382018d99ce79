use degenfb::grid::{dist_brute_force, dist_two_pass, gradient_at, hessian_at, read_csv, write_csv};
use degenfb::{Grid, ScalarField};
use proptest::prelude::*;

fn grid2() -> impl Strategy<Value = Grid> {
    (3usize..24, 3usize..24, 0.2..3.0f64, 0.2..3.0f64)
        .prop_map(|(nx, ny, wx, wy)| Grid::new_2d([0.0, -1.0], [wx, wy - 1.0], [nx, ny]).unwrap())
}

proptest! {
    #[test]
    fn index_roundtrip(g in grid2(), k in 0usize..10_000) {
        let k = k % g.len();
        let (i, j) = g.ij(k);
        prop_assert_eq!(g.index(i, j), k);
        prop_assert_eq!(g.is_boundary(k), i == 0 || j == 0 || i + 1 == g.n()[0] || j + 1 == g.n()[1]);
    }

    #[test]
    fn corners_are_exact(g in grid2()) {
        let last = g.len() - 1;
        prop_assert_eq!(g.coord(0), g.lo());
        prop_assert_eq!(g.coord(last), g.hi());
    }

    #[test]
    fn stencils_are_exact_on_quadratics(g in grid2(), a in -3.0..3.0f64, b in -3.0..3.0f64, c in -3.0..3.0f64, d in -3.0..3.0f64) {
        let u = ScalarField::from_fn(g, |x| a * x[0] * x[0] + 2.0 * b * x[0] * x[1] + c * x[1] * x[1] + d * x[0]).unwrap();
        let k = g.index(1, 1);
        let x = g.coord(k);
        let grad = gradient_at(&u, k).unwrap();
        prop_assert!((grad[0] - (2.0 * a * x[0] + 2.0 * b * x[1] + d)).abs() < 1e-8);
        prop_assert!((grad[1] - (2.0 * b * x[0] + 2.0 * c * x[1])).abs() < 1e-8);
        let (hxx, hxy, hyy) = hessian_at(&u, k).unwrap().entries();
        prop_assert!((hxx - 2.0 * a).abs() < 1e-6);
        prop_assert!((hxy - 2.0 * b).abs() < 1e-6);
        prop_assert!((hyy - 2.0 * c).abs() < 1e-6);
    }

    #[test]
    fn two_pass_transform_is_exact(g in grid2(), seed in any::<u64>(), density in 0.01..0.5f64) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut mask: Vec<bool> = (0..g.len()).map(|_| rng.gen_bool(density)).collect();
        mask[rng.gen_range(0..g.len())] = true;
        let a = dist_brute_force(&g, &mask).unwrap();
        let b = dist_two_pass(&g, &mask).unwrap();
        prop_assert!(a.sup_distance(&b).unwrap() < 1e-12);
        for (k, &m) in mask.iter().enumerate() {
            prop_assert_eq!(a.get(k) == 0.0, m);
        }
    }

    #[test]
    fn balls_are_exact_and_nested(g in grid2(), k in 0usize..10_000, r in 0.0..1.0f64) {
        let c = k % g.len();
        let small = g.ball(c, r);
        let big = g.ball(c, 2.0 * r);
        prop_assert!(small.contains(&c));
        for &y in &small {
            prop_assert!(g.node_distance(c, y) <= r * (1.0 + 1e-12));
            prop_assert!(big.contains(&y));
        }
        let brute = (0..g.len()).filter(|&y| g.node_distance(c, y) <= r * (1.0 + 1e-12)).count();
        prop_assert_eq!(brute, small.len());
    }

    #[test]
    fn csv_roundtrip(g in grid2(), seed in any::<u64>()) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let u = ScalarField::new(g, (0..g.len()).map(|_| rng.gen_range(-1e6..1e6)).collect()).unwrap();
        let mut buf = Vec::new();
        write_csv(&u, &mut buf).unwrap();
        let back = read_csv(buf.as_slice()).unwrap();
        prop_assert_eq!(back, u);
    }
}

#[test]
fn bad_grids_are_rejected() {
    assert!(Grid::new_2d([0.0, 0.0], [1.0, 1.0], [2, 5]).is_err());
    assert!(Grid::new_2d([0.0, 0.0], [0.0, 1.0], [5, 5]).is_err());
    assert!(Grid::new_1d(0.0, f64::INFINITY, 5).is_err());
    assert!(ScalarField::new(Grid::new_1d(0.0, 1.0, 3).unwrap(), vec![0.0, f64::NAN, 1.0]).is_err());
}

#[test]
fn grid_json_shape() {
    let g = Grid::new_2d([0.0, 0.0], [1.0, 2.0], [5, 9]).unwrap();
    let s = serde_json::to_string(&g).unwrap();
    assert_eq!(s, r#"{"lo":[0.0,0.0],"hi":[1.0,2.0],"n":[5,9]}"#);
    let back: Grid = serde_json::from_str(&s).unwrap();
    assert_eq!(back, g);
    assert!(serde_json::from_str::<Grid>(r#"{"lo":[0],"hi":[1,2],"n":[5]}"#).is_err());
}
