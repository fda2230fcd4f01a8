mod common;

use bhv_core::newick::write_newick;
use bhv_core::{
    cos_angle, cos_angle_limit, distance, distance_with_pendants, geodesic, parse_newick,
    Direction, LabelDict, Tree,
};
use common::*;
use proptest::prelude::*;
use rand::Rng;

proptest! {
    #![proptest_config(cases(200))]

    #[test]
    fn metric_axioms(seed in any::<u64>(), n in 4usize..8) {
        let mut r = rng(seed);
        let (x, y, z) = (random_tree(n, 0.8, &mut r), random_tree(n, 0.8, &mut r), random_tree(n, 0.8, &mut r));
        let dxy = distance(&x, &y).unwrap();
        prop_assert_eq!(dxy, distance(&y, &x).unwrap());
        prop_assert_eq!(distance(&x, &x).unwrap(), 0.0);
        let dxz = distance(&x, &z).unwrap();
        let dzy = distance(&z, &y).unwrap();
        prop_assert!(dxy <= dxz + dzy + 1e-12);
    }

    #[test]
    fn points_along_the_geodesic_split_the_distance(seed in any::<u64>(), n in 4usize..9, t in 0.0f64..1.0) {
        let mut r = rng(seed);
        let (x, y) = (random_tree(n, 0.9, &mut r), random_tree(n, 0.9, &mut r));
        let path = geodesic(&x, &y).unwrap();
        let d = path.length();
        let p = path.point_along(t).unwrap();
        prop_assert!((distance(&x, &p).unwrap() - t * d).abs() < 1e-9 * (1.0 + d));
        prop_assert!((distance(&p, &y).unwrap() - (1.0 - t) * d).abs() < 1e-9 * (1.0 + d));
    }

    #[test]
    fn support_sequences_are_valid(seed in any::<u64>(), n in 4usize..10) {
        let mut r = rng(seed);
        let (x, y) = (random_tree(n, 1.0, &mut r), random_tree(n, 1.0, &mut r));
        let path = geodesic(&x, &y).unwrap();
        prop_assert!(path.has_ordered_ratios(1e-9));
        prop_assert!(path.has_compatible_orthants());
    }

    #[test]
    fn four_leaf_distances_match_cone_oracle(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (x, y) = (random_tree(4, 0.8, &mut r), random_tree(4, 0.8, &mut r));
        let d = distance(&x, &y).unwrap();
        let oracle = t4_cone_distance(&x, &y);
        prop_assert!((d - oracle).abs() <= 1e-9 * (1.0 + oracle), "{} vs {}", d, oracle);
    }

    #[test]
    fn midpoint_convexity(seed in any::<u64>(), n in 4usize..7) {
        let mut r = rng(seed);
        let (x, y, z) = (random_tree(n, 0.8, &mut r), random_tree(n, 0.8, &mut r), random_tree(n, 0.8, &mut r));
        let m = geodesic(&x, &y).unwrap().point_along(0.5).unwrap();
        let lhs = distance(&z, &m).unwrap().powi(2);
        let rhs = 0.5 * distance(&z, &x).unwrap().powi(2) + 0.5 * distance(&z, &y).unwrap().powi(2)
            - 0.25 * distance(&x, &y).unwrap().powi(2);
        prop_assert!(lhs <= rhs + 1e-8);
    }

    #[test]
    fn exact_angles_agree_with_comparison_limit(seed in any::<u64>(), n in 4usize..7) {
        let mut r = rng(seed);
        let x = random_tree(n, 0.6, &mut r);
        let z = random_tree(n, 0.8, &mut r);
        let w = random_tree(n, 0.8, &mut r);
        prop_assume!(distance(&x, &z).unwrap() > 1e-3 && distance(&x, &w).unwrap() > 1e-3);
        let u = Direction::toward(&x, &w).unwrap();
        let exact = cos_angle(&x, &u, &z).unwrap();
        let limit = cos_angle_limit(&x, &u, &z).unwrap();
        prop_assert!((exact - limit).abs() < 1e-5, "{} vs {}", exact, limit);
    }

    #[test]
    fn newick_round_trip(seed in any::<u64>(), n in 3usize..12) {
        let mut r = rng(seed);
        let t = random_tree(n, 0.8, &mut r);
        let pend: Vec<f64> = (0..n).map(|_| r.random_range(0.0..1.0)).collect();
        let t = t.with_pendant(Some(pend)).unwrap();
        let back = parse_newick(&write_newick(&t), &LabelDict::numeric(n).unwrap()).unwrap();
        prop_assert_eq!(back, t);
    }
}

#[test]
fn perpendicular_angle_beyond_right_angle() {
    // on the stratum {1,2}, growing {3,4} points away from {1,2,3}
    let x = tree(4, &[(&[1, 2], 1.0)]);
    let u = Direction::single_split(x.topology(), split(4, &[3, 4])).unwrap();
    let z = tree(4, &[(&[1, 2], 1.0), (&[1, 2, 3], 1.0)]);
    let c = cos_angle(&x, &u, &z).unwrap();
    assert!((c + 1.0).abs() < 1e-12, "{c}");
    assert!((cos_angle_limit(&x, &u, &z).unwrap() + 1.0).abs() < 1e-8);
}

#[test]
fn disjoint_supports_through_the_cone_point() {
    // {1,2},{1,2,3} against {1,4},{1,3,4}: every pair crosses
    let x = tree(4, &[(&[1, 2], 3.0), (&[1, 2, 3], 4.0)]);
    let y = tree(4, &[(&[1, 4], 1.0), (&[1, 3, 4], 1.0)]);
    let d = distance(&x, &y).unwrap();
    assert!((d - (5.0 + 2f64.sqrt())).abs() < 1e-12);
    assert!((t4_cone_distance(&x, &y) - d).abs() < 1e-12);
}

#[test]
fn pendant_lengths_add_euclidean_terms() {
    let x = tree(3, &[(&[1, 2], 1.0)])
        .with_pendant(Some(vec![1.0, 1.0, 1.0]))
        .unwrap();
    let y = tree(3, &[(&[1, 2], 1.0)])
        .with_pendant(Some(vec![4.0, 1.0, 5.0]))
        .unwrap();
    assert_eq!(distance(&x, &y).unwrap(), 0.0);
    assert!((distance_with_pendants(&x, &y).unwrap() - 5.0).abs() < 1e-15);
    let bare: Tree = tree(3, &[(&[1, 2], 1.0)]);
    assert!((distance_with_pendants(&bare, &x).unwrap() - 3f64.sqrt()).abs() < 1e-15);
}

#[test]
fn path_oracle_agrees_with_cone_oracle() {
    let mut r = rng(5);
    for _ in 0..10 {
        let (x, y) = (random_tree(4, 0.8, &mut r), random_tree(4, 0.8, &mut r));
        let a = t4_path_oracle(&x, &y);
        let b = t4_cone_distance(&x, &y);
        assert!((a - b).abs() <= 1e-7 * (1.0 + b), "{a} vs {b}");
    }
}
