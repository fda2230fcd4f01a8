mod common;

use bhv_core::frechet::frechet_mean_with;
use bhv_core::stats::w1;
use bhv_core::{
    directional_derivative, distance, frechet_mean, frechet_value, geodesic,
    perp_derivative_constancy_check, stickiness_certificate, Direction, EmpiricalDistribution,
    MeanOptions, Topology, Tree,
};
use common::*;
use proptest::prelude::*;
use rand::Rng;

fn tight() -> MeanOptions {
    MeanOptions {
        tol: 1e-11,
        ..MeanOptions::default()
    }
}

/// Richardson-extrapolated one-sided difference quotient of the Fréchet
/// function at `x` along `u`.
fn fd_derivative(p: &EmpiricalDistribution, x: &Tree, u: &Direction) -> f64 {
    let h1 = (1e-3f64).min(0.5 * u.max_step(x));
    let h2 = h1 / 10.0;
    let q = |h: f64| frechet_value(p, &u.point_at(x, h).unwrap(), x).unwrap() / h;
    (10.0 * q(h2) - q(h1)) / 9.0
}

proptest! {
    #![proptest_config(cases(48))]

    #[test]
    fn mean_beats_nearby_and_sampled_points(seed in any::<u64>(), n in 4usize..6, atoms in 2usize..6) {
        let mut r = rng(seed);
        let p = random_distribution(n, atoms, 0.8, &mut r);
        let mean = frechet_mean_with(&p, &tight()).unwrap().mean;
        for _ in 0..40 {
            let target = if r.random::<bool>() {
                p.atoms()[r.random_range(0..p.len())].clone()
            } else {
                random_tree(n, 0.7, &mut r)
            };
            let t = r.random_range(0.0..1.0f64).powi(3);
            let probe = geodesic(&mean, &target).unwrap().point_along(t).unwrap();
            prop_assert!(frechet_value(&p, &probe, &mean).unwrap() >= -1e-9);
        }
    }

    #[test]
    fn first_order_conditions_at_the_mean(seed in any::<u64>(), atoms in 2usize..6) {
        let mut r = rng(seed);
        let p = random_distribution(4, atoms, 0.6, &mut r);
        let mean = frechet_mean_with(&p, &tight()).unwrap().mean;
        for y in p.atoms() {
            if distance(&mean, y).unwrap() > 1e-6 {
                let u = Direction::toward(&mean, y).unwrap();
                prop_assert!(directional_derivative(&p, &mean, &u).unwrap() >= -1e-7);
            }
        }
    }

    #[test]
    fn derivative_matches_finite_differences(seed in any::<u64>(), n in 3usize..5) {
        let mut r = rng(seed);
        let p = random_distribution(n, 4, 0.7, &mut r);
        let x = random_tree(n, 0.5, &mut r);
        let w = random_tree(n, 0.8, &mut r);
        prop_assume!(distance(&x, &w).unwrap() > 1e-3);
        let u = Direction::toward(&x, &w).unwrap();
        let exact = directional_derivative(&p, &x, &u).unwrap();
        let fd = fd_derivative(&p, &x, &u);
        prop_assert!((exact - fd).abs() < 1e-4, "{} vs {}", exact, fd);
    }

    #[test]
    fn perpendicular_derivative_is_constant_along_the_stratum(seed in any::<u64>()) {
        let mut r = rng(seed);
        let p = random_distribution(4, 4, 0.8, &mut r);
        let f = random_binary_splits(4, &mut r)[0];
        let s = Topology::new(4, [f]).unwrap();
        let g = *s.enumerate_compatible_splits().unwrap().iter().find(|g| !s.contains(g)).unwrap();
        let u = Direction::single_split(s.clone(), g).unwrap();
        let x1 = Tree::new(4, [(f, r.random_range(0.1..2.0))], None).unwrap();
        let x2 = Tree::new(4, [(f, r.random_range(0.1..2.0))], None).unwrap();
        let (d1, d2) = perp_derivative_constancy_check(&p, &s, &x1, &x2, &u).unwrap();
        prop_assert!((d1 - d2).abs() < 1e-6, "{} vs {}", d1, d2);
    }

    #[test]
    fn means_contract_under_w1(seed in any::<u64>(), n in 4usize..6) {
        let mut r = rng(seed);
        let p = random_distribution(n, 3, 0.8, &mut r);
        let q = random_distribution(n, 4, 0.8, &mut r);
        let bp = frechet_mean_with(&p, &tight()).unwrap().mean;
        let bq = frechet_mean_with(&q, &tight()).unwrap().mean;
        prop_assert!(distance(&bp, &bq).unwrap() <= w1(&p, &q).unwrap() + 1e-8);
    }
}

#[test]
fn point_mass_and_two_points() {
    let x = tree(5, &[(&[1, 2], 1.0), (&[3, 4], 0.5)]);
    let y = tree(5, &[(&[2, 3], 2.0)]);
    assert!(
        frechet_mean(&EmpiricalDistribution::point_mass(x.clone()), 1e-10)
            .unwrap()
            .approx_eq(&x, 1e-12)
    );
    let mid = geodesic(&x, &y).unwrap().point_along(0.5).unwrap();
    let m = frechet_mean(&EmpiricalDistribution::uniform(vec![x, y]).unwrap(), 1e-10).unwrap();
    assert!(distance(&m, &mid).unwrap() < 1e-8);
}

#[test]
fn heavy_leg_mean_matches_line_search() {
    let p = spider([0.6, 0.2, 0.2], [1.0, 1.0, 1.0]);
    let star = Tree::star(3).unwrap();
    let f = |t: f64| frechet_value(&p, &leg(1, t), &star).unwrap();
    let oracle = golden_section(f, 1e-6, 2.0, 1e-12);
    let m = frechet_mean(&p, 1e-10).unwrap();
    assert!((m.length_of(&split(3, &[1, 2])).unwrap() - oracle).abs() < 1e-8);
    assert!((oracle - 0.2).abs() < 1e-8);
}

#[test]
fn spider_degrees_have_closed_form() {
    let mut r = rng(3);
    let star = Tree::star(3).unwrap();
    for _ in 0..50 {
        let raw: [f64; 3] = [r.random(), r.random(), r.random()];
        let total: f64 = raw.iter().sum();
        let m = raw.map(|v| v / total);
        let p = spider(m, [1.0; 3]);
        for i in 0..3 {
            let s = leg(i + 1, 1.0).edges()[0].0;
            let u = Direction::single_split(star.topology(), s).unwrap();
            let expected = 1.0 - 2.0 * m[i];
            assert!((directional_derivative(&p, &star, &u).unwrap() - expected).abs() < 1e-12);
        }
    }
}

#[test]
fn uniform_rays_of_four_leaf_space_are_sticky() {
    let rays: Vec<Tree> = bhv_core::Split::all(4)
        .unwrap()
        .into_iter()
        .map(|s| Tree::new(4, [(s, 1.0)], None).unwrap())
        .collect();
    let p = EmpiricalDistribution::uniform(rays).unwrap();
    let report = stickiness_certificate(&p, 1.0, 1, 1e-8).unwrap();
    let cert = report.certificate().unwrap();
    assert!(report.mean().edges().is_empty());
    assert!(cert.sticky);
    assert!((cert.zeta - 0.5).abs() < 1e-9, "{}", cert.zeta);
}
