mod common;

use approx::assert_abs_diff_eq;
use common::{rng, SineMix};
use macap::optimize::{
    extend, maximize_1d, maximize_compact_convex, maximize_dense_curve, maximize_grid, project_onto_box,
    project_onto_simplex, ExtensionSpec, HypercubeCurve, Norm,
};
use macap::{Error, Modulus, SimplexCurve, SimplexGrid, Stop};
use proptest::prelude::*;
use rand::Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn sawtooth_envelope_dominates(seed in any::<u64>(), eps in 0.005f64..0.2) {
        let f = SineMix::random(&mut rng(seed));
        let check = common::check_sawtooth_soundness(&f, eps);
        prop_assert!(check.is_ok(), "{:?}", check);
    }

    #[test]
    fn iteration_count_respects_ceiling(seed in any::<u64>(), eps in 0.005f64..0.2) {
        let f = SineMix::random(&mut rng(seed));
        let check = common::check_iteration_ceiling(&f, eps);
        prop_assert!(check.is_ok(), "{:?}", check);
    }

    #[test]
    fn bounded_mode_bound_is_valid(seed in any::<u64>(), steps in 1usize..40) {
        let f = SineMix::random(&mut rng(seed));
        let beta = Modulus::Linear(f.lipschitz());
        let out = maximize_1d(|x| f.eval(x), &beta, 0.0, 1.0, Stop::MaxIterations(steps)).unwrap();
        prop_assert!(out.upper_bound >= f.sampled_max(0.0, 1.0) - 1e-9);
        prop_assert!(out.upper_bound >= out.best_value);
        prop_assert!(out.iterations <= steps);
    }

    #[test]
    fn extension_is_dominated_by_projection(
        x in proptest::collection::vec(-1.0f64..2.0, 2),
        c in -1.0f64..1.0,
    ) {
        let f = move |y: &[f64]| c * y[0] - y[1] * y[1];
        let spec = ExtensionSpec::new(f, project_onto_simplex, Modulus::Linear(3.0), Modulus::Linear(1.0));
        let y = project_onto_simplex(&x);
        let fbar = extend(&spec, &x).unwrap();
        prop_assert!(fbar <= f(&y) + 1e-12);
        let inside = extend(&spec, &y).unwrap();
        prop_assert!((inside - f(&y)).abs() < 1e-12);
    }
}

#[test]
fn grid_adjacency_and_completeness() {
    for d in 2..=4 {
        for n in 1..=6 {
            common::check_grid_adjacency(d, n).unwrap();
            common::check_grid_completeness(d, n).unwrap();
        }
    }
}

#[test]
fn curve_density() {
    common::check_curve_density(&mut rng(11), 3, 12, 1000).unwrap();
}

#[test]
fn grid_listing_points() {
    let grid = SimplexGrid::new(3, 3).unwrap();
    assert_eq!(grid.point(0).unwrap().entries(), &[1.0, 0.0, 0.0]);
    for v in grid.point(4).unwrap().iter() {
        assert_abs_diff_eq!(*v, 1.0 / 3.0, epsilon = 1e-15);
    }
    assert_eq!(grid.point(9).unwrap().entries(), &[0.0, 0.0, 1.0]);
    assert!(matches!(grid.point(10), Err(Error::Range(_))));
}

#[test]
fn curve_points() {
    let curve = SimplexCurve::new(SimplexGrid::new(3, 3).unwrap()).unwrap();
    assert_eq!(curve.point(0.0).unwrap().entries(), &[1.0, 0.0, 0.0]);
    let end_of_first = curve.point(2.0 / 3.0).unwrap();
    for (v, e) in end_of_first.iter().zip([2.0 / 3.0, 1.0 / 3.0, 0.0]) {
        assert_abs_diff_eq!(*v, e, epsilon = 1e-12);
    }
    let mid = curve.point(1.0 / 3.0).unwrap();
    for (v, e) in mid.iter().zip([5.0 / 6.0, 1.0 / 6.0, 0.0]) {
        assert_abs_diff_eq!(*v, e, epsilon = 1e-12);
    }
    let last = curve.point(curve.length()).unwrap();
    assert_eq!(last.entries(), &[0.0, 0.0, 1.0]);
    assert!(curve.point(curve.length() + 1e-9).is_err());
    assert!(curve.point(-1e-9).is_err());
}

fn norm2(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

#[test]
fn simplex_searches_on_table_functions() {
    let sin = |x: &[f64]| norm2(x).sin();
    let g = maximize_grid(sin, &Modulus::Linear(1.0), 3, 0.15).unwrap();
    let c = maximize_dense_curve(sin, &Modulus::Linear(1.0), 3, 0.15, None).unwrap();
    let truth = 1f64.sin();
    assert!((g.best_value - truth).abs() <= 0.15 && (c.best_value - truth).abs() <= 0.15);
    assert!(c.iterations < g.iterations);
    assert!(g.upper_bound >= truth && c.upper_bound >= truth);
}

#[test]
fn dense_curve_linear_objective() {
    let mut r = rng(3);
    for _ in 0..10 {
        let mut coeffs: Vec<f64> = (0..3).map(|_| r.gen_range(-1.0..1.0)).collect();
        let k = r.gen_range(0..3);
        coeffs[k] = if r.gen_bool(0.5) { 1.0 } else { -1.0 };
        let f = |x: &[f64]| x.iter().zip(&coeffs).map(|(a, b)| a * b).sum::<f64>();
        let out = maximize_dense_curve(f, &Modulus::Linear(1.0), 3, 0.1, None).unwrap();
        let truth = coeffs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        assert!(out.best_value >= truth - 0.1 && out.best_value <= truth + 1e-12);
    }
}

#[test]
fn constant_objectives() {
    let g = maximize_grid(|_| 0.7, &Modulus::Linear(1.0), 3, 0.2).unwrap();
    assert_eq!(g.best_value, 0.7);
    assert_abs_diff_eq!(g.upper_bound, 0.9, epsilon = 1e-12);
    let c = maximize_dense_curve(|_| 0.7, &Modulus::Linear(1.0), 3, 0.2, None).unwrap();
    assert!(c.converged);
    assert_eq!(c.best_value, 0.7);
    // Against a constant, the gaps halve level by level; the search stops
    // on the first sample whose gap 2^-m is at most ε, after 2^(m-1) + 1
    // iterations.
    for (eps, m) in [(0.1, 4u32), (0.3, 2), (0.05, 5)] {
        let o = maximize_1d(|_| 0.7, &Modulus::Linear(1.0), 0.0, 1.0, Stop::Precision(eps)).unwrap();
        assert_eq!(o.best_value, 0.7);
        assert!(o.converged);
        assert_eq!(o.iterations, 2usize.pow(m - 1) + 1);
    }
}

#[test]
fn interval_examples() {
    let o = maximize_1d(|x| -(x - 0.3) * (x - 0.3), &Modulus::Linear(1.4), 0.0, 1.0, Stop::Precision(1e-3)).unwrap();
    assert!(o.best_value >= -1e-3 && o.best_value <= 0.0);
    assert!((o.best_point[0] - 0.3).abs() <= 0.032);
    let o = maximize_1d(|x| (6.0 * x).sin(), &Modulus::Linear(6.0), 0.0, 1.0, Stop::Precision(0.01)).unwrap();
    assert!(o.best_value >= 0.99 && o.best_value <= 1.0);
    assert!(matches!(
        maximize_1d(|x| x, &Modulus::Linear(1.0), 1.0, 1.0, Stop::Precision(0.1)),
        Err(Error::Domain(_))
    ));
    assert!(matches!(
        maximize_1d(|x| if x > 0.4 { f64::NAN } else { x }, &Modulus::Linear(1.0), 0.0, 1.0, Stop::Precision(0.01)),
        Err(Error::Evaluation { .. })
    ));
}

#[test]
fn extension_examples() {
    let spec = ExtensionSpec::new(
        |_: &[f64]| 2.5,
        |x: &[f64]| project_onto_box(x, &[(0.0, 1.0), (0.0, 1.0)]),
        Modulus::Linear(1.0),
        Modulus::Linear(1.0),
    )
    .with_norm(Norm::L2);
    assert_abs_diff_eq!(extend(&spec, &[2.0, 0.5]).unwrap(), 1.5, epsilon = 1e-15);
    assert_eq!(extend(&spec, &[0.2, 0.5]).unwrap(), 2.5);
}

#[test]
fn compact_convex_examples() {
    let f = |x: &[f64]| 1.0 - (x[0] - 0.5).abs() - (x[1] - 0.5).abs();
    let spec = ExtensionSpec::new(f, project_onto_simplex, Modulus::Linear(1.0), Modulus::Linear(1.0));
    let out = maximize_compact_convex(&spec, &[(0.0, 1.0), (0.0, 1.0)], 0.1, None).unwrap();
    assert!(out.best_value >= 0.9 && out.best_value <= 1.0 + 1e-12);
    assert!(out.upper_bound >= 1.0);

    let constant = ExtensionSpec::new(
        |_: &[f64]| -0.25,
        |x: &[f64]| project_onto_box(x, &[(0.2, 0.9), (0.0, 0.5)]),
        Modulus::Linear(1.0),
        Modulus::Linear(1.0),
    );
    let out = maximize_compact_convex(&constant, &[(0.0, 1.0), (0.0, 1.0)], 0.1, None).unwrap();
    assert_abs_diff_eq!(out.best_value, -0.25, epsilon = 1e-12);

    let curve = HypercubeCurve::new(vec![(0.0, 1.0), (-1.0, 2.0), (3.0, 4.0)], 0.1).unwrap();
    assert_eq!(curve.point(0.0), vec![0.0, -1.0, 3.0]);
    let end = curve.point(curve.domain().1);
    assert_abs_diff_eq!(end[2], 4.0, epsilon = 1e-12);
    assert!(maximize_compact_convex(&spec, &[(0.0, 1.0)], 0.1, None).is_err());
}
