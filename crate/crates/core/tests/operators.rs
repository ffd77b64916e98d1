use std::sync::Arc;

use sphrh::harmonics::{random_harmonic, sup_norm, FnSphere, HarmonicSpec, Part, RealHarmonic, SphereFunction};
use sphrh::operators::{
    project, t_operator, t_operator_expansion, test_points, zonal_convolve, zonal_l1_norm, zonal_sup,
    OperatorKind, RidgePolynomial, ZonalOperator,
};
use sphrh::quadrature::sphere_product_rule;
use sphrh::special_fn::{c_n_constant, jacobi_eval, phi_kernel, JacobiParams, ZonalKernel};
use sphrh::{DimensionParams, Error};

fn dims(d: usize) -> DimensionParams {
    DimensionParams::new(d).unwrap()
}

fn zonal(d: usize, n: usize) -> RealHarmonic {
    RealHarmonic::new(HarmonicSpec::zonal(dims(d), n), Part::Re)
}

/// `max |a − b|` over the points, relative to `max |b|`.
fn relative_gap(a: &[f64], b: &[f64]) -> f64 {
    let scale = b.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    a.iter().zip(b).fold(0.0f64, |m, (x, y)| m.max((x - y).abs())) / scale
}

fn values<F: SphereFunction>(f: &F, points: &[Vec<f64>]) -> Vec<f64> {
    points.iter().map(|x| f.eval(x)).collect()
}

#[test]
fn t_operator_reproduces_harmonics_in_dimension_five() {
    let points = test_points(5, 200, 11);
    for n in [3usize, 12] {
        let f = random_harmonic(dims(5), n, 40 + n as u64).unwrap();
        let g = t_operator(dims(5), n, &f).unwrap();
        let err = relative_gap(&g.eval_many(&points), &values(&f, &points));
        assert!(err <= 1e-8, "n={n}: {err}");
    }
}

#[test]
fn projection_reproduces_zonal_and_coordinate_functions() {
    for d in [3usize, 4] {
        let points = test_points(d, 200, 5);
        for k in [0usize, 3, 10] {
            let g = zonal(d, k);
            let p = project(dims(d), k, &g).unwrap();
            assert!(relative_gap(&p.eval_many(&points), &values(&g, &points)) <= 1e-8);
        }
    }
    let x1 = FnSphere::new(dims(3), 1, |x: &[f64]| x[0]);
    let p = project(dims(3), 1, &x1).unwrap();
    for x in test_points(3, 50, 9) {
        assert!((p.eval(&x) - x[0]).abs() <= 1e-10);
    }
}

#[test]
fn projections_are_idempotent_and_mutually_annihilating() {
    let d = dims(3);
    let f = RidgePolynomial::random(d, 12, 6, 17);
    let points = test_points(3, 60, 2);
    for k in [2usize, 5, 12] {
        let pk = project(d, k, &f).unwrap();
        let pkk = project(d, k, &pk).unwrap();
        let once = pk.eval_many(&points);
        assert!(relative_gap(&pkk.eval_many(&points), &once) <= 1e-8, "k={k}");
        let scale = once.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        for m in [k + 1, k + 2] {
            let pmk = project(d, m, &pk).unwrap();
            let worst = pmk.eval_many(&points).iter().fold(0.0f64, |a, v| a.max(v.abs()));
            assert!(worst <= 1e-8 * scale, "k={k} m={m}: {worst}");
        }
    }
}

#[test]
fn t_operator_annihilates_degrees_outside_its_band() {
    for d in [3usize, 4] {
        let n = 6;
        let points = test_points(d, 100, 3);
        for m in [0usize, 3, 5, 7, n + 2 * (d - 2) + 2] {
            let g = zonal(d, m);
            let sup = sup_norm(&HarmonicSpec::zonal(dims(d), m)).unwrap().value;
            let tg = t_operator(dims(d), n, &g).unwrap();
            let worst = tg.eval_many(&points).iter().fold(0.0f64, |a, v| a.max(v.abs()));
            assert!(worst <= 1e-8 * sup, "d={d} m={m}: {worst}");
        }
    }
}

#[test]
fn t_operator_scales_the_next_degree() {
    for d in [3usize, 4, 5] {
        let n = 4;
        let points = test_points(d, 100, 8);
        let g = zonal(d, n + 2);
        let factor = -((d - 2) as f64) * c_n_constant(dims(d), n).unwrap() / c_n_constant(dims(d), n + 2).unwrap();
        let tg = t_operator(dims(d), n, &g).unwrap();
        let expected: Vec<f64> = values(&g, &points).iter().map(|v| factor * v).collect();
        assert!(relative_gap(&tg.eval_many(&points), &expected) <= 1e-8, "d={d}");
    }
}

#[test]
fn expansion_matches_direct_convolution_in_dimension_four() {
    let d = dims(4);
    let f = RidgePolynomial::random(d, 14, 8, 23);
    let points = test_points(4, 80, 4);
    for n in [1usize, 6, 10] {
        let direct = t_operator(d, n, &f).unwrap().eval_many(&points);
        let expanded = t_operator_expansion(d, n, &f).unwrap().eval_many(&points);
        assert!(relative_gap(&expanded, &direct) <= 1e-8, "n={n}");
    }
}

#[test]
fn zonal_convolution_examples() {
    for d in [3usize, 4, 5] {
        let a = dims(d).jacobi_index();
        let n = 9;
        let gn = move |t: f64| jacobi_eval(JacobiParams::new(n, a, a).unwrap(), t).unwrap();
        let proj = ZonalKernel::projection(dims(d), n).unwrap();
        let phi = ZonalKernel::phi(dims(d), n).unwrap();
        let reproduced = zonal_convolve(dims(d), |t| proj.eval_unchecked(t), n, gn, n).unwrap();
        let through_phi = zonal_convolve(dims(d), |t| phi.eval_unchecked(t), phi.max_degree(), gn, n).unwrap();
        let constant = zonal_convolve(dims(d), |t| phi.eval_unchecked(t), phi.max_degree(), |_| 1.0, 0).unwrap();
        let scale = gn(1.0);
        for i in 0..=40 {
            let t = -1.0 + i as f64 / 20.0;
            assert!((reproduced.eval_unchecked(t) - gn(t)).abs() <= 1e-8 * scale);
            assert!((through_phi.eval_unchecked(t) - gn(t)).abs() <= 1e-8 * scale);
            assert!(constant.eval_unchecked(t).abs() <= 1e-10);
        }
    }
}

#[test]
fn zonal_convolution_agrees_with_sphere_convolution() {
    let d = 3;
    let n = 5;
    let h = |t: f64| t.powi(7) - 0.3 * t * t + 0.5;
    let kernel = |t: f64| phi_kernel(dims(d), n, t).unwrap();
    let profile = zonal_convolve(dims(d), kernel, n + 2 * (d - 2), h, 7).unwrap();
    let f = FnSphere::new(dims(d), 7, move |x: &[f64]| h(x[d - 1]));
    let rule = Arc::new(sphere_product_rule(dims(d), 7 + n + 2).unwrap());
    let op = ZonalOperator::with_rule(
        OperatorKind::Custom,
        ZonalKernel::phi(dims(d), n).unwrap(),
        rule,
        7,
    )
    .unwrap();
    let full = op.apply(&f).unwrap();
    for x in test_points(d, 40, 1) {
        let a = profile.eval_unchecked(x[d - 1]);
        let b = full.eval(&x);
        assert!((a - b).abs() <= 1e-8 * (1.0 + b.abs()), "{a} vs {b}");
    }
}

#[test]
fn zonal_norms_of_a_sign_changing_profile() {
    // g_1(t) = t on S²: sup 1 and L¹ norm 2π.
    let g1 = ZonalKernel::zonal_harmonic(dims(3), 1).unwrap();
    assert!((zonal_sup(&g1).unwrap().value - 1.0).abs() < 1e-12);
    let l1 = zonal_l1_norm(&g1).unwrap();
    assert!((l1 - 2.0 * std::f64::consts::PI).abs() < 1e-10 * l1);
}

#[test]
fn insufficient_exactness_is_rejected() {
    let d = dims(3);
    let rule = Arc::new(sphere_product_rule(d, 10).unwrap());
    let kernel = ZonalKernel::phi(d, 6).unwrap();
    let res = ZonalOperator::with_rule(OperatorKind::TOperator { n: 6 }, kernel, rule, 8);
    assert!(matches!(res, Err(Error::ExactnessInsufficient { .. })), "{res:?}");
}
