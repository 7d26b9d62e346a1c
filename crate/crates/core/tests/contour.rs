use std::f64::consts::PI;

use lidstone::contour::{
    circle_quadrature_fixed, formula_radius, trig_sum, ContourConfig, TruncationConfig,
    DEFAULT_NODES,
};
use lidstone::{
    bound_check, derivative_via_contour, lambda_t0_integral, lambda_t1_integral, laplace_eval,
    ComplexValue, EntireFunctionModel,
};

fn c(re: f64, im: f64) -> ComplexValue {
    ComplexValue::new(re, im)
}

#[test]
fn trapezoid_is_spectrally_converged() {
    let coarse = ContourConfig::new(1.0, 128).unwrap();
    let fine = ContourConfig::new(1.0, 256).unwrap();
    for z in [c(2.0, 0.0), c(-1.3, 1.2), c(0.0, -2.0), c(0.5, 0.5)] {
        for k in 0..=10 {
            let g = |zeta: ComplexValue| (zeta * z).exp() * zeta.powi(-k - 1);
            let a = circle_quadrature_fixed(g, &coarse).unwrap().value;
            let b = circle_quadrature_fixed(g, &fine).unwrap().value;
            assert!((a - b).norm() < 1e-13, "z={z} k={k}");
        }
    }
}

#[test]
fn integral_formulas_are_independent_of_k() {
    for t in [0usize, 2, 6] {
        for z in [c(0.4, 0.0), c(0.7, -0.3)] {
            let one = TruncationConfig::new(1, t).unwrap();
            let three = TruncationConfig::new(3, t).unwrap();
            let a = lambda_t1_integral(t, z, &one, DEFAULT_NODES).unwrap().value;
            let b = lambda_t1_integral(t, z, &three, DEFAULT_NODES)
                .unwrap()
                .value;
            assert!((a - b).norm() < 1e-9);
        }
    }
}

#[test]
fn shells_differ_by_the_residues() {
    // each shell between (2K-1)π/2 and (2K+1)π/2 encloses ±Kπi only
    for t in [0usize, 2, 4] {
        for z in [c(0.3, 0.0), c(0.6, 0.2)] {
            for k in 1..=3 {
                let inner = TruncationConfig::new(k - 1, t).unwrap();
                let outer = TruncationConfig::new(k, t).unwrap();
                let c_in = lambda_t1_integral(t, z, &inner, DEFAULT_NODES)
                    .unwrap()
                    .contour;
                let c_out = lambda_t1_integral(t, z, &outer, DEFAULT_NODES)
                    .unwrap()
                    .contour;
                let shell = trig_sum(t, z, k, true) - trig_sum(t, z, k - 1, true);
                assert!((c_in - c_out - shell).norm() < 1e-9, "t={t} K={k}");

                let d_in = lambda_t0_integral(t, z, &inner, DEFAULT_NODES)
                    .unwrap()
                    .contour;
                let d_out = lambda_t0_integral(t, z, &outer, DEFAULT_NODES)
                    .unwrap()
                    .contour;
                let shell0 = trig_sum(t, z, k, false) - trig_sum(t, z, k - 1, false);
                assert!((d_in - d_out - shell0).norm() < 1e-9, "t={t} K={k}");
            }
        }
    }
    assert!((formula_radius(0) - PI / 2.0).abs() < 1e-15);
}

#[test]
fn lambda0_formula_small_cases() {
    let two = TruncationConfig::new(2, 4).unwrap();
    let v = lambda_t0_integral(4, c(0.3, 0.0), &two, DEFAULT_NODES)
        .unwrap()
        .value;
    let z: f64 = 0.3;
    let exact = -z.powi(5) / 120.0 + z.powi(4) / 24.0 - z.powi(3) / 18.0 + z / 45.0;
    assert!((v - exact).norm() < 1e-10);
}

#[test]
fn contour_reproduces_taylor_data() {
    for zeta0 in [c(2.0, 0.0), c(0.0, 1.5), c(-1.0, 1.0)] {
        let f = EntireFunctionModel::exp(zeta0).unwrap();
        let cfg = ContourConfig::new(3.0, DEFAULT_NODES).unwrap();
        for t in 0..=10 {
            let q = derivative_via_contour(&f, t, 0, &cfg).unwrap();
            let a = f.derivs_at_0()[t];
            assert!(
                (q.value - a).norm() < 1e-10 * a.norm().max(1.0),
                "ζ0={zeta0} t={t}"
            );
        }
        let q = derivative_via_contour(&f, 4, 1, &cfg).unwrap();
        let expected = zeta0.powi(4) * zeta0.exp();
        assert!((q.value - expected).norm() < 1e-10 * expected.norm().max(1.0));
    }
}

#[test]
fn laplace_of_sine_mix_is_linear() {
    let f = EntireFunctionModel::sine_mix(&[(1, c(2.0, 0.0)), (2, c(-3.0, 0.0))]).unwrap();
    let zeta = c(3.0, 7.0);
    let pole = |k: f64| k * PI / (zeta * zeta + k * k * PI * PI);
    let expected = 2.0 * pole(1.0) - 3.0 * pole(2.0);
    assert!((laplace_eval(&f, zeta).unwrap() - expected).norm() < 1e-14);
}

#[test]
fn bounds_hold_with_origin() {
    let rep = bound_check(2, 1.5, 400).unwrap();
    assert_eq!(rep.samples, 400);
    assert!(rep.min_slack > 0.0);
    assert!(rep.lambda1_sine < 1.0 && rep.lambda0_sup < 1.0);
}
