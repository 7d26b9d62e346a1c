use std::f64::consts::PI;

use lidstone::basis::shared_table;
use lidstone::bernoulli::bernoulli_polynomial;
use lidstone::buck::{g_t_eval, gk_kernel, hk_kernel};
use lidstone::poly::{rat, rat_int};
use lidstone::{
    expand_polynomial, generating_partial_sums, m1_closed, ComplexValue, RationalPolynomial,
};
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = lidstone::Rational> {
    (-50i64..=50, 1i64..=30).prop_map(|(n, d)| rat(n, d))
}

fn polynomial(max_degree: usize) -> impl Strategy<Value = RationalPolynomial> {
    prop::collection::vec(rational(), 0..=max_degree + 1).prop_map(RationalPolynomial::new)
}

fn complex(radius: f64) -> impl Strategy<Value = ComplexValue> {
    (0.0..radius, 0.0..(2.0 * PI)).prop_map(|(r, th)| ComplexValue::from_polar(r, th))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_laws(p in polynomial(8), q in polynomial(8), r in polynomial(8)) {
        prop_assert_eq!(&(&p + &q) + &r, &p + &(&q + &r));
        prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
        prop_assert_eq!(&p * &q, &q * &p);
        prop_assert!((&p - &p).is_zero());
    }

    #[test]
    fn derivatives_compose(p in polynomial(12), a in 0usize..6, b in 0usize..6) {
        prop_assert_eq!(p.differentiate(a).differentiate(b), p.differentiate(a + b));
        prop_assert_eq!(p.antiderivative().differentiate(1), p.clone());
    }

    #[test]
    fn composition_evaluates_pointwise(p in polynomial(6), q in polynomial(3), x in rational()) {
        prop_assert_eq!(p.compose(&q).eval(&x), p.eval(&q.eval(&x)));
    }

    #[test]
    fn bernoulli_difference(n in 1usize..=40) {
        let b = bernoulli_polynomial(n);
        let shifted = b.compose(&RationalPolynomial::from_integers(&[1, 1]));
        let expected = RationalPolynomial::monomial(rat_int(n as i64), n - 1);
        prop_assert_eq!(&shifted - &b, expected);
    }

    #[test]
    fn expansion_reproduces(p in polynomial(15)) {
        let e = expand_polynomial(&p).unwrap();
        prop_assert_eq!(e.reconstruction, p);
    }

    #[test]
    fn expansion_is_linear_and_unique(p in polynomial(10), q in polynomial(10)) {
        // two polynomials with the same even-derivative data coincide
        let ep = expand_polynomial(&p).unwrap();
        let eq = expand_polynomial(&q).unwrap();
        let ed = expand_polynomial(&(&p - &q)).unwrap();
        prop_assert_eq!(ep.data.a == eq.data.a && ep.data.b == eq.data.b, p == q);
        prop_assert_eq!(ed.data.a.is_empty() && ed.data.b.is_empty(), p == q);
    }

    #[test]
    fn json_round_trip(p in polynomial(10)) {
        prop_assert_eq!(RationalPolynomial::from_json(&p.to_json()).unwrap(), p);
    }

    #[test]
    fn basis_duality(t in (0usize..=20).prop_map(|k| 2 * k), tau in (0usize..=22).prop_map(|k| 2 * k)) {
        let table = shared_table(t).unwrap();
        let d = table.lambda1(t).unwrap().differentiate(tau);
        let delta = if t == tau { rat_int(1) } else { rat_int(0) };
        prop_assert_eq!(d.eval(&rat_int(0)), rat_int(0));
        prop_assert_eq!(d.eval(&rat_int(1)), delta);
    }

    #[test]
    fn generating_function_is_even_in_zeta(zeta in complex(3.0), z in complex(2.0)) {
        let a = m1_closed(zeta, z).unwrap();
        let b = m1_closed(-zeta, z).unwrap();
        prop_assert!((a - b).norm() <= 1e-13 * (1.0 + a.norm()));
    }

    #[test]
    fn generating_series_matches_closed_form(zeta in complex(1.5), z in complex(1.5)) {
        let (_, s1) = generating_partial_sums(zeta, z, 60).unwrap();
        prop_assert!((s1 - m1_closed(zeta, z).unwrap()).norm() < 1e-10);
    }

    #[test]
    fn g_t_is_odd(t in (0usize..=10).prop_map(|k| 2 * k), k in 1usize..=3, z in complex(2.0)) {
        let a = g_t_eval(t, k, z).unwrap();
        let b = g_t_eval(t, k, -z).unwrap();
        prop_assert!((a + b).norm() <= 1e-13 * (1.0 + a.norm()));
    }

    #[test]
    fn kernel_reflection(k in 1usize..=3, frac in 0.0..0.95, th in 0.0..(2.0 * PI), z in complex(1.5)) {
        let zeta = ComplexValue::from_polar(frac * (k + 1) as f64 * PI, th);
        let h = hk_kernel(zeta, z, k).unwrap();
        let g = gk_kernel(zeta, 1.0 - z, k).unwrap();
        let c = (zeta * z).cosh();
        let scale = 1.0 + h.norm() + g.norm() + c.norm();
        prop_assert!((h - c + g).norm() <= 1e-12 * scale);
    }
}
