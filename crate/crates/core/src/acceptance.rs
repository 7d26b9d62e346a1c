//! The end-to-end acceptance suite: twelve numbered criteria, each producing
//! a single pass/fail outcome with a short diagnostic.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::basis::{lambda_bernoulli, lambda_ode, lambda_recurrence, reflection, BasisTable};
use crate::buck::{buck_coefficients, default_buck_radius, schoenberg_decompose, BuckExpansion};
use crate::contour::{
    bound_check, circle_quadrature_fixed, lambda_t0_integral, lambda_t1_integral, ContourConfig,
    TruncationConfig, DEFAULT_NODES,
};
use crate::error::{Error, Result};
use crate::expansion::{
    exp_identity_residual, expand_polynomial, generating_partial_sums, m0_closed, m1_closed,
    sparse_counterexample, whittaker_interpolate, CounterexampleSpec,
};
use crate::function::EntireFunctionModel;
use crate::poly::{factorial, rat, ComplexValue, Rational, RationalPolynomial};

type Generator = fn(usize) -> Result<RationalPolynomial>;

#[derive(Debug, Clone, Serialize)]
pub struct CriterionOutcome {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl std::fmt::Display for CriterionOutcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "[{}] {:>2} {:<34} {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.detail
        )
    }
}

/// `Ok(detail)` passes, `Err(detail)` fails.
type Check = std::result::Result<String, String>;

fn fail<T: std::fmt::Display>(e: T) -> String {
    e.to_string()
}

fn c(re: f64, im: f64) -> ComplexValue {
    ComplexValue::new(re, im)
}

pub const CRITERIA: [(u8, &str); 12] = [
    (1, "exact basis reproduction"),
    (2, "three-way method agreement"),
    (3, "structural identities"),
    (4, "polynomial round trip"),
    (5, "generating series"),
    (6, "exponential expansion"),
    (7, "contour oracle"),
    (8, "bound suite"),
    (9, "Buck coefficients and expansion"),
    (10, "Schoenberg recovery"),
    (11, "divergence detection"),
    (12, "counterexample construction"),
];

pub fn run_criterion(id: u8) -> Option<CriterionOutcome> {
    let name = CRITERIA.iter().find(|(i, _)| *i == id)?.1;
    let start = Instant::now();
    let result = match id {
        1 => basis_reproduction(),
        2 => method_agreement(),
        3 => structural_identities(),
        4 => polynomial_round_trip(),
        5 => generating_series(),
        6 => exponential_expansion(),
        7 => contour_oracle(),
        8 => bound_suite(),
        9 => buck_example(),
        10 => schoenberg_recovery(),
        11 => divergence_detection(),
        12 => counterexample(),
        _ => return None,
    };
    let elapsed = start.elapsed();
    let (passed, detail) = match result {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    Some(CriterionOutcome {
        id,
        name,
        passed,
        detail,
        elapsed,
    })
}

pub fn run_all() -> Vec<CriterionOutcome> {
    CRITERIA
        .iter()
        .filter_map(|&(id, _)| run_criterion(id))
        .collect()
}

fn poly(c: &[(i64, i64)]) -> RationalPolynomial {
    RationalPolynomial::new(c.iter().map(|&(n, d)| rat(n, d)).collect())
}

fn basis_reproduction() -> Check {
    let start = Instant::now();
    let expected1 = [
        (0, poly(&[(0, 1), (1, 1)])),
        (2, poly(&[(0, 1), (-1, 6), (0, 1), (1, 6)])),
        (
            4,
            poly(&[(0, 1), (7, 360), (0, 1), (-1, 36), (0, 1), (1, 120)]),
        ),
    ];
    let expected0 = [
        (2, poly(&[(0, 1), (-1, 3), (1, 2), (-1, 6)])),
        (
            4,
            poly(&[(0, 1), (1, 45), (0, 1), (-1, 18), (1, 24), (-1, 120)]),
        ),
    ];
    let generators: [(&str, Generator); 3] = [
        ("recurrence", lambda_recurrence),
        ("ode", lambda_ode),
        ("bernoulli", lambda_bernoulli),
    ];
    let refl = reflection();
    for (name, gen) in generators {
        for (t, want) in &expected1 {
            if &gen(*t).map_err(fail)? != want {
                return Err(format!("{name}: Λ_{{{t},1}} mismatch"));
            }
        }
        for (t, want) in &expected0 {
            if &gen(*t).map_err(fail)?.compose(&refl) != want {
                return Err(format!("{name}: Λ_{{{t},0}} mismatch"));
            }
        }
    }
    let elapsed = start.elapsed();
    if elapsed >= Duration::from_secs(1) {
        return Err(format!("took {elapsed:?}, limit 1s"));
    }
    Ok("5 polynomials x 3 methods exact (limit 1s)".into())
}

fn method_agreement() -> Check {
    let start = Instant::now();
    // a fresh table runs all three generators and compares them exactly
    let table = BasisTable::build(60).map_err(fail)?;
    for e in table.entries() {
        if lambda_bernoulli(e.t).map_err(fail)? != e.lambda1 {
            return Err(format!("direct Bernoulli form differs at t = {}", e.t));
        }
    }
    let elapsed = start.elapsed();
    if elapsed >= Duration::from_secs(10) {
        return Err(format!("took {elapsed:?}, limit 10s"));
    }
    Ok("31 indices t <= 60 agree (limit 10s)".into())
}

fn structural_identities() -> Check {
    const T: usize = 40;
    let table = BasisTable::build(T).map_err(fail)?;
    let z = RationalPolynomial::identity();
    let zero = Rational::zero();
    let one = Rational::one();
    let mut checks = 0usize;
    for t in (0..=T).step_by(2) {
        let l1 = table.lambda1(t).ok_or("missing entry")?;
        let l0 = table.lambda0(t).ok_or("missing entry")?;
        if !l1.is_odd() {
            return Err(format!("Λ_{{{t},1}} not odd"));
        }
        let lead = Rational::from_integer(factorial(t + 1)).recip();
        if l1.degree() != (t + 1) as i64 || l1.leading_coefficient() != lead {
            return Err(format!("Λ_{{{t},1}} degree or leading term wrong"));
        }
        for tau in (0..=T + 2).step_by(2) {
            let d1 = l1.differentiate(tau);
            let d0 = l0.differentiate(tau);
            let delta = if tau == t { one.clone() } else { zero.clone() };
            if d1.eval(&zero) != zero
                || d1.eval(&one) != delta
                || d0.eval(&zero) != delta
                || d0.eval(&one) != zero
            {
                return Err(format!("duality fails for t = {t}, τ = {tau}"));
            }
        }
        let ode_rhs = if t == 0 {
            RationalPolynomial::zero()
        } else {
            table.lambda1(t - 2).ok_or("missing entry")?.clone()
        };
        if l1.differentiate(2) != ode_rhs {
            return Err(format!("second derivative identity fails at t = {t}"));
        }
        let monomial =
            RationalPolynomial::monomial(Rational::from_integer(factorial(t)).recip(), t);
        let mut sum = l0.clone();
        for tau in (0..=t).step_by(2) {
            let w = Rational::from_integer(factorial(t - tau)).recip();
            sum = &sum + &table.lambda1(tau).ok_or("missing entry")?.scale(&w);
        }
        if sum != monomial {
            return Err(format!("monomial identity fails at t = {t}"));
        }
        let plus = l1.compose(&(&z + &RationalPolynomial::one()));
        let minus = l1.compose(&(&z - &RationalPolynomial::one()));
        if &plus - &minus != monomial.scale(&Rational::from_integer(2.into())) {
            return Err(format!("translation identity fails at t = {t}"));
        }
        checks += 1;
    }
    Ok(format!(
        "6 identities hold exactly for {checks} indices t <= {T}"
    ))
}

fn random_polynomial(rng: &mut ChaCha8Rng) -> RationalPolynomial {
    let degree = rng.gen_range(0..=21);
    RationalPolynomial::new(
        (0..=degree)
            .map(|_| rat(rng.gen_range(-1000..=1000), rng.gen_range(1..=500)))
            .collect(),
    )
}

fn polynomial_round_trip() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for i in 0..200 {
        let p = random_polynomial(&mut rng);
        let e = expand_polynomial(&p).map_err(fail)?;
        if e.reconstruction != p {
            return Err(format!("sample {i} ({p}) not reproduced"));
        }
    }
    Ok("200 random polynomials of degree <= 21 reproduced exactly".into())
}

fn grid_5x5() -> (Vec<ComplexValue>, Vec<ComplexValue>) {
    let radii = [0.3, 0.6, 0.9, 1.2, 1.5];
    let zetas = radii
        .iter()
        .enumerate()
        .map(|(j, &r)| ComplexValue::from_polar(r, 0.7 * j as f64))
        .collect();
    let zs = radii
        .iter()
        .enumerate()
        .map(|(j, &r)| ComplexValue::from_polar(r, 0.3 - 1.1 * j as f64))
        .collect();
    (zetas, zs)
}

fn generating_series() -> Check {
    let (zetas, zs) = grid_5x5();
    let mut series_err = 0.0_f64;
    let mut refl_err = 0.0_f64;
    for &zeta in &zetas {
        for &z in &zs {
            let (_, s1) = generating_partial_sums(zeta, z, 60).map_err(fail)?;
            let m1 = m1_closed(zeta, z).map_err(fail)?;
            series_err = series_err.max((m1 - s1).norm());
            let m0 = m0_closed(zeta, z).map_err(fail)?;
            let reflected = m1_closed(zeta, 1.0 - z).map_err(fail)?;
            refl_err = refl_err.max((m0 - reflected).norm());
        }
    }
    let detail =
        format!("series error {series_err:.2e} (< 1e-10), reflection {refl_err:.2e} (< 1e-13)");
    if series_err < 1e-10 && refl_err < 1e-13 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn exponential_expansion() -> Check {
    let zetas = [c(0.5, 0.0), c(1.0, 0.0), c(2.0, 0.0), c(0.0, 1.5)];
    let zs = [c(0.3, 0.0), c(0.7, 0.0), c(1.2, 0.0), c(-0.5, 0.5)];
    let mut worst = 0.0_f64;
    let mut worst_ratio = 1.0_f64;
    let mut steps = 0usize;
    for &zeta in &zetas {
        let q = (zeta.norm() / PI).powi(2);
        for &z in &zs {
            let r60 = exp_identity_residual(zeta, z, 60).map_err(fail)?;
            worst = worst.max(r60);
            let residuals: Vec<f64> = (0..=60)
                .step_by(2)
                .map(|t| exp_identity_residual(zeta, z, t))
                .collect::<Result<_>>()
                .map_err(fail)?;
            for (j, pair) in residuals.windows(2).enumerate() {
                let t = 2 * j;
                if t < 8 || pair[0] <= 1e-11 || pair[1] <= 1e-11 {
                    continue;
                }
                let factor = pair[1] / pair[0] / q;
                steps += 1;
                let off = factor.max(1.0 / factor);
                if off > worst_ratio {
                    worst_ratio = off;
                }
            }
        }
    }
    let detail = format!(
        "max residual {worst:.2e} (< 1e-8); {steps} steps, worst ratio off by x{worst_ratio:.3} (<= 3)"
    );
    if worst < 1e-8 && worst_ratio <= 3.0 && steps > 0 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn contour_oracle() -> Check {
    let mut cauchy = 0.0_f64;
    let cfg = ContourConfig::new(1.0, DEFAULT_NODES).map_err(fail)?;
    for (z, k) in [
        (c(0.7, 0.0), 3u32),
        (c(-1.2, 0.5), 5),
        (c(0.0, 2.0), 10),
        (c(1.5, -1.0), 0),
    ] {
        let q = circle_quadrature_fixed(|zeta| (zeta * z).exp() * zeta.powi(-(k as i32) - 1), &cfg)
            .map_err(fail)?;
        let mut exact = c(1.0, 0.0);
        for j in 1..=k {
            exact *= z / j as f64;
        }
        cauchy = cauchy.max((q.value - exact).norm());
    }

    let table = BasisTable::build(10).map_err(fail)?;
    let mut formula = 0.0_f64;
    let mut k_spread = 0.0_f64;
    for t in [0usize, 2, 4, 10] {
        for (num, den) in [(1, 2), (3, 10), (17, 10)] {
            let zr = rat(num, den);
            let z = c(num as f64 / den as f64, 0.0);
            let exact1 =
                crate::poly::rational_to_f64(&table.lambda1(t).ok_or("missing")?.eval(&zr));
            let exact0 =
                crate::poly::rational_to_f64(&table.lambda0(t).ok_or("missing")?.eval(&zr));
            let mut by_k = Vec::new();
            for k in 1..=3 {
                let trunc = TruncationConfig::new(k, t).map_err(fail)?;
                let v1 = lambda_t1_integral(t, z, &trunc, DEFAULT_NODES)
                    .map_err(fail)?
                    .value;
                let v0 = lambda_t0_integral(t, z, &trunc, DEFAULT_NODES)
                    .map_err(fail)?
                    .value;
                formula = formula.max((v1 - exact1).norm()).max((v0 - exact0).norm());
                by_k.push((v1, v0));
            }
            k_spread = k_spread
                .max((by_k[0].0 - by_k[2].0).norm())
                .max((by_k[0].1 - by_k[2].1).norm());
        }
    }
    let detail = format!(
        "Cauchy {cauchy:.2e} (< 1e-12), formulas {formula:.2e} (< 1e-9), K-spread {k_spread:.2e} (< 1e-9)"
    );
    if cauchy < 1e-12 && formula < 1e-9 && k_spread < 1e-9 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn bound_suite() -> Check {
    let mut worst = 0.0_f64;
    for t in [0usize, 2, 10] {
        for r in [1.0, 2.0] {
            let rep = bound_check(t, r, 1000).map_err(fail)?;
            worst = worst
                .max(rep.lambda1_sine)
                .max(rep.lambda1_sup)
                .max(rep.lambda0_sine)
                .max(rep.lambda0_sup);
        }
    }
    Ok(format!(
        "6000 points, no violation; worst lhs/rhs {worst:.3}"
    ))
}

fn buck_example() -> Check {
    let f = EntireFunctionModel::sin_kpi(1).map_err(fail)?;
    let mut c_err = 0.0_f64;
    for r in [4.0, 5.0] {
        let cfg = ContourConfig::new(r, DEFAULT_NODES).map_err(fail)?;
        let cs = buck_coefficients(&f, 1, &cfg).map_err(fail)?;
        c_err = c_err.max((cs[0] - 1.0).norm());
    }
    let g = EntireFunctionModel::exp(c(2.0, 0.0)).map_err(fail)?;
    let cfg = ContourConfig::new(default_buck_radius(&g, 1), DEFAULT_NODES).map_err(fail)?;
    let expansion = BuckExpansion::new(&g, 1, 60, cfg).map_err(fail)?;
    let mut residual = 0.0_f64;
    for j in 0..10 {
        let z = c(-0.5 + 0.25 * j as f64, 0.15 * ((j % 3) as f64 - 1.0));
        residual = residual.max(expansion.evaluate(&g, z).map_err(fail)?.residual);
    }
    let detail =
        format!("|C_1 - 1| = {c_err:.2e} (< 1e-8); e^(2z) residual {residual:.2e} (< 1e-6)");
    if c_err < 1e-8 && residual < 1e-6 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn schoenberg_recovery() -> Check {
    let f = EntireFunctionModel::sine_mix(&[(1, c(2.0, 0.0)), (2, c(-3.0, 0.0))]).map_err(fail)?;
    let d = schoenberg_decompose(&f, 60, 1e-9).map_err(fail)?;
    if d.k != 2 {
        return Err(format!("K = {}, expected 2", d.k));
    }
    let err = (d.c[0] - 2.0).norm().max((d.c[1] + 3.0).norm());
    if err >= 1e-7 {
        return Err(format!("coefficient error {err:.2e}"));
    }
    let e = EntireFunctionModel::exp(c(1.0, 0.0)).map_err(fail)?;
    match schoenberg_decompose(&e, 60, 1e-9) {
        Err(Error::NotEvenVanishing { t: 0, .. }) => {}
        other => return Err(format!("e^z not rejected at t = 0: {other:?}")),
    }
    Ok(format!(
        "K = 2, coefficient error {err:.2e} (< 1e-7); e^z rejected at t = 0"
    ))
}

fn divergence_detection() -> Check {
    let z = c(0.5, 0.0);
    let zeros = vec![c(0.0, 0.0); 31];
    let bad: Vec<_> = (0..=30)
        .map(|j| c(if j % 2 == 0 { 1.0 } else { -1.0 } * PI.powi(2 * j), 0.0))
        .collect();
    match whittaker_interpolate(&bad, &zeros, z, 60) {
        Err(Error::DivergenceDetected { .. }) => {}
        other => return Err(format!("alternating π^t data accepted: {other:?}")),
    }
    let good: Vec<_> = (0..=30).map(|j| c(0.5_f64.powi(2 * j), 0.0)).collect();
    let v = whittaker_interpolate(&good, &zeros, z, 60).map_err(fail)?;
    Ok(format!(
        "divergence flagged; (1/2)^t converges (spread {:.1e})",
        v.report.a_fluctuation
    ))
}

fn counterexample() -> Check {
    let spec = CounterexampleSpec {
        indices: vec![(2, 1), (4, 1)],
        terms: 2,
    };
    let ce = sparse_counterexample(&spec).map_err(fail)?;
    if !ce.report.all_hold {
        return Err("some condition fails".into());
    }
    Ok(format!(
        "{} exact conditions hold for {}",
        ce.report.checks.len(),
        ce.polynomial
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_criterion() {
        assert!(run_criterion(0).is_none());
        assert!(run_criterion(13).is_none());
    }

    #[test]
    fn cheap_criteria_pass() {
        for id in [1, 11, 12] {
            let o = run_criterion(id).unwrap();
            assert!(o.passed, "{o}");
        }
    }
}
