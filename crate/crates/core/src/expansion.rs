//! Lidstone expansions of polynomials and of entire functions of type < π,
//! the generating series `M_0`, `M_1`, the two-point interpolation series and
//! the sparse-condition counterexample construction.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::basis::{check_even, float_basis, shared_table, BasisTable};
use crate::error::{Error, Result};
use crate::poly::{factorial, rational_to_f64, ComplexValue, Rational, RationalPolynomial};

/// Trailing window for the numerical Cauchy criterion.
pub const CAUCHY_WINDOW: usize = 10;
/// Relative fluctuation allowed inside the window.
pub const CAUCHY_TOL: f64 = 1e-9;
/// `|sinh ζ|` below this is treated as a pole.
pub const POLE_GUARD: f64 = 1e-12;

/// Exact even-derivative data of a polynomial; only nonzero values are kept.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactDerivativeData {
    #[serde(with = "crate::poly::rational_map_serde")]
    pub a: BTreeMap<usize, Rational>,
    #[serde(with = "crate::poly::rational_map_serde")]
    pub b: BTreeMap<usize, Rational>,
    pub t_max: usize,
}

impl ExactDerivativeData {
    /// Rebuilds `Σ a_t Λ_{t,0} + Σ b_t Λ_{t,1}` exactly.
    pub fn reconstruct(&self, table: &BasisTable) -> RationalPolynomial {
        let mut acc = RationalPolynomial::zero();
        for (&t, a) in &self.a {
            let lam = table.lambda0(t).expect("table covers t_max");
            acc = &acc + &lam.scale(a);
        }
        for (&t, b) in &self.b {
            let lam = table.lambda1(t).expect("table covers t_max");
            acc = &acc + &lam.scale(b);
        }
        acc
    }

    pub fn to_float(&self) -> crate::function::DerivativeData {
        let mut d = crate::function::DerivativeData::zeros(self.t_max);
        for (&t, v) in &self.a {
            d.a.insert(t, ComplexValue::new(rational_to_f64(v), 0.0));
        }
        for (&t, v) in &self.b {
            d.b.insert(t, ComplexValue::new(rational_to_f64(v), 0.0));
        }
        d
    }
}

/// Output of [`expand_polynomial`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolynomialExpansion {
    pub data: ExactDerivativeData,
    pub reconstruction: RationalPolynomial,
}

/// Even-derivative data of `p` at 0 and 1 together with the finite Lidstone
/// sum built from it.
pub fn expand_polynomial(p: &RationalPolynomial) -> Result<PolynomialExpansion> {
    let deg = p.degree().max(0) as usize;
    let t_max = deg - deg % 2;
    let mut a = BTreeMap::new();
    let mut b = BTreeMap::new();
    let zero = Rational::zero();
    let one = Rational::one();
    for t in (0..=t_max).step_by(2) {
        let d = p.differentiate(t);
        let at0 = d.eval(&zero);
        let at1 = d.eval(&one);
        if !at0.is_zero() {
            a.insert(t, at0);
        }
        if !at1.is_zero() {
            b.insert(t, at1);
        }
    }
    let data = ExactDerivativeData { a, b, t_max };
    let table = shared_table(t_max)?;
    let reconstruction = data.reconstruct(&table);
    Ok(PolynomialExpansion {
        data,
        reconstruction,
    })
}

/// `Σ_{t ≤ T} a_t Λ_{t,0}(z) + Σ_{t ≤ T} b_t Λ_{t,1}(z)`.
pub fn lidstone_partial_sum(
    d: &crate::function::DerivativeData,
    z: ComplexValue,
    max_t: usize,
) -> Result<ComplexValue> {
    if max_t > d.t_max {
        return Err(Error::TruncationBeyondData {
            requested: max_t,
            available: d.t_max,
        });
    }
    let fb = float_basis(max_t)?;
    let mut acc = ComplexValue::new(0.0, 0.0);
    for t in (0..=max_t).step_by(2) {
        acc += d.a_at(t) * fb.lambda0(t, z) + d.b_at(t) * fb.lambda1(t, z);
    }
    Ok(acc)
}

/// `e^w - 1` without cancellation for small `w`.
pub(crate) fn expm1(w: ComplexValue) -> ComplexValue {
    let (s, c) = w.im.sin_cos();
    let half = (0.5 * w.im).sin();
    // cos y - 1 = -2 sin²(y/2)
    let re = w.re.exp_m1() * c - 2.0 * half * half;
    let im = w.re.exp() * s;
    ComplexValue::new(re, im)
}

fn guard_pole(zeta: ComplexValue) -> Result<()> {
    // no pole of 1/sinh in 0 < |ζ| < π
    if zeta.norm() > 1.0 && zeta.re.abs() < 30.0 && zeta.sinh().norm() < POLE_GUARD {
        return Err(Error::PoleAtZeta { zeta });
    }
    Ok(())
}

fn finite(v: ComplexValue, what: &'static str) -> Result<ComplexValue> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite(what))
    }
}

/// `M_1(ζ, z) = sinh(ζz) / sinh(ζ)`, with `M_1(0, z) = z`.
pub fn m1_closed(zeta: ComplexValue, z: ComplexValue) -> Result<ComplexValue> {
    if zeta == ComplexValue::new(0.0, 0.0) {
        return Ok(z);
    }
    guard_pole(zeta)?;
    // even in ζ; work in the right half plane where e^{-2w} is bounded
    let w = if zeta.re < 0.0 { -zeta } else { zeta };
    let wz = w * z;
    let num = if wz.norm() < 0.5 {
        (-w * (z + 1.0)).exp() * expm1(2.0 * wz)
    } else {
        (wz - w).exp() - (-wz - w).exp()
    };
    let den = -expm1(-2.0 * w);
    finite(num / den, "M_1")
}

/// `M_0(ζ, z) = cosh(ζz) - sinh(ζz) coth(ζ)`, with `M_0(0, z) = 1 - z`.
pub fn m0_closed(zeta: ComplexValue, z: ComplexValue) -> Result<ComplexValue> {
    if zeta == ComplexValue::new(0.0, 0.0) {
        return Ok(1.0 - z);
    }
    guard_pole(zeta)?;
    if zeta.re.abs() * (1.0 + z.norm()) > 300.0 {
        // the printed form overflows; use the reflected M_1
        return m1_closed(zeta, 1.0 - z);
    }
    let zz = zeta * z;
    let v = zz.cosh() - zz.sinh() * zeta.cosh() / zeta.sinh();
    finite(v, "M_0")
}

fn check_disk(zeta: ComplexValue) -> Result<()> {
    if zeta.norm() >= PI {
        return Err(Error::OutsideDisk {
            modulus: zeta.norm(),
            limit: PI,
        });
    }
    Ok(())
}

/// `(Σ_{t≤T} Λ_{t,0}(z) ζ^t, Σ_{t≤T} Λ_{t,1}(z) ζ^t)`.
pub fn generating_partial_sums(
    zeta: ComplexValue,
    z: ComplexValue,
    max_t: usize,
) -> Result<(ComplexValue, ComplexValue)> {
    check_even(max_t)?;
    let fb = float_basis(max_t)?;
    let zeta2 = zeta * zeta;
    let mut power = ComplexValue::new(1.0, 0.0);
    let mut s0 = ComplexValue::new(0.0, 0.0);
    let mut s1 = ComplexValue::new(0.0, 0.0);
    for t in (0..=max_t).step_by(2) {
        s0 += fb.lambda0(t, z) * power;
        s1 += fb.lambda1(t, z) * power;
        power *= zeta2;
    }
    Ok((s0, s1))
}

/// `|e^{ζz} - Σ_{t≤T} Λ_{t,0}(z)ζ^t - e^ζ Σ_{t≤T} Λ_{t,1}(z)ζ^t|` for `|ζ| < π`.
pub fn exp_identity_residual(zeta: ComplexValue, z: ComplexValue, max_t: usize) -> Result<f64> {
    check_disk(zeta)?;
    let (s0, s1) = generating_partial_sums(zeta, z, max_t)?;
    Ok(((zeta * z).exp() - s0 - zeta.exp() * s1).norm())
}

/// Numerical Cauchy test on `Σ (-1)^{t/2} c_t / π^t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub a_converged: bool,
    pub b_converged: bool,
    /// max spread of the trailing partial sums
    pub a_fluctuation: f64,
    pub b_fluctuation: f64,
    pub a_sum: ComplexValue,
    pub b_sum: ComplexValue,
    pub window: usize,
}

impl ConvergenceReport {
    pub fn converged(&self) -> bool {
        self.a_converged && self.b_converged
    }
}

/// Value of the truncated interpolation series and its convergence report.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interpolation {
    pub value: ComplexValue,
    pub report: ConvergenceReport,
}

fn cauchy_test(coeffs: &[ComplexValue], max_t: usize) -> (bool, f64, ComplexValue) {
    let mut partial = Vec::with_capacity(max_t / 2 + 1);
    let mut sum = ComplexValue::new(0.0, 0.0);
    let mut scale = 1.0_f64;
    for j in 0..=max_t / 2 {
        let c = coeffs.get(j).copied().unwrap_or_default();
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        sum += c * (sign * scale);
        partial.push(sum);
        scale /= PI * PI;
    }
    let tail = &partial[partial.len().saturating_sub(CAUCHY_WINDOW)..];
    let mut spread = 0.0_f64;
    for (i, x) in tail.iter().enumerate() {
        for y in &tail[i + 1..] {
            spread = spread.max((x - y).norm());
        }
    }
    let peak = tail.iter().map(|s| s.norm()).fold(0.0, f64::max);
    let ok = spread.is_finite() && spread < CAUCHY_TOL * (1.0 + peak);
    (ok, spread, sum)
}

/// Solves the two-point problem `f^{(t)}(0) = a_t`, `f^{(t)}(1) = b_t` by the
/// Lidstone series truncated at `T`. `a[j]` and `b[j]` hold the data for
/// `t = 2j`; missing entries count as zero.
///
/// Fails with [`Error::DivergenceDetected`] (still carrying the truncated
/// value) when either `Σ (-1)^{t/2} a_t / π^t` or the `b` series fails the
/// Cauchy test.
pub fn whittaker_interpolate(
    a: &[ComplexValue],
    b: &[ComplexValue],
    z: ComplexValue,
    max_t: usize,
) -> Result<Interpolation> {
    check_even(max_t)?;
    let fb = float_basis(max_t)?;
    let mut value = ComplexValue::new(0.0, 0.0);
    for t in (0..=max_t).step_by(2) {
        let j = t / 2;
        let at = a.get(j).copied().unwrap_or_default();
        let bt = b.get(j).copied().unwrap_or_default();
        value += at * fb.lambda0(t, z) + bt * fb.lambda1(t, z);
    }
    let (a_converged, a_fluctuation, a_sum) = cauchy_test(a, max_t);
    let (b_converged, b_fluctuation, b_sum) = cauchy_test(b, max_t);
    let report = ConvergenceReport {
        a_converged,
        b_converged,
        a_fluctuation,
        b_fluctuation,
        a_sum,
        b_sum,
        window: CAUCHY_WINDOW,
    };
    if !report.converged() {
        return Err(Error::DivergenceDetected { value, report });
    }
    Ok(Interpolation { value, report })
}

/// Chosen conditions for [`sparse_counterexample`]: pairs `(t, i)` meaning
/// the polynomial `Λ_{t,i}`, and the number of terms to sum.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CounterexampleSpec {
    pub indices: Vec<(usize, u8)>,
    pub terms: usize,
}

impl CounterexampleSpec {
    /// The first `terms` indices ordered by degree.
    fn validated(&self) -> Result<Vec<(usize, u8)>> {
        let bad = |m: String| Error::InvalidCounterexample(m);
        if self.terms == 0 || self.terms > self.indices.len() {
            return Err(bad(format!(
                "need 1 <= M <= {} terms, got {}",
                self.indices.len(),
                self.terms
            )));
        }
        let mut sorted = self.indices.clone();
        for &(t, i) in &sorted {
            if t % 2 == 1 {
                return Err(bad(format!("t = {t} is odd")));
            }
            if i > 1 {
                return Err(bad(format!("point {i} is not 0 or 1")));
            }
        }
        sorted.sort();
        for w in sorted.windows(2) {
            if w[0] == w[1] {
                return Err(bad(format!("duplicate index {:?}", w[0])));
            }
            if w[0].0 == w[1].0 {
                return Err(bad(format!("degree {} repeated", w[0].0 + 1)));
            }
        }
        sorted.truncate(self.terms);
        Ok(sorted)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CounterexampleTerm {
    pub t: usize,
    pub point: u8,
    pub degree: usize,
    /// `‖P_m‖₁`
    #[serde(with = "crate::poly::rational_serde")]
    pub c: Rational,
    /// `1 / (c_m (d_m!)²)`
    #[serde(with = "crate::poly::rational_serde")]
    pub u: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionCheck {
    pub t: usize,
    pub point: u8,
    #[serde(with = "crate::poly::rational_serde")]
    pub value: Rational,
    #[serde(with = "crate::poly::rational_serde")]
    pub expected: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VanishingReport {
    pub checks: Vec<ConditionCheck>,
    pub all_hold: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub polynomial: RationalPolynomial,
    pub terms: Vec<CounterexampleTerm>,
    pub report: VanishingReport,
}

/// Builds `Σ u_m P_m` with `P_m = Λ_{t_m, i_m}`, `c_m = ‖P_m‖₁` and
/// `u_m = 1 / (c_m (d_m!)²)`, then checks every even-derivative condition
/// at 0 and 1 up to one past the degree.
pub fn sparse_counterexample(spec: &CounterexampleSpec) -> Result<Counterexample> {
    let chosen = spec.validated()?;
    let max_t = chosen.last().map(|&(t, _)| t).unwrap_or(0);
    let table = shared_table(max_t)?;

    let mut polynomial = RationalPolynomial::zero();
    let mut terms = Vec::with_capacity(chosen.len());
    for &(t, point) in &chosen {
        let entry = table.get(t).expect("table covers chosen indices");
        let p = if point == 1 {
            &entry.lambda1
        } else {
            &entry.lambda0
        };
        let degree = t + 1;
        let c = p.l1_norm();
        let d_fact = factorial(degree);
        let u = Rational::new(BigInt::one(), d_fact.clone() * d_fact) / &c;
        polynomial = &polynomial + &p.scale(&u);
        terms.push(CounterexampleTerm {
            t,
            point,
            degree,
            c,
            u,
        });
    }

    let top = polynomial.degree().max(0) as usize + 1;
    let mut checks = Vec::new();
    let points = [Rational::zero(), Rational::one()];
    for t in (0..=top + top % 2).step_by(2) {
        let d = polynomial.differentiate(t);
        for (i, x) in points.iter().enumerate() {
            let value = d.eval(x);
            let expected = terms
                .iter()
                .find(|m| m.t == t && m.point as usize == i)
                .map(|m| m.u.clone())
                .unwrap_or_else(Rational::zero);
            checks.push(ConditionCheck {
                t,
                point: i as u8,
                value,
                expected,
            });
        }
    }
    let all_hold = checks.iter().all(|c| c.value == c.expected);
    Ok(Counterexample {
        polynomial,
        terms,
        report: VanishingReport { checks, all_hold },
    })
}
