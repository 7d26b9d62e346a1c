//! Entire functions represented by a finite prefix of their Taylor data at 0.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::basis::check_even;
use crate::error::{Error, Result};
use crate::poly::{rational_to_f64, ComplexValue, RationalPolynomial};

/// Taylor prefix length used by the convenience constructors.
pub const DEFAULT_TAYLOR_TERMS: usize = 256;

/// Window used when the exponential type has to be estimated from the data.
pub const TYPE_WINDOW: usize = 20;

/// Relative tolerance on the truncated tail of `f^{(t)}(1)`.
const SHIFT_TAIL_TOL: f64 = 1e-14;

/// Closed forms kept alongside the Taylor data for direct evaluation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum ClosedForm {
    /// `e^{ζ₀ z}`
    Exp(ComplexValue),
    /// `Σ C_k sin(kπz)`
    SineMix(Vec<(u32, ComplexValue)>),
    Polynomial(RationalPolynomial),
}

impl ClosedForm {
    pub fn eval(&self, z: ComplexValue) -> ComplexValue {
        match self {
            ClosedForm::Exp(zeta0) => (zeta0 * z).exp(),
            ClosedForm::SineMix(terms) => terms
                .iter()
                .map(|&(k, c)| c * (z * (k as f64 * PI)).sin())
                .sum(),
            ClosedForm::Polynomial(p) => p.eval_complex(z),
        }
    }
}

/// An entire function given through `f^{(k)}(0)` for `k < len`, with an
/// optional declared exponential type.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntireFunctionModel {
    derivs_at_0: Vec<ComplexValue>,
    declared_type: Option<f64>,
    closed_form: Option<ClosedForm>,
}

impl EntireFunctionModel {
    /// Model from raw Taylor data `f^{(k)}(0)`.
    pub fn from_taylor(derivs_at_0: Vec<ComplexValue>, declared_type: Option<f64>) -> Result<Self> {
        if derivs_at_0.is_empty() {
            return Err(Error::InvalidModel("empty Taylor data".into()));
        }
        if let Some(k) = derivs_at_0.iter().position(|d| !d.is_finite()) {
            return Err(Error::InvalidModel(format!("f^({k})(0) is not finite")));
        }
        if let Some(tau) = declared_type {
            if !(tau.is_finite() && tau >= 0.0) {
                return Err(Error::InvalidModel(format!(
                    "declared type {tau} is invalid"
                )));
            }
        }
        Ok(Self {
            derivs_at_0,
            declared_type,
            closed_form: None,
        })
    }

    fn with_closed_form(mut self, form: ClosedForm) -> Self {
        self.closed_form = Some(form);
        self
    }

    /// `e^{ζ₀ z}`, of type `|ζ₀|`.
    pub fn exp(zeta0: ComplexValue) -> Result<Self> {
        Self::exp_with_terms(zeta0, DEFAULT_TAYLOR_TERMS)
    }

    pub fn exp_with_terms(zeta0: ComplexValue, terms: usize) -> Result<Self> {
        let mut derivs = Vec::with_capacity(terms);
        let mut power = ComplexValue::new(1.0, 0.0);
        for _ in 0..terms {
            derivs.push(power);
            power *= zeta0;
        }
        Ok(Self::from_taylor(derivs, Some(zeta0.norm()))?.with_closed_form(ClosedForm::Exp(zeta0)))
    }

    /// `sin(kπz)`.
    pub fn sin_kpi(k: u32) -> Result<Self> {
        Self::sine_mix(&[(k, ComplexValue::new(1.0, 0.0))])
    }

    /// `Σ C_k sin(kπz)`, of type `max{kπ : C_k ≠ 0}`.
    pub fn sine_mix(terms: &[(u32, ComplexValue)]) -> Result<Self> {
        if terms.iter().any(|&(k, _)| k == 0) {
            return Err(Error::InvalidModel("sine frequencies must be >= 1".into()));
        }
        let mut derivs = vec![ComplexValue::new(0.0, 0.0); DEFAULT_TAYLOR_TERMS];
        for &(k, c) in terms {
            let w = k as f64 * PI;
            let mut power = w;
            // d^n/dz^n sin(wz) at 0 = w^n sin(nπ/2): nonzero for odd n only
            for (n, d) in derivs.iter_mut().enumerate().skip(1) {
                if n % 2 == 1 {
                    let sign = if n % 4 == 1 { 1.0 } else { -1.0 };
                    *d += c * (sign * power);
                }
                power *= w;
            }
        }
        let tau = terms
            .iter()
            .filter(|(_, c)| c.norm() > 0.0)
            .map(|&(k, _)| k as f64 * PI)
            .fold(0.0, f64::max);
        Ok(Self::from_taylor(derivs, Some(tau))?
            .with_closed_form(ClosedForm::SineMix(terms.to_vec())))
    }

    /// Polynomial model, of type 0, zero-padded to [`DEFAULT_TAYLOR_TERMS`].
    pub fn polynomial(p: &RationalPolynomial) -> Result<Self> {
        let len = (p.degree().max(0) as usize + 3).max(DEFAULT_TAYLOR_TERMS);
        let mut derivs = Vec::with_capacity(len);
        let mut fact = 1.0_f64;
        let deg = p.degree().max(0) as usize;
        for k in 0..len {
            if k > deg {
                derivs.push(ComplexValue::new(0.0, 0.0));
                continue;
            }
            if k > 0 {
                fact *= k as f64;
            }
            derivs.push(ComplexValue::new(rational_to_f64(&p.coeff(k)) * fact, 0.0));
        }
        Ok(Self::from_taylor(derivs, Some(0.0))?
            .with_closed_form(ClosedForm::Polynomial(p.clone())))
    }

    pub fn derivs_at_0(&self) -> &[ComplexValue] {
        &self.derivs_at_0
    }

    pub fn len(&self) -> usize {
        self.derivs_at_0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.derivs_at_0.is_empty()
    }

    pub fn declared_type(&self) -> Option<f64> {
        self.declared_type
    }

    pub fn closed_form(&self) -> Option<&ClosedForm> {
        self.closed_form.as_ref()
    }

    /// `max |f^{(n)}(0)|^{1/n}` over the trailing `window` entries (n ≥ 1).
    pub fn estimate_type(&self, window: usize) -> f64 {
        let len = self.derivs_at_0.len();
        let start = len.saturating_sub(window).max(1);
        (start..len)
            .map(|n| {
                let m = self.derivs_at_0[n].norm();
                if m == 0.0 {
                    0.0
                } else {
                    (m.ln() / n as f64).exp()
                }
            })
            .fold(0.0, f64::max)
    }

    /// Growth rate used for tail control: the declared type, raised to the
    /// data-driven estimate when that is larger.
    pub fn growth_bound(&self) -> f64 {
        let est = self.estimate_type(TYPE_WINDOW);
        self.declared_type.map_or(est, |d| d.max(est))
    }

    /// Type used for domain checks: the declared one when present.
    pub fn type_for_checks(&self) -> f64 {
        self.declared_type
            .unwrap_or_else(|| self.estimate_type(TYPE_WINDOW))
    }

    /// Direct value: closed form when known, Taylor sum otherwise.
    pub fn eval(&self, z: ComplexValue) -> ComplexValue {
        match &self.closed_form {
            Some(form) => form.eval(z),
            None => self.eval_taylor(z),
        }
    }

    /// `Σ f^{(k)}(0) z^k / k!` over the stored prefix.
    pub fn eval_taylor(&self, z: ComplexValue) -> ComplexValue {
        let mut term_scale = ComplexValue::new(1.0, 0.0);
        let mut acc = ComplexValue::new(0.0, 0.0);
        for (k, d) in self.derivs_at_0.iter().enumerate() {
            if k > 0 {
                term_scale *= z / k as f64;
            }
            acc += d * term_scale;
        }
        acc
    }

    /// `f^{(t)}(1) = Σ_j f^{(t+j)}(0) / j!`, with the absolute sum of the
    /// terms (a conditioning scale) and an estimate of the dropped tail.
    pub fn shifted_derivative(&self, t: usize) -> Result<ShiftedDerivative> {
        let len = self.derivs_at_0.len();
        if t >= len {
            return Err(Error::InsufficientTaylorData {
                t,
                tail: f64::INFINITY,
                allowed: 0.0,
            });
        }
        let count = len - t;
        let mut terms = Vec::with_capacity(count);
        let mut inv_fact = 1.0_f64;
        for j in 0..count {
            if j > 0 {
                inv_fact /= j as f64;
            }
            terms.push(self.derivs_at_0[t + j] * inv_fact);
        }
        // smallest terms first
        let value: ComplexValue = terms.iter().rev().sum();
        let scale: f64 = terms.iter().rev().map(|c| c.norm()).sum();

        let last = self.derivs_at_0[len - 1].norm();
        let second = if len >= 2 {
            self.derivs_at_0[len - 2].norm()
        } else {
            0.0
        };
        let m = last.max(second);
        let tail = if m == 0.0 {
            0.0
        } else {
            let rho = self.growth_bound();
            let q = rho / (count as f64 + 1.0);
            if q >= 1.0 {
                f64::INFINITY
            } else {
                (m.ln() - ln_factorial(count)).exp() / (1.0 - q)
            }
        };
        let allowed = SHIFT_TAIL_TOL * value.norm().max(1.0);
        if tail > allowed {
            return Err(Error::InsufficientTaylorData { t, tail, allowed });
        }
        Ok(ShiftedDerivative { value, scale, tail })
    }
}

/// Result of [`EntireFunctionModel::shifted_derivative`].
#[derive(Debug, Clone, Copy)]
pub struct ShiftedDerivative {
    pub value: ComplexValue,
    /// `Σ_j |f^{(t+j)}(0)| / j!`
    pub scale: f64,
    pub tail: f64,
}

pub(crate) fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// Even-order derivatives at 0 and 1 up to `t_max`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DerivativeData {
    /// `f^{(t)}(0)` keyed by even `t`
    pub a: BTreeMap<usize, ComplexValue>,
    /// `f^{(t)}(1)` keyed by even `t`
    pub b: BTreeMap<usize, ComplexValue>,
    pub t_max: usize,
}

impl DerivativeData {
    pub fn zeros(t_max: usize) -> Self {
        let zero = ComplexValue::new(0.0, 0.0);
        let keys = (0..=t_max).step_by(2);
        Self {
            a: keys.clone().map(|t| (t, zero)).collect(),
            b: keys.map(|t| (t, zero)).collect(),
            t_max,
        }
    }

    pub fn a_at(&self, t: usize) -> ComplexValue {
        self.a.get(&t).copied().unwrap_or_default()
    }

    pub fn b_at(&self, t: usize) -> ComplexValue {
        self.b.get(&t).copied().unwrap_or_default()
    }
}

/// `f^{(t)}(0)` and `f^{(t)}(1)` for even `t ≤ t_max`.
pub fn derivative_data(f: &EntireFunctionModel, t_max: usize) -> Result<DerivativeData> {
    check_even(t_max)?;
    let mut data = DerivativeData {
        a: BTreeMap::new(),
        b: BTreeMap::new(),
        t_max,
    };
    for t in (0..=t_max).step_by(2) {
        let shifted = f.shifted_derivative(t)?;
        data.a.insert(t, f.derivs_at_0[t]);
        data.b.insert(t, shifted.value);
    }
    Ok(data)
}

/// Free-function form of [`EntireFunctionModel::estimate_type`].
pub fn estimate_type(f: &EntireFunctionModel, window: usize) -> f64 {
    f.estimate_type(window)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::RationalPolynomial;

    fn c(re: f64) -> ComplexValue {
        ComplexValue::new(re, 0.0)
    }

    #[test]
    fn exp_half_data() {
        let f = EntireFunctionModel::exp(c(0.5)).unwrap();
        let d = derivative_data(&f, 20).unwrap();
        for t in (0..=20).step_by(2) {
            let at = 0.5_f64.powi(t as i32);
            assert!((d.a_at(t) - c(at)).norm() <= 1e-15 * at);
            let bt = 0.5_f64.exp() * at;
            assert!((d.b_at(t) - c(bt)).norm() <= 1e-14 * bt, "t={t}");
        }
    }

    #[test]
    fn sine_even_data_vanishes() {
        let f = EntireFunctionModel::sin_kpi(1).unwrap();
        let d = derivative_data(&f, 30).unwrap();
        for t in (0..=30).step_by(2) {
            assert_eq!(d.a_at(t), c(0.0));
            // cancellation in the shifted sum is relative to π^t e^π
            let scale = PI.powi(t as i32) * PI.exp();
            assert!(d.b_at(t).norm() < 1e-14 * scale, "t={t} {}", d.b_at(t));
        }
    }

    #[test]
    fn cubic_second_derivative_at_one() {
        let p = RationalPolynomial::monomial(crate::poly::rat_int(1), 3);
        let f = EntireFunctionModel::polynomial(&p).unwrap();
        let d = derivative_data(&f, 4).unwrap();
        assert_eq!(d.b_at(2), c(6.0));
        assert_eq!(d.b_at(0), c(1.0));
        assert_eq!(d.b_at(4), c(0.0));
        assert_eq!(d.a_at(0), c(0.0));
    }

    #[test]
    fn insufficient_data_is_reported() {
        let f = EntireFunctionModel::exp_with_terms(c(2.0), 30).unwrap();
        assert!(matches!(
            derivative_data(&f, 20),
            Err(Error::InsufficientTaylorData { .. })
        ));
        assert!(matches!(
            derivative_data(&f, 40),
            Err(Error::InsufficientTaylorData { .. })
        ));
    }

    #[test]
    fn odd_t_max_rejected() {
        let f = EntireFunctionModel::exp(c(1.0)).unwrap();
        assert!(matches!(derivative_data(&f, 5), Err(Error::OddIndex(5))));
    }

    #[test]
    fn type_estimates() {
        let f = EntireFunctionModel::exp_with_terms(c(2.0), 101).unwrap();
        assert!((estimate_type(&f, 51) - 2.0).abs() < 0.1);
        let s = EntireFunctionModel::sin_kpi(1).unwrap();
        assert!((estimate_type(&s, 20) - PI).abs() < 0.05 * PI);
        let p = EntireFunctionModel::polynomial(&RationalPolynomial::from_integers(&[1, 2, 3]))
            .unwrap();
        assert_eq!(estimate_type(&p, 1), 0.0);
    }

    #[test]
    fn taylor_and_closed_form_agree() {
        let f = EntireFunctionModel::sine_mix(&[(1, c(2.0)), (2, c(-3.0))]).unwrap();
        let z = ComplexValue::new(0.3, 0.2);
        assert!((f.eval(z) - f.eval_taylor(z)).norm() < 1e-12);
        assert!((f.declared_type().unwrap() - 2.0 * PI).abs() < 1e-15);
    }

    #[test]
    fn invalid_models() {
        assert!(EntireFunctionModel::from_taylor(vec![], None).is_err());
        assert!(EntireFunctionModel::from_taylor(vec![c(f64::NAN)], None).is_err());
        assert!(EntireFunctionModel::from_taylor(vec![c(1.0)], Some(-1.0)).is_err());
        assert!(EntireFunctionModel::sin_kpi(0).is_err());
        // (20π)^255 overflows
        assert!(EntireFunctionModel::sin_kpi(20).is_err());
    }
}
