//! Kernel expansions for entire functions of type below `(K+1)π`.
//!
//! `G_K(ζ, z)` removes the poles `±kπi`, `k ≤ K`, from `sinh(ζz)/sinh(ζ)`, so
//! its Taylor coefficients `g_t(z)` decay like `((K+1)π)^{-t}`. A function of
//! type `τ < (K+1)π` is then its two-point even-derivative series in `g_t`
//! plus a finite sine sum whose coefficients come from a contour integral of
//! the Laplace transform.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::basis::{check_even, float_basis};
use crate::contour::{laplace_eval, try_circle_quadrature, ContourConfig, DEFAULT_TOL};
use crate::error::{Error, Result};
use crate::expansion::m1_closed;
use crate::function::{derivative_data, DerivativeData, EntireFunctionModel, TYPE_WINDOW};
use crate::poly::ComplexValue;

/// Distance from `±kπi` below which the kernels switch to the expanded form.
pub const NEAR_POLE: f64 = 1e-3;
pub const DEFAULT_BUCK_T_MAX: usize = 60;
/// Allowed distance of `τ_est/π` from the nearest integer.
pub const TYPE_INTEGRALITY_TOL: f64 = 0.25;

fn zero() -> ComplexValue {
    ComplexValue::new(0.0, 0.0)
}

fn sign(n: usize) -> f64 {
    if n.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

fn kpi_sin(k: usize, z: ComplexValue) -> ComplexValue {
    (z * (k as f64 * PI)).sin()
}

/// `g_t(z) = Λ_{t,1}(z) + 2(-1)^{t/2} Σ_{k≤K} (-1)^k (kπ)^{-t-1} sin(kπz)`.
pub fn g_t_eval(t: usize, k_max: usize, z: ComplexValue) -> Result<ComplexValue> {
    check_even(t)?;
    let fb = float_basis(t)?;
    Ok(fb.lambda1(t, z) + g_t_correction(t, k_max, z))
}

/// The sine sum `g_t(z) - Λ_{t,1}(z)`.
pub fn g_t_correction(t: usize, k_max: usize, z: ComplexValue) -> ComplexValue {
    let mut acc = zero();
    for k in 1..=k_max {
        let kpi = k as f64 * PI;
        acc += kpi_sin(k, z) * (sign(k) * kpi.powi(-(t as i32) - 1));
    }
    acc * (2.0 * sign(t / 2))
}

fn guard(zeta: ComplexValue, k_max: usize) -> Result<()> {
    if !zeta.is_finite() || zeta.norm() >= (k_max + 1) as f64 * PI {
        return Err(Error::PoleGuard { zeta });
    }
    Ok(())
}

/// The subtracted pole with `ζ` closest to it, if within [`NEAR_POLE`].
fn near_pole(zeta: ComplexValue, k_max: usize) -> Option<(usize, f64, ComplexValue)> {
    let k = (zeta.im.abs() / PI).round() as usize;
    if k == 0 || k > k_max {
        return None;
    }
    let s = zeta.im.signum();
    let eps = zeta - ComplexValue::new(0.0, s * k as f64 * PI);
    (eps.norm() < NEAR_POLE).then_some((k, s, eps))
}

/// `sinh(ε) - ε`
fn sinh_minus_id(eps: ComplexValue) -> ComplexValue {
    let e2 = eps * eps;
    let mut term = eps * e2 / 6.0;
    let mut acc = term;
    for n in 2..8 {
        term = term * e2 / ((2 * n) as f64 * (2 * n + 1) as f64);
        acc += term;
    }
    acc
}

/// `ε cosh(ε) - sinh(ε) = Σ_{n≥1} 2n ε^{2n+1} / (2n+1)!`
fn eps_cosh_minus_sinh(eps: ComplexValue) -> ComplexValue {
    let e2 = eps * eps;
    let mut pow_over_fact = eps * e2 / 6.0;
    let mut acc = pow_over_fact * 2.0;
    for n in 2..8 {
        pow_over_fact = pow_over_fact * e2 / ((2 * n) as f64 * (2 * n + 1) as f64);
        acc += pow_over_fact * (2 * n) as f64;
    }
    acc
}

/// `2cosh(a + b/2)·sinh(b/2) = sinh(a + b) - sinh(a)` without cancellation.
fn sinh_increment(a: ComplexValue, b: ComplexValue) -> ComplexValue {
    (a + b / 2.0).cosh() * (b / 2.0).sinh() * 2.0
}

/// `(-1)^{k+1} sin(kπz) · 2πk/(ζ² + k²π²)`, the `k`-th subtracted pair of `G_K`.
fn g_pair(k: usize, zeta: ComplexValue, z: ComplexValue) -> ComplexValue {
    let kpi = k as f64 * PI;
    kpi_sin(k, z) * (sign(k + 1) * 2.0 * kpi) / (zeta * zeta + kpi * kpi)
}

/// `sin(kπz) · 2πk/(ζ² + k²π²)`, the `k`-th added pair of `H_K`.
fn h_pair(k: usize, zeta: ComplexValue, z: ComplexValue) -> ComplexValue {
    let kpi = k as f64 * PI;
    kpi_sin(k, z) * (2.0 * kpi) / (zeta * zeta + kpi * kpi)
}

/// `G_K(ζ, z) = sinh(ζz)/sinh(ζ) - 2π Σ_{k≤K} (-1)^{k+1} k sin(kπz)/(ζ² + k²π²)`,
/// analytic in `|ζ| < (K+1)π`.
pub fn gk_kernel(zeta: ComplexValue, z: ComplexValue, k_max: usize) -> Result<ComplexValue> {
    guard(zeta, k_max)?;
    let Some((kp, s, eps)) = near_pole(zeta, k_max) else {
        let mut acc = m1_closed(zeta, z)?;
        for k in 1..=k_max {
            acc -= g_pair(k, zeta, z);
        }
        return Ok(acc);
    };
    let kpi = kp as f64 * PI;
    let i = ComplexValue::i();
    let zeta0 = ComplexValue::new(0.0, s * kpi);
    let n0 = (zeta0 * z).sinh();
    // sinh(ζ) = (-1)^k sinh(ε) near ζ0, residue (-1)^k sinh(ζ0 z)
    let regular = if eps == zero() {
        z * (z * kpi).cos()
    } else {
        (eps * sinh_increment(zeta0 * z, eps * z) - n0 * sinh_minus_id(eps)) / (eps * eps.sinh())
    } * sign(kp);
    let r_k = i * kpi_sin(kp, z) * sign(kp);
    let other_half = if s > 0.0 {
        r_k / (zeta + i * kpi)
    } else {
        -r_k / (zeta - i * kpi)
    };
    let mut acc = regular + other_half;
    for k in (1..=k_max).filter(|&k| k != kp) {
        acc -= g_pair(k, zeta, z);
    }
    Ok(acc)
}

/// `H_K(ζ, z) = sinh(ζz)coth(ζ) + 2π Σ_{k≤K} k sin(kπz)/(ζ² + k²π²)`,
/// analytic in `|ζ| < (K+1)π`.
pub fn hk_kernel(zeta: ComplexValue, z: ComplexValue, k_max: usize) -> Result<ComplexValue> {
    guard(zeta, k_max)?;
    let Some((kp, s, eps)) = near_pole(zeta, k_max) else {
        let mut acc = m1_closed(zeta, z)? * zeta.cosh();
        for k in 1..=k_max {
            acc += h_pair(k, zeta, z);
        }
        return Ok(acc);
    };
    let kpi = kp as f64 * PI;
    let i = ComplexValue::i();
    let zeta0 = ComplexValue::new(0.0, s * kpi);
    let n0 = (zeta0 * z).sinh();
    // coth(ζ) = coth(ε) near ζ0, residue sinh(ζ0 z)
    let regular = if eps == zero() {
        z * (z * kpi).cos()
    } else {
        (eps * sinh_increment(zeta0 * z, eps * z) * eps.cosh() + n0 * eps_cosh_minus_sinh(eps))
            / (eps * eps.sinh())
    };
    let sk = kpi_sin(kp, z);
    let other_half = if s > 0.0 {
        i * sk / (zeta + i * kpi)
    } else {
        -i * sk / (zeta - i * kpi)
    };
    let mut acc = regular + other_half;
    for k in (1..=k_max).filter(|&k| k != kp) {
        acc += h_pair(k, zeta, z);
    }
    Ok(acc)
}

/// Admissible open interval `(τ, (K+1)π)` for the coefficient contour.
pub fn buck_radius_range(f: &EntireFunctionModel, k_max: usize) -> (f64, f64) {
    (f.type_for_checks(), (k_max + 1) as f64 * PI)
}

/// Midpoint of [`buck_radius_range`].
pub fn default_buck_radius(f: &EntireFunctionModel, k_max: usize) -> f64 {
    let (lo, hi) = buck_radius_range(f, k_max);
    0.5 * (lo + hi)
}

/// `C_k = -k i ∮_{|ζ|=r} (1 + (-1)^{k+1} e^ζ)/(ζ² + k²π²) F(ζ) dζ` for
/// `k = 1..=K`, where `F` is the Laplace transform of `f`. The contour
/// integral is unnormalized, so `C_k = 2πk` times the mean-value quadrature.
pub fn buck_coefficients(
    f: &EntireFunctionModel,
    k_max: usize,
    cfg: &ContourConfig,
) -> Result<Vec<ComplexValue>> {
    if k_max == 0 {
        return Err(Error::InvalidK);
    }
    cfg.validate()?;
    let (lower, upper) = buck_radius_range(f, k_max);
    if !(cfg.radius > lower && cfg.radius < upper) {
        return Err(Error::RadiusOutOfRange {
            radius: cfg.radius,
            lower,
            upper,
        });
    }
    (1..=k_max)
        .map(|k| {
            let kpi2 = (k as f64 * PI).powi(2);
            let w = sign(k + 1);
            let q = try_circle_quadrature(
                |zeta| Ok((1.0 + w * zeta.exp()) / (zeta * zeta + kpi2) * laplace_eval(f, zeta)?),
                cfg,
                DEFAULT_TOL,
            )?;
            Ok(q.value * (2.0 * PI * k as f64))
        })
        .collect()
}

/// Buck coefficients together with the derivative data they pair with.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BuckExpansion {
    pub k: usize,
    pub c: Vec<ComplexValue>,
    pub gt_data: DerivativeData,
    pub contour: ContourConfig,
    pub t_max: usize,
    /// rough size of the dropped `t > t_max` terms on `[0, 1]`
    pub tail_estimate: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BuckEvaluation {
    pub value: ComplexValue,
    pub direct: ComplexValue,
    pub residual: f64,
}

impl BuckExpansion {
    pub fn new(
        f: &EntireFunctionModel,
        k_max: usize,
        t_max: usize,
        contour: ContourConfig,
    ) -> Result<Self> {
        check_even(t_max)?;
        let c = buck_coefficients(f, k_max, &contour)?;
        let gt_data = derivative_data(f, t_max)?;
        let shell = (k_max + 1) as f64 * PI;
        let q = (f.type_for_checks() / shell).powi(2);
        let last = gt_data.a_at(t_max).norm() + gt_data.b_at(t_max).norm();
        let tail_estimate = 2.0 * last * shell.powi(-(t_max as i32) - 1) * q / (1.0 - q);
        Ok(Self {
            k: k_max,
            c,
            gt_data,
            contour,
            t_max,
            tail_estimate,
        })
    }

    /// `Σ a_t g_t(1-z) + Σ b_t g_t(z) + Σ C_k sin(kπz)`.
    pub fn value(&self, z: ComplexValue) -> Result<ComplexValue> {
        let fb = float_basis(self.t_max)?;
        let w = ComplexValue::new(1.0, 0.0) - z;
        let mut acc = zero();
        for t in (0..=self.t_max).rev().step_by(2) {
            let g_w = fb.lambda1(t, w) + g_t_correction(t, self.k, w);
            let g_z = fb.lambda1(t, z) + g_t_correction(t, self.k, z);
            acc += self.gt_data.a_at(t) * g_w + self.gt_data.b_at(t) * g_z;
        }
        for (k, ck) in self.c.iter().enumerate() {
            acc += ck * kpi_sin(k + 1, z);
        }
        Ok(acc)
    }

    /// Expansion value next to the direct evaluation of `f`.
    pub fn evaluate(&self, f: &EntireFunctionModel, z: ComplexValue) -> Result<BuckEvaluation> {
        let value = self.value(z)?;
        let direct = f.eval(z);
        Ok(BuckEvaluation {
            value,
            direct,
            residual: (value - direct).norm(),
        })
    }
}

/// One-shot form of [`BuckExpansion::evaluate`].
pub fn buck_expand(
    f: &EntireFunctionModel,
    k_max: usize,
    z: ComplexValue,
    t_max: usize,
    cfg: &ContourConfig,
) -> Result<BuckEvaluation> {
    BuckExpansion::new(f, k_max, t_max, *cfg)?.evaluate(f, z)
}

/// A failed vanishing condition `f^{(t)}(point) ≠ 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub t: usize,
    pub point: u8,
    pub value: ComplexValue,
    pub scale: f64,
}

/// Even `t ≤ t_check` where `|f^{(t)}(point)| > tol·scale`, ordered by `t`
/// and then by point. The scale is `max(1, Σ_j |f^{(t+j)}(0)| |point|^j / j!)`.
pub fn even_vanishing_violations(
    f: &EntireFunctionModel,
    t_check: usize,
    tol: f64,
) -> Result<Vec<Violation>> {
    check_even(t_check)?;
    let mut out = Vec::new();
    for t in (0..=t_check).step_by(2) {
        let a = f
            .derivs_at_0()
            .get(t)
            .copied()
            .ok_or(Error::InsufficientTaylorData {
                t,
                tail: f64::INFINITY,
                allowed: 0.0,
            })?;
        let scale0 = a.norm().max(1.0);
        if a.norm() > tol * scale0 {
            out.push(Violation {
                t,
                point: 0,
                value: a,
                scale: scale0,
            });
        }
        let shifted = f.shifted_derivative(t)?;
        let scale1 = shifted.scale.max(1.0);
        if shifted.value.norm() > tol * scale1 {
            out.push(Violation {
                t,
                point: 1,
                value: shifted.value,
                scale: scale1,
            });
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchoenbergDecomposition {
    pub k: usize,
    pub c: Vec<ComplexValue>,
    pub tau_estimate: f64,
    pub radius: f64,
    /// `max |f - Σ C_k sin(kπz)|` over the sample grid
    pub residual: f64,
    /// `max |f|` over the same grid
    pub grid_max: f64,
}

/// Sample points used for the re-synthesis residual.
pub fn schoenberg_grid() -> Vec<ComplexValue> {
    let mut pts = Vec::new();
    for j in 0..=20 {
        let x = -0.5 + 2.0 * j as f64 / 20.0;
        for y in [-0.25, 0.0, 0.25] {
            pts.push(ComplexValue::new(x, y));
        }
    }
    pts
}

/// Writes `f` as a finite sine sum when all its even derivatives vanish at 0
/// and 1. `K` is the rounded `τ_est/π`; the coefficients are the Buck
/// coefficients on `|ζ| = (K + 1/2)π`.
pub fn schoenberg_decompose(
    f: &EntireFunctionModel,
    t_check: usize,
    tol: f64,
) -> Result<SchoenbergDecomposition> {
    if let Some(v) = even_vanishing_violations(f, t_check, tol)?.first() {
        return Err(Error::NotEvenVanishing {
            t: v.t,
            point: v.point,
            value: v.value,
            scale: v.scale,
        });
    }
    let tau = f.estimate_type(TYPE_WINDOW);
    let ratio = tau / PI;
    let k = ratio.round();
    if !ratio.is_finite() || (ratio - k).abs() >= TYPE_INTEGRALITY_TOL {
        return Err(Error::TypeNotMultipleOfPi { tau });
    }
    let k = k as usize;
    let grid = schoenberg_grid();
    let grid_max = grid.iter().map(|&z| f.eval(z).norm()).fold(0.0, f64::max);
    if k == 0 {
        return Ok(SchoenbergDecomposition {
            k,
            c: Vec::new(),
            tau_estimate: tau,
            radius: 0.0,
            residual: grid_max,
            grid_max,
        });
    }
    let radius = (k as f64 + 0.5) * PI;
    let c = buck_coefficients(f, k, &ContourConfig::with_radius(radius)?)?;
    let residual = grid
        .iter()
        .map(|&z| {
            let synth: ComplexValue = c
                .iter()
                .enumerate()
                .map(|(j, ck)| ck * kpi_sin(j + 1, z))
                .sum();
            (f.eval(z) - synth).norm()
        })
        .fold(0.0, f64::max);
    Ok(SchoenbergDecomposition {
        k,
        c,
        tau_estimate: tau,
        radius,
        residual,
        grid_max,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contour::DEFAULT_NODES;

    fn c(re: f64, im: f64) -> ComplexValue {
        ComplexValue::new(re, im)
    }

    fn direct_g(zeta: ComplexValue, z: ComplexValue, k_max: usize) -> ComplexValue {
        let mut acc = (zeta * z).sinh() / zeta.sinh();
        for k in 1..=k_max {
            acc -= g_pair(k, zeta, z);
        }
        acc
    }

    #[test]
    fn g_t_small_cases() {
        assert!((g_t_eval(0, 1, c(1.0, 0.0)).unwrap() - c(1.0, 0.0)).norm() < 1e-15);
        let v = g_t_eval(2, 1, c(0.5, 0.0)).unwrap();
        let expected = -1.0 / 16.0 + 2.0 / PI.powi(3);
        assert!((v - c(expected, 0.0)).norm() < 1e-15);
        let a = g_t_eval(6, 2, c(0.3, 0.1)).unwrap();
        let b = g_t_eval(6, 2, c(-0.3, -0.1)).unwrap();
        assert!((a + b).norm() < 1e-13);
        assert!(g_t_eval(3, 1, c(0.5, 0.0)).is_err());
    }

    #[test]
    fn kernel_at_origin_is_g0() {
        for k_max in 1..=3 {
            let z = c(0.37, 0.2);
            let g = gk_kernel(zero(), z, k_max).unwrap();
            assert!((g - g_t_eval(0, k_max, z).unwrap()).norm() < 1e-14);
        }
    }

    #[test]
    fn kernel_at_z_one() {
        for zeta in [c(0.4, 1.0), c(-2.0, 3.0), c(0.0, PI)] {
            assert!((gk_kernel(zeta, c(1.0, 0.0), 2).unwrap() - c(1.0, 0.0)).norm() < 1e-12);
        }
        assert!(hk_kernel(c(1.0, 2.0), zero(), 2).unwrap().norm() < 1e-15);
        // H_K(0, z) = 1 - g_0(1 - z)
        let z = c(0.3, 0.1);
        let h0 = hk_kernel(zero(), z, 2).unwrap();
        let g0 = g_t_eval(0, 2, 1.0 - z).unwrap();
        assert!((h0 - (1.0 - g0)).norm() < 1e-14);
    }

    #[test]
    fn guard_outside_disk() {
        assert!(matches!(
            gk_kernel(c(0.0, 2.0 * PI), c(0.5, 0.0), 1),
            Err(Error::PoleGuard { .. })
        ));
        assert!(matches!(
            hk_kernel(c(7.0, 0.0), c(0.5, 0.0), 1),
            Err(Error::PoleGuard { .. })
        ));
    }

    #[test]
    fn near_pole_forms_are_continuous() {
        let z = c(0.3, 0.2);
        for k_max in 1..=3 {
            for kp in 1..=k_max {
                for s in [1.0, -1.0] {
                    let zeta0 = c(0.0, s * kp as f64 * PI);
                    let at = gk_kernel(zeta0, z, k_max).unwrap();
                    let just_in = gk_kernel(zeta0 + c(5e-4, 3e-4), z, k_max).unwrap();
                    let just_out = direct_g(zeta0 + c(2e-3, 1e-3), z, k_max);
                    let out_stable = gk_kernel(zeta0 + c(2e-3, 1e-3), z, k_max).unwrap();
                    assert!((at - just_in).norm() < 1e-2);
                    assert!((just_out - out_stable).norm() < 1e-10);
                    let h_at = hk_kernel(zeta0, z, k_max).unwrap();
                    let h_in = hk_kernel(zeta0 + c(5e-4, 3e-4), z, k_max).unwrap();
                    assert!((h_at - h_in).norm() < 1e-2);
                }
            }
        }
    }

    #[test]
    fn near_pole_matches_direct_at_boundary() {
        // at |ε| just under 1e-3 the expanded and direct forms must agree
        let z = c(0.6, -0.1);
        let zeta = c(0.0, PI) + c(6e-4, -7e-4);
        let stable = gk_kernel(zeta, z, 1).unwrap();
        assert!((stable - direct_g(zeta, z, 1)).norm() < 1e-9);
        let direct_h = (zeta * z).sinh() * zeta.cosh() / zeta.sinh() + h_pair(1, zeta, z);
        assert!((hk_kernel(zeta, z, 1).unwrap() - direct_h).norm() < 1e-9);
    }

    #[test]
    fn sine_coefficients() {
        let f = EntireFunctionModel::sin_kpi(1).unwrap();
        let cfg = ContourConfig::new(4.0, DEFAULT_NODES).unwrap();
        let c1 = buck_coefficients(&f, 1, &cfg).unwrap();
        assert!((c1[0] - c(1.0, 0.0)).norm() < 1e-8);

        let f = EntireFunctionModel::sin_kpi(2).unwrap();
        let cfg = ContourConfig::new(2.5 * PI, DEFAULT_NODES).unwrap();
        let cs = buck_coefficients(&f, 2, &cfg).unwrap();
        assert!(cs[0].norm() < 1e-8);
        assert!((cs[1] - c(1.0, 0.0)).norm() < 1e-8);
    }

    #[test]
    fn radius_must_lie_between_type_and_shell() {
        let f = EntireFunctionModel::sin_kpi(1).unwrap();
        for r in [3.0, 7.0] {
            let cfg = ContourConfig::new(r, DEFAULT_NODES).unwrap();
            assert!(matches!(
                buck_coefficients(&f, 1, &cfg),
                Err(Error::RadiusOutOfRange { .. })
            ));
        }
        let cfg = ContourConfig::new(4.0, DEFAULT_NODES).unwrap();
        assert!(matches!(
            buck_coefficients(&f, 0, &cfg),
            Err(Error::InvalidK)
        ));
    }

    #[test]
    fn sine_expansion_has_no_derivative_terms() {
        let f = EntireFunctionModel::sin_kpi(1).unwrap();
        let cfg = ContourConfig::new(4.5, DEFAULT_NODES).unwrap();
        let e = buck_expand(&f, 1, c(0.3, 0.0), 20, &cfg).unwrap();
        assert!(e.residual < 1e-8);
    }

    #[test]
    fn schoenberg_single_sine() {
        let f = EntireFunctionModel::sin_kpi(1).unwrap();
        let d = schoenberg_decompose(&f, 40, 1e-9).unwrap();
        assert_eq!(d.k, 1);
        assert!((d.c[0] - c(1.0, 0.0)).norm() < 1e-8);
    }

    #[test]
    fn schoenberg_rejects_exp() {
        let f = EntireFunctionModel::exp(c(1.0, 0.0)).unwrap();
        match schoenberg_decompose(&f, 40, 1e-9) {
            Err(Error::NotEvenVanishing { t: 0, point: 0, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
    }
}
