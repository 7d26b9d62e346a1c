//! Trapezoidal quadrature on circles `|ζ| = r`, the Laplace transform of a
//! Taylor model, and the contour-integral representations of the Lidstone
//! polynomials.
//!
//! For an integrand analytic in an annulus around the circle the equispaced
//! trapezoidal rule converges geometrically in the number of nodes, so the
//! difference between the `N` and `N/2` rules is a usable error estimate.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::basis::{check_even, float_basis};
use crate::error::{Error, Result};
use crate::expansion::m1_closed;
use crate::function::EntireFunctionModel;
use crate::poly::ComplexValue;

pub const DEFAULT_NODES: usize = 256;
pub const MAX_NODES: usize = 8192;
pub const DEFAULT_TOL: f64 = 1e-13;
/// Relative size allowed for the dropped tail of the Laplace series.
pub const LAPLACE_TAIL_TOL: f64 = 1e-15;

/// Circle `|ζ| = radius` sampled at `nodes` equispaced points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContourConfig {
    pub radius: f64,
    pub nodes: usize,
}

impl ContourConfig {
    pub fn new(radius: f64, nodes: usize) -> Result<Self> {
        let cfg = Self { radius, nodes };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_radius(radius: f64) -> Result<Self> {
        Self::new(radius, DEFAULT_NODES)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.radius.is_finite() && self.radius > 0.0) {
            return Err(Error::InvalidContour(format!(
                "radius {} must be positive",
                self.radius
            )));
        }
        if self.nodes < 16 || !self.nodes.is_power_of_two() {
            return Err(Error::InvalidContour(format!(
                "node count {} must be a power of two >= 16",
                self.nodes
            )));
        }
        Ok(())
    }

    /// Rejects radii within `1e-6` of any of the given pole moduli.
    pub fn avoid_poles(&self, pole_radii: &[f64]) -> Result<()> {
        if let Some(p) = pole_radii.iter().find(|&&p| (p - self.radius).abs() < 1e-6) {
            return Err(Error::InvalidContour(format!(
                "radius {} within 1e-6 of pole radius {p}",
                self.radius
            )));
        }
        Ok(())
    }
}

/// Number of trigonometric terms `K` and basis truncation `T`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TruncationConfig {
    pub k: usize,
    pub t: usize,
}

impl TruncationConfig {
    pub fn new(k: usize, t: usize) -> Result<Self> {
        check_even(t)?;
        Ok(Self { k, t })
    }
}

/// `(1/2πi) ∮ g(ζ) dζ` together with the halving error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Quadrature {
    pub value: ComplexValue,
    pub error_estimate: f64,
    /// `r · mean |g|`, the scale of the rounding floor
    pub mass: f64,
    pub nodes: usize,
}

/// Sum in a fixed binary tree order.
pub fn pairwise_sum(values: &[ComplexValue]) -> ComplexValue {
    match values.len() {
        0 => ComplexValue::new(0.0, 0.0),
        1 => values[0],
        2 => values[0] + values[1],
        n => {
            let (l, r) = values.split_at(n / 2);
            pairwise_sum(l) + pairwise_sum(r)
        }
    }
}

/// `radius · e^{2πij/n}` for `n` divisible by 8, built from an angle in
/// `[0, π/4]` so that symmetric nodes are exact reflections of each other.
fn node(radius: f64, j: usize, n: usize) -> ComplexValue {
    let j = j % n;
    let eighth = n / 8;
    let octant = j / eighth;
    let rem = j % eighth;
    // angle within the octant, measured from the nearer axis or diagonal
    let (m, mirrored) = if octant.is_multiple_of(2) {
        (rem, false)
    } else {
        (eighth - rem, true)
    };
    let phi = 2.0 * PI * m as f64 / n as f64;
    let (s, c) = if m == eighth {
        (FRAC_1_SQRT_2, FRAC_1_SQRT_2)
    } else {
        phi.sin_cos()
    };
    let (mut x, mut y) = if mirrored { (s, c) } else { (c, s) };
    // rotate by quarter turns
    for _ in 0..octant / 2 {
        (x, y) = (-y, x);
    }
    ComplexValue::new(radius * x, radius * y)
}

/// `g(ζ_j) ζ_j` at the given nodes of an `n`-point circle.
fn sample<G>(
    g: &G,
    radius: f64,
    n: usize,
    indices: impl Iterator<Item = usize>,
) -> Result<Vec<ComplexValue>>
where
    G: Fn(ComplexValue) -> Result<ComplexValue>,
{
    let mut out = Vec::new();
    for j in indices {
        let zeta = node(radius, j, n);
        let v = g(zeta)? * zeta;
        if !v.is_finite() {
            return Err(Error::NonFiniteIntegrand { node: j, zeta });
        }
        out.push(v);
    }
    Ok(out)
}

fn estimate(samples: &[ComplexValue]) -> Quadrature {
    let n = samples.len();
    let full = pairwise_sum(samples) / n as f64;
    let halves: Vec<ComplexValue> = samples.iter().step_by(2).copied().collect();
    let half = pairwise_sum(&halves) / (n / 2) as f64;
    let mass = samples.iter().map(|v| v.norm()).sum::<f64>() / n as f64;
    Quadrature {
        value: full,
        error_estimate: (full - half).norm(),
        mass,
        nodes: n,
    }
}

impl Quadrature {
    fn accepted(&self, tol: f64) -> bool {
        self.error_estimate <= tol * self.value.norm().max(self.mass)
    }
}

/// Trapezoidal rule with exactly `cfg.nodes` nodes; no convergence test.
pub fn circle_quadrature_fixed<G>(g: G, cfg: &ContourConfig) -> Result<Quadrature>
where
    G: Fn(ComplexValue) -> ComplexValue,
{
    try_circle_quadrature_fixed(|z| Ok(g(z)), cfg)
}

pub fn try_circle_quadrature_fixed<G>(g: G, cfg: &ContourConfig) -> Result<Quadrature>
where
    G: Fn(ComplexValue) -> Result<ComplexValue>,
{
    cfg.validate()?;
    let samples = sample(&g, cfg.radius, cfg.nodes, 0..cfg.nodes)?;
    Ok(estimate(&samples))
}

/// `(1/2πi) ∮_{|ζ|=r} g(ζ) dζ`, starting at `cfg.nodes` and doubling until
/// the `N` vs `N/2` estimate is within `tol` (relative to the larger of the
/// result and the integrand mass), or failing with [`Error::NonConverged`]
/// beyond [`MAX_NODES`].
pub fn circle_quadrature<G>(g: G, cfg: &ContourConfig, tol: f64) -> Result<Quadrature>
where
    G: Fn(ComplexValue) -> ComplexValue,
{
    try_circle_quadrature(|z| Ok(g(z)), cfg, tol)
}

/// Fallible-integrand form of [`circle_quadrature`].
pub fn try_circle_quadrature<G>(g: G, cfg: &ContourConfig, tol: f64) -> Result<Quadrature>
where
    G: Fn(ComplexValue) -> Result<ComplexValue>,
{
    cfg.validate()?;
    let mut n = cfg.nodes;
    let mut samples = sample(&g, cfg.radius, n, 0..n)?;
    loop {
        let q = estimate(&samples);
        if q.accepted(tol) {
            return Ok(q);
        }
        if n >= MAX_NODES {
            return Err(Error::NonConverged {
                estimate: q.error_estimate,
                allowed: tol * q.value.norm().max(q.mass),
                nodes: n,
            });
        }
        // old nodes sit at the even positions of the refined circle
        let fresh = sample(&g, cfg.radius, 2 * n, (0..n).map(|j| 2 * j + 1))?;
        samples = samples
            .into_iter()
            .zip(fresh)
            .flat_map(|(a, b)| [a, b])
            .collect();
        n *= 2;
    }
}

fn laplace_tail(f: &EntireFunctionModel, modulus: f64) -> f64 {
    let d = f.derivs_at_0();
    let len = d.len();
    let last = d[len - 1].norm();
    let second = if len >= 2 { d[len - 2].norm() } else { 0.0 };
    let m = last.max(second);
    if m == 0.0 {
        return 0.0;
    }
    let q = f.growth_bound() / modulus;
    if q >= 1.0 {
        return f64::INFINITY;
    }
    (m.ln() - len as f64 * modulus.ln()).exp() * q / (1.0 - q)
}

/// `F(ζ) = Σ_k f^{(k)}(0) ζ^{-k-1}`, valid for `|ζ|` above the type.
pub fn laplace_eval(f: &EntireFunctionModel, zeta: ComplexValue) -> Result<ComplexValue> {
    let modulus = zeta.norm();
    let tau = f.type_for_checks();
    if modulus <= tau {
        return Err(Error::InsideTypeDisk { modulus, tau });
    }
    let w = 1.0 / zeta;
    let d = f.derivs_at_0();
    let mut acc = ComplexValue::new(0.0, 0.0);
    let mut scale = 0.0_f64;
    let wn = w.norm();
    for a in d.iter().rev() {
        acc = acc * w + a;
        scale = scale * wn + a.norm();
    }
    let value = acc * w;
    let scale = scale * wn;
    let tail = laplace_tail(f, modulus);
    if tail > LAPLACE_TAIL_TOL * scale.max(value.norm()) && tail > 0.0 {
        return Err(Error::TailTooLarge { tail, modulus });
    }
    Ok(value)
}

/// `(1/2πi) ∮ ζ^t e^{ζ·point} F(ζ) dζ`, which reproduces `f^{(t)}(point)`.
pub fn derivative_via_contour(
    f: &EntireFunctionModel,
    t: usize,
    point: u8,
    cfg: &ContourConfig,
) -> Result<Quadrature> {
    let tau = f.type_for_checks();
    if cfg.radius <= tau {
        return Err(Error::InsideTypeDisk {
            modulus: cfg.radius,
            tau,
        });
    }
    let shift = point as f64;
    try_circle_quadrature(
        |zeta| Ok(zeta.powu(t as u32) * (zeta * shift).exp() * laplace_eval(f, zeta)?),
        cfg,
        DEFAULT_TOL,
    )
}

/// Pieces of an integral representation of a basis polynomial.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegralFormula {
    /// polynomial part (zero for `Λ_{t,1}`, `z^t/t!` for `Λ_{t,0}`)
    pub polynomial: ComplexValue,
    pub trigonometric: ComplexValue,
    /// signed contour contribution
    pub contour: ComplexValue,
    pub value: ComplexValue,
    pub radius: f64,
    pub nodes: usize,
    pub error_estimate: f64,
}

/// `(2K+1)π/2`.
pub fn formula_radius(k: usize) -> f64 {
    (2 * k + 1) as f64 * PI / 2.0
}

fn parity_sign(t: usize) -> f64 {
    if (t / 2).is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// `(-1)^{t/2} (2/π^{t+1}) Σ_{k=1}^{K} w_k sin(kπz) / k^{t+1}` with
/// `w_k = (-1)^{k+1}` when `alternating`, else 1.
pub fn trig_sum(t: usize, z: ComplexValue, k_max: usize, alternating: bool) -> ComplexValue {
    let lead = parity_sign(t) * 2.0 / PI.powi(t as i32 + 1);
    let mut acc = ComplexValue::new(0.0, 0.0);
    for k in 1..=k_max {
        let w = if alternating && k % 2 == 0 { -1.0 } else { 1.0 };
        let kf = k as f64;
        acc += (z * (kf * PI)).sin() * (w / kf.powi(t as i32 + 1));
    }
    acc * lead
}

fn formula_config(k: usize, nodes: usize) -> Result<ContourConfig> {
    ContourConfig::new(formula_radius(k), nodes)
}

/// `Λ_{t,1}(z)` as a `K`-term sine sum plus `(1/2πi)∮ ζ^{-t-1} sinh(ζz)/sinh(ζ) dζ`
/// over `|ζ| = (2K+1)π/2`.
pub fn lambda_t1_integral(
    t: usize,
    z: ComplexValue,
    trunc: &TruncationConfig,
    nodes: usize,
) -> Result<IntegralFormula> {
    check_even(t)?;
    let cfg = formula_config(trunc.k, nodes)?;
    let q = try_circle_quadrature(
        |zeta| Ok(zeta.powi(-(t as i32) - 1) * m1_closed(zeta, z)?),
        &cfg,
        DEFAULT_TOL,
    )?;
    let trigonometric = trig_sum(t, z, trunc.k, true);
    Ok(IntegralFormula {
        polynomial: ComplexValue::new(0.0, 0.0),
        trigonometric,
        contour: q.value,
        value: trigonometric + q.value,
        radius: cfg.radius,
        nodes: q.nodes,
        error_estimate: q.error_estimate,
    })
}

/// `sinh(ζz) coth(ζ)`
pub(crate) fn sinh_coth(zeta: ComplexValue, z: ComplexValue) -> ComplexValue {
    (zeta * z).sinh() * zeta.cosh() / zeta.sinh()
}

/// `Λ_{t,0}(z)` as `z^t/t!` plus a `K`-term sine sum minus
/// `(1/2πi)∮ ζ^{-t-1} sinh(ζz) coth(ζ) dζ` over `|ζ| = (2K+1)π/2`.
pub fn lambda_t0_integral(
    t: usize,
    z: ComplexValue,
    trunc: &TruncationConfig,
    nodes: usize,
) -> Result<IntegralFormula> {
    check_even(t)?;
    let cfg = formula_config(trunc.k, nodes)?;
    let q = circle_quadrature(
        |zeta| zeta.powi(-(t as i32) - 1) * sinh_coth(zeta, z),
        &cfg,
        DEFAULT_TOL,
    )?;
    let mut polynomial = ComplexValue::new(1.0, 0.0);
    for j in 1..=t {
        polynomial *= z / j as f64;
    }
    let trigonometric = trig_sum(t, z, trunc.k, false);
    Ok(IntegralFormula {
        polynomial,
        trigonometric,
        contour: -q.value,
        value: polynomial + trigonometric - q.value,
        radius: cfg.radius,
        nodes: q.nodes,
        error_estimate: q.error_estimate,
    })
}

/// Worst observed ratio `lhs / rhs` for each inequality.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub t: usize,
    pub r: f64,
    pub samples: usize,
    /// `|Λ_{t,1} - (-1)^{t/2}(2/π^{t+1}) sin(πz)| ≤ (2/3π)^t e^{3πr/2}`
    pub lambda1_sine: f64,
    /// `|Λ_{t,1}|_r ≤ 2 π^{-t} e^{3πr/2}`
    pub lambda1_sup: f64,
    /// `|Λ_{t,0} - (-1)^{t/2}(2/π^{t+1}) sin(πz)| ≤ e^{3π/2}(2/3π)^t e^{3πr/2}`
    pub lambda0_sine: f64,
    /// `|Λ_{t,0}|_r ≤ 2 e^{3π/2} π^{-t} e^{3πr/2}`
    pub lambda0_sup: f64,
    /// smallest `rhs - lhs` over all points and inequalities
    pub min_slack: f64,
}

/// Checks the sine-approximation and sup-norm bounds for `Λ_{t,1}` and
/// `Λ_{t,0}` at `samples` deterministic pseudo-random points of `|z| ≤ r`
/// (one in four on the boundary circle).
pub fn bound_check(t: usize, r: f64, samples: usize) -> Result<BoundReport> {
    check_even(t)?;
    if !(r.is_finite() && r > 0.0) {
        return Err(Error::InvalidContour(format!(
            "radius {r} must be positive"
        )));
    }
    let fb = float_basis(t)?;
    let growth = (1.5 * PI * r).exp();
    let shift = (1.5 * PI).exp();
    let ti = t as i32;
    let sine_rhs = (2.0 / (3.0 * PI)).powi(ti) * growth;
    let sup_rhs = 2.0 * PI.powi(-ti) * growth;
    let lead = parity_sign(t) * 2.0 / PI.powi(ti + 1);

    let mut rng = ChaCha8Rng::seed_from_u64(0x4c1d_0000 ^ (t as u64) ^ r.to_bits());
    let mut report = BoundReport {
        t,
        r,
        samples,
        lambda1_sine: 0.0,
        lambda1_sup: 0.0,
        lambda0_sine: 0.0,
        lambda0_sup: 0.0,
        min_slack: f64::INFINITY,
    };
    for i in 0..samples {
        let rho = if i % 4 == 0 {
            r
        } else {
            r * rng.gen::<f64>().sqrt()
        };
        let theta = 2.0 * PI * rng.gen::<f64>();
        let z = ComplexValue::from_polar(rho, theta);
        let l1 = fb.lambda1(t, z);
        let l0 = fb.lambda0(t, z);
        let s = (z * PI).sin() * lead;
        let checks = [
            ((l1 - s).norm(), sine_rhs, "lambda1 sine"),
            (l1.norm(), sup_rhs, "lambda1 sup"),
            ((l0 - s).norm(), shift * sine_rhs, "lambda0 sine"),
            (l0.norm(), shift * sup_rhs, "lambda0 sup"),
        ];
        for (idx, &(lhs, rhs, which)) in checks.iter().enumerate() {
            if lhs.is_nan() || lhs > rhs {
                return Err(Error::BoundViolated {
                    t,
                    z,
                    lhs,
                    rhs,
                    which,
                });
            }
            let ratio = lhs / rhs;
            let slot = match idx {
                0 => &mut report.lambda1_sine,
                1 => &mut report.lambda1_sup,
                2 => &mut report.lambda0_sine,
                _ => &mut report.lambda0_sup,
            };
            *slot = slot.max(ratio);
            report.min_slack = report.min_slack.min(rhs - lhs);
        }
    }
    Ok(report)
}
