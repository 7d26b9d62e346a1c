//! Lidstone basis polynomials `Λ_{t,1}` and `Λ_{t,0}` for even `t`.
//!
//! Three independent generators are provided:
//!
//! * [`lambda_recurrence`]: the triangular recurrence obtained by expanding
//!   `z^{t+1}` in the basis,
//! * [`lambda_ode`]: double antidifferentiation of `Λ_{t-2,1}` with the
//!   boundary conditions `Λ_{t,1}(0) = Λ_{t,1}(1) = 0`,
//! * [`lambda_bernoulli`]: the closed form through `B_{t+1}((1 + z) / 2)`.
//!
//! [`BasisTable`] runs all three and refuses to hand out an entry unless they
//! agree coefficient for coefficient.

use std::fmt::Write as _;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::bernoulli::bernoulli_step;
use crate::error::{Error, Result};
use crate::poly::{factorial, horner_complex, rat, ComplexValue, Rational, RationalPolynomial};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Recurrence,
    Ode,
    Bernoulli,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Recurrence => "recurrence",
            Method::Ode => "ode",
            Method::Bernoulli => "bernoulli",
        }
    }
}

/// The pair `(Λ_{t,0}, Λ_{t,1})` at an even index `t`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LidstoneBasisEntry {
    pub t: usize,
    pub lambda1: RationalPolynomial,
    pub lambda0: RationalPolynomial,
    pub method: Method,
}

pub(crate) fn check_even(t: usize) -> Result<()> {
    if t % 2 == 1 {
        return Err(Error::OddIndex(t as i64));
    }
    Ok(())
}

/// Validates a signed index coming from user input.
pub fn check_index(t: i64) -> Result<usize> {
    if t < 0 || t % 2 != 0 {
        return Err(Error::OddIndex(t));
    }
    Ok(t as usize)
}

fn inv_factorial(n: usize) -> Rational {
    Rational::new(BigInt::one(), factorial(n))
}

/// `1 - z`.
pub fn reflection() -> RationalPolynomial {
    RationalPolynomial::linear(Rational::one(), -Rational::one())
}

/// Given `Λ_{0,1}, ..., Λ_{t-2,1}`, returns `Λ_{t,1}` from the recurrence.
fn recurrence_step(previous: &[RationalPolynomial], t: usize) -> RationalPolynomial {
    let mut acc = RationalPolynomial::monomial(inv_factorial(t + 1), t + 1);
    for (j, lam) in previous.iter().enumerate() {
        let tau = 2 * j;
        acc = &acc - &lam.scale(&inv_factorial(t - tau + 1));
    }
    acc
}

/// Given `Λ_{t-2,1}`, integrates twice and pins the values at 0 and 1.
fn ode_step(previous: &RationalPolynomial) -> RationalPolynomial {
    // zero constant terms make the value at 0 vanish; subtract P(1) z
    let p = previous.antiderivative().antiderivative();
    let at_one = p.eval(&Rational::one());
    &p - &RationalPolynomial::monomial(at_one, 1)
}

fn bernoulli_form(b: &RationalPolynomial, t: usize) -> RationalPolynomial {
    let half_shift = RationalPolynomial::linear(rat(1, 2), rat(1, 2));
    let scale = Rational::new(BigInt::one() << (t + 1), factorial(t + 1));
    b.compose(&half_shift).scale(&scale)
}

/// `Λ_{t,1}` by the recurrence.
pub fn lambda_recurrence(t: usize) -> Result<RationalPolynomial> {
    check_even(t)?;
    let mut chain: Vec<RationalPolynomial> = Vec::with_capacity(t / 2 + 1);
    for s in (0..=t).step_by(2) {
        let next = recurrence_step(&chain, s);
        chain.push(next);
    }
    Ok(chain.pop().expect("nonempty"))
}

/// `Λ_{t,1}` by the boundary value problem `Λ'' = Λ_{t-2,1}`.
pub fn lambda_ode(t: usize) -> Result<RationalPolynomial> {
    check_even(t)?;
    let mut lam = RationalPolynomial::identity();
    for _ in (2..=t).step_by(2) {
        lam = ode_step(&lam);
    }
    Ok(lam)
}

/// `Λ_{t,1}(z) = 2^{t+1} / (t+1)! · B_{t+1}((1+z)/2)`.
pub fn lambda_bernoulli(t: usize) -> Result<RationalPolynomial> {
    check_even(t)?;
    let b = crate::bernoulli::bernoulli_polynomial(t + 1);
    Ok(bernoulli_form(&b, t))
}

/// `Λ_{t,0}(z) = Λ_{t,1}(1 - z)`.
pub fn lambda0(t: usize) -> Result<RationalPolynomial> {
    Ok(lambda_recurrence(t)?.compose(&reflection()))
}

/// Cross-validated basis entries for `t = 0, 2, ..., T`.
///
/// The table only grows; extending it reuses every entry already built.
#[derive(Debug, Clone)]
pub struct BasisTable {
    entries: Vec<LidstoneBasisEntry>,
    bernoulli: Vec<RationalPolynomial>,
}

impl Default for BasisTable {
    fn default() -> Self {
        Self::new()
    }
}

impl BasisTable {
    pub fn new() -> Self {
        Self {
            entries: Vec::new(),
            bernoulli: vec![RationalPolynomial::one()],
        }
    }

    pub fn build(max_t: usize) -> Result<Self> {
        let mut table = Self::new();
        table.extend_to(max_t)?;
        Ok(table)
    }

    /// Largest index present, or `None` for an empty table.
    pub fn max_t(&self) -> Option<usize> {
        self.entries.last().map(|e| e.t)
    }

    pub fn entries(&self) -> &[LidstoneBasisEntry] {
        &self.entries
    }

    pub fn get(&self, t: usize) -> Option<&LidstoneBasisEntry> {
        if t % 2 == 1 {
            return None;
        }
        self.entries.get(t / 2)
    }

    pub fn lambda1(&self, t: usize) -> Option<&RationalPolynomial> {
        self.get(t).map(|e| &e.lambda1)
    }

    pub fn lambda0(&self, t: usize) -> Option<&RationalPolynomial> {
        self.get(t).map(|e| &e.lambda0)
    }

    /// Extends the table through index `max_t`, generating the new entries
    /// with all three methods in parallel and comparing them exactly.
    pub fn extend_to(&mut self, max_t: usize) -> Result<()> {
        check_even(max_t)?;
        let start = self.entries.len() * 2;
        if start > max_t {
            return Ok(());
        }
        let known: Vec<RationalPolynomial> =
            self.entries.iter().map(|e| e.lambda1.clone()).collect();
        let bernoulli = &mut self.bernoulli;

        let (by_recurrence, by_ode, by_bernoulli) = std::thread::scope(|s| {
            let rec = s.spawn(|| {
                let mut chain = known.clone();
                for t in (start..=max_t).step_by(2) {
                    let next = recurrence_step(&chain, t);
                    chain.push(next);
                }
                chain.split_off(start / 2)
            });
            let ode = s.spawn(|| {
                let mut out = Vec::new();
                let mut last = known.last().cloned();
                for _ in (start..=max_t).step_by(2) {
                    let next = match &last {
                        None => RationalPolynomial::identity(),
                        Some(prev) => ode_step(prev),
                    };
                    out.push(next.clone());
                    last = Some(next);
                }
                out
            });
            let ber = s.spawn(move || {
                while bernoulli.len() < max_t + 2 {
                    let n = bernoulli.len();
                    let next = bernoulli_step(&bernoulli[n - 1], n);
                    bernoulli.push(next);
                }
                (start..=max_t)
                    .step_by(2)
                    .map(|t| bernoulli_form(&bernoulli[t + 1], t))
                    .collect::<Vec<_>>()
            });
            (
                rec.join().expect("recurrence worker"),
                ode.join().expect("ode worker"),
                ber.join().expect("bernoulli worker"),
            )
        });

        let reflect = reflection();
        for (i, ((r, o), b)) in by_recurrence
            .into_iter()
            .zip(by_ode)
            .zip(by_bernoulli)
            .enumerate()
        {
            let t = start + 2 * i;
            if r != o {
                return Err(Error::CrossMethodMismatch {
                    t,
                    left: Method::Recurrence.name(),
                    right: Method::Ode.name(),
                });
            }
            if r != b {
                return Err(Error::CrossMethodMismatch {
                    t,
                    left: Method::Recurrence.name(),
                    right: Method::Bernoulli.name(),
                });
            }
            let lambda0 = r.compose(&reflect);
            self.entries.push(LidstoneBasisEntry {
                t,
                lambda1: r,
                lambda0,
                method: Method::Recurrence,
            });
        }
        Ok(())
    }
}

/// Entries for `t = 0, 2, ..., max_t`, all three generators agreeing.
pub fn basis_table(max_t: usize) -> Result<Vec<LidstoneBasisEntry>> {
    Ok(BasisTable::build(max_t)?.entries)
}

/// Double precision copies of the basis, each coefficient rounded once
/// from its exact value.
#[derive(Debug, Clone)]
pub struct FloatBasis {
    lambda1: Vec<Vec<f64>>,
    lambda0: Vec<Vec<f64>>,
}

impl FloatBasis {
    pub fn from_table(table: &BasisTable) -> Self {
        Self {
            lambda1: table
                .entries
                .iter()
                .map(|e| e.lambda1.to_f64_coeffs())
                .collect(),
            lambda0: table
                .entries
                .iter()
                .map(|e| e.lambda0.to_f64_coeffs())
                .collect(),
        }
    }

    pub fn max_t(&self) -> usize {
        (self.lambda1.len().max(1) - 1) * 2
    }

    /// `Λ_{t,1}(z)`; `t` must be even and within the table.
    pub fn lambda1(&self, t: usize, z: ComplexValue) -> ComplexValue {
        horner_complex(&self.lambda1[t / 2], z)
    }

    /// `Λ_{t,0}(z)`; `t` must be even and within the table.
    pub fn lambda0(&self, t: usize, z: ComplexValue) -> ComplexValue {
        horner_complex(&self.lambda0[t / 2], z)
    }
}

struct SharedBasis {
    exact: BasisTable,
    float: Option<Arc<FloatBasis>>,
}

fn shared() -> &'static Mutex<SharedBasis> {
    static SHARED: OnceLock<Mutex<SharedBasis>> = OnceLock::new();
    SHARED.get_or_init(|| {
        Mutex::new(SharedBasis {
            exact: BasisTable::new(),
            float: None,
        })
    })
}

/// Process-wide exact table, extended on demand.
pub fn shared_table(max_t: usize) -> Result<BasisTable> {
    let mut guard = shared().lock().unwrap_or_else(|p| p.into_inner());
    guard.exact.extend_to(max_t)?;
    Ok(guard.exact.clone())
}

/// Process-wide floating point basis covering at least `max_t`.
pub fn float_basis(max_t: usize) -> Result<Arc<FloatBasis>> {
    let max_t = max_t + max_t % 2;
    let mut guard = shared().lock().unwrap_or_else(|p| p.into_inner());
    if let Some(fb) = &guard.float {
        if fb.max_t() >= max_t {
            return Ok(Arc::clone(fb));
        }
    }
    guard.exact.extend_to(max_t)?;
    let fb = Arc::new(FloatBasis::from_table(&guard.exact));
    guard.float = Some(Arc::clone(&fb));
    Ok(fb)
}

fn latex_fraction(c: &Rational) -> String {
    if c.denom().is_one() {
        c.numer().to_string()
    } else {
        format!("\\frac{{{}}}{{{}}}", c.numer(), c.denom())
    }
}

fn latex_power(i: usize) -> String {
    match i {
        0 => String::new(),
        1 => "z".to_string(),
        _ => format!("z^{{{i}}}"),
    }
}

/// Terms highest degree first, e.g. `\frac{1}{6} z^{3} - \frac{1}{6} z`.
pub fn latex_polynomial(p: &RationalPolynomial) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, c) in p.coeffs().iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let sign = if c.is_negative() { "-" } else { "+" };
        if out.is_empty() {
            if c.is_negative() {
                out.push('-');
            }
        } else {
            let _ = write!(out, " {sign} ");
        }
        let mag = c.abs();
        let power = latex_power(i);
        if mag.is_one() && i > 0 {
            out.push_str(&power);
        } else if i == 0 {
            out.push_str(&latex_fraction(&mag));
        } else {
            let _ = write!(out, "{} {}", latex_fraction(&mag), power);
        }
    }
    out
}

/// Pulls the positive content out: `p = c · q` with `q` integral and primitive.
fn content_split(p: &RationalPolynomial) -> (Rational, Vec<BigInt>) {
    let den_lcm = p
        .coeffs()
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = p
        .coeffs()
        .iter()
        .map(|c| (c * Rational::from_integer(den_lcm.clone())).to_integer())
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if g.is_zero() {
        return (Rational::one(), ints);
    }
    let prim = ints.iter().map(|c| c / &g).collect();
    (Rational::new(g, den_lcm), prim)
}

/// Both the expanded form and the content-factored form
/// `\frac{1}{d}\left( ... \right)` with an integral primitive polynomial.
pub fn latex_factored(p: &RationalPolynomial) -> String {
    let expanded = latex_polynomial(p);
    let (content, prim) = content_split(p);
    if content.is_one() || p.degree() < 1 {
        return expanded;
    }
    let q = RationalPolynomial::new(prim.into_iter().map(Rational::from_integer).collect());
    format!(
        "{expanded} = {}\\left({}\\right)",
        latex_fraction(&content),
        latex_polynomial(&q)
    )
}

/// One display line per polynomial of the entry.
pub fn latex_entry(entry: &LidstoneBasisEntry) -> String {
    format!(
        "\\Lambda_{{{t},1}}(z) = {}\n\\Lambda_{{{t},0}}(z) = {}",
        latex_factored(&entry.lambda1),
        latex_factored(&entry.lambda0),
        t = entry.t
    )
}
