//! Exact univariate polynomials over the rationals.
//!
//! Coefficients are stored in ascending order of degree and are always kept
//! in canonical form: trailing zero coefficients are stripped and every
//! coefficient is a reduced fraction with a positive denominator.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Arbitrary precision rational number in lowest terms.
pub type Rational = BigRational;

/// Double precision complex number.
pub type ComplexValue = Complex64;

/// Builds the rational `num / den`.
///
/// Panics when `den` is zero.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `n!` as an exact integer.
pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Univariate polynomial with exact rational coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct RationalPolynomial {
    coeffs: Vec<Rational>,
}

impl RationalPolynomial {
    /// Creates a polynomial from coefficients in ascending degree order.
    /// Trailing zeros are removed.
    pub fn new(coeffs: Vec<Rational>) -> Self {
        let mut p = Self { coeffs };
        p.normalize();
        p
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// The polynomial `z`.
    pub fn identity() -> Self {
        Self::monomial(Rational::one(), 1)
    }

    /// `c * z^n`.
    pub fn monomial(c: Rational, n: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); n + 1];
        coeffs[n] = c;
        Self::new(coeffs)
    }

    /// `a + b z`.
    pub fn linear(a: Rational, b: Rational) -> Self {
        Self::new(vec![a, b])
    }

    pub fn from_integers(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| rat_int(c)).collect())
    }

    fn normalize(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Coefficient of `z^n`, zero beyond the degree.
    pub fn coeff(&self, n: usize) -> Rational {
        self.coeffs.get(n).cloned().unwrap_or_else(Rational::zero)
    }

    /// Degree, with `-1` for the zero polynomial.
    pub fn degree(&self) -> i64 {
        self.coeffs.len() as i64 - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading_coefficient(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// `self(other(z))`, evaluated by Horner's scheme in polynomial arithmetic.
    pub fn compose(&self, other: &Self) -> Self {
        let mut acc = Self::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * other) + &Self::constant(c.clone());
        }
        acc
    }

    /// Exact `k`-th derivative.
    pub fn differentiate(&self, k: usize) -> Self {
        if k == 0 {
            return self.clone();
        }
        if k >= self.coeffs.len() {
            return Self::zero();
        }
        let coeffs = self.coeffs[k..]
            .iter()
            .enumerate()
            .map(|(i, c)| {
                // falling factorial (i + k)(i + k - 1)...(i + 1)
                let n = i + k;
                let ff = ((n - k + 1)..=n).fold(BigInt::one(), |acc, j| acc * BigInt::from(j));
                c * Rational::from_integer(ff)
            })
            .collect();
        Self::new(coeffs)
    }

    /// Antiderivative with zero constant term.
    pub fn antiderivative(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(Rational::zero());
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs.push(c / rat_int(i as i64 + 1));
        }
        Self::new(coeffs)
    }

    /// Exact value of the integral over `[0, 1]`.
    pub fn integral_unit_interval(&self) -> Rational {
        self.coeffs
            .iter()
            .enumerate()
            .fold(Rational::zero(), |acc, (i, c)| {
                acc + c / rat_int(i as i64 + 1)
            })
    }

    /// Exact evaluation by Horner's scheme.
    pub fn eval(&self, z: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * z + c)
    }

    /// Double precision evaluation; coefficients are rounded once.
    pub fn eval_complex(&self, z: ComplexValue) -> ComplexValue {
        horner_complex(&self.to_f64_coeffs(), z)
    }

    pub fn to_f64_coeffs(&self) -> Vec<f64> {
        self.coeffs.iter().map(rational_to_f64).collect()
    }

    /// Sum of absolute values of the coefficients.
    pub fn l1_norm(&self) -> Rational {
        self.coeffs
            .iter()
            .fold(Rational::zero(), |acc, c| acc + c.abs())
    }

    /// True when only odd powers carry nonzero coefficients.
    pub fn is_odd(&self) -> bool {
        self.coeffs
            .iter()
            .enumerate()
            .all(|(i, c)| i % 2 == 1 || c.is_zero())
    }

    /// Parses the JSON encoding `{"coeffs": [["num","den"], ...]}`.
    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Encoding(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("polynomial encoding is infallible")
    }
}

/// Horner evaluation with double precision coefficients.
pub fn horner_complex(coeffs: &[f64], z: ComplexValue) -> ComplexValue {
    coeffs
        .iter()
        .rev()
        .fold(ComplexValue::new(0.0, 0.0), |acc, &c| acc * z + c)
}

impl Add for &RationalPolynomial {
    type Output = RationalPolynomial;

    fn add(self, rhs: Self) -> RationalPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect();
        RationalPolynomial::new(coeffs)
    }
}

impl Sub for &RationalPolynomial {
    type Output = RationalPolynomial;

    fn sub(self, rhs: Self) -> RationalPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect();
        RationalPolynomial::new(coeffs)
    }
}

impl Mul for &RationalPolynomial {
    type Output = RationalPolynomial;

    fn mul(self, rhs: Self) -> RationalPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return RationalPolynomial::zero();
        }
        let mut coeffs = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        RationalPolynomial::new(coeffs)
    }
}

impl Neg for &RationalPolynomial {
    type Output = RationalPolynomial;

    fn neg(self) -> RationalPolynomial {
        RationalPolynomial {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr for RationalPolynomial {
            type Output = RationalPolynomial;

            fn $method(self, rhs: Self) -> RationalPolynomial {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for RationalPolynomial {
    type Output = RationalPolynomial;

    fn neg(self) -> RationalPolynomial {
        -&self
    }
}

impl fmt::Debug for RationalPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalPolynomial({self})")
    }
}

/// Human readable form, highest degree first, e.g. `1/6 z^3 - 1/6 z`.
impl fmt::Display for RationalPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            first = false;
            let unit = mag.is_one();
            match (i, unit) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "z")?,
                (1, false) => write!(f, "{mag} z")?,
                (_, true) => write!(f, "z^{i}")?,
                (_, false) => write!(f, "{mag} z^{i}")?,
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct PolynomialWire {
    coeffs: Vec<(String, String)>,
}

impl Serialize for RationalPolynomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        PolynomialWire {
            coeffs: self.coeffs.iter().map(wire_pair).collect(),
        }
        .serialize(serializer)
    }
}

fn parse_rational<E: serde::de::Error>(num: &str, den: &str) -> std::result::Result<Rational, E> {
    let n: BigInt = num
        .trim()
        .parse()
        .map_err(|_| E::custom(format!("bad numerator {num:?}")))?;
    let d: BigInt = den
        .trim()
        .parse()
        .map_err(|_| E::custom(format!("bad denominator {den:?}")))?;
    if d.is_zero() {
        return Err(E::custom("zero denominator"));
    }
    Ok(Rational::new(n, d))
}

fn wire_pair(c: &Rational) -> (String, String) {
    (c.numer().to_string(), c.denom().to_string())
}

impl<'de> Deserialize<'de> for RationalPolynomial {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let wire = PolynomialWire::deserialize(deserializer)?;
        let coeffs = wire
            .coeffs
            .iter()
            .map(|(n, d)| parse_rational(n, d))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(RationalPolynomial::new(coeffs))
    }
}

/// `#[serde(with = ...)]` support encoding a rational as `["num", "den"]`.
pub mod rational_serde {
    use super::*;

    pub fn serialize<S: Serializer>(c: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        wire_pair(c).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let (n, den) = <(String, String)>::deserialize(d)?;
        parse_rational(&n, &den)
    }
}

/// As [`rational_serde`] for maps keyed by derivative order.
pub mod rational_map_serde {
    use std::collections::BTreeMap;

    use super::*;

    pub fn serialize<S: Serializer>(
        m: &BTreeMap<usize, Rational>,
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        m.iter()
            .map(|(k, v)| (*k, wire_pair(v)))
            .collect::<BTreeMap<_, _>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<BTreeMap<usize, Rational>, D::Error> {
        BTreeMap::<usize, (String, String)>::deserialize(d)?
            .into_iter()
            .map(|(k, (n, den))| Ok((k, parse_rational(&n, &den)?)))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[(i64, i64)]) -> RationalPolynomial {
        RationalPolynomial::new(c.iter().map(|&(n, d)| rat(n, d)).collect())
    }

    #[test]
    fn zero_has_degree_minus_one() {
        assert_eq!(RationalPolynomial::zero().degree(), -1);
        assert_eq!(RationalPolynomial::from_integers(&[0, 0, 0]).degree(), -1);
        assert_eq!(RationalPolynomial::from_integers(&[1, 2, 0]).degree(), 1);
    }

    #[test]
    fn add_zero_is_identity() {
        let q = p(&[(1, 2), (0, 1), (-3, 7)]);
        assert_eq!(&q + &RationalPolynomial::zero(), q);
    }

    #[test]
    fn z_times_z() {
        let z = RationalPolynomial::identity();
        assert_eq!(&z * &z, RationalPolynomial::monomial(rat_int(1), 2));
    }

    #[test]
    fn compose_lambda21_with_reflection() {
        let l21 = p(&[(0, 1), (-1, 6), (0, 1), (1, 6)]);
        let reflect = RationalPolynomial::linear(rat_int(1), rat_int(-1));
        let expected = p(&[(0, 1), (-1, 3), (1, 2), (-1, 6)]);
        assert_eq!(l21.compose(&reflect), expected);
    }

    #[test]
    fn derivatives() {
        let z3 = RationalPolynomial::monomial(rat_int(1), 3);
        assert_eq!(
            z3.differentiate(1),
            RationalPolynomial::monomial(rat_int(3), 2)
        );
        let z2 = RationalPolynomial::monomial(rat_int(1), 2);
        assert!(z2.differentiate(5).is_zero());
        assert_eq!(z3.differentiate(3), RationalPolynomial::from_integers(&[6]));
    }

    #[test]
    fn evaluation() {
        let l21 = p(&[(0, 1), (-1, 6), (0, 1), (1, 6)]);
        assert_eq!(l21.eval(&rat_int(1)), rat_int(0));
        assert_eq!(l21.eval(&rat(1, 2)), rat(-1, 16));
        let v = l21.eval_complex(ComplexValue::new(0.5, 0.0));
        assert!((v.re + 1.0 / 16.0).abs() < 1e-16 && v.im == 0.0);
    }

    #[test]
    fn antiderivative_inverts_derivative() {
        let q = p(&[(0, 1), (2, 3), (-5, 4), (7, 9)]);
        assert_eq!(q.differentiate(1).antiderivative(), q);
        assert_eq!(q.antiderivative().differentiate(1), q);
    }

    #[test]
    fn json_encoding() {
        let q = p(&[(-1, 3), (0, 1), (7, 360)]);
        let s = q.to_json();
        assert_eq!(s, r#"{"coeffs":[["-1","3"],["0","1"],["7","360"]]}"#);
        assert_eq!(RationalPolynomial::from_json(&s).unwrap(), q);
        // non-canonical input is reduced
        let r = RationalPolynomial::from_json(r#"{"coeffs":[["2","-4"],["0","5"]]}"#).unwrap();
        assert_eq!(r, p(&[(-1, 2)]));
        assert!(RationalPolynomial::from_json(r#"{"coeffs":[["1","0"]]}"#).is_err());
        assert!(RationalPolynomial::from_json(r#"{"coeffs":[["x","1"]]}"#).is_err());
    }

    #[test]
    fn display() {
        let l41 = p(&[(0, 1), (7, 360), (0, 1), (-1, 36), (0, 1), (1, 120)]);
        assert_eq!(l41.to_string(), "1/120 z^5 - 1/36 z^3 + 7/360 z");
        assert_eq!(RationalPolynomial::zero().to_string(), "0");
        assert_eq!(p(&[(-1, 1), (0, 1), (1, 1)]).to_string(), "z^2 - 1");
    }

    #[test]
    fn l1_norm_and_parity() {
        let q = p(&[(0, 1), (-1, 6), (0, 1), (1, 6)]);
        assert_eq!(q.l1_norm(), rat(1, 3));
        assert!(q.is_odd());
        assert!(!p(&[(1, 1), (1, 1)]).is_odd());
    }
}
