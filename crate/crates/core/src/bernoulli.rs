//! Bernoulli polynomials from the Appell recurrence.
//!
//! `B_0 = 1` and, for `n >= 1`, `B_n` is the antiderivative of `n B_{n-1}`
//! whose constant term makes its integral over `[0, 1]` vanish.

use num_traits::Zero;

use crate::poly::{rat_int, Rational, RationalPolynomial};

/// `B_0, ..., B_n`.
pub fn bernoulli_polynomials(n: usize) -> Vec<RationalPolynomial> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(RationalPolynomial::one());
    for k in 1..=n {
        let next = bernoulli_step(&out[k - 1], k);
        out.push(next);
    }
    out
}

/// `B_n(z)`.
pub fn bernoulli_polynomial(n: usize) -> RationalPolynomial {
    bernoulli_polynomials(n).pop().expect("nonempty")
}

/// Given `B_{n-1}`, returns `B_n`.
pub(crate) fn bernoulli_step(prev: &RationalPolynomial, n: usize) -> RationalPolynomial {
    let primitive = prev.antiderivative().scale(&rat_int(n as i64));
    let mean = primitive.integral_unit_interval();
    if mean.is_zero() {
        return primitive;
    }
    &primitive - &RationalPolynomial::constant(mean)
}

/// Bernoulli number `B_n = B_n(0)`.
pub fn bernoulli_number(n: usize) -> Rational {
    bernoulli_polynomial(n).coeff(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    #[test]
    fn base_case() {
        assert_eq!(bernoulli_polynomial(0), RationalPolynomial::one());
    }

    #[test]
    fn first_polynomials() {
        assert_eq!(
            bernoulli_polynomial(1),
            RationalPolynomial::new(vec![rat(-1, 2), rat(1, 1)])
        );
        assert_eq!(
            bernoulli_polynomial(2),
            RationalPolynomial::new(vec![rat(1, 6), rat(-1, 1), rat(1, 1)])
        );
    }

    #[test]
    fn known_numbers() {
        let expected = [
            (0, rat(1, 1)),
            (1, rat(-1, 2)),
            (2, rat(1, 6)),
            (3, rat(0, 1)),
            (4, rat(-1, 30)),
            (6, rat(1, 42)),
            (8, rat(-1, 30)),
            (10, rat(5, 66)),
            (12, rat(-691, 2730)),
        ];
        for (n, b) in expected {
            assert_eq!(bernoulli_number(n), b, "B_{n}");
        }
    }

    #[test]
    fn difference_equation_for_b3() {
        let b3 = bernoulli_polynomial(3);
        let shift = RationalPolynomial::linear(rat(1, 1), rat(1, 1));
        let diff = &b3.compose(&shift) - &b3;
        assert_eq!(diff, RationalPolynomial::monomial(rat(3, 1), 2));
    }
}
