//! Lidstone polynomials in exact rational arithmetic, Lidstone and Buck
//! expansions of entire functions of exponential type, and contour-quadrature
//! checks of their integral representations.

pub mod acceptance;
pub mod basis;
pub mod bernoulli;
pub mod buck;
pub mod contour;
pub mod error;
pub mod expansion;
pub mod function;
pub mod poly;

pub use basis::{
    basis_table, float_basis, lambda0, lambda_bernoulli, lambda_ode, lambda_recurrence,
    shared_table, BasisTable, FloatBasis, LidstoneBasisEntry, Method,
};
pub use bernoulli::{bernoulli_number, bernoulli_polynomial};
pub use buck::{
    buck_coefficients, buck_expand, g_t_eval, gk_kernel, hk_kernel, schoenberg_decompose,
    BuckExpansion, SchoenbergDecomposition,
};
pub use contour::{
    bound_check, circle_quadrature, derivative_via_contour, lambda_t0_integral, lambda_t1_integral,
    laplace_eval, BoundReport, ContourConfig, Quadrature, TruncationConfig,
};
pub use error::{Error, ErrorClass, Result};
pub use expansion::{
    exp_identity_residual, expand_polynomial, generating_partial_sums, lidstone_partial_sum,
    m0_closed, m1_closed, sparse_counterexample, whittaker_interpolate, ConvergenceReport,
    CounterexampleSpec,
};
pub use function::{derivative_data, estimate_type, DerivativeData, EntireFunctionModel};
pub use poly::{ComplexValue, Rational, RationalPolynomial};
