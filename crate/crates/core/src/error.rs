use num_complex::Complex64;
use thiserror::Error;

use crate::expansion::ConvergenceReport;

/// Failure classes, used by front ends to pick an exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    /// The caller supplied something outside an operation's domain.
    Input,
    /// A numerical procedure did not meet its tolerance.
    NonConvergence,
    /// A mathematical hypothesis on the input does not hold.
    Hypothesis,
    /// An internal consistency check failed.
    Internal,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("basis index t = {0} must be even and non-negative")]
    OddIndex(i64),

    #[error("Lidstone generators disagree at t = {t} ({left} vs {right})")]
    CrossMethodMismatch {
        t: usize,
        left: &'static str,
        right: &'static str,
    },

    #[error("invalid polynomial encoding: {0}")]
    Encoding(String),

    #[error("Taylor data too short for t = {t}: tail estimate {tail:e} exceeds {allowed:e}")]
    InsufficientTaylorData { t: usize, tail: f64, allowed: f64 },

    #[error("partial sum requested to T = {requested} but data only reaches t_max = {available}")]
    TruncationBeyondData { requested: usize, available: usize },

    #[error("zeta = {zeta} is too close to a pole of 1/sinh")]
    PoleAtZeta { zeta: Complex64 },

    #[error("|zeta| = {modulus} is outside the disk |zeta| < {limit}")]
    OutsideDisk { modulus: f64, limit: f64 },

    #[error("Lidstone series diverges (a: {}, b: {})", .report.a_fluctuation, .report.b_fluctuation)]
    DivergenceDetected {
        value: Complex64,
        report: ConvergenceReport,
    },

    #[error("invalid counterexample request: {0}")]
    InvalidCounterexample(String),

    #[error("invalid contour configuration: {0}")]
    InvalidContour(String),

    #[error("non-finite integrand value at node {node} (zeta = {zeta})")]
    NonFiniteIntegrand { node: usize, zeta: Complex64 },

    #[error(
        "quadrature did not converge: estimate {estimate:e} above {allowed:e} with {nodes} nodes"
    )]
    NonConverged {
        estimate: f64,
        allowed: f64,
        nodes: usize,
    },

    #[error("|zeta| = {modulus} lies inside the type disk of radius {tau}")]
    InsideTypeDisk { modulus: f64, tau: f64 },

    #[error("Laplace series tail {tail:e} too large at |zeta| = {modulus}")]
    TailTooLarge { tail: f64, modulus: f64 },

    #[error("bound violated for t = {t} at z = {z}: {lhs:e} > {rhs:e} ({which})")]
    BoundViolated {
        t: usize,
        z: Complex64,
        lhs: f64,
        rhs: f64,
        which: &'static str,
    },

    #[error("kernel evaluated outside its analyticity domain at zeta = {zeta}")]
    PoleGuard { zeta: Complex64 },

    #[error("contour radius {radius} not in ({lower}, {upper})")]
    RadiusOutOfRange { radius: f64, lower: f64, upper: f64 },

    #[error("K must be at least 1")]
    InvalidK,

    #[error("even derivative does not vanish: f^({t})({point}) = {value} (scale {scale:e})")]
    NotEvenVanishing {
        t: usize,
        point: u8,
        value: Complex64,
        scale: f64,
    },

    #[error("estimated type {tau} is not close to an integer multiple of pi")]
    TypeNotMultipleOfPi { tau: f64 },

    #[error("invalid function model: {0}")]
    InvalidModel(String),

    #[error("non-finite value while computing {0}")]
    NonFinite(&'static str),
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        use Error::*;
        match self {
            OddIndex(_)
            | Encoding(_)
            | TruncationBeyondData { .. }
            | PoleAtZeta { .. }
            | OutsideDisk { .. }
            | InvalidCounterexample(_)
            | InvalidContour(_)
            | InsideTypeDisk { .. }
            | PoleGuard { .. }
            | RadiusOutOfRange { .. }
            | InvalidK
            | InvalidModel(_) => ErrorClass::Input,
            InsufficientTaylorData { .. }
            | DivergenceDetected { .. }
            | NonFiniteIntegrand { .. }
            | NonConverged { .. }
            | TailTooLarge { .. }
            | NonFinite(_) => ErrorClass::NonConvergence,
            NotEvenVanishing { .. } | TypeNotMultipleOfPi { .. } => ErrorClass::Hypothesis,
            CrossMethodMismatch { .. } | BoundViolated { .. } => ErrorClass::Internal,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
