use thiserror::Error;

/// Broad classification used for process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Bad input or an input outside an operation's domain.
    Domain,
    /// A consistency check that should never fail on valid input did fail.
    Internal,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("a link needs at least 3 weights/exponents, got {0}")]
    InvalidDimension(usize),

    #[error("invalid link: {0}")]
    InvalidLink(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("{0}")]
    Domain(String),

    #[error("Betti sum is not a non-negative integer: {0}")]
    NonIntegralBetti(String),

    #[error("torsion division is not exact at subset {subset:?}: {numerator} / {denominator}")]
    OrlikDivision {
        subset: Vec<usize>,
        numerator: String,
        denominator: String,
    },

    #[error("torsion is not of spin Smale form: prime power {prime_power} occurs {multiplicity} times")]
    NotSmaleForm {
        prime_power: String,
        multiplicity: usize,
    },

    #[error("Milnor fiber signature {0} is not divisible by 8")]
    SignatureNotDivisible(i64),

    #[error("invalid cone: {0}")]
    InvalidCone(String),

    #[error("weight matrix has a vanishing maximal minor at columns {0:?}")]
    ZeroMinor(Vec<usize>),

    #[error("Reeb vector is not in the interior of the dual cone")]
    Unbounded,

    #[error("cannot rescale onto the Reeb slice: <xi, gamma> = {0} is not negative")]
    SliceSign(f64),

    #[error("point is not strictly inside the cone (a linear form is {0})")]
    LogDomain(f64),

    #[error("volume minimization did not converge after {iterations} iterations (gradient norm {grad_norm:e}); last iterate {last:?}")]
    NoConvergence {
        iterations: usize,
        grad_norm: f64,
        last: Vec<f64>,
    },

    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::NonIntegralBetti(_)
            | Error::OrlikDivision { .. }
            | Error::SignatureNotDivisible(_)
            | Error::NoConvergence { .. }
            | Error::Internal(_) => ErrorKind::Internal,
            _ => ErrorKind::Domain,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
