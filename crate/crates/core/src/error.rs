use thiserror::Error;

use crate::rational::{format_rational, Rational};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("malformed breakpoints: {0}")]
    Breakpoints(String),

    #[error("functions live on different domains")]
    DomainMismatch,

    #[error("argument {0} lies outside the domain")]
    OutOfDomain(String),

    #[error("level must be nonnegative, got {0}")]
    NegativeLevel(String),

    #[error("integral over an unbounded interval diverges (nonzero tail)")]
    InfiniteIntegral,

    #[error("expected a nonincreasing nonnegative function (x = x*)")]
    NotDecreasing,

    #[error("the function must vanish at infinity (x*(inf) = 0)")]
    NonzeroAtInfinity,

    #[error("the family M(x, tau, eps) is degenerate: eps must satisfy 0 < eps < int_0^tau x*")]
    EmptyFamily,

    #[error("hypothesis violated at t = {}", format_rational(.witness))]
    HypothesisViolated { witness: Rational },

    #[error("not a concave nondecreasing piecewise-linear function: {0}")]
    NotConcave(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn pre(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }
}
