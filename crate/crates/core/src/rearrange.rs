//! Distribution function, decreasing rearrangement, level integral and maximal function.

use num::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pl::{PiecewiseLinear, PiecewiseLinearConcave};
use crate::rational::{format_rational, serde_rational, ExtendedRational, Rational};
use crate::step::{Domain, StepFunction};

/// `x*`, its level integral `Phi_x(t) = int_0^t x*`, and `x*(inf)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RearrangementResult {
    pub star: StepFunction,
    pub level_integral: PiecewiseLinearConcave,
    #[serde(with = "serde_rational")]
    pub star_at_infinity: Rational,
}

/// `d_x(lambda) = mu{ |x| > lambda }`.
pub fn distribution(x: &StepFunction, level: &Rational) -> Result<ExtendedRational> {
    x.exceedance_measure(level)
}

/// The nonincreasing right-continuous function equimeasurable with `|x|`.
///
/// Pieces are sorted by `|value|` descending. On `[0, inf)` every piece at or
/// below `|tail|` is swallowed by the tail plateau.
pub fn decreasing_rearrangement(x: &StepFunction) -> StepFunction {
    let domain = x.domain();
    let mut pieces: Vec<(Rational, Rational)> = Vec::with_capacity(x.piece_count());
    let tail = match domain {
        Domain::HalfLine => {
            let t = x.tail().abs();
            for seg in x.segments() {
                if let Some(end) = seg.end {
                    let v = seg.value.abs();
                    if v > t {
                        pieces.push((end - seg.start, v));
                    }
                }
            }
            t
        }
        Domain::Unit => {
            for seg in x.segments() {
                let end = seg.end.expect("unit-interval pieces are bounded");
                pieces.push((end - seg.start, seg.value.abs()));
            }
            // the last stacked piece becomes the tail on [t_N, 1)
            pieces.sort_by(|a, b| b.1.cmp(&a.1));
            let (_, last) = pieces.pop().expect("at least one piece");
            last
        }
    };
    pieces.sort_by(|a, b| b.1.cmp(&a.1));
    StepFunction::from_pieces(domain, pieces, tail).expect("piece lengths are positive")
}

pub fn rearrangement(x: &StepFunction) -> RearrangementResult {
    let star = decreasing_rearrangement(x);
    let level_integral = PiecewiseLinearConcave::new(PiecewiseLinear::primitive(&star))
        .expect("primitive of a nonincreasing nonnegative function is concave");
    let star_at_infinity = match x.domain() {
        Domain::HalfLine => star.tail().clone(),
        Domain::Unit => Rational::zero(),
    };
    RearrangementResult {
        star,
        level_integral,
        star_at_infinity,
    }
}

/// `Phi_x(t) = int_0^t x*`.
pub fn level_integral(x: &StepFunction) -> PiecewiseLinearConcave {
    rearrangement(x).level_integral
}

/// `x**(t) = Phi_x(t) / t` for `t > 0`.
pub fn maximal_eval(x: &StepFunction, t: &Rational) -> Result<Rational> {
    if !t.is_positive() {
        return Err(Error::OutOfDomain(format_rational(t)));
    }
    Ok(level_integral(x).eval(t) / t)
}

/// Same as [`maximal_eval`] but reusing a precomputed level integral.
pub fn maximal_from_level(level: &PiecewiseLinear, t: &Rational) -> Result<Rational> {
    if !t.is_positive() {
        return Err(Error::OutOfDomain(format_rational(t)));
    }
    Ok(level.eval(t) / t)
}

/// `x ~ y`: equal decreasing rearrangements.
pub fn equimeasurable(x: &StepFunction, y: &StepFunction) -> Result<bool> {
    if x.domain() != y.domain() {
        return Err(Error::DomainMismatch);
    }
    Ok(decreasing_rearrangement(x) == decreasing_rearrangement(y))
}

/// For `x*(inf) = 0`, a point `T` past which `x** <= eps`.
///
/// `Phi_x` is eventually constant at `int x*`, so `T = int x* / eps` works;
/// for `x = 0` any `T` does and `1` is returned.
pub fn maximal_decay_threshold(x: &StepFunction, eps: &Rational) -> Result<Rational> {
    if !eps.is_positive() {
        return Err(Error::pre("eps must be positive"));
    }
    let r = rearrangement(x);
    if !r.star_at_infinity.is_zero() {
        return Err(Error::NonzeroAtInfinity);
    }
    let total = r.level_integral.values().last().cloned().unwrap_or_else(Rational::zero);
    if total.is_zero() {
        return Ok(Rational::from_integer(1.into()));
    }
    Ok(total / eps)
}
