//! Canonical finitely-piecewise-constant functions on `[0, alpha)`.
//!
//! A [`StepFunction`] takes `values[i]` on `[t_i, t_{i+1})` (with `t_0 = 0`
//! and `t_{i+1} = breakpoints[i]`) and `tail` on `[t_N, alpha)`. Pieces are
//! right-open, so two functions that differ only at finitely many points
//! share one canonical form.

use std::fmt;

use num::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::{
    format_rational, int, max_rat, min_rat, serde_rational, serde_rational_vec, ExtendedRational, Rational,
};

/// Length of the underlying interval `[0, alpha)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Domain {
    /// `[0, 1)`
    Unit,
    /// `[0, inf)`
    HalfLine,
}

impl Domain {
    /// `alpha` as an extended rational.
    pub fn alpha(self) -> ExtendedRational {
        match self {
            Domain::Unit => ExtendedRational::Finite(int(1)),
            Domain::HalfLine => ExtendedRational::Infinite,
        }
    }

    pub fn contains(self, t: &Rational) -> bool {
        !t.is_negative() && self.alpha().cmp_rational(t).is_gt()
    }

    fn as_str(self) -> &'static str {
        match self {
            Domain::Unit => "1",
            Domain::HalfLine => "inf",
        }
    }
}

impl Serialize for Domain {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for Domain {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match String::deserialize(d)?.as_str() {
            "1" | "1/1" => Ok(Domain::Unit),
            "inf" => Ok(Domain::HalfLine),
            other => Err(serde::de::Error::custom(format!(
                "alpha must be \"1\" or \"inf\", got {other:?}"
            ))),
        }
    }
}

/// One constant piece `[start, end)`; `end == None` means the piece runs to infinity.
#[derive(Clone, Debug, PartialEq)]
pub struct Segment {
    pub start: Rational,
    pub end: Option<Rational>,
    pub value: Rational,
}

impl Segment {
    pub fn length(&self) -> ExtendedRational {
        match &self.end {
            Some(end) => ExtendedRational::Finite(end - &self.start),
            None => ExtendedRational::Infinite,
        }
    }
}

/// Pointwise operation for [`StepFunction::combine`].
#[derive(Clone, Debug, PartialEq)]
pub enum Combine {
    Add,
    Sub,
    Min,
    Max,
    /// Multiply pointwise.
    Mul,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawStep")]
pub struct StepFunction {
    #[serde(rename = "alpha")]
    domain: Domain,
    #[serde(with = "serde_rational_vec")]
    breakpoints: Vec<Rational>,
    #[serde(with = "serde_rational_vec")]
    values: Vec<Rational>,
    #[serde(with = "serde_rational")]
    tail: Rational,
}

#[derive(Deserialize)]
struct RawStep {
    alpha: Domain,
    #[serde(with = "serde_rational_vec")]
    breakpoints: Vec<Rational>,
    #[serde(with = "serde_rational_vec")]
    values: Vec<Rational>,
    #[serde(with = "serde_rational")]
    tail: Rational,
}

impl TryFrom<RawStep> for StepFunction {
    type Error = Error;

    fn try_from(raw: RawStep) -> Result<Self> {
        StepFunction::new(raw.alpha, raw.breakpoints, raw.values, raw.tail)
    }
}

impl StepFunction {
    /// Validates raw data and merges equal-valued neighbours.
    ///
    /// `breakpoints` are `t_1 < ... < t_N`, all positive and below `alpha`;
    /// `values[i]` is taken on `[t_i, t_{i+1})` with `t_0 = 0`.
    pub fn new(domain: Domain, breakpoints: Vec<Rational>, values: Vec<Rational>, tail: Rational) -> Result<Self> {
        if breakpoints.len() != values.len() {
            return Err(Error::Breakpoints(format!(
                "{} breakpoints but {} values",
                breakpoints.len(),
                values.len()
            )));
        }
        let mut prev = Rational::zero();
        for t in &breakpoints {
            if *t <= prev {
                return Err(Error::Breakpoints(format!(
                    "breakpoints must be positive and strictly increasing (at {})",
                    format_rational(t)
                )));
            }
            prev = t.clone();
        }
        if !domain.contains(&prev) {
            return Err(Error::Breakpoints(format!(
                "breakpoint {} is not below alpha",
                format_rational(&prev)
            )));
        }

        let mut bps: Vec<Rational> = Vec::with_capacity(breakpoints.len());
        let mut vals: Vec<Rational> = Vec::with_capacity(values.len());
        for (t, v) in breakpoints.into_iter().zip(values) {
            match vals.last() {
                Some(last) if *last == v => *bps.last_mut().unwrap() = t,
                _ => {
                    bps.push(t);
                    vals.push(v);
                }
            }
        }
        while vals.last() == Some(&tail) {
            vals.pop();
            bps.pop();
        }
        Ok(StepFunction {
            domain,
            breakpoints: bps,
            values: vals,
            tail,
        })
    }

    /// Builds from consecutive `(length, value)` pieces starting at 0, followed by `tail`.
    pub fn from_pieces(
        domain: Domain,
        pieces: impl IntoIterator<Item = (Rational, Rational)>,
        tail: Rational,
    ) -> Result<Self> {
        let mut at = Rational::zero();
        let mut bps = Vec::new();
        let mut vals = Vec::new();
        for (len, v) in pieces {
            if !len.is_positive() {
                if len.is_zero() {
                    continue;
                }
                return Err(Error::Breakpoints("negative piece length".into()));
            }
            at += len;
            bps.push(at.clone());
            vals.push(v);
        }
        StepFunction::new(domain, bps, vals, tail)
    }

    pub fn constant(domain: Domain, c: Rational) -> Self {
        StepFunction {
            domain,
            breakpoints: Vec::new(),
            values: Vec::new(),
            tail: c,
        }
    }

    pub fn zero(domain: Domain) -> Self {
        Self::constant(domain, Rational::zero())
    }

    /// `c * chi_[a, b)`; `b = None` runs to alpha.
    pub fn boxed(domain: Domain, a: &Rational, b: Option<&Rational>, c: Rational) -> Result<Self> {
        if a.is_negative() {
            return Err(Error::OutOfDomain(format_rational(a)));
        }
        if !domain.contains(a) {
            return Ok(StepFunction::zero(domain));
        }
        let mut bps = Vec::new();
        let mut vals = Vec::new();
        if a.is_positive() {
            bps.push(a.clone());
            vals.push(Rational::zero());
        }
        match b {
            None => StepFunction::new(domain, bps, vals, c),
            Some(b) if b <= a => Ok(StepFunction::zero(domain)),
            Some(b) => {
                if domain.alpha().cmp_rational(b).is_gt() {
                    bps.push(b.clone());
                    vals.push(c);
                    StepFunction::new(domain, bps, vals, Rational::zero())
                } else {
                    StepFunction::new(domain, bps, vals, c)
                }
            }
        }
    }

    /// `c * chi_[0, len)`.
    pub fn head(domain: Domain, len: &Rational, c: Rational) -> Result<Self> {
        Self::boxed(domain, &Rational::zero(), Some(len), c)
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn breakpoints(&self) -> &[Rational] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn tail(&self) -> &Rational {
        &self.tail
    }

    /// Number of constant pieces, tail included.
    pub fn piece_count(&self) -> usize {
        self.values.len() + 1
    }

    /// All pieces in order; the last one ends at `alpha`.
    pub fn segments(&self) -> Vec<Segment> {
        let mut out = Vec::with_capacity(self.piece_count());
        let mut start = Rational::zero();
        for (t, v) in self.breakpoints.iter().zip(&self.values) {
            out.push(Segment {
                start: start.clone(),
                end: Some(t.clone()),
                value: v.clone(),
            });
            start = t.clone();
        }
        out.push(Segment {
            start,
            end: self.domain.alpha().finite().cloned(),
            value: self.tail.clone(),
        });
        out
    }

    /// Value on the piece containing `t`.
    pub fn evaluate(&self, t: &Rational) -> Result<Rational> {
        if !self.domain.contains(t) {
            return Err(Error::OutOfDomain(format_rational(t)));
        }
        Ok(self.value_at(t).clone())
    }

    pub(crate) fn value_at(&self, t: &Rational) -> &Rational {
        let idx = self.breakpoints.partition_point(|b| b <= t);
        self.values.get(idx).unwrap_or(&self.tail)
    }

    /// Pointwise map of every piece value.
    pub fn map(&self, f: impl Fn(&Rational) -> Rational) -> Self {
        let values = self.values.iter().map(&f).collect();
        StepFunction::new(self.domain, self.breakpoints.clone(), values, f(&self.tail))
            .expect("breakpoints are unchanged")
    }

    pub fn scale(&self, c: &Rational) -> Self {
        self.map(|v| v * c)
    }

    pub fn abs(&self) -> Self {
        self.map(|v| v.abs())
    }

    pub fn pos_part(&self) -> Self {
        self.map(|v| max_rat(v, &Rational::zero()).clone())
    }

    /// Pointwise binary operation over the common refinement of both breakpoint sets.
    pub fn combine(&self, other: &Self, op: Combine) -> Result<Self> {
        if self.domain != other.domain {
            return Err(Error::DomainMismatch);
        }
        let f = |a: &Rational, b: &Rational| -> Rational {
            match op {
                Combine::Add => a + b,
                Combine::Sub => a - b,
                Combine::Min => min_rat(a, b).clone(),
                Combine::Max => max_rat(a, b).clone(),
                Combine::Mul => a * b,
            }
        };
        let grid = merge_sorted(&self.breakpoints, &other.breakpoints);
        let mut values = Vec::with_capacity(grid.len());
        let mut start = Rational::zero();
        for t in &grid {
            values.push(f(self.value_at(&start), other.value_at(&start)));
            start = t.clone();
        }
        StepFunction::new(self.domain, grid, values, f(&self.tail, &other.tail))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.combine(other, Combine::Add)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.combine(other, Combine::Sub)
    }

    pub fn min(&self, other: &Self) -> Result<Self> {
        self.combine(other, Combine::Min)
    }

    pub fn max(&self, other: &Self) -> Result<Self> {
        self.combine(other, Combine::Max)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.combine(other, Combine::Mul)
    }

    /// `self * chi_[a, b)`; `b = None` means up to alpha.
    pub fn restrict(&self, a: &Rational, b: Option<&Rational>) -> Result<Self> {
        let mask = StepFunction::boxed(self.domain, a, b, int(1))?;
        self.mul(&mask)
    }

    /// Exact `int_a^b f`. `b = None` stands for `alpha`.
    pub fn integrate(&self, a: &Rational, b: Option<&Rational>) -> Result<Rational> {
        let alpha = self.domain.alpha();
        if a.is_negative() || alpha.cmp_rational(a).is_lt() {
            return Err(Error::OutOfDomain(format_rational(a)));
        }
        let b = match b {
            Some(b) => {
                if b < a || alpha.cmp_rational(b).is_lt() {
                    return Err(Error::OutOfDomain(format_rational(b)));
                }
                b.clone()
            }
            None => match alpha {
                ExtendedRational::Finite(one) => one,
                ExtendedRational::Infinite => {
                    if !self.tail.is_zero() {
                        return Err(Error::InfiniteIntegral);
                    }
                    max_rat(self.breakpoints.last().unwrap_or(a), a).clone()
                }
            },
        };
        let mut total = Rational::zero();
        for seg in self.segments() {
            let lo = max_rat(&seg.start, a);
            let hi = match &seg.end {
                Some(e) => min_rat(e, &b),
                None => &b,
            };
            if lo < hi {
                total += (hi - lo) * &seg.value;
            }
        }
        Ok(total)
    }

    /// Integral over the whole domain; `+inf` when a positive tail runs to infinity.
    pub fn total_integral(&self) -> Result<ExtendedRational> {
        if self.domain == Domain::HalfLine && !self.tail.is_zero() {
            if self.tail.is_positive() {
                return Ok(ExtendedRational::Infinite);
            }
            return Err(Error::InfiniteIntegral);
        }
        self.integrate(&Rational::zero(), None).map(ExtendedRational::Finite)
    }

    /// `mu{ s : |f(s)| > level }`.
    pub fn exceedance_measure(&self, level: &Rational) -> Result<ExtendedRational> {
        if level.is_negative() {
            return Err(Error::NegativeLevel(format_rational(level)));
        }
        let mut total = ExtendedRational::zero();
        for seg in self.segments() {
            if seg.value.abs() > *level {
                total = total.add(&seg.length());
            }
        }
        Ok(total)
    }

    pub fn is_nonnegative(&self) -> bool {
        !self.tail.is_negative() && self.values.iter().all(|v| !v.is_negative())
    }

    /// Nonincreasing and nonnegative, i.e. `f = f*`.
    pub fn is_decreasing(&self) -> bool {
        self.is_nonnegative()
            && self
                .values
                .iter()
                .chain(std::iter::once(&self.tail))
                .collect::<Vec<_>>()
                .windows(2)
                .all(|w| w[0] >= w[1])
    }

    /// `ess sup |f|`.
    pub fn sup_abs(&self) -> Rational {
        self.values
            .iter()
            .chain(std::iter::once(&self.tail))
            .map(|v| v.abs())
            .max()
            .expect("at least the tail")
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty() && self.tail.is_zero()
    }

    /// Right end of the last finite breakpoint (0 if none).
    pub fn last_breakpoint(&self) -> Rational {
        self.breakpoints.last().cloned().unwrap_or_else(Rational::zero)
    }
}

impl fmt::Display for StepFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let end = match self.domain {
            Domain::Unit => "1",
            Domain::HalfLine => "inf",
        };
        let mut parts = Vec::new();
        for seg in self.segments() {
            let hi = seg.end.as_ref().map(format_rational).unwrap_or_else(|| end.to_string());
            parts.push(format!(
                "{} on [{}, {})",
                format_rational(&seg.value),
                format_rational(&seg.start),
                hi
            ));
        }
        write!(f, "{}", parts.join(", "))
    }
}

pub(crate) fn merge_sorted(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out: Vec<Rational> = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let next = match (a.get(i), b.get(j)) {
            (Some(x), Some(y)) if x < y => {
                i += 1;
                x
            }
            (Some(x), Some(y)) if x > y => {
                j += 1;
                y
            }
            (Some(x), Some(_)) => {
                i += 1;
                j += 1;
                x
            }
            (Some(x), None) => {
                i += 1;
                x
            }
            (None, Some(y)) => {
                j += 1;
                y
            }
            (None, None) => unreachable!(),
        };
        out.push(next.clone());
    }
    out
}
