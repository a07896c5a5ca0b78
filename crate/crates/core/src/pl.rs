//! Continuous piecewise-linear functions on `(0, inf)` with exact rational nodes.
//!
//! These carry level integrals `t -> int_0^t f` of step functions and the
//! piecewise-linear fundamental functions. The value at 0 is always 0; the
//! right limit at 0 is `jump0`, which is nonzero only for fundamental
//! functions with `phi(0+) > 0`.

use std::ops::Deref;

use num::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{format_rational, int, serde_rational, serde_rational_vec, Rational};
use crate::step::{Domain, StepFunction};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawLinear")]
pub struct PiecewiseLinear {
    #[serde(with = "serde_rational_vec")]
    breakpoints: Vec<Rational>,
    #[serde(with = "serde_rational_vec")]
    values: Vec<Rational>,
    #[serde(with = "serde_rational")]
    jump0: Rational,
    #[serde(with = "serde_rational")]
    final_slope: Rational,
}

#[derive(Deserialize)]
struct RawLinear {
    #[serde(with = "serde_rational_vec")]
    breakpoints: Vec<Rational>,
    #[serde(with = "serde_rational_vec")]
    values: Vec<Rational>,
    #[serde(with = "serde_rational", default = "Rational::zero")]
    jump0: Rational,
    #[serde(with = "serde_rational")]
    final_slope: Rational,
}

impl TryFrom<RawLinear> for PiecewiseLinear {
    type Error = Error;

    fn try_from(raw: RawLinear) -> Result<Self> {
        PiecewiseLinear::new(raw.breakpoints, raw.values, raw.jump0, raw.final_slope)
    }
}

/// One affine piece `a + b t` on `[start, end]`; `end == None` runs to infinity.
#[derive(Clone, Debug, PartialEq)]
pub struct Affine {
    pub start: Rational,
    pub end: Option<Rational>,
    pub intercept: Rational,
    pub slope: Rational,
}

impl Affine {
    pub fn at(&self, t: &Rational) -> Rational {
        &self.intercept + &self.slope * t
    }
}

impl PiecewiseLinear {
    /// Nodes `s_1 < ... < s_M` (all positive) with values there; collinear nodes are dropped.
    pub fn new(
        breakpoints: Vec<Rational>,
        values: Vec<Rational>,
        jump0: Rational,
        final_slope: Rational,
    ) -> Result<Self> {
        if breakpoints.len() != values.len() {
            return Err(Error::Breakpoints(format!(
                "{} nodes but {} values",
                breakpoints.len(),
                values.len()
            )));
        }
        let mut prev = Rational::zero();
        for s in &breakpoints {
            if *s <= prev {
                return Err(Error::Breakpoints(format!(
                    "nodes must be positive and strictly increasing (at {})",
                    format_rational(s)
                )));
            }
            prev = s.clone();
        }
        let mut out = PiecewiseLinear {
            breakpoints,
            values,
            jump0,
            final_slope,
        };
        out.drop_collinear();
        Ok(out)
    }

    pub fn linear(slope: Rational) -> Self {
        PiecewiseLinear {
            breakpoints: Vec::new(),
            values: Vec::new(),
            jump0: Rational::zero(),
            final_slope: slope,
        }
    }

    /// `t -> intercept + slope * t` on `t > 0` (so `jump0 = intercept`).
    pub fn affine(intercept: Rational, slope: Rational) -> Self {
        PiecewiseLinear {
            breakpoints: Vec::new(),
            values: Vec::new(),
            jump0: intercept,
            final_slope: slope,
        }
    }

    fn drop_collinear(&mut self) {
        let mut i = 0;
        while i < self.breakpoints.len() {
            let slopes = self.slopes();
            if slopes[i] == slopes[i + 1] {
                self.breakpoints.remove(i);
                self.values.remove(i);
                i = i.saturating_sub(1);
            } else {
                i += 1;
            }
        }
    }

    /// `t -> int_0^t f` for any step function `f`. On `[0,1)` the primitive stays flat past 1.
    pub fn primitive(f: &StepFunction) -> Self {
        let mut nodes = Vec::with_capacity(f.piece_count());
        let mut values = Vec::with_capacity(f.piece_count());
        let mut acc = Rational::zero();
        let mut final_slope = Rational::zero();
        for seg in f.segments() {
            match seg.end {
                Some(end) => {
                    acc += (&end - &seg.start) * &seg.value;
                    nodes.push(end);
                    values.push(acc.clone());
                }
                None => final_slope = seg.value,
            }
        }
        PiecewiseLinear::new(nodes, values, Rational::zero(), final_slope).expect("step breakpoints are increasing")
    }

    pub fn breakpoints(&self) -> &[Rational] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn jump0(&self) -> &Rational {
        &self.jump0
    }

    pub fn final_slope(&self) -> &Rational {
        &self.final_slope
    }

    /// Slopes of the `M + 1` pieces, left to right.
    pub fn slopes(&self) -> Vec<Rational> {
        let mut out = Vec::with_capacity(self.breakpoints.len() + 1);
        let mut prev_s = Rational::zero();
        let mut prev_v = self.jump0.clone();
        for (s, v) in self.breakpoints.iter().zip(&self.values) {
            out.push((v - &prev_v) / (s - &prev_s));
            prev_s = s.clone();
            prev_v = v.clone();
        }
        out.push(self.final_slope.clone());
        out
    }

    /// The affine pieces in order, each with its own intercept.
    pub fn pieces(&self) -> Vec<Affine> {
        let slopes = self.slopes();
        let mut out = Vec::with_capacity(slopes.len());
        let mut start = Rational::zero();
        let mut start_v = self.jump0.clone();
        for (i, b) in slopes.into_iter().enumerate() {
            let end = self.breakpoints.get(i).cloned();
            let intercept = &start_v - &b * &start;
            out.push(Affine {
                start: start.clone(),
                end: end.clone(),
                intercept,
                slope: b,
            });
            if let Some(e) = end {
                start = e;
                start_v = self.values[i].clone();
            }
        }
        out
    }

    /// Value at `t`; `0` at `t <= 0`.
    pub fn eval(&self, t: &Rational) -> Rational {
        if !t.is_positive() {
            return Rational::zero();
        }
        let idx = self.breakpoints.partition_point(|s| s < t);
        if idx == self.breakpoints.len() {
            let (s, v) = match self.breakpoints.last() {
                Some(s) => (s.clone(), self.values[idx - 1].clone()),
                None => (Rational::zero(), self.jump0.clone()),
            };
            return v + &self.final_slope * (t - s);
        }
        let (s0, v0) = if idx == 0 {
            (Rational::zero(), self.jump0.clone())
        } else {
            (self.breakpoints[idx - 1].clone(), self.values[idx - 1].clone())
        };
        let s1 = &self.breakpoints[idx];
        let v1 = &self.values[idx];
        &v0 + (v1 - &v0) * (t - &s0) / (s1 - &s0)
    }

    /// Pointwise difference, exact on the union of nodes.
    pub fn sub(&self, other: &Self) -> Self {
        let nodes = crate::step::merge_sorted(&self.breakpoints, &other.breakpoints);
        let values = nodes.iter().map(|s| self.eval(s) - other.eval(s)).collect();
        PiecewiseLinear::new(
            nodes,
            values,
            &self.jump0 - &other.jump0,
            &self.final_slope - &other.final_slope,
        )
        .expect("merged nodes are increasing")
    }

    /// Pointwise minimum; crossing points become nodes.
    pub fn min_with(&self, other: &Self) -> Self {
        let diff = self.sub(other);
        let mut nodes = crate::step::merge_sorted(&self.breakpoints, &other.breakpoints);
        let mut crossings = Vec::new();
        for piece in diff.pieces() {
            if piece.slope.is_zero() {
                continue;
            }
            let root = -&piece.intercept / &piece.slope;
            let inside = root > piece.start && piece.end.as_ref().is_none_or(|e| root < *e);
            if inside {
                crossings.push(root);
            }
        }
        nodes = crate::step::merge_sorted(&nodes, &crossings);
        let values = nodes
            .iter()
            .map(|s| crate::rational::min_rat(&self.eval(s), &other.eval(s)).clone())
            .collect();
        let last_diff = match nodes.last() {
            Some(s) => diff.eval(s),
            None => diff.jump0.clone(),
        };
        let final_slope = if diff.final_slope.is_positive() || (diff.final_slope.is_zero() && last_diff.is_positive()) {
            other.final_slope.clone()
        } else {
            self.final_slope.clone()
        };
        let jump0 = crate::rational::min_rat(&self.jump0, &other.jump0).clone();
        PiecewiseLinear::new(nodes, values, jump0, final_slope).expect("merged nodes are increasing")
    }

    /// Earliest convenient `t > 0` with a strictly positive value, if any exists.
    ///
    /// Prefers a node; falls back to an interior point near 0 or past the last node.
    pub fn positive_witness(&self) -> Option<Rational> {
        if self.jump0.is_positive() {
            let half = int(1) / int(2);
            return Some(match (self.breakpoints.first(), self.values.first()) {
                (Some(s1), Some(v1)) if v1.is_positive() => s1 * &half,
                (Some(s1), Some(v1)) => {
                    // root of the first piece, then halfway to it
                    s1 * &self.jump0 / (&self.jump0 - v1) * &half
                }
                _ if !self.final_slope.is_negative() => int(1),
                _ => &self.jump0 / -&self.final_slope * &half,
            });
        }
        for (s, v) in self.breakpoints.iter().zip(&self.values) {
            if v.is_positive() {
                return Some(s.clone());
            }
        }
        if self.final_slope.is_positive() {
            let (s, v) = match self.breakpoints.last() {
                Some(s) => (s.clone(), self.values.last().unwrap().clone()),
                None => (Rational::zero(), self.jump0.clone()),
            };
            return Some(s + (-v) / &self.final_slope + int(1));
        }
        None
    }

    /// `Some(t)` with `self(t) > other(t)`, or `None` if `self <= other` on all of `(0, inf)`.
    pub fn exceeds_somewhere(&self, other: &Self) -> Option<Rational> {
        self.sub(other).positive_witness()
    }

    /// Least `t >= from` (or `> from` when `strict`) where the function meets the line `p + q t`.
    pub fn meet_line(&self, p: &Rational, q: &Rational, from: &Rational, strict: bool) -> Option<Rational> {
        for piece in self.pieces() {
            if let Some(end) = &piece.end {
                if end < from || (strict && end == from) {
                    continue;
                }
            }
            let lo = if piece.start > *from {
                piece.start.clone()
            } else {
                from.clone()
            };
            let a = &piece.intercept - p;
            let b = &piece.slope - q;
            let cand = if b.is_zero() {
                if a.is_zero() {
                    Some(lo.clone())
                } else {
                    None
                }
            } else {
                Some(-a / b)
            };
            if let Some(t) = cand {
                let above_lo = if strict && lo == *from { t > lo } else { t >= lo };
                let below_hi = piece.end.as_ref().is_none_or(|e| t <= *e);
                if above_lo && below_hi && t.is_positive() {
                    return Some(t);
                }
            }
        }
        None
    }

    /// Chord interpolation through the given increasing positive points; flat after the last.
    pub fn chord_interpolation(&self, points: &[Rational]) -> Result<Self> {
        let values = points.iter().map(|s| self.eval(s)).collect();
        PiecewiseLinear::new(points.to_vec(), values, Rational::zero(), Rational::zero())
    }

    /// Slope function on `[0, alpha)`, the inverse of [`PiecewiseLinear::primitive`].
    pub fn derivative(&self, domain: Domain) -> Result<StepFunction> {
        if !self.jump0.is_zero() {
            return Err(Error::pre("derivative needs a function continuous at 0"));
        }
        let slopes = self.slopes();
        let mut bps = Vec::new();
        let mut vals = Vec::new();
        let mut tail = self.final_slope.clone();
        for (s, b) in self.breakpoints.iter().zip(&slopes) {
            if domain.contains(s) {
                bps.push(s.clone());
                vals.push(b.clone());
            } else {
                tail = b.clone();
                break;
            }
        }
        StepFunction::new(domain, bps, vals, tail)
    }

    /// Concave with nonnegative slopes and `jump0 >= 0`.
    pub fn is_concave_nondecreasing(&self) -> bool {
        let slopes = self.slopes();
        !self.jump0.is_negative() && !self.final_slope.is_negative() && slopes.windows(2).all(|w| w[0] >= w[1])
    }
}

/// Concave nondecreasing piecewise-linear function, `Phi(0) = 0`, `Phi(0+) = jump0 >= 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "PiecewiseLinear", into = "PiecewiseLinear")]
pub struct PiecewiseLinearConcave(PiecewiseLinear);

impl PiecewiseLinearConcave {
    pub fn new(inner: PiecewiseLinear) -> Result<Self> {
        if !inner.is_concave_nondecreasing() {
            let slopes: Vec<String> = inner.slopes().iter().map(format_rational).collect();
            return Err(Error::NotConcave(format!(
                "jump0 {}, slopes [{}]",
                format_rational(inner.jump0()),
                slopes.join(", ")
            )));
        }
        Ok(PiecewiseLinearConcave(inner))
    }

    pub fn from_nodes(
        breakpoints: Vec<Rational>,
        values: Vec<Rational>,
        jump0: Rational,
        final_slope: Rational,
    ) -> Result<Self> {
        Self::new(PiecewiseLinear::new(breakpoints, values, jump0, final_slope)?)
    }

    /// Builds from the slopes of consecutive pieces: `slopes[i]` on `[s_i, s_{i+1})`,
    /// `final_slope` after the last node.
    pub fn from_slopes(jump0: Rational, pieces: &[(Rational, Rational)], final_slope: Rational) -> Result<Self> {
        let mut at = Rational::zero();
        let mut v = jump0.clone();
        let mut nodes = Vec::new();
        let mut vals = Vec::new();
        for (len, slope) in pieces {
            at += len;
            v += len * slope;
            nodes.push(at.clone());
            vals.push(v.clone());
        }
        Self::from_nodes(nodes, vals, jump0, final_slope)
    }

    pub fn into_inner(self) -> PiecewiseLinear {
        self.0
    }

    /// `sup_t Phi(t)`, infinite when the final slope is positive.
    pub fn supremum(&self) -> crate::rational::ExtendedRational {
        use crate::rational::ExtendedRational;
        if self.0.final_slope.is_positive() {
            ExtendedRational::Infinite
        } else {
            ExtendedRational::Finite(self.0.values.last().cloned().unwrap_or_else(|| self.0.jump0.clone()))
        }
    }
}

impl TryFrom<PiecewiseLinear> for PiecewiseLinearConcave {
    type Error = Error;

    fn try_from(p: PiecewiseLinear) -> Result<Self> {
        PiecewiseLinearConcave::new(p)
    }
}

impl From<PiecewiseLinearConcave> for PiecewiseLinear {
    fn from(p: PiecewiseLinearConcave) -> Self {
        p.0
    }
}

impl Deref for PiecewiseLinearConcave {
    type Target = PiecewiseLinear;

    fn deref(&self) -> &PiecewiseLinear {
        &self.0
    }
}
