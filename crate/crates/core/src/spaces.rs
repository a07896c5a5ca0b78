//! Concrete rearrangement-invariant norms and their fundamental functions.
//!
//! Supported: `L1`, `Linf`, `L1 + Linf`, and the Marcinkiewicz spaces
//! `M*_phi` (`sup x*(t) phi(t)`) and `M_phi` (`sup x**(t) phi(t)`) for two
//! families of `phi`: concave piecewise-linear, and `t / (c + t)`. Every
//! supremum involved is attained at a node or as a one-sided limit, so all
//! norms come out as exact rationals or `+inf`.

use num::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pl::{PiecewiseLinear, PiecewiseLinearConcave};
use crate::rational::{format_rational, int, min_rat, serde_rational, ExtendedRational, Rational};
use crate::rearrange::rearrangement;
use crate::step::{merge_sorted, Domain, StepFunction};

/// A quasiconcave `phi` with `phi(0) = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", try_from = "RawPhi")]
pub enum FundamentalFunction {
    PiecewiseLinear(PiecewiseLinearConcave),
    /// `phi(t) = t / (c + t)`.
    Hyperbolic {
        #[serde(with = "serde_rational")]
        c: Rational,
    },
}

#[derive(Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
enum RawPhi {
    PiecewiseLinear(PiecewiseLinearConcave),
    Hyperbolic {
        #[serde(with = "serde_rational")]
        c: Rational,
    },
}

impl TryFrom<RawPhi> for FundamentalFunction {
    type Error = Error;

    fn try_from(raw: RawPhi) -> Result<Self> {
        match raw {
            RawPhi::PiecewiseLinear(p) => FundamentalFunction::piecewise(p),
            RawPhi::Hyperbolic { c } => FundamentalFunction::hyperbolic(c),
        }
    }
}

impl FundamentalFunction {
    /// Needs `phi(t) > 0` for `t > 0`: a positive jump at 0 or a positive first slope.
    pub fn piecewise(p: PiecewiseLinearConcave) -> Result<Self> {
        let first_slope = p.slopes()[0].clone();
        if !p.jump0().is_positive() && !first_slope.is_positive() {
            return Err(Error::NotConcave("phi must be positive on (0, inf)".into()));
        }
        Ok(FundamentalFunction::PiecewiseLinear(p))
    }

    pub fn hyperbolic(c: Rational) -> Result<Self> {
        if !c.is_positive() {
            return Err(Error::pre(format!(
                "hyperbolic phi needs c > 0, got {}",
                format_rational(&c)
            )));
        }
        Ok(FundamentalFunction::Hyperbolic { c })
    }

    /// `phi(t) = t` for `t > 0`.
    pub fn identity() -> Self {
        FundamentalFunction::PiecewiseLinear(
            PiecewiseLinearConcave::new(PiecewiseLinear::linear(int(1))).expect("linear"),
        )
    }

    pub fn eval(&self, t: &Rational) -> Rational {
        if !t.is_positive() {
            return Rational::zero();
        }
        match self {
            FundamentalFunction::PiecewiseLinear(p) => p.eval(t),
            FundamentalFunction::Hyperbolic { c } => t / (c + t),
        }
    }

    /// `phi(0+)`.
    pub fn at_zero_plus(&self) -> Rational {
        match self {
            FundamentalFunction::PiecewiseLinear(p) => p.jump0().clone(),
            FundamentalFunction::Hyperbolic { .. } => Rational::zero(),
        }
    }

    /// `sup_t phi(t) = phi(inf-)`.
    pub fn supremum(&self) -> ExtendedRational {
        match self {
            FundamentalFunction::PiecewiseLinear(p) => p.supremum(),
            FundamentalFunction::Hyperbolic { .. } => ExtendedRational::Finite(int(1)),
        }
    }

    /// `lim_{t -> inf} phi(t) / t`.
    pub fn asymptotic_slope(&self) -> Rational {
        match self {
            FundamentalFunction::PiecewiseLinear(p) => p.final_slope().clone(),
            FundamentalFunction::Hyperbolic { .. } => Rational::zero(),
        }
    }

    fn nodes(&self) -> &[Rational] {
        match self {
            FundamentalFunction::PiecewiseLinear(p) => p.breakpoints(),
            FundamentalFunction::Hyperbolic { .. } => &[],
        }
    }

    /// `lim_{t -> inf} phi(t) Phi(t) / t` where `Phi = a + b t` eventually.
    fn limit_against(&self, a: &Rational, b: &Rational) -> ExtendedRational {
        match self {
            FundamentalFunction::PiecewiseLinear(p) => {
                let q = p.final_slope();
                if b.is_positive() && q.is_positive() {
                    return ExtendedRational::Infinite;
                }
                let last = p.pieces().pop().expect("final piece");
                ExtendedRational::Finite(a * q + b * &last.intercept)
            }
            FundamentalFunction::Hyperbolic { .. } => ExtendedRational::Finite(b.clone()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SpaceKind {
    L1,
    Linf,
    L1PlusLinf,
    MarcinkiewiczStar(FundamentalFunction),
    Marcinkiewicz(FundamentalFunction),
}

/// A symmetric space on `[0, alpha)` with an exact norm evaluator.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawSpace", into = "RawSpace")]
pub struct SpaceSpec {
    pub domain: Domain,
    pub kind: SpaceKind,
}

#[derive(Clone, Serialize, Deserialize)]
struct RawSpace {
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    phi: Option<FundamentalFunction>,
    #[serde(default = "default_alpha")]
    alpha: Domain,
}

fn default_alpha() -> Domain {
    Domain::HalfLine
}

impl TryFrom<RawSpace> for SpaceSpec {
    type Error = Error;

    fn try_from(raw: RawSpace) -> Result<Self> {
        let need_phi = |phi: Option<FundamentalFunction>| {
            phi.ok_or_else(|| Error::Parse(format!("space kind {:?} needs \"phi\"", raw.kind)))
        };
        let kind = match raw.kind.as_str() {
            "L1" => SpaceKind::L1,
            "Linf" => SpaceKind::Linf,
            "L1plusLinf" => SpaceKind::L1PlusLinf,
            "MarcinkiewiczStar" => SpaceKind::MarcinkiewiczStar(need_phi(raw.phi.clone())?),
            "Marcinkiewicz" => SpaceKind::Marcinkiewicz(need_phi(raw.phi.clone())?),
            other => return Err(Error::Parse(format!("unknown space kind {other:?}"))),
        };
        Ok(SpaceSpec {
            domain: raw.alpha,
            kind,
        })
    }
}

impl From<SpaceSpec> for RawSpace {
    fn from(s: SpaceSpec) -> Self {
        let (kind, phi) = match s.kind {
            SpaceKind::L1 => ("L1", None),
            SpaceKind::Linf => ("Linf", None),
            SpaceKind::L1PlusLinf => ("L1plusLinf", None),
            SpaceKind::MarcinkiewiczStar(p) => ("MarcinkiewiczStar", Some(p)),
            SpaceKind::Marcinkiewicz(p) => ("Marcinkiewicz", Some(p)),
        };
        RawSpace {
            kind: kind.to_string(),
            phi,
            alpha: s.domain,
        }
    }
}

impl SpaceSpec {
    pub fn new(domain: Domain, kind: SpaceKind) -> Self {
        SpaceSpec { domain, kind }
    }

    pub fn l1() -> Self {
        Self::new(Domain::HalfLine, SpaceKind::L1)
    }

    pub fn linf() -> Self {
        Self::new(Domain::HalfLine, SpaceKind::Linf)
    }

    pub fn l1_plus_linf() -> Self {
        Self::new(Domain::HalfLine, SpaceKind::L1PlusLinf)
    }

    pub fn marcinkiewicz(phi: FundamentalFunction) -> Self {
        Self::new(Domain::HalfLine, SpaceKind::Marcinkiewicz(phi))
    }

    pub fn marcinkiewicz_star(phi: FundamentalFunction) -> Self {
        Self::new(Domain::HalfLine, SpaceKind::MarcinkiewiczStar(phi))
    }

    pub fn label(&self) -> &'static str {
        match self.kind {
            SpaceKind::L1 => "L1",
            SpaceKind::Linf => "Linf",
            SpaceKind::L1PlusLinf => "L1plusLinf",
            SpaceKind::MarcinkiewiczStar(_) => "MarcinkiewiczStar",
            SpaceKind::Marcinkiewicz(_) => "Marcinkiewicz",
        }
    }

    /// `phi_E` as a [`FundamentalFunction`].
    pub fn fundamental_function(&self) -> FundamentalFunction {
        let pw =
            |p: PiecewiseLinear| FundamentalFunction::PiecewiseLinear(PiecewiseLinearConcave::new(p).expect("concave"));
        match &self.kind {
            SpaceKind::L1 => FundamentalFunction::identity(),
            SpaceKind::Linf => pw(PiecewiseLinear::affine(int(1), int(0))),
            SpaceKind::L1PlusLinf => {
                pw(PiecewiseLinear::new(vec![int(1)], vec![int(1)], int(0), int(0)).expect("nodes"))
            }
            SpaceKind::MarcinkiewiczStar(phi) | SpaceKind::Marcinkiewicz(phi) => phi.clone(),
        }
    }

    /// Whether this is a Banach (not merely quasi-Banach) norm.
    pub fn is_banach(&self) -> bool {
        !matches!(self.kind, SpaceKind::MarcinkiewiczStar(_))
    }
}

/// Exact `||x||_E`, `+inf` when `x` is outside `E`.
pub fn norm(space: &SpaceSpec, x: &StepFunction) -> ExtendedRational {
    let r = rearrangement(x);
    let star = &r.star;
    let level = &r.level_integral;
    match &space.kind {
        SpaceKind::L1 => star.total_integral().expect("star is nonnegative"),
        SpaceKind::Linf => ExtendedRational::Finite(star.sup_abs()),
        SpaceKind::L1PlusLinf => ExtendedRational::Finite(level.eval(&int(1))),
        SpaceKind::MarcinkiewiczStar(phi) => {
            let mut best = ExtendedRational::zero();
            for seg in star.segments() {
                if seg.value.is_zero() {
                    continue;
                }
                let reach = match &seg.end {
                    Some(end) => ExtendedRational::Finite(phi.eval(end)),
                    None => phi.supremum(),
                };
                best = best.max(reach.scale(&seg.value));
            }
            best
        }
        SpaceKind::Marcinkiewicz(phi) => marcinkiewicz_norm(phi, x.domain(), level),
    }
}

fn marcinkiewicz_norm(phi: &FundamentalFunction, domain: Domain, level: &PiecewiseLinear) -> ExtendedRational {
    let pieces = level.pieces();
    // t -> 0+: Phi(t)/t -> x*(0+), phi -> phi(0+)
    let mut best = ExtendedRational::Finite(&pieces[0].slope * phi.at_zero_plus());
    let value = |t: &Rational| level.eval(t) * phi.eval(t) / t;
    let nodes = merge_sorted(level.breakpoints(), phi.nodes());
    for s in nodes.iter().filter(|s| domain.contains(s)) {
        best = best.max(ExtendedRational::Finite(value(s)));
    }
    match domain {
        Domain::Unit => best.max(ExtendedRational::Finite(value(&int(1)))),
        Domain::HalfLine => {
            let last = pieces.last().expect("final piece");
            best.max(phi.limit_against(&last.intercept, &last.slope))
        }
    }
}

/// `phi_E(t) = ||chi_(0,t)||_E` for `0 < t < alpha`.
pub fn fundamental_eval(space: &SpaceSpec, t: &Rational) -> Result<Rational> {
    if !t.is_positive() || !space.domain.contains(t) {
        return Err(Error::OutOfDomain(format_rational(t)));
    }
    Ok(match &space.kind {
        SpaceKind::L1 => t.clone(),
        SpaceKind::Linf => int(1),
        SpaceKind::L1PlusLinf => min_rat(t, &int(1)).clone(),
        SpaceKind::MarcinkiewiczStar(phi) | SpaceKind::Marcinkiewicz(phi) => phi.eval(t),
    })
}

/// `E ↪ L1[0, inf)`, decided by `lim phi_E(t)/t > 0`.
pub fn embeds_in_l1(space: &SpaceSpec) -> Result<bool> {
    if space.domain != Domain::HalfLine {
        return Err(Error::pre("the L1 embedding criterion concerns [0, inf) only"));
    }
    Ok(space.fundamental_function().asymptotic_slope().is_positive())
}

/// `sup_t phi_E(t)`; finite exactly when `phi_E(t)/t <= C/t`, i.e. `phi_E(t)/t -> 0` at rate `1/t`.
pub fn fundamental_bound(space: &SpaceSpec) -> ExtendedRational {
    space.fundamental_function().supremum()
}

/// `y ∈ (M_phi)_a`: both `phi(t) y**(t) -> 0` as `t -> 0+` and as `t -> inf`.
pub fn mphi_a_member(phi: &FundamentalFunction, y: &StepFunction) -> Result<bool> {
    if y.domain() != Domain::HalfLine {
        return Err(Error::pre("(M_phi)_a membership is tested on [0, inf)"));
    }
    let r = rearrangement(y);
    let pieces = r.level_integral.pieces();
    let at_zero = &pieces[0].slope * phi.at_zero_plus();
    let last = pieces.last().expect("final piece");
    let at_inf = phi.limit_against(&last.intercept, &last.slope);
    Ok(at_zero.is_zero() && at_inf.is_zero())
}

/// The `phi(n) x**(n) + ||x* chi_[n, inf)||_E` bound on `||y_n||_E` for the flattened-head sequence.
pub fn flatten_head_bound(space: &SpaceSpec, x: &StepFunction, n: &Rational) -> Result<ExtendedRational> {
    let star = rearrangement(x).star;
    let head = crate::rearrange::maximal_eval(x, n)? * fundamental_eval(space, n)?;
    let rest = norm(space, &star.restrict(n, None)?);
    Ok(ExtendedRational::Finite(head).add(&rest))
}
