//! The Hardy-Littlewood-Polya order `x ≺ y`, the families `M(x, tau, eps)`,
//! the two-majorant construction covering such a family, and Hardy's lemma.

use num::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pl::PiecewiseLinear;
use crate::rational::{format_rational, int, min_rat, serde_rational, serde_rational_opt, Rational};
use crate::rearrange::level_integral;
use crate::step::{Domain, StepFunction};

/// Outcome of `x ≺ y`. When it fails, `witness` is a `t` with `Phi_x(t) > Phi_y(t)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HlpVerdict {
    pub holds: bool,
    #[serde(with = "serde_rational_opt")]
    pub witness: Option<Rational>,
}

/// Decides `x ≺ y`, i.e. `Phi_x(t) <= Phi_y(t)` for every `t > 0`.
///
/// Both level integrals are piecewise linear, so it suffices to compare them on
/// the union of their nodes and then compare final slopes.
pub fn hlp_compare(x: &StepFunction, y: &StepFunction) -> Result<HlpVerdict> {
    if x.domain() != y.domain() {
        return Err(Error::DomainMismatch);
    }
    let witness = level_integral(x).exceeds_somewhere(&level_integral(y));
    Ok(HlpVerdict {
        holds: witness.is_none(),
        witness,
    })
}

pub fn precedes(x: &StepFunction, y: &StepFunction) -> Result<bool> {
    hlp_compare(x, y).map(|v| v.holds)
}

fn check_tau_eps(tau: &Rational, eps: &Rational) -> Result<()> {
    if !tau.is_positive() {
        return Err(Error::pre(format!(
            "tau must be positive, got {}",
            format_rational(tau)
        )));
    }
    if !eps.is_positive() {
        return Err(Error::pre(format!(
            "eps must be positive, got {}",
            format_rational(eps)
        )));
    }
    Ok(())
}

/// Membership in `M(x, tau, eps) = { y = y*, y ≺ x, Phi_y(tau) + eps <= Phi_x(tau) }`.
pub fn family_contains(y: &StepFunction, x: &StepFunction, tau: &Rational, eps: &Rational) -> Result<bool> {
    if !x.is_decreasing() {
        return Err(Error::NotDecreasing);
    }
    if x.domain() != y.domain() {
        return Err(Error::DomainMismatch);
    }
    check_tau_eps(tau, eps)?;
    if !y.is_decreasing() {
        return Ok(false);
    }
    let px = PiecewiseLinear::primitive(x);
    let py = PiecewiseLinear::primitive(y);
    if py.exceeds_somewhere(&px).is_some() {
        return Ok(false);
    }
    Ok(py.eval(tau) + eps <= px.eval(tau))
}

/// Which geometry the construction ran into.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CaseTag {
    /// `Phi_x` bends somewhere strictly between `gamma` and `beta`.
    AffineGap,
    /// `Phi_x` coincides with the chord on all of `[gamma, beta]`.
    AffineChord,
}

/// Every quantity produced by [`majorant_pair`], kept for audit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionTrace {
    #[serde(with = "serde_rational")]
    pub tau: Rational,
    #[serde(with = "serde_rational")]
    pub eps: Rational,
    #[serde(with = "serde_rational")]
    pub gamma: Rational,
    #[serde(with = "serde_rational")]
    pub beta: Rational,
    #[serde(with = "serde_rational")]
    pub xi: Rational,
    pub case_tag: CaseTag,
    #[serde(with = "serde_rational_opt")]
    pub gamma0: Option<Rational>,
    #[serde(with = "serde_rational_opt")]
    pub gamma1: Option<Rational>,
    #[serde(with = "serde_rational_opt")]
    pub beta1: Option<Rational>,
    /// Downward offset of the chord used to place `gamma1`, `beta1`.
    #[serde(with = "serde_rational_opt")]
    pub chord_offset: Option<Rational>,
    pub z: StepFunction,
    pub w: StepFunction,
    #[serde(with = "serde_rational")]
    pub tau1: Rational,
    #[serde(with = "serde_rational")]
    pub eps1: Rational,
}

/// `x` on `[0, a) ∪ [b, inf)`, and the average of `x` over `[a, b)` in between.
fn average_over(x: &StepFunction, level: &PiecewiseLinear, a: &Rational, b: &Rational) -> Result<StepFunction> {
    let avg = (level.eval(b) - level.eval(a)) / (b - a);
    let head = x.restrict(&Rational::zero(), Some(a))?;
    let mid = StepFunction::boxed(x.domain(), a, Some(b), avg)?;
    let rest = x.restrict(b, None)?;
    head.add(&mid)?.add(&rest)
}

fn check_construction_input(x: &StepFunction, tau: &Rational, eps: &Rational) -> Result<PiecewiseLinear> {
    if !x.is_decreasing() {
        return Err(Error::NotDecreasing);
    }
    check_tau_eps(tau, eps)?;
    let level = PiecewiseLinear::primitive(x);
    if *eps >= level.eval(tau) {
        return Err(Error::EmptyFamily);
    }
    Ok(level)
}

/// Two nonincreasing functions `z, w ≺ x`, both different from `x`, such that
/// every `y` in `M(x, tau, eps)` satisfies `y ≺ z` or `y ≺ w`.
///
/// `x` must equal `x*`, live on `[0, inf)` and vanish at infinity, with
/// `0 < eps < Phi_x(tau)`.
pub fn majorant_pair(x: &StepFunction, tau: &Rational, eps: &Rational) -> Result<ConstructionTrace> {
    if x.domain() != Domain::HalfLine {
        return Err(Error::pre("the two-majorant construction works on [0, inf)"));
    }
    if !x.tail().is_zero() {
        if x.is_decreasing() {
            return Err(Error::NonzeroAtInfinity);
        }
        return Err(Error::NotDecreasing);
    }
    let level = check_construction_input(x, tau, eps)?;
    let phi_tau = level.eval(tau);
    let target = &phi_tau - eps;
    let zero = Rational::zero();

    let gamma = level
        .meet_line(&target, &zero, &zero, false)
        .ok_or_else(|| Error::Internal("no level crossing below tau".into()))?;
    let ray_slope = &target / tau;
    let beta = level
        .meet_line(&zero, &ray_slope, tau, true)
        .ok_or_else(|| Error::Internal("ray through the origin never meets Phi_x".into()))?;
    let xi = (level.eval(&beta) - level.eval(&gamma)) / (&beta - &gamma);

    let bends_inside = level.breakpoints().iter().any(|s| *s > gamma && *s < beta);

    let half = int(1) / int(2);
    let mut trace = if bends_inside {
        let z = average_over(x, &level, &gamma, &beta)?;
        let tau1 = min_rat(&(tau - &gamma), &(&beta - tau)) * &half;
        ConstructionTrace {
            tau: tau.clone(),
            eps: eps.clone(),
            gamma,
            beta,
            xi,
            case_tag: CaseTag::AffineGap,
            gamma0: None,
            gamma1: None,
            beta1: None,
            chord_offset: None,
            w: z.clone(),
            z,
            tau1,
            eps1: Rational::zero(),
        }
    } else {
        // chord line: intercept + xi t
        let intercept = level.eval(&gamma) - &xi * &gamma;
        let gamma0 = level
            .meet_line(&intercept, &xi, &zero, false)
            .ok_or_else(|| Error::Internal("chord does not touch Phi_x".into()))?;
        if !gamma0.is_positive() || !intercept.is_positive() {
            return Err(Error::Internal("chord passes through the origin".into()));
        }
        let offset = min_rat(eps, &(&intercept * &half)).clone();
        let lowered = &intercept - &offset;
        let gamma1 = level
            .meet_line(&lowered, &xi, &zero, false)
            .ok_or_else(|| Error::Internal("lowered chord misses the head".into()))?;
        let beta1 = level
            .meet_line(&lowered, &xi, &beta, true)
            .ok_or_else(|| Error::Internal("lowered chord misses the tail".into()))?;
        let z = average_over(x, &level, &gamma1, tau)?;
        let w = average_over(x, &level, &gamma, &beta1)?;
        let tau1 = min_rat(&(tau - &gamma1), &(&beta1 - tau)) * &half;
        ConstructionTrace {
            tau: tau.clone(),
            eps: eps.clone(),
            gamma,
            beta,
            xi,
            case_tag: CaseTag::AffineChord,
            gamma0: Some(gamma0),
            gamma1: Some(gamma1),
            beta1: Some(beta1),
            chord_offset: Some(offset),
            z,
            w,
            tau1,
            eps1: Rational::zero(),
        }
    };

    let below = tau - &trace.tau1;
    let above = tau + &trace.tau1;
    let gap_z = level.eval(&below) - PiecewiseLinear::primitive(&trace.z).eval(&below);
    let gap_w = level.eval(&above) - PiecewiseLinear::primitive(&trace.w).eval(&above);
    trace.eps1 = min_rat(&gap_z, &gap_w).clone();

    trace.check_invariants(x).map_err(Error::Internal)?;
    Ok(trace)
}

impl ConstructionTrace {
    /// Re-verifies every structural claim about the construction, exactly.
    pub fn check_invariants(&self, x: &StepFunction) -> std::result::Result<(), String> {
        let zero = Rational::zero();
        if !(zero < self.gamma && self.gamma < self.tau && self.tau < self.beta) {
            return Err("expected 0 < gamma < tau < beta".into());
        }
        for (name, f) in [("z", &self.z), ("w", &self.w)] {
            if !f.is_decreasing() {
                return Err(format!("{name} is not nonincreasing"));
            }
            match hlp_compare(f, x) {
                Ok(v) if v.holds => {}
                _ => return Err(format!("{name} is not majorized by x")),
            }
            if f == x {
                return Err(format!("{name} coincides with x*"));
            }
        }
        if !(self.tau1.is_positive() && self.tau1 < self.tau) {
            return Err("tau1 must lie in (0, tau)".into());
        }
        if !self.eps1.is_positive() {
            return Err("eps1 must be positive".into());
        }
        let below = &self.tau - &self.tau1;
        let above = &self.tau + &self.tau1;
        if !family_contains(&self.z, x, &below, &self.eps1).map_err(|e| e.to_string())? {
            return Err("z is not in M(x, tau - tau1, eps1)".into());
        }
        if !family_contains(&self.w, x, &above, &self.eps1).map_err(|e| e.to_string())? {
            return Err("w is not in M(x, tau + tau1, eps1)".into());
        }
        if self.case_tag == CaseTag::AffineChord {
            let (Some(g0), Some(g1), Some(b1)) = (&self.gamma0, &self.gamma1, &self.beta1) else {
                return Err("chord case is missing gamma0/gamma1/beta1".into());
            };
            if !(zero < *g1 && g1 < g0 && *g0 <= self.gamma && self.beta < *b1) {
                return Err("expected 0 < gamma1 < gamma0 <= gamma < beta < beta1".into());
            }
        }
        Ok(())
    }

    /// `y ≺ z` or `y ≺ w`.
    pub fn covers(&self, y: &StepFunction) -> Result<bool> {
        Ok(precedes(y, &self.z)? || precedes(y, &self.w)?)
    }
}

const SAMPLER_GRID: i64 = 16;

fn grid_fraction(rng: &mut ChaCha8Rng, lo: i64) -> Rational {
    Rational::new(rng.gen_range(lo..=SAMPLER_GRID).into(), SAMPLER_GRID.into())
}

/// A member of `M(x, tau, eps)`, deterministic per seed.
///
/// Seed 0 returns the scaled member `((Phi_x(tau) - eps) / Phi_x(tau)) x`.
/// Other seeds draw from scaled members, head-flattened members, and members
/// whose level integral is `min(Phi_x, l)` for a line `l` through
/// `(tau, Phi_x(tau) - eps)` (optionally thinned by chord interpolation).
pub fn sample_family_member(x: &StepFunction, tau: &Rational, eps: &Rational, seed: u64) -> Result<StepFunction> {
    let level = check_construction_input(x, tau, eps)?;
    let domain = x.domain();
    let phi_tau = level.eval(tau);
    let target = &phi_tau - eps;
    let base_scale = &target / &phi_tau;

    let y = if seed == 0 {
        x.scale(&base_scale)
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let strategy = rng.gen_range(0..4);
        let k = grid_fraction(&mut rng, 1);
        match strategy {
            0 => x.scale(&(&base_scale * &k)),
            1 => {
                // flatten the head over [0, r), then scale into the family
                let reach = match domain {
                    Domain::Unit => int(1),
                    Domain::HalfLine => x.last_breakpoint().max(tau.clone()),
                };
                let r = reach * grid_fraction(&mut rng, 1);
                let flat = average_over(x, &level, &Rational::zero(), &r)?;
                let at_tau = PiecewiseLinear::primitive(&flat).eval(tau);
                let s = min_rat(&int(1), &(&target / &at_tau)).clone();
                flat.scale(&(s * &k))
            }
            _ => {
                let eta = &target / tau * grid_fraction(&mut rng, 0);
                let line = PiecewiseLinear::affine(&target - &eta * tau, eta);
                let mut env = level.min_with(&line);
                if strategy == 3 {
                    // keep a random subset of nodes (always the last) and interpolate chords
                    let nodes = env.breakpoints();
                    let keep: Vec<Rational> = nodes
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| *i + 1 == nodes.len() || rng.gen_bool(0.5))
                        .map(|(_, s)| s.clone())
                        .collect();
                    env = env.chord_interpolation(&keep)?;
                }
                env.derivative(domain)?.scale(&k)
            }
        }
    };
    if !family_contains(&y, x, tau, eps)? {
        return Err(Error::Internal(format!("sampled function {y} is not in the family")));
    }
    Ok(y)
}

/// Hardy's lemma on step functions: if `int_0^t u <= int_0^t v` for every `t`
/// and `w` is nonincreasing and nonnegative, then `int u w <= int v w`.
///
/// The hypothesis is checked exactly (violations come back as
/// [`Error::HypothesisViolated`]); the returned flag is the conclusion.
pub fn hardy_check(u: &StepFunction, v: &StepFunction, w: &StepFunction) -> Result<bool> {
    if u.domain() != v.domain() || u.domain() != w.domain() {
        return Err(Error::DomainMismatch);
    }
    if !u.is_nonnegative() || !v.is_nonnegative() {
        return Err(Error::pre("u and v must be nonnegative"));
    }
    if !w.is_decreasing() {
        return Err(Error::NotDecreasing);
    }
    let pu = PiecewiseLinear::primitive(u);
    let pv = PiecewiseLinear::primitive(v);
    if let Some(witness) = pu.exceeds_somewhere(&pv) {
        return Err(Error::HypothesisViolated { witness });
    }
    let lhs = u.mul(w)?.total_integral()?;
    let rhs = v.mul(w)?.total_integral()?;
    Ok(lhs <= rhs)
}
