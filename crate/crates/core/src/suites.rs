//! Randomized property suites with counterexample shrinking.
//!
//! Case `i` of a run with seed `s` draws from a ChaCha8 stream keyed by
//! `(s, i)`, so any single case can be replayed and cases are independent of
//! evaluation order. Each suite pairs the library routine with a check built
//! from definitions rather than from the routine itself.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::gen::{shift_right, GenConfig};
use crate::majorize::{hardy_check, hlp_compare, majorant_pair, sample_family_member};
use crate::pl::PiecewiseLinear;
use crate::rational::{int, serde_rational_vec, ExtendedRational, Rational};
use crate::rearrange::{decreasing_rearrangement, rearrangement};
use crate::spaces::{fundamental_eval, norm, FundamentalFunction, SpaceKind, SpaceSpec};
use crate::step::{Domain, StepFunction};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Rearrange,
    Hlp,
    Prop32,
    Spaces,
    Hardy,
}

impl Suite {
    pub const ALL: [Suite; 5] = [Suite::Rearrange, Suite::Hlp, Suite::Prop32, Suite::Spaces, Suite::Hardy];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Rearrange => "rearrange",
            Suite::Hlp => "hlp",
            Suite::Prop32 => "prop32",
            Suite::Spaces => "spaces",
            Suite::Hardy => "hardy",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown suite {s:?}")))
    }
}

/// One generated input: some step functions and some rational parameters.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Case {
    pub funcs: Vec<StepFunction>,
    #[serde(with = "serde_rational_vec")]
    pub params: Vec<Rational>,
    /// Extra integer knobs (sampler seeds, selectors); never shrunk.
    pub knobs: Vec<u64>,
}

pub enum Outcome {
    /// Holds; the tags are tallied in the report.
    Pass(Vec<&'static str>),
    Fail(String),
    /// The input no longer meets the suite's preconditions (only seen while shrinking).
    Discard,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub case_index: u64,
    pub message: String,
    pub minimized: Case,
    pub original: Case,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub seed: u64,
    pub cases: u64,
    pub passed: u64,
    pub discarded: u64,
    pub tags: BTreeMap<String, u64>,
    pub counterexample: Option<Counterexample>,
}

impl SuiteReport {
    pub fn ok(&self) -> bool {
        self.counterexample.is_none()
    }
}

pub fn case_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

pub fn generate(suite: Suite, cfg: &GenConfig, rng: &mut ChaCha8Rng) -> Case {
    let case = |funcs, params, knobs| Case { funcs, params, knobs };
    match suite {
        Suite::Rearrange => case(vec![cfg.step_any_domain(rng)], vec![], vec![]),
        Suite::Hlp => {
            let y = cfg.step_any_domain(rng);
            let domain = y.domain();
            let x = match rng.gen_range(0..3) {
                0 => cfg.step(rng, domain),
                1 => y.scale(&cfg.value(rng, 1, false)),
                _ => {
                    // averaging the head of y* keeps it below y
                    let star = decreasing_rearrangement(&y);
                    let r = cfg.positive(rng).min(int(40));
                    flatten(&star, &r)
                }
            };
            case(vec![x, y], vec![], vec![])
        }
        Suite::Prop32 => {
            let x = cfg.decreasing(rng);
            let (tau, eps) = cfg.tau_eps(rng, &x);
            let seeds = (0..5).map(|_| rng.gen_range(0..1_000_000)).collect();
            case(vec![x], vec![tau, eps], seeds)
        }
        Suite::Spaces => {
            let x = cfg.step(rng, Domain::HalfLine);
            let r = cfg.positive(rng).min(int(40));
            let t = cfg.positive(rng).min(int(40));
            let c = cfg.positive(rng).min(int(40));
            let phi = cfg.concave_phi(rng);
            // phi rides along as (derivative, jump0) so that it shrinks with the case
            let jump0 = phi.jump0().clone();
            let lifted = PiecewiseLinear::new(
                phi.breakpoints().to_vec(),
                phi.values().iter().map(|v| v - &jump0).collect(),
                Rational::zero(),
                phi.final_slope().clone(),
            )
            .expect("same nodes");
            let slope = lifted.derivative(Domain::HalfLine).expect("jump0 removed");
            let funcs = vec![x, slope];
            case(funcs, vec![r, t, c, jump0], vec![])
        }
        Suite::Hardy => {
            let domain = if rng.gen_bool(0.8) {
                Domain::HalfLine
            } else {
                Domain::Unit
            };
            let (zv, zu) = (rng.gen_bool(0.5), rng.gen_bool(0.5));
            let v = cfg.nonnegative(rng, domain, zv);
            let u = match rng.gen_range(0..4) {
                0 => cfg.nonnegative(rng, domain, zu),
                1 => shift_right(&v, &cfg.positive(rng).min(int(4))).scale(&cfg.value(rng, 1, false)),
                2 => v
                    .min(&StepFunction::constant(domain, cfg.value(rng, 5, false)))
                    .expect("same domain"),
                _ => v.scale(&cfg.value(rng, 1, false)),
            };
            let w = match domain {
                Domain::HalfLine => cfg
                    .decreasing(rng)
                    .add(&StepFunction::constant(domain, cfg.value(rng, 2, false)))
                    .expect("same domain"),
                Domain::Unit => decreasing_rearrangement(&cfg.step(rng, domain)),
            };
            case(vec![u, v, w], vec![], vec![])
        }
    }
}

/// `avg(x over [0, r)) chi_[0, r) + x chi_[r, alpha)`.
fn flatten(x: &StepFunction, r: &Rational) -> StepFunction {
    let r = match x.domain() {
        Domain::Unit if *r >= int(1) => int(1) / int(2),
        _ => r.clone(),
    };
    let avg = x.integrate(&Rational::zero(), Some(&r)).expect("bounded interval") / &r;
    StepFunction::head(x.domain(), &r, avg)
        .and_then(|h| h.add(&x.restrict(&r, None)?))
        .expect("same domain")
}

/// Nonincreasing step function `x*` computed from the definition
/// `x*(t) = inf{ lambda >= 0 : d_x(lambda) <= t }`, evaluated at `t`.
pub fn star_by_definition(x: &StepFunction, t: &Rational) -> Rational {
    let mut levels: Vec<Rational> = x.values().iter().chain([x.tail()]).map(|v| v.abs()).collect();
    levels.push(Rational::zero());
    levels.sort();
    levels.dedup();
    for lambda in levels {
        if x.exceedance_measure(&lambda)
            .expect("nonnegative")
            .cmp_rational(t)
            .is_le()
        {
            return lambda;
        }
    }
    unreachable!("d_x(max |x|) = 0")
}

fn sample_points(fs: &[&StepFunction], extra: &[Rational]) -> Vec<Rational> {
    let mut pts: Vec<Rational> = Vec::new();
    for f in fs {
        pts.extend(f.breakpoints().iter().cloned());
    }
    pts.extend(extra.iter().cloned());
    pts.sort();
    pts.dedup();
    let mut out = Vec::with_capacity(pts.len() * 2 + 2);
    let mut prev = Rational::zero();
    for p in &pts {
        out.push((&prev + p) / int(2));
        out.push(p.clone());
        prev = p.clone();
    }
    out.push(&prev + int(1));
    out.push(&prev * int(2) + int(7));
    out
}

/// `t -> int_0^t x*`, by direct integration of the rearranged pieces.
fn prefix_of(x: &StepFunction) -> impl Fn(&Rational) -> Rational {
    let star = decreasing_rearrangement(x);
    move |t: &Rational| {
        let end = match star.domain() {
            Domain::Unit if *t > int(1) => int(1),
            _ => t.clone(),
        };
        star.integrate(&Rational::zero(), Some(&end)).expect("bounded interval")
    }
}

fn check_rearrange(case: &Case) -> Outcome {
    let x = &case.funcs[0];
    let r = rearrangement(x);
    if !r.star.is_decreasing() {
        return Outcome::Fail("x* is not nonincreasing".into());
    }
    let mut probes = sample_points(&[x, &r.star], &[]);
    if x.domain() == Domain::Unit {
        probes.retain(|t| *t < int(1));
    }
    for t in &probes {
        let expect = star_by_definition(x, t);
        let got = r.star.evaluate(t).expect("inside domain");
        if got != expect {
            return Outcome::Fail(format!("x*({t}) = {got}, definition gives {expect}"));
        }
    }
    let mut levels: Vec<Rational> = x.values().iter().chain([x.tail()]).map(|v| v.abs()).collect();
    levels.push(Rational::zero());
    for l in levels.clone() {
        levels.push(l + Rational::new(1.into(), 3.into()));
    }
    for l in &levels {
        if x.exceedance_measure(l).ok() != r.star.exceedance_measure(l).ok() {
            return Outcome::Fail(format!("d_x and d_x* differ at {l}"));
        }
    }
    if !r.level_integral.is_concave_nondecreasing() {
        return Outcome::Fail("Phi_x is not concave".into());
    }
    Outcome::Pass(vec![if x.domain() == Domain::Unit {
        "unit"
    } else {
        "half_line"
    }])
}

fn check_hlp(case: &Case) -> Outcome {
    let (x, y) = (&case.funcs[0], &case.funcs[1]);
    if x.domain() != y.domain() {
        return Outcome::Discard;
    }
    let v = match hlp_compare(x, y) {
        Ok(v) => v,
        Err(e) => return Outcome::Fail(e.to_string()),
    };
    let sx = decreasing_rearrangement(x);
    let sy = decreasing_rearrangement(y);
    let (px, py) = (prefix_of(x), prefix_of(y));
    let mut oracle_holds = sample_points(&[&sx, &sy], &[]).iter().all(|t| px(t) <= py(t));
    if x.domain() == Domain::HalfLine && sx.tail() > sy.tail() {
        oracle_holds = false;
    }
    if v.holds != oracle_holds {
        return Outcome::Fail(format!(
            "hlp_compare says {}, node comparison says {oracle_holds}",
            v.holds
        ));
    }
    if let Some(w) = &v.witness {
        if px(w) <= py(w) {
            return Outcome::Fail(format!("witness {w} does not separate the level integrals"));
        }
    }
    Outcome::Pass(vec![if v.holds { "holds" } else { "fails" }])
}

fn check_covering(case: &Case) -> Outcome {
    let x = &case.funcs[0];
    let (tau, eps) = (&case.params[0], &case.params[1]);
    if !x.is_decreasing()
        || !x.tail().is_zero()
        || !tau.is_positive()
        || !eps.is_positive()
        || *eps >= prefix_of(x)(tau)
    {
        return Outcome::Discard;
    }
    let trace = match majorant_pair(x, tau, eps) {
        Ok(t) => t,
        Err(e) => return Outcome::Fail(format!("majorant_pair failed: {e}")),
    };
    if let Err(msg) = trace.check_invariants(x) {
        return Outcome::Fail(msg);
    }
    for &seed in &case.knobs {
        let y = match sample_family_member(x, tau, eps, seed) {
            Ok(y) => y,
            Err(e) => return Outcome::Fail(format!("sampler failed for seed {seed}: {e}")),
        };
        let pts = sample_points(&[&y, &trace.z, &trace.w], &[]);
        let py = prefix_of(&y);
        let below = |f: &StepFunction| {
            let pf = prefix_of(f);
            pts.iter().all(|t| py(t) <= pf(t))
        };
        let covered = below(&trace.z) || below(&trace.w);
        if !covered || !trace.covers(&y).unwrap_or(false) {
            return Outcome::Fail(format!("member from seed {seed} is below neither z nor w"));
        }
    }
    Outcome::Pass(vec![match trace.case_tag {
        crate::majorize::CaseTag::AffineGap => "affine_gap",
        crate::majorize::CaseTag::AffineChord => "affine_chord",
    }])
}

fn spaces_under_test(case: &Case) -> Option<Vec<SpaceSpec>> {
    let phi_step = &case.funcs[1];
    let (c, jump0) = (&case.params[2], &case.params[3]);
    if !phi_step.is_decreasing() || jump0.is_negative() || !c.is_positive() {
        return None;
    }
    let pl = PiecewiseLinear::primitive(phi_step);
    let pl = PiecewiseLinear::new(
        pl.breakpoints().to_vec(),
        pl.values().iter().map(|v| v + jump0).collect(),
        jump0.clone(),
        pl.final_slope().clone(),
    )
    .ok()?;
    let phi = FundamentalFunction::piecewise(crate::pl::PiecewiseLinearConcave::new(pl).ok()?).ok()?;
    let hyper = FundamentalFunction::hyperbolic(c.clone()).ok()?;
    Some(vec![
        SpaceSpec::l1(),
        SpaceSpec::linf(),
        SpaceSpec::l1_plus_linf(),
        SpaceSpec::marcinkiewicz(phi.clone()),
        SpaceSpec::marcinkiewicz_star(phi),
        SpaceSpec::marcinkiewicz(hyper.clone()),
        SpaceSpec::marcinkiewicz_star(hyper),
    ])
}

fn check_spaces(case: &Case) -> Outcome {
    let x = &case.funcs[0];
    let (r, t) = (&case.params[0], &case.params[1]);
    let Some(spaces) = spaces_under_test(case) else {
        return Outcome::Discard;
    };
    if !r.is_positive() || !t.is_positive() {
        return Outcome::Discard;
    }
    let star = decreasing_rearrangement(x);
    let below = flatten(&star, r).scale(&Rational::new(9.into(), 10.into()));
    let chi = StepFunction::head(Domain::HalfLine, t, int(1)).expect("positive length");
    for space in &spaces {
        let nx = norm(space, x);
        if nx != norm(space, &star) {
            return Outcome::Fail(format!("{} norm is not rearrangement invariant", space.label()));
        }
        if space.is_banach() {
            let m = SpaceSpec::marcinkiewicz(space.fundamental_function());
            if norm(&m, x) > nx {
                return Outcome::Fail(format!("{} is not embedded in M_phi_E with constant 1", space.label()));
            }
        }
        if matches!(space.kind, SpaceKind::L1PlusLinf | SpaceKind::Marcinkiewicz(_)) && norm(space, &below) > nx {
            return Outcome::Fail(format!("{} norm is not monotone under ≺", space.label()));
        }
        if let SpaceKind::Marcinkiewicz(phi) = &space.kind {
            if norm(&SpaceSpec::marcinkiewicz_star(phi.clone()), x) > nx {
                return Outcome::Fail("M*_phi norm exceeds M_phi norm".into());
            }
        }
        match fundamental_eval(space, t) {
            Ok(f) if norm(space, &chi) == ExtendedRational::Finite(f.clone()) => {}
            _ => {
                return Outcome::Fail(format!(
                    "{} fundamental function disagrees with the box norm",
                    space.label()
                ))
            }
        }
    }
    Outcome::Pass(vec![])
}

fn check_hardy(case: &Case) -> Outcome {
    let (u, v, w) = (&case.funcs[0], &case.funcs[1], &case.funcs[2]);
    if u.domain() != v.domain()
        || u.domain() != w.domain()
        || !u.is_nonnegative()
        || !v.is_nonnegative()
        || !w.is_decreasing()
    {
        return Outcome::Discard;
    }
    let pu = PiecewiseLinear::primitive(u);
    let pv = PiecewiseLinear::primitive(v);
    match hardy_check(u, v, w) {
        Ok(true) => {
            let mut pts = sample_points(&[u, v], &[]);
            if u.domain() == Domain::Unit {
                pts.retain(|t| *t <= int(1));
            }
            if pts.iter().any(|t| pu.eval(t) > pv.eval(t)) {
                return Outcome::Fail("hypothesis fails at a sample point but was accepted".into());
            }
            Outcome::Pass(vec!["admissible"])
        }
        Ok(false) => Outcome::Fail("conclusion int u w <= int v w fails".into()),
        Err(Error::HypothesisViolated { witness }) => {
            if pu.eval(&witness) > pv.eval(&witness) {
                Outcome::Pass(vec!["rejected"])
            } else {
                Outcome::Fail(format!("witness {witness} does not violate the hypothesis"))
            }
        }
        Err(e) => Outcome::Fail(e.to_string()),
    }
}

pub fn check(suite: Suite, case: &Case) -> Outcome {
    match suite {
        Suite::Rearrange => check_rearrange(case),
        Suite::Hlp => check_hlp(case),
        Suite::Prop32 => check_covering(case),
        Suite::Spaces => check_spaces(case),
        Suite::Hardy => check_hardy(case),
    }
}

fn drop_piece(f: &StepFunction, i: usize) -> Option<StepFunction> {
    let mut b = f.breakpoints().to_vec();
    let mut v = f.values().to_vec();
    b.remove(i);
    v.remove(i);
    StepFunction::new(f.domain(), b, v, f.tail().clone()).ok()
}

/// Simpler nearby rationals, simplest first.
fn simpler(r: &Rational) -> Vec<Rational> {
    let mut out = vec![Rational::zero(), int(1), r.floor(), r.ceil(), r.round()];
    for d in [2, 4, 10] {
        out.push((r * int(d)).round() / int(d));
    }
    out.retain(|c| (c != r && c.denom() < r.denom()) || (c.denom() == r.denom() && c.numer().abs() < r.numer().abs()));
    out.dedup();
    out
}

fn candidates(case: &Case) -> Vec<Case> {
    let mut out = Vec::new();
    for (k, f) in case.funcs.iter().enumerate() {
        for i in 0..f.breakpoints().len() {
            if let Some(g) = drop_piece(f, i) {
                let mut c = case.clone();
                c.funcs[k] = g;
                out.push(c);
            }
        }
    }
    for (k, f) in case.funcs.iter().enumerate() {
        for i in 0..f.values().len() + 1 {
            let current = if i < f.values().len() { &f.values()[i] } else { f.tail() };
            for s in simpler(current) {
                let mut vals = f.values().to_vec();
                let mut tail = f.tail().clone();
                if i < vals.len() {
                    vals[i] = s;
                } else {
                    tail = s;
                }
                if let Ok(g) = StepFunction::new(f.domain(), f.breakpoints().to_vec(), vals, tail) {
                    let mut c = case.clone();
                    c.funcs[k] = g;
                    out.push(c);
                }
            }
        }
        for i in 0..f.breakpoints().len() {
            for s in simpler(&f.breakpoints()[i]) {
                let mut bps = f.breakpoints().to_vec();
                bps[i] = s;
                if let Ok(g) = StepFunction::new(f.domain(), bps, f.values().to_vec(), f.tail().clone()) {
                    let mut c = case.clone();
                    c.funcs[k] = g;
                    out.push(c);
                }
            }
        }
    }
    for (k, p) in case.params.iter().enumerate() {
        for s in simpler(p) {
            let mut c = case.clone();
            c.params[k] = s;
            out.push(c);
        }
    }
    out
}

/// Greedy shrink: take the first candidate that still fails, until none does.
pub fn shrink(suite: Suite, mut case: Case, mut message: String) -> (Case, String) {
    'outer: for _ in 0..500 {
        for cand in candidates(&case) {
            if let Outcome::Fail(msg) = check(suite, &cand) {
                case = cand;
                message = msg;
                continue 'outer;
            }
        }
        break;
    }
    (case, message)
}

/// Runs `cases` cases; stops at the first failure and shrinks it.
pub fn run_suite(suite: Suite, cases: u64, seed: u64) -> SuiteReport {
    let cfg = GenConfig::default();
    let mut report = SuiteReport {
        suite,
        seed,
        cases,
        passed: 0,
        discarded: 0,
        tags: BTreeMap::new(),
        counterexample: None,
    };
    for i in 0..cases {
        let mut rng = case_rng(seed, i);
        let case = generate(suite, &cfg, &mut rng);
        match check(suite, &case) {
            Outcome::Pass(tags) => {
                report.passed += 1;
                for t in tags {
                    *report.tags.entry(t.to_string()).or_default() += 1;
                }
            }
            Outcome::Discard => report.discarded += 1,
            Outcome::Fail(msg) => {
                let (minimized, message) = shrink(suite, case.clone(), msg);
                report.counterexample = Some(Counterexample {
                    case_index: i,
                    message,
                    minimized,
                    original: case,
                });
                break;
            }
        }
    }
    report
}
