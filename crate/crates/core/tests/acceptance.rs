//! Acceptance gate: one PASS/FAIL line per criterion, exact comparisons only.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use num::{Signed, Zero};
use rand::Rng;
use rearrcalc::gen::{shift_right, GenConfig};
use rearrcalc::majorize::{family_contains, hardy_check, hlp_compare, majorant_pair, sample_family_member, CaseTag};
use rearrcalc::rearrange::{distribution, maximal_decay_threshold, maximal_eval};
use rearrcalc::spaces::{embeds_in_l1, flatten_head_bound, fundamental_eval, mphi_a_member};
use rearrcalc::suites::{case_rng, generate, Suite};
use rearrcalc::{
    builtin_family, decreasing_rearrangement, flatten_head, int, level_integral, measure_distance, norm, rat, Domain,
    Error, ExtendedRational, FamilySpec, FundamentalFunction, Rational, SpaceKind, SpaceSpec, StepFunction,
};
use sha2::{Digest, Sha256};

const SEED: u64 = 20_240_601;

type Check = Result<String, String>;
type Criterion = (&'static str, Duration, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn fin(r: Rational) -> ExtendedRational {
    ExtendedRational::Finite(r)
}

fn head(len: &Rational, c: Rational) -> StepFunction {
    StepFunction::head(Domain::HalfLine, len, c).unwrap()
}

fn hyperbolic_one() -> FundamentalFunction {
    FundamentalFunction::hyperbolic(int(1)).unwrap()
}

// ---- 1 ----

fn spreading_boxes() -> Check {
    let fam = builtin_family(FamilySpec::Remark45).map_err(|e| e.to_string())?;
    let x = head(&int(1), int(1));
    let zero = StepFunction::zero(Domain::HalfLine);
    let deltas = [int(1), rat(1, 2), rat(1, 10), rat(1, 50)];
    let mut zero_checks = 0;
    for n in 1..=50u64 {
        let xn = fam.member(n).map_err(|e| e.to_string())?;
        ensure(norm(&SpaceSpec::l1(), &xn) == fin(int(1)), || {
            format!("L1 norm of x_{n} is not 1")
        })?;
        ensure(hlp_compare(&xn, &x).unwrap().holds && common::precedes(&xn, &x), || {
            format!("x_{n} not ≺ x")
        })?;
        let star = decreasing_rearrangement(&xn);
        for d in &deltas {
            if int(n as i64) >= int(1) / d {
                let got = measure_distance(&star, &zero, d).unwrap();
                ensure(
                    got.is_zero() && common::distribution(&xn, d) == Some(Rational::zero()),
                    || format!("distance of x_{n}* to 0 at delta {d} is {got}"),
                )?;
                zero_checks += 1;
            }
        }
    }
    Ok(format!("n = 1..50, {zero_checks} zero-distance checks"))
}

// ---- 2 ----

fn shrinking_heads() -> Check {
    let phi = hyperbolic_one();
    let space = SpaceSpec::marcinkiewicz_star(phi.clone());
    let one = StepFunction::constant(Domain::HalfLine, int(1));
    ensure(norm(&space, &one) == fin(int(1)), || {
        "norm of the constant 1 is not 1".into()
    })?;
    let fam = builtin_family(FamilySpec::Example46Heads).unwrap();
    for n in 1..=50i64 {
        let xn = fam.member(n as u64).unwrap();
        // oracle: sup x*(t) phi(t) on a single box of length 1/n is phi(1/n)
        let oracle = phi.eval(&rat(1, n));
        let frozen = rat(1, n + 1);
        ensure(oracle == frozen, || format!("oracle disagrees with 1/(n+1) at n = {n}"))?;
        let got = norm(&space, &xn);
        ensure(got == fin(frozen), || format!("norm of head {n} is {got}"))?;
    }
    ensure(!mphi_a_member(&phi, &one).unwrap(), || {
        "constant 1 reported in (M_phi)_a".into()
    })?;
    Ok("norm 1, member norms 1/(n+1) for n = 1..50, not in (M_phi)_a".into())
}

// ---- 3 ----

fn covering() -> Check {
    let cfg = GenConfig::default();
    let mut tags = [0u32; 2];
    let mut members = 0;
    for i in 0..1000u64 {
        let mut rng = case_rng(SEED, i);
        let case = generate(Suite::Prop32, &cfg, &mut rng);
        let (x, tau, eps) = (&case.funcs[0], &case.params[0], &case.params[1]);
        let trace = majorant_pair(x, tau, eps).map_err(|e| format!("case {i}: {e}"))?;
        trace.check_invariants(x).map_err(|e| format!("case {i}: {e}"))?;
        match trace.case_tag {
            CaseTag::AffineGap => tags[0] += 1,
            CaseTag::AffineChord => tags[1] += 1,
        }
        let x_star = decreasing_rearrangement(x);
        let lo = tau - &trace.tau1;
        let hi = tau + &trace.tau1;
        for (f, at, label) in [(&trace.z, &lo, "z"), (&trace.w, &hi, "w")] {
            ensure(common::precedes(f, x) && *f != x_star, || {
                format!("case {i}: {label} fails ≺ x or equals x*")
            })?;
            ensure(
                family_contains(f, x, at, &trace.eps1).unwrap()
                    && common::is_decreasing(f)
                    && common::level(f, at) + &trace.eps1 <= common::level(x, at),
                || format!("case {i}: {label} not in its shifted family"),
            )?;
        }
        for &seed in &case.knobs {
            let y = sample_family_member(x, tau, eps, seed).map_err(|e| format!("case {i}: {e}"))?;
            let by_lib = hlp_compare(&y, &trace.z).unwrap().holds || hlp_compare(&y, &trace.w).unwrap().holds;
            let by_oracle = common::precedes(&y, &trace.z) || common::precedes(&y, &trace.w);
            ensure(by_lib && by_oracle, || {
                format!("case {i}: member from seed {seed} is not covered")
            })?;
            members += 1;
        }
    }
    ensure(tags.iter().all(|&t| t >= 50), || {
        format!("case tags gap {} chord {}", tags[0], tags[1])
    })?;
    Ok(format!(
        "1000 instances, {members} members covered, gap {} chord {}",
        tags[0], tags[1]
    ))
}

// ---- 4 ----

fn rearrangement_oracle() -> Check {
    let cfg = GenConfig::default();
    for i in 0..1000u64 {
        let mut rng = case_rng(SEED ^ 4, i);
        let x = cfg.step_any_domain(&mut rng);
        let star = decreasing_rearrangement(&x);
        for t in common::probe_points(&[&x, &star])
            .iter()
            .filter(|t| x.domain().contains(t))
        {
            let got = star.evaluate(t).unwrap();
            ensure(got == common::star_at(&x, t), || {
                format!("case {i}: x*({t}) differs from the sorted oracle")
            })?;
        }
        if x.domain() == Domain::HalfLine {
            ensure(*star.tail() == common::star_infinity(&x), || {
                format!("case {i}: tail differs")
            })?;
        }
        let mut levels: Vec<Rational> = common::pieces(&x).into_iter().map(|p| p.2.abs()).collect();
        levels.push(Rational::zero());
        levels.sort();
        levels.dedup();
        let mids: Vec<Rational> = levels.windows(2).map(|w| (&w[0] + &w[1]) / int(2)).collect();
        for l in levels.iter().chain(&mids) {
            let dx = distribution(&x, l).unwrap();
            let ds = distribution(&star, l).unwrap();
            let oracle = common::distribution(&x, l).map_or(ExtendedRational::Infinite, fin);
            ensure(dx == ds && dx == oracle, || {
                format!("case {i}: distribution differs at level {l}")
            })?;
        }
    }
    Ok("1000 step functions".into())
}

// ---- 5 ----

fn maximal_function() -> Check {
    let cfg = GenConfig::default();
    let mut threshold_checks = 0;
    for i in 0..1000u64 {
        let mut rng = case_rng(SEED ^ 5, i);
        let x = cfg.step_any_domain(&mut rng);
        let y = cfg.step(&mut rng, x.domain());
        let sum = x.add(&y).unwrap();
        let star = decreasing_rearrangement(&x);
        let mut ts: Vec<Rational> = (0..10)
            .map(|_| match x.domain() {
                Domain::Unit => rat(rng.gen_range(1..10_000), 10_000),
                Domain::HalfLine => cfg.positive(&mut rng).min(int(60)),
            })
            .collect();
        for t in &ts {
            let m = maximal_eval(&x, t).unwrap();
            ensure(star.evaluate(t).unwrap() <= m, || format!("case {i}: x* > x** at {t}"))?;
            ensure(m == common::level(&x, t) / t, || {
                format!("case {i}: x**({t}) differs from Phi/t")
            })?;
            let lhs = maximal_eval(&sum, t).unwrap();
            ensure(lhs <= &m + maximal_eval(&y, t).unwrap(), || {
                format!("case {i}: subadditivity fails at {t}")
            })?;
        }
        ts = common::probe_points(&[&x])
            .into_iter()
            .filter(|t| t.is_positive())
            .collect();
        let ms: Vec<Rational> = ts.iter().map(|t| maximal_eval(&x, t).unwrap()).collect();
        ensure(ms.windows(2).all(|w| w[0] >= w[1]), || {
            format!("case {i}: x** increases across nodes")
        })?;

        let z = if x.domain() == Domain::HalfLine && !x.tail().is_zero() {
            x.restrict(&Rational::zero(), Some(&x.last_breakpoint().max(int(1))))
                .unwrap()
        } else {
            x.clone()
        };
        let t_n = z.last_breakpoint();
        for eps in [int(1), rat(1, 10), rat(1, 100)] {
            let total = common::level(&z, &t_n.clone().max(int(1)));
            if total.is_zero() {
                continue;
            }
            let t = &total / &eps;
            ensure(maximal_eval(&z, &t).unwrap() <= eps, || {
                format!("case {i}: x**(T) > eps")
            })?;
            if z.domain() == Domain::HalfLine {
                ensure(maximal_decay_threshold(&z, &eps).unwrap() == t, || {
                    format!("case {i}: threshold differs")
                })?;
            }
            threshold_checks += 1;
        }
    }
    Ok(format!(
        "1000 functions x 10 points, {threshold_checks} decay thresholds"
    ))
}

// ---- 6 ----

fn phi_samples(cfg: &GenConfig, rng: &mut rand_chacha::ChaCha8Rng) -> Vec<FundamentalFunction> {
    let mut out = vec![hyperbolic_one(), FundamentalFunction::hyperbolic(rat(7, 3)).unwrap()];
    for _ in 0..4 {
        out.push(FundamentalFunction::piecewise(cfg.concave_phi(rng)).unwrap());
    }
    out
}

fn spaces_for(domain: Domain, phis: &[FundamentalFunction]) -> Vec<SpaceSpec> {
    let mut out: Vec<SpaceSpec> = [SpaceKind::L1, SpaceKind::Linf, SpaceKind::L1PlusLinf]
        .into_iter()
        .map(|k| SpaceSpec::new(domain, k))
        .collect();
    for phi in phis {
        out.push(SpaceSpec::new(domain, SpaceKind::Marcinkiewicz(phi.clone())));
        out.push(SpaceSpec::new(domain, SpaceKind::MarcinkiewiczStar(phi.clone())));
    }
    out
}

fn space_layer() -> Check {
    let cfg = GenConfig::default();
    let mut rng = case_rng(SEED ^ 6, 0);
    let phis = phi_samples(&cfg, &mut rng);

    for i in 0..200u64 {
        let mut rng = case_rng(SEED ^ 6, i + 1);
        let x = cfg.step_any_domain(&mut rng);
        let star = decreasing_rearrangement(&x);
        for space in spaces_for(x.domain(), &phis) {
            let n = norm(&space, &x);
            ensure(
                n == norm(&space, &star) && n == norm(&space, &x.scale(&int(-1))),
                || format!("case {i}: {} not rearrangement invariant", space.label()),
            )?;
            if x.domain() == Domain::HalfLine && x.tail().is_zero() {
                ensure(n == norm(&space, &shift_right(&x, &rat(5, 2))), || {
                    format!("case {i}: shift changes norm")
                })?;
            }
            let m = SpaceSpec::new(space.domain, SpaceKind::Marcinkiewicz(space.fundamental_function()));
            if space.is_banach() {
                ensure(norm(&m, &x) <= n, || {
                    format!("case {i}: {} does not embed with constant 1", space.label())
                })?;
            }
            if let SpaceKind::Marcinkiewicz(phi) = &space.kind {
                let s = SpaceSpec::new(space.domain, SpaceKind::MarcinkiewiczStar(phi.clone()));
                ensure(norm(&s, &x) <= n, || format!("case {i}: M_phi below M*_phi"))?;
            }
        }
    }

    // quasi-Banach M*_phi sits above M_phi: phi(t) = t, x = chi_[0,1) + (1/2) chi_[1,2)
    let x = StepFunction::new(Domain::HalfLine, vec![int(1), int(2)], vec![int(1), rat(1, 2)], int(0)).unwrap();
    let id = FundamentalFunction::identity();
    let star_norm = norm(&SpaceSpec::marcinkiewicz_star(id.clone()), &x);
    let full_norm = norm(&SpaceSpec::marcinkiewicz(id), &x);
    ensure(star_norm == fin(int(1)) && full_norm == fin(rat(3, 2)), || {
        "M* example changed".into()
    })?;

    let mut pairs = 0;
    for i in 0..500u64 {
        let mut rng = case_rng(SEED ^ 66, i);
        let (lo, hi) = if rng.gen_bool(0.5) {
            let y = cfg.decreasing(&mut rng);
            let (tau, eps) = cfg.tau_eps(&mut rng, &y);
            (sample_family_member(&y, &tau, &eps, rng.gen_range(0..1000)).unwrap(), y)
        } else {
            let x = cfg.step_any_domain(&mut rng);
            let z = cfg.step(&mut rng, x.domain());
            let hi = x.abs().add(&z.abs()).unwrap();
            (x, hi)
        };
        ensure(common::precedes(&lo, &hi), || format!("pair {i} is not majorized"))?;
        for space in spaces_for(lo.domain(), &phis) {
            if matches!(space.kind, SpaceKind::L1PlusLinf | SpaceKind::Marcinkiewicz(_)) {
                ensure(norm(&space, &lo) <= norm(&space, &hi), || {
                    format!("pair {i}: {} not monotone", space.label())
                })?;
            }
        }
        pairs += 1;
    }

    let mut boxes = 0;
    for domain in [Domain::HalfLine, Domain::Unit] {
        for space in spaces_for(domain, &phis) {
            for k in 1..=100i64 {
                let t = match domain {
                    Domain::Unit => rat(k, 101),
                    Domain::HalfLine => rat(k * k, 37),
                };
                let b = StepFunction::head(domain, &t, int(1)).unwrap();
                let phi_t = fundamental_eval(&space, &t).unwrap();
                ensure(fin(phi_t.clone()) == norm(&space, &b), || {
                    format!("{} box at {t}", space.label())
                })?;
                ensure(phi_t == space.fundamental_function().eval(&t), || {
                    format!("{} phi_E at {t}", space.label())
                })?;
                boxes += 1;
            }
        }
    }
    Ok(format!(
        "200 functions, {pairs} majorized pairs, {boxes} box norms; embedding asserted for Banach spaces, M*_phi shown to exceed M_phi"
    ))
}

// ---- 7 ----

fn flattened_heads() -> Check {
    let cfg = GenConfig::default();
    let mut bounded = 0;
    for i in 0..200u64 {
        let mut rng = case_rng(SEED ^ 7, i);
        let x = if rng.gen_bool(0.5) {
            cfg.decreasing(&mut rng)
        } else {
            let s = cfg.step(&mut rng, Domain::HalfLine);
            s.restrict(&Rational::zero(), Some(&s.last_breakpoint().max(int(1))))
                .unwrap()
        };
        let phi = if rng.gen_bool(0.3) {
            FundamentalFunction::hyperbolic(cfg.positive(&mut rng).min(int(10))).unwrap()
        } else {
            FundamentalFunction::piecewise(cfg.concave_phi(&mut rng)).unwrap()
        };
        let space = SpaceSpec::marcinkiewicz(phi.clone());
        let level_x = level_integral(&x);
        // phi(n) x**(n) = phi(n) ||x||_1 / n once n passes the support, so the limit is slope * ||x||_1
        let total = common::level(&x, &x.last_breakpoint().max(int(1)));
        let vanishes = (phi.asymptotic_slope() * &total).is_zero();
        for n in 1..=20u64 {
            let nr = int(n as i64);
            let y = flatten_head(&x, n).map_err(|e| format!("case {i}, n = {n}: {e}"))?;
            ensure(hlp_compare(&y, &x).unwrap().holds && common::precedes(&y, &x), || {
                format!("case {i}: y_{n} not ≺ x")
            })?;
            let level_y = level_integral(&y);
            for t in level_x
                .breakpoints()
                .iter()
                .chain(level_y.breakpoints())
                .chain([&nr])
                .filter(|t| **t >= nr)
            {
                ensure(common::level(&y, t) == common::level(&x, t), || {
                    format!("case {i}: y_{n}** != x** at {t}")
                })?;
            }
            if vanishes {
                let bound = flatten_head_bound(&space, &x, &nr).unwrap();
                let oracle = fin(phi.eval(&nr) * common::level(&x, &nr) / &nr).add(&norm(
                    &space,
                    &decreasing_rearrangement(&x).restrict(&nr, None).unwrap(),
                ));
                ensure(bound == oracle, || format!("case {i}: bound differs at n = {n}"))?;
                ensure(norm(&space, &y) <= bound, || {
                    format!("case {i}: ||y_{n}|| exceeds the bound")
                })?;
                bounded += 1;
            }
        }
    }
    ensure(bounded > 0, || "no case had phi(n) x**(n) -> 0".into())?;
    Ok(format!("200 functions x n = 1..20, {bounded} norm bounds checked"))
}

// ---- 8 ----

fn l1_criterion() -> Check {
    let cfg = GenConfig::default();
    let mut spaces = Vec::new();
    for i in 0..100u64 {
        let mut rng = case_rng(SEED ^ 8, i);
        let p = cfg.concave_phi(&mut rng);
        let last = p.breakpoints().last().cloned().unwrap_or_else(Rational::zero);
        let slope = p.eval(&(&last + int(2))) - p.eval(&(&last + int(1)));
        let phi = FundamentalFunction::piecewise(p).unwrap();
        let space = if i % 2 == 0 {
            SpaceSpec::marcinkiewicz(phi)
        } else {
            SpaceSpec::marcinkiewicz_star(phi)
        };
        ensure(embeds_in_l1(&space).unwrap() == slope.is_positive(), || {
            format!("phi {i}: criterion disagrees")
        })?;
        spaces.push((space, slope));
    }
    for space in [
        SpaceSpec::linf(),
        SpaceSpec::l1_plus_linf(),
        SpaceSpec::marcinkiewicz(hyperbolic_one()),
    ] {
        ensure(!embeds_in_l1(&space).unwrap(), || {
            format!("{} reported as embedding", space.label())
        })?;
        spaces.push((space, Rational::zero()));
    }
    ensure(embeds_in_l1(&SpaceSpec::l1()).unwrap(), || {
        "L1 does not embed in itself".into()
    })?;

    let mut witnessed = 0;
    for (space, slope) in &spaces {
        for t_x in [rat(1, 3), int(2), int(7)] {
            if slope.is_positive() {
                // phi(n t)/n >= slope * t for concave phi
                for n in 1..=50i64 {
                    let r = fundamental_eval(space, &(&t_x * int(n))).unwrap() / int(n);
                    ensure(r >= slope * &t_x, || format!("{}: ratio below slope", space.label()))?;
                }
            } else {
                let sup = space.fundamental_function().supremum();
                let sup = sup
                    .finite()
                    .cloned()
                    .ok_or_else(|| format!("{}: unbounded phi with zero slope", space.label()))?;
                for n in 1..=50i64 {
                    let r = fundamental_eval(space, &(&t_x * int(n))).unwrap() / int(n);
                    ensure(r <= &sup / int(n), || {
                        format!("{}: phi(n t)/n above sup/n", space.label())
                    })?;
                }
                witnessed += 1;
            }
        }
    }
    Ok(format!(
        "100 random phi, {witnessed} decay sequences bounded by sup(phi)/n"
    ))
}

// ---- 9 ----

fn product_integral(u: &StepFunction, w: &StepFunction) -> ExtendedRational {
    let mut nodes: Vec<Rational> = u.breakpoints().iter().chain(w.breakpoints()).cloned().collect();
    nodes.sort();
    nodes.dedup();
    let mut total = Rational::zero();
    let mut prev = Rational::zero();
    for n in &nodes {
        total += (n - &prev) * u.evaluate(&prev).unwrap() * w.evaluate(&prev).unwrap();
        prev = n.clone();
    }
    let tail = match u.domain() {
        Domain::Unit => (int(1) - &prev) * u.evaluate(&prev).unwrap() * w.evaluate(&prev).unwrap(),
        Domain::HalfLine if (u.tail() * w.tail()).is_zero() => Rational::zero(),
        Domain::HalfLine => return ExtendedRational::Infinite,
    };
    fin(total + tail)
}

fn hardy() -> Check {
    let cfg = GenConfig::default();
    let mut rejected = 0;
    for i in 0..1000u64 {
        let mut rng = case_rng(SEED ^ 9, i);
        let zero_tail = rng.gen_bool(0.5);
        let v = cfg.nonnegative(&mut rng, Domain::HalfLine, zero_tail);
        let s = cfg.positive(&mut rng).min(int(4));
        let lam = rat(rng.gen_range(0..=8), 8);
        let cap = StepFunction::constant(Domain::HalfLine, cfg.value(&mut rng, 5, false));
        // a convex combination of a right shift of v and a truncation of v stays admissible
        let u = shift_right(&v, &s)
            .scale(&lam)
            .add(&v.min(&cap).unwrap().scale(&(int(1) - &lam)))
            .unwrap();
        let w = cfg.decreasing(&mut rng);
        let w = if rng.gen_bool(0.3) {
            w.add(&StepFunction::constant(Domain::HalfLine, rat(1, 3))).unwrap()
        } else {
            w
        };
        for t in common::probe_points(&[&u, &v]) {
            ensure(
                common::prefix_integral(&u, &t) <= common::prefix_integral(&v, &t),
                || format!("case {i}: generated triple is not admissible"),
            )?;
        }
        let lhs = product_integral(&u, &w);
        let rhs = product_integral(&v, &w);
        ensure(hardy_check(&u, &v, &w) == Ok(true) && lhs <= rhs, || {
            format!("case {i}: conclusion fails")
        })?;
        match hardy_check(&v, &u, &w) {
            Err(Error::HypothesisViolated { witness }) => {
                ensure(
                    common::prefix_integral(&v, &witness) > common::prefix_integral(&u, &witness),
                    || format!("case {i}: witness {witness} does not violate the hypothesis"),
                )?;
                rejected += 1;
            }
            Ok(_) => {
                let same = common::probe_points(&[&u, &v])
                    .iter()
                    .all(|t| common::prefix_integral(&u, t) == common::prefix_integral(&v, t));
                ensure(same, || format!("case {i}: violated hypothesis accepted"))?;
            }
            Err(e) => return Err(format!("case {i}: {e}")),
        }
    }
    ensure(rejected >= 100, || format!("only {rejected} violating triples"))?;
    Ok(format!(
        "1000 admissible triples, {rejected} violating triples rejected with witnesses"
    ))
}

// ---- 10 ----

fn determinism() -> Check {
    let bin = env!("CARGO_BIN_EXE_rearrcalc");
    let runs: [&[&str]; 4] = [
        &["--seed", "17", "--cases", "200", "prop-test", "hlp"],
        &["--seed", "17", "--cases", "100", "prop-test", "prop32"],
        &["--seed", "5", "replicate", "prop32-case2"],
        &[
            "--seed",
            "3",
            "sample-member",
            r#"{"x":{"alpha":"inf","breakpoints":["1","4"],"values":["2","1"],"tail":"0"},"tau":"2","eps":"1/5"}"#,
        ],
    ];
    for args in runs {
        let mut hashes = Vec::new();
        for _ in 0..3 {
            let out = Command::new(bin)
                .args(args)
                .env_remove("REARRCALC_SEED")
                .output()
                .map_err(|e| e.to_string())?;
            ensure(out.status.success(), || {
                format!(
                    "{args:?} exited with {:?}: {}",
                    out.status,
                    String::from_utf8_lossy(&out.stderr)
                )
            })?;
            hashes.push(Sha256::digest(&out.stdout));
        }
        ensure(hashes.windows(2).all(|w| w[0] == w[1]), || {
            format!("{args:?} output differs across runs")
        })?;
    }
    Ok("4 commands x 3 runs, identical SHA-256".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("spreading boxes in L1", Duration::from_secs(1), spreading_boxes),
        ("shrinking heads in M*_phi", Duration::from_secs(1), shrinking_heads),
        ("two-majorant covering", Duration::from_secs(60), covering),
        ("rearrangement oracle", Duration::from_secs(10), rearrangement_oracle),
        ("maximal function", Duration::from_secs(30), maximal_function),
        ("space layer", Duration::from_secs(30), space_layer),
        ("flattened heads", Duration::from_secs(30), flattened_heads),
        ("L1 embedding criterion", Duration::from_secs(5), l1_criterion),
        ("Hardy's lemma", Duration::from_secs(10), hardy),
        ("determinism", Duration::from_secs(60), determinism),
    ];
    let mut failed = 0;
    for (i, (name, limit, run)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default())
        });
        let elapsed = start.elapsed();
        let (ok, detail) = match result {
            Ok(d) if elapsed <= limit => (true, d),
            Ok(d) => (false, format!("{d}; took {elapsed:.2?}, limit {limit:?}")),
            Err(e) => (false, e),
        };
        failed += usize::from(!ok);
        println!(
            "{} criterion {:>2} {name}: {detail} ({elapsed:.2?})",
            if ok { "PASS" } else { "FAIL" },
            i + 1
        );
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
