mod common;

use num::{Signed, Zero};
use proptest::prelude::*;
use rearrcalc::rearrange::{distribution, equimeasurable, maximal_decay_threshold, maximal_eval};
use rearrcalc::{decreasing_rearrangement, int, level_integral, rat, Domain, ExtendedRational, Rational, StepFunction};

fn star_matches_oracles(x: &StepFunction) {
    let star = decreasing_rearrangement(x);
    for t in common::probe_points(&[x, &star]) {
        if !x.domain().contains(&t) {
            continue;
        }
        let got = star.evaluate(&t).unwrap();
        assert_eq!(got, common::star_at(x, &t), "sorted oracle at {t}");
        assert_eq!(got, common::star_by_definition(x, &t), "definition at {t}");
    }
}

#[test]
fn rearranges_a_signed_step() {
    // |x| = 1, 3, 2 on [0,1), [1,2), [2,4)
    let x = StepFunction::new(
        Domain::HalfLine,
        vec![int(1), int(2), int(4)],
        vec![int(-1), int(3), int(2)],
        int(0),
    )
    .unwrap();
    let star = decreasing_rearrangement(&x);
    let expected = StepFunction::new(
        Domain::HalfLine,
        vec![int(1), int(3), int(4)],
        vec![int(3), int(2), int(1)],
        int(0),
    )
    .unwrap();
    assert_eq!(star, expected);
    assert_eq!(level_integral(&x).eval(&int(2)), int(5));
    assert_eq!(maximal_eval(&x, &int(4)).unwrap(), rat(2, 1));
    star_matches_oracles(&x);
}

#[test]
fn nonzero_tail_sits_below_larger_values() {
    let x = StepFunction::new(Domain::HalfLine, vec![int(1), int(2)], vec![rat(1, 2), int(5)], int(1)).unwrap();
    let star = decreasing_rearrangement(&x);
    assert_eq!(star.evaluate(&rat(1, 2)).unwrap(), int(5));
    assert_eq!(star.evaluate(&int(7)).unwrap(), int(1));
    assert_eq!(distribution(&x, &rat(1, 2)).unwrap(), ExtendedRational::Infinite);
    star_matches_oracles(&x);
}

#[test]
fn zero_function_has_zero_rearrangement() {
    for domain in [Domain::Unit, Domain::HalfLine] {
        let z = StepFunction::zero(domain);
        assert!(decreasing_rearrangement(&z).is_zero());
        assert_eq!(maximal_decay_threshold(&z, &rat(1, 3)).unwrap(), int(1));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn rearrangement_agrees_with_oracles(x in common::grid_step_any()) {
        star_matches_oracles(&x);
    }

    #[test]
    fn star_is_decreasing_and_equimeasurable(x in common::grid_step_any()) {
        let star = decreasing_rearrangement(&x);
        prop_assert!(common::is_decreasing(&star));
        prop_assert!(equimeasurable(&x, &star).unwrap());
        let mut levels: Vec<Rational> = common::pieces(&x).into_iter().map(|p| p.2.abs()).collect();
        levels.push(Rational::zero());
        for l in levels {
            prop_assert_eq!(distribution(&x, &l).unwrap(), distribution(&star, &l).unwrap());
            let oracle = common::distribution(&x, &l).map_or(ExtendedRational::Infinite, ExtendedRational::Finite);
            prop_assert_eq!(distribution(&x, &l).unwrap(), oracle);
        }
    }

    #[test]
    fn level_integral_matches_summation(x in common::grid_step_any()) {
        let phi = level_integral(&x);
        for t in common::probe_points(&[&x]) {
            prop_assert_eq!(phi.eval(&t), common::level(&x, &t));
        }
        prop_assert!(phi.is_concave_nondecreasing());
    }

    #[test]
    fn maximal_function_bounds(x in common::grid_step_any(), y in common::grid_step(Domain::HalfLine)) {
        let pts = common::probe_points(&[&x]);
        let positive: Vec<&Rational> = pts.iter().filter(|t| t.is_positive()).collect();
        let star = decreasing_rearrangement(&x);
        let mut prev: Option<Rational> = None;
        for t in positive {
            let m = maximal_eval(&x, t).unwrap();
            if x.domain().contains(t) {
                prop_assert!(star.evaluate(t).unwrap() <= m);
            }
            if let Some(p) = &prev {
                prop_assert!(m <= *p);
            }
            prev = Some(m);
        }
        if x.domain() == Domain::HalfLine {
            let s = x.add(&y).unwrap();
            for t in common::probe_points(&[&x, &y]).iter().filter(|t| t.is_positive()) {
                let lhs = maximal_eval(&s, t).unwrap();
                prop_assert!(lhs <= maximal_eval(&x, t).unwrap() + maximal_eval(&y, t).unwrap());
            }
        }
    }

    #[test]
    fn rearrangement_is_idempotent_and_scales(x in common::grid_step_any(), c in 1i64..20) {
        let star = decreasing_rearrangement(&x);
        prop_assert_eq!(decreasing_rearrangement(&star), star.clone());
        let c = rat(c, 3);
        prop_assert_eq!(decreasing_rearrangement(&x.scale(&-c.clone())), star.scale(&c));
    }
}
