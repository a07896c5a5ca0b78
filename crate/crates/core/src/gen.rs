//! Seeded random inputs for the property suites.
//!
//! Sizes are capped at [`GenConfig::max_pieces`] pieces and rationals with
//! numerator and denominator at most [`GenConfig::max_int`]. Half of the draws
//! use small numbers so that coincidences (equal values, shared nodes) occur.

use num::{BigInt, Signed, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::pl::PiecewiseLinearConcave;
use crate::rational::{int, Rational};
use crate::step::{Domain, StepFunction};

#[derive(Clone, Copy, Debug)]
pub struct GenConfig {
    pub max_pieces: usize,
    pub max_int: i64,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            max_pieces: 12,
            max_int: 10_000,
        }
    }
}

fn ratio(rng: &mut ChaCha8Rng, lo: i64, hi: i64, max_den: i64) -> Rational {
    let q = rng.gen_range(1..=max_den);
    let p = rng.gen_range(lo * q..=hi * q).clamp(-10_000, 10_000);
    Rational::new(BigInt::from(p), BigInt::from(q))
}

impl GenConfig {
    /// A positive rational: either small (`k/d`, `d <= 6`) or anywhere up to the caps.
    pub fn positive(&self, rng: &mut ChaCha8Rng) -> Rational {
        if rng.gen_bool(0.5) {
            Rational::new(rng.gen_range(1..=12).into(), rng.gen_range(1..=6).into())
        } else {
            let m = self.max_int;
            Rational::new(rng.gen_range(1..=m).into(), rng.gen_range(1..=m).into())
        }
    }

    /// A rational in `[-bound, bound]` (or `[0, bound]` when `signed` is false).
    pub fn value(&self, rng: &mut ChaCha8Rng, bound: i64, signed: bool) -> Rational {
        let lo = if signed { -bound } else { 0 };
        let den = if rng.gen_bool(0.5) { 4 } else { 100 };
        ratio(rng, lo, bound, den.min(self.max_int))
    }

    fn piece_count(&self, rng: &mut ChaCha8Rng) -> usize {
        rng.gen_range(0..=self.max_pieces)
    }

    fn breakpoints(&self, rng: &mut ChaCha8Rng, domain: Domain, count: usize) -> Vec<Rational> {
        // HalfLine nodes fall in (0, 40]; Unit nodes in (0, 1)
        let (den, reach) = match (domain, rng.gen_bool(0.5)) {
            (Domain::HalfLine, true) => (6, 40),
            (Domain::HalfLine, false) => (100.min(self.max_int), 40),
            (Domain::Unit, true) => (12, 1),
            (Domain::Unit, false) => (self.max_int, 1),
        };
        let top = (den * reach).min(self.max_int) - i64::from(domain == Domain::Unit);
        let mut pts: Vec<Rational> = (0..count)
            .map(|_| Rational::new(rng.gen_range(1..=top).into(), den.into()))
            .collect();
        pts.sort();
        pts.dedup();
        pts
    }

    /// Arbitrary signed step function on `domain`; the tail is zero half the time.
    pub fn step(&self, rng: &mut ChaCha8Rng, domain: Domain) -> StepFunction {
        let n = self.piece_count(rng);
        let bps = self.breakpoints(rng, domain, n);
        let vals = bps.iter().map(|_| self.value(rng, 10, true)).collect();
        let tail = if rng.gen_bool(0.5) {
            Rational::zero()
        } else {
            self.value(rng, 10, true)
        };
        StepFunction::new(domain, bps, vals, tail).expect("generated breakpoints are valid")
    }

    pub fn step_any_domain(&self, rng: &mut ChaCha8Rng) -> StepFunction {
        let domain = if rng.gen_bool(0.75) {
            Domain::HalfLine
        } else {
            Domain::Unit
        };
        self.step(rng, domain)
    }

    /// Nonnegative step function.
    pub fn nonnegative(&self, rng: &mut ChaCha8Rng, domain: Domain, zero_tail: bool) -> StepFunction {
        let x = self.step(rng, domain).abs();
        if zero_tail {
            x.restrict(&Rational::zero(), Some(&x.last_breakpoint().max(int(1))))
                .expect("restriction of a valid function")
        } else {
            x
        }
    }

    /// Nonincreasing nonnegative step function on `[0, inf)` with tail 0 and at least one piece.
    pub fn decreasing(&self, rng: &mut ChaCha8Rng) -> StepFunction {
        let n = rng.gen_range(1..=self.max_pieces);
        let bps = self.breakpoints(rng, Domain::HalfLine, n);
        let mut vals: Vec<Rational> = bps
            .iter()
            .map(|_| self.value(rng, 10, false) + ratio(rng, 0, 1, 8))
            .collect();
        vals.iter_mut().for_each(|v| {
            if v.is_zero() {
                *v = int(1);
            }
        });
        vals.sort_by(|a, b| b.cmp(a));
        StepFunction::new(Domain::HalfLine, bps, vals, Rational::zero()).expect("valid")
    }

    /// Concave nondecreasing piecewise-linear `phi` with `phi(t) > 0` for `t > 0`.
    pub fn concave_phi(&self, rng: &mut ChaCha8Rng) -> PiecewiseLinearConcave {
        let k = rng.gen_range(0..=4);
        let jump0 = if rng.gen_bool(0.3) {
            self.value(rng, 2, false)
        } else {
            Rational::zero()
        };
        let mut slopes: Vec<Rational> = (0..=k).map(|_| self.value(rng, 4, false)).collect();
        slopes.sort_by(|a, b| b.cmp(a));
        if !slopes[0].is_positive() && !jump0.is_positive() {
            slopes[0] = int(1);
        }
        let final_slope = slopes.pop().expect("k + 1 slopes");
        let pieces: Vec<(Rational, Rational)> = slopes
            .into_iter()
            .map(|s| (self.positive(rng).min(int(8)), s))
            .collect();
        PiecewiseLinearConcave::from_slopes(jump0, &pieces, final_slope).expect("slopes are sorted")
    }

    /// `(tau, eps)` with `0 < eps < Phi_x(tau)` for a nonzero nonincreasing `x`.
    ///
    /// Half of the draws put `tau` inside a later piece `[a, b)` with `eps`
    /// small enough that `Phi_x` stays affine between the two intersection
    /// points, the geometry where the level integral meets its own chord.
    pub fn tau_eps(&self, rng: &mut ChaCha8Rng, x: &StepFunction) -> (Rational, Rational) {
        let level = crate::rearrange::level_integral(x);
        let frac = |rng: &mut ChaCha8Rng| Rational::new(rng.gen_range(1..=15).into(), 16.into());
        let bps = x.breakpoints();
        if bps.len() >= 2 && rng.gen_bool(0.5) {
            let i = rng.gen_range(1..bps.len());
            let (a, b, v) = (&bps[i - 1], &bps[i], &x.values()[i]);
            let tau = a + (b - a) * frac(rng);
            // Phi = A + v t on [a, b)
            let intercept = level.eval(a) - v * a;
            let room = (v * (&tau - a)).min(&intercept * (int(1) - &tau / b));
            return (tau, room * frac(rng));
        }
        let reach = x.last_breakpoint().max(int(1));
        let tau = &reach * Rational::new(rng.gen_range(1..=40).into(), 32.into());
        let eps = level.eval(&tau) * frac(rng);
        (tau, eps)
    }
}

/// `f(t - s)` for `t >= s`, zero before.
pub fn shift_right(f: &StepFunction, s: &Rational) -> StepFunction {
    if !s.is_positive() {
        return f.clone();
    }
    let mut bps = vec![s.clone()];
    let mut vals = vec![Rational::zero()];
    for (b, v) in f.breakpoints().iter().zip(f.values()) {
        bps.push(b + s);
        vals.push(v.clone());
    }
    let domain = f.domain();
    let keep = bps.iter().take_while(|b| domain.contains(b)).count();
    let tail = if keep == bps.len() {
        f.tail().clone()
    } else {
        vals[keep].clone()
    };
    bps.truncate(keep);
    vals.truncate(keep);
    if keep == 0 {
        return StepFunction::zero(domain);
    }
    StepFunction::new(domain, bps, vals, tail).expect("shifted breakpoints stay increasing")
}
