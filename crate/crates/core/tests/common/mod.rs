//! Reference computations for the integration tests.
//!
//! These work from the raw piece data of a step function and from the
//! textbook definitions, and never call the library's rearrangement, level
//! integral or order routines.

#![allow(dead_code)]

use num::{Signed, Zero};
use proptest::prelude::*;
use rearrcalc::{int, Domain, Rational, StepFunction};

/// `(start, end, value)` with `end == None` meaning "to alpha = inf".
pub type Piece = (Rational, Option<Rational>, Rational);

pub fn pieces(x: &StepFunction) -> Vec<Piece> {
    let mut out = Vec::new();
    let mut start = Rational::zero();
    for (b, v) in x.breakpoints().iter().zip(x.values()) {
        out.push((start.clone(), Some(b.clone()), v.clone()));
        start = b.clone();
    }
    let end = match x.domain() {
        Domain::Unit => Some(int(1)),
        Domain::HalfLine => None,
    };
    out.push((start, end, x.tail().clone()));
    out
}

/// `mu{|x| > lambda}`; `None` is infinite.
pub fn distribution(x: &StepFunction, lambda: &Rational) -> Option<Rational> {
    let mut total = Rational::zero();
    for (s, e, v) in pieces(x) {
        if v.abs() > *lambda {
            total += e? - s;
        }
    }
    Some(total)
}

/// Sort-based `x*`: pieces of `|x|` stacked in decreasing order of value, as
/// `(length, value)` with an infinite final length on the half-line.
pub fn sorted_star(x: &StepFunction) -> Vec<(Option<Rational>, Rational)> {
    let mut ps: Vec<(Option<Rational>, Rational)> = pieces(x)
        .into_iter()
        .map(|(s, e, v)| (e.map(|e| e - s), v.abs()))
        .collect();
    // stable sort by value descending; the infinite piece sorts after equal finite ones
    ps.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.is_none().cmp(&b.0.is_none())));
    if let Some(pos) = ps.iter().position(|p| p.0.is_none()) {
        ps.truncate(pos + 1);
    }
    ps
}

/// `x*(t)` from the sorted stack.
pub fn star_at(x: &StepFunction, t: &Rational) -> Rational {
    let mut at = Rational::zero();
    for (len, v) in sorted_star(x) {
        match len {
            None => return v,
            Some(l) => {
                at += l;
                if *t < at {
                    return v;
                }
            }
        }
    }
    Rational::zero()
}

/// `x*(t) = inf{ lambda >= 0 : d_x(lambda) <= t }` over the finitely many candidate levels.
pub fn star_by_definition(x: &StepFunction, t: &Rational) -> Rational {
    let mut levels: Vec<Rational> = pieces(x).into_iter().map(|p| p.2.abs()).collect();
    levels.push(Rational::zero());
    levels.sort();
    levels.dedup();
    for l in levels {
        if distribution(x, &l).is_some_and(|d| d <= *t) {
            return l;
        }
    }
    unreachable!()
}

/// `Phi_x(t) = int_0^t x*` by summing the sorted stack.
pub fn level(x: &StepFunction, t: &Rational) -> Rational {
    level_of_stack(&sorted_star(x), x.domain(), t)
}

fn level_of_stack(stack: &[(Option<Rational>, Rational)], domain: Domain, t: &Rational) -> Rational {
    let t = match domain {
        Domain::Unit if *t > int(1) => int(1),
        _ => t.clone(),
    };
    let mut at = Rational::zero();
    let mut acc = Rational::zero();
    for (len, v) in stack {
        let take = match len {
            Some(l) if &at + l <= t => l.clone(),
            _ => &t - &at,
        };
        if take.is_positive() {
            acc += &take * v;
            at += take;
        }
        if at >= t {
            break;
        }
    }
    acc
}

/// `x*(inf)`: zero on `[0, 1)`, the absolute tail on `[0, inf)`.
pub fn star_infinity(x: &StepFunction) -> Rational {
    match x.domain() {
        Domain::Unit => Rational::zero(),
        Domain::HalfLine => x.tail().abs(),
    }
}

/// Every node of either sorted stack, plus midpoints and two points beyond.
pub fn probe_points(fs: &[&StepFunction]) -> Vec<Rational> {
    let mut nodes = Vec::new();
    for f in fs {
        let mut at = Rational::zero();
        for (len, _) in sorted_star(f) {
            if let Some(l) = len {
                at += l;
                nodes.push(at.clone());
            }
        }
        nodes.extend(f.breakpoints().iter().cloned());
    }
    nodes.sort();
    nodes.dedup();
    let mut out = Vec::new();
    let mut prev = Rational::zero();
    for n in &nodes {
        out.push((&prev + n) / int(2));
        out.push(n.clone());
        prev = n.clone();
    }
    out.push(&prev + int(1));
    out.push(&prev * int(3) + int(5));
    out
}

/// `x ≺ y` by comparing level integrals at all nodes and the slopes at infinity.
pub fn precedes(x: &StepFunction, y: &StepFunction) -> bool {
    let (sx, sy) = (sorted_star(x), sorted_star(y));
    let at_nodes = probe_points(&[x, y])
        .iter()
        .all(|t| level_of_stack(&sx, x.domain(), t) <= level_of_stack(&sy, y.domain(), t));
    at_nodes && (x.domain() == Domain::Unit || star_infinity(x) <= star_infinity(y))
}

/// `x ≺ y` on the grid `j/840`, `1 <= j <= 10^4`, plus the slopes at infinity.
///
/// Exact whenever every node of both functions is a multiple of `1/840` below 11.
pub fn precedes_on_grid(x: &StepFunction, y: &StepFunction) -> bool {
    let lx = GridLevel::new(x);
    let ly = GridLevel::new(y);
    (1..=10_000).all(|j| lx.at(j) <= ly.at(j)) && (x.domain() == Domain::Unit || star_infinity(x) <= star_infinity(y))
}

/// `Phi_x(j/840)` for consecutive `j`, by running sums over the sorted stack.
///
/// Relies on `x*` being constant on each grid cell.
struct GridLevel {
    values: Vec<Rational>,
}

impl GridLevel {
    fn new(x: &StepFunction) -> Self {
        let step = Rational::new(1.into(), 840.into());
        let stack = sorted_star(x);
        let mut ends = Vec::new();
        let mut at = Rational::zero();
        for (len, _) in &stack {
            ends.push(len.as_ref().map(|l| {
                at += l;
                at.clone()
            }));
        }
        let mut values = vec![Rational::zero()];
        let mut t = Rational::zero();
        let mut k = 0;
        for _ in 0..10_000 {
            while k < stack.len() && ends[k].as_ref().is_some_and(|r| *r <= t) {
                k += 1;
            }
            let v = if k < stack.len() {
                stack[k].1.clone()
            } else {
                Rational::zero()
            };
            let last = values.last().unwrap().clone();
            values.push(last + v * &step);
            t += &step;
        }
        GridLevel { values }
    }

    fn at(&self, j: usize) -> &Rational {
        &self.values[j]
    }
}

/// `int_0^t f` for a (not necessarily nonincreasing) step function.
pub fn prefix_integral(f: &StepFunction, t: &Rational) -> Rational {
    let mut acc = Rational::zero();
    for (s, e, v) in pieces(f) {
        if s >= *t {
            break;
        }
        let end = match e {
            Some(e) if e < *t => e,
            _ => t.clone(),
        };
        acc += (end - s) * v;
    }
    acc
}

/// Nonincreasing and nonnegative.
pub fn is_decreasing(f: &StepFunction) -> bool {
    let ps = pieces(f);
    ps.iter().all(|p| !p.2.is_negative()) && ps.windows(2).all(|w| w[0].2 >= w[1].2)
}

// ---- proptest strategies ----

fn small_rational(max_num: i64, dens: &'static [i64]) -> impl Strategy<Value = Rational> {
    (prop::sample::select(dens), -max_num..=max_num).prop_map(|(d, n)| Rational::new(n.into(), d.into()))
}

/// Step functions whose nodes are multiples of `1/840` and sit below 11, so the
/// `j/840` grid oracle is exact on them.
pub fn grid_step(domain: Domain) -> impl Strategy<Value = StepFunction> {
    // every denominator divides 84, and 10 * 84 = 840
    let lens = prop::collection::vec((1i64..=6, prop::sample::select(&[1i64, 2, 3, 4, 6, 7][..])), 0..=10);
    let vals = prop::collection::vec(small_rational(40, &[1, 2, 3, 4, 10]), 11);
    (lens, vals, prop::bool::ANY).prop_map(move |(lens, vals, zero_tail)| {
        let cap = match domain {
            Domain::Unit => int(1),
            Domain::HalfLine => int(10),
        };
        let scale = match domain {
            Domain::Unit => Rational::new(1.into(), 10.into()),
            Domain::HalfLine => int(1),
        };
        let mut at = Rational::zero();
        let mut bps = Vec::new();
        for (n, d) in lens {
            at += Rational::new(n.into(), d.into()) * &scale;
            if at >= cap {
                break;
            }
            bps.push(at.clone());
        }
        let values = vals[..bps.len()].to_vec();
        let tail = if zero_tail { Rational::zero() } else { vals[10].clone() };
        StepFunction::new(domain, bps, values, tail).expect("increasing nodes")
    })
}

pub fn any_domain() -> impl Strategy<Value = Domain> {
    prop_oneof![3 => Just(Domain::HalfLine), 1 => Just(Domain::Unit)]
}

pub fn grid_step_any() -> impl Strategy<Value = StepFunction> {
    any_domain().prop_flat_map(grid_step)
}

/// Nonincreasing, nonnegative, tail zero, not identically zero, on `[0, inf)`.
pub fn decreasing_step() -> impl Strategy<Value = StepFunction> {
    grid_step(Domain::HalfLine).prop_filter_map("nonzero", |x| {
        let mut vals: Vec<Rational> = x.values().iter().map(|v| v.abs() + int(1)).collect();
        vals.sort_by(|a, b| b.cmp(a));
        let bps = x.breakpoints().to_vec();
        if bps.is_empty() {
            return None;
        }
        StepFunction::new(Domain::HalfLine, bps, vals, Rational::zero()).ok()
    })
}
