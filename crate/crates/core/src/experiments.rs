//! Named sequence families and finite-evidence probes for K-order continuity
//! and lower K-monotonicity.
//!
//! A probe never certifies a limit. It records exact per-`n` values and
//! attaches a verdict that is a function of those values only.

use std::fmt::Write as _;

use num::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::majorize::hlp_compare;
use crate::pl::PiecewiseLinear;
use crate::rational::{
    format_rational, int, rat, serde_rational, serde_rational_opt, serde_rational_vec, ExtendedRational, Rational,
};
use crate::rearrange::{decreasing_rearrangement, level_integral, rearrangement};
use crate::spaces::{norm, SpaceSpec};
use crate::step::{Domain, StepFunction};

/// Points where the a.e. proxy reads `x_n*`.
pub fn probe_points() -> Vec<Rational> {
    vec![rat(1, 4), rat(1, 2), int(1), int(2), int(4)]
}

/// Parameters of a built-in family, as accepted on the command line.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum FamilySpec {
    /// `(1/n) chi_[0,n)`.
    Remark45,
    /// `chi_[0,1/n)`.
    Example46Heads,
    /// `x*(t_x)/n chi_[0, n t_x)`.
    Lemma43Y {
        x: StepFunction,
        #[serde(with = "serde_rational")]
        t_x: Rational,
    },
    /// `x**(n) chi_[0,n)`.
    Lemma43X { x: StepFunction },
    /// [`flatten_head`] of `x` at `n`.
    Thm47Flatten { x: StepFunction },
    /// `(1 - 1/n) x`.
    Scaled { x: StepFunction },
    /// Member `n` is `members[n - 1]`.
    Explicit { members: Vec<StepFunction> },
}

/// A deterministic map `n -> x_n`, checked against its hypotheses once on construction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SequenceFamily {
    pub name: String,
    pub description: String,
    pub base_point: Option<StepFunction>,
    #[serde(skip)]
    spec: FamilySpec,
    #[serde(skip)]
    domain: Domain,
}

pub fn builtin_family(spec: FamilySpec) -> Result<SequenceFamily> {
    let (name, description, base_point, domain) = match &spec {
        FamilySpec::Remark45 => ("remark45", "(1/n) chi_[0,n)".to_string(), None, Domain::HalfLine),
        FamilySpec::Example46Heads => ("example46_heads", "chi_[0,1/n)".to_string(), None, Domain::HalfLine),
        FamilySpec::Lemma43Y { x, t_x } => {
            require_half_line(x)?;
            if !t_x.is_positive() {
                return Err(Error::pre("lemma43_y needs t_x > 0"));
            }
            if !decreasing_rearrangement(x).evaluate(t_x)?.is_positive() {
                return Err(Error::pre(format!(
                    "lemma43_y needs x*(t_x) > 0, fails at t_x = {}",
                    format_rational(t_x)
                )));
            }
            (
                "lemma43_y",
                format!("x*(t_x)/n chi_[0, n t_x) with t_x = {}", format_rational(t_x)),
                Some(x.clone()),
                Domain::HalfLine,
            )
        }
        FamilySpec::Lemma43X { x } => {
            require_half_line(x)?;
            (
                "lemma43_x",
                "x**(n) chi_[0,n)".to_string(),
                Some(x.clone()),
                Domain::HalfLine,
            )
        }
        FamilySpec::Thm47Flatten { x } => {
            require_half_line(x)?;
            if !rearrangement(x).star_at_infinity.is_zero() {
                return Err(Error::NonzeroAtInfinity);
            }
            (
                "thm47_flatten",
                "(1/n int_0^n x*) chi_[0,n) + x* chi_[n,inf)".to_string(),
                Some(x.clone()),
                Domain::HalfLine,
            )
        }
        FamilySpec::Scaled { x } => ("scaled", "(1 - 1/n) x".to_string(), Some(x.clone()), x.domain()),
        FamilySpec::Explicit { members } => {
            let first = members
                .first()
                .ok_or_else(|| Error::pre("explicit family has no members"))?;
            if members.iter().any(|m| m.domain() != first.domain()) {
                return Err(Error::DomainMismatch);
            }
            (
                "explicit",
                format!("{} listed members", members.len()),
                None,
                first.domain(),
            )
        }
    };
    Ok(SequenceFamily {
        name: name.to_string(),
        description,
        base_point,
        spec,
        domain,
    })
}

fn require_half_line(x: &StepFunction) -> Result<()> {
    if x.domain() != Domain::HalfLine {
        return Err(Error::pre("this family lives on [0, inf)"));
    }
    Ok(())
}

impl SequenceFamily {
    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn spec(&self) -> &FamilySpec {
        &self.spec
    }

    /// `x_n` for `n >= 1`.
    pub fn member(&self, n: u64) -> Result<StepFunction> {
        if n == 0 {
            return Err(Error::pre("families are indexed from n = 1"));
        }
        let nr = int(n as i64);
        let h = Domain::HalfLine;
        match &self.spec {
            FamilySpec::Remark45 => StepFunction::head(h, &nr, int(1) / &nr),
            FamilySpec::Example46Heads => StepFunction::head(h, &(int(1) / &nr), int(1)),
            FamilySpec::Lemma43Y { x, t_x } => {
                let height = decreasing_rearrangement(x).evaluate(t_x)? / &nr;
                StepFunction::head(h, &(&nr * t_x), height)
            }
            FamilySpec::Lemma43X { x } => {
                let height = level_integral(x).eval(&nr) / &nr;
                StepFunction::head(h, &nr, height)
            }
            FamilySpec::Thm47Flatten { x } => flatten_head(x, n),
            FamilySpec::Scaled { x } => Ok(x.scale(&(int(1) - int(1) / &nr))),
            FamilySpec::Explicit { members } => members
                .get(n as usize - 1)
                .cloned()
                .ok_or_else(|| Error::pre(format!("explicit family has no member {n}"))),
        }
    }
}

/// `y_n = (1/n int_0^n x*) chi_[0,n) + x* chi_[n,inf)`.
///
/// Every output is re-checked to be nonincreasing and `≺ x`.
pub fn flatten_head(x: &StepFunction, n: u64) -> Result<StepFunction> {
    if x.domain() != Domain::HalfLine {
        return Err(Error::pre("flatten_head works on [0, inf)"));
    }
    if n == 0 {
        return Err(Error::pre("n must be a positive integer"));
    }
    let nr = int(n as i64);
    let star = decreasing_rearrangement(x);
    let avg = star.integrate(&Rational::zero(), Some(&nr))? / &nr;
    let y = StepFunction::head(Domain::HalfLine, &nr, avg)?.add(&star.restrict(&nr, None)?)?;
    if !y.is_decreasing() {
        return Err(Error::Internal(format!("flatten_head({n}) is not nonincreasing")));
    }
    let v = hlp_compare(&y, x)?;
    if !v.holds {
        return Err(Error::Internal(format!(
            "flatten_head({n}) is not majorized by x at t = {}",
            format_rational(v.witness.as_ref().expect("witness"))
        )));
    }
    Ok(y)
}

/// `mu{ t : |f(t) - g(t)| > delta }`.
pub fn measure_distance(f: &StepFunction, g: &StepFunction, delta: &Rational) -> Result<ExtendedRational> {
    if !delta.is_positive() {
        return Err(Error::pre("delta must be positive"));
    }
    f.sub(g)?.exceedance_measure(delta)
}

/// `mu{ t in (0, alpha) : |Phi_f(t)/t - Phi_g(t)/t| > delta }`.
///
/// On each affine piece `Phi_f - Phi_g = A + B t`, and `|A/t + B| > delta`
/// splits into two linear inequalities in `t`.
pub fn maximal_distance(f: &StepFunction, g: &StepFunction, delta: &Rational) -> Result<ExtendedRational> {
    if !delta.is_positive() {
        return Err(Error::pre("delta must be positive"));
    }
    if f.domain() != g.domain() {
        return Err(Error::DomainMismatch);
    }
    let diff: PiecewiseLinear = level_integral(f).sub(&level_integral(g));
    let cap = match f.domain() {
        Domain::Unit => Some(int(1)),
        Domain::HalfLine => None,
    };
    let mut total = ExtendedRational::zero();
    for piece in diff.pieces() {
        let end = match (&piece.end, &cap) {
            (Some(e), Some(c)) => Some(if e < c { e.clone() } else { c.clone() }),
            (Some(e), None) => Some(e.clone()),
            (None, c) => c.clone(),
        };
        if let Some(e) = &end {
            if *e <= piece.start {
                continue;
            }
        }
        let (a, b) = (&piece.intercept, &piece.slope);
        // A/t + B > delta  <=>  (delta - B) t < A
        let above = solve_lt(&(delta - b), a);
        // A/t + B < -delta  <=>  (delta + B) t < -A
        let below = solve_lt(&(delta + b), &-a);
        for (lo, hi) in [above, below] {
            total = total.add(&overlap(&piece.start, end.as_ref(), lo.as_ref(), hi.as_ref()));
        }
    }
    Ok(total)
}

/// Solution set of `c t < d` over `t > 0` as `(lower, upper)`; `None` bounds are open.
/// An empty set comes back as `(Some(0), Some(0))`.
fn solve_lt(c: &Rational, d: &Rational) -> (Option<Rational>, Option<Rational>) {
    if c.is_positive() {
        (None, Some(d / c))
    } else if c.is_negative() {
        (Some(d / c), None)
    } else if d.is_positive() {
        (None, None)
    } else {
        (Some(Rational::zero()), Some(Rational::zero()))
    }
}

fn overlap(s: &Rational, e: Option<&Rational>, lo: Option<&Rational>, hi: Option<&Rational>) -> ExtendedRational {
    let left = match lo {
        Some(l) if l > s => l.clone(),
        _ => s.clone(),
    };
    let right = match (e, hi) {
        (Some(e), Some(h)) => Some(if e < h { e.clone() } else { h.clone() }),
        (Some(e), None) => Some(e.clone()),
        (None, Some(h)) => Some(h.clone()),
        (None, None) => None,
    };
    match right {
        None => ExtendedRational::Infinite,
        Some(r) if r > left => ExtendedRational::Finite(r - left),
        Some(_) => ExtendedRational::zero(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    ConsistentWithKoc,
    ConsistentWithConvergence,
    ConsistentWithFailure,
    Inconclusive,
}

impl Verdict {
    pub fn label(self) -> &'static str {
        match self {
            Verdict::ConsistentWithKoc => "consistent_with_KOC",
            Verdict::ConsistentWithConvergence => "consistent_with_convergence",
            Verdict::ConsistentWithFailure => "consistent_with_failure",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProbeRecord {
    pub n: u64,
    pub norm: ExtendedRational,
    pub hlp_holds: bool,
    /// In-measure distance per delta: `x_n*` against 0 (KOC) or against `x*` (LKM).
    pub distances: Vec<ExtendedRational>,
    /// LKM only: the same at the maximal-function level.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub maximal_distances: Vec<ExtendedRational>,
    /// LKM only: `|norm(x_n) - norm(x)|`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub norm_gap: Option<ExtendedRational>,
    /// KOC only: `x_n*` at [`probe_points`].
    #[serde(skip_serializing_if = "Vec::is_empty", with = "serde_rational_vec")]
    pub pointwise: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProbeReport {
    pub probe: String,
    pub family: String,
    pub space: String,
    pub n_list: Vec<u64>,
    #[serde(with = "serde_rational_vec")]
    pub deltas: Vec<Rational>,
    pub records: Vec<ProbeRecord>,
    pub verdict: Verdict,
    /// Index into `records` from which the monitored sequence is nonincreasing.
    pub monotone_from: Option<usize>,
    /// Positive lower bound behind a failure verdict.
    #[serde(with = "serde_rational_opt")]
    pub lower_bound: Option<Rational>,
    #[serde(with = "serde_rational")]
    pub star_at_infinity: Rational,
    /// Whether the in-measure and pointwise diagnostics agree (KOC only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diagnostics_agree: Option<bool>,
    pub notes: Vec<String>,
}

fn check_inputs(
    x: &StepFunction,
    family: &SequenceFamily,
    space: &SpaceSpec,
    n_list: &[u64],
    deltas: &[Rational],
) -> Result<()> {
    if family.domain() != x.domain() || space.domain != x.domain() {
        return Err(Error::DomainMismatch);
    }
    if n_list.is_empty() {
        return Err(Error::pre("n list is empty"));
    }
    if deltas.iter().any(|d| !d.is_positive()) {
        return Err(Error::pre("every delta must be positive"));
    }
    Ok(())
}

fn member_checked(x: &StepFunction, family: &SequenceFamily, n: u64) -> Result<StepFunction> {
    let xn = family.member(n)?;
    let v = hlp_compare(&xn, x)?;
    if !v.holds {
        return Err(Error::pre(format!(
            "family {} violates x_n ≺ x at n = {n}, t = {}",
            family.name,
            format_rational(v.witness.as_ref().expect("witness"))
        )));
    }
    Ok(xn)
}

/// First index from which `seq` is nonincreasing.
fn nonincreasing_from<T: Ord>(seq: &[T]) -> usize {
    let mut k = seq.len().saturating_sub(1);
    while k > 0 && seq[k - 1] >= seq[k] {
        k -= 1;
    }
    k
}

fn vanishes(seq: &[ExtendedRational]) -> bool {
    nonincreasing_from(seq) == 0 && seq.last().is_some_and(|v| v.is_zero())
}

/// Finite evidence for `x` being a point of K-order continuity along `family`.
///
/// `consistent_with_KOC`: norms are nonincreasing from a reported index and
/// the last one is below `tolerance`. Otherwise `consistent_with_failure` when
/// every norm is at least a reported positive bound.
pub fn probe_koc(
    x: &StepFunction,
    family: &SequenceFamily,
    space: &SpaceSpec,
    n_list: &[u64],
    deltas: &[Rational],
    tolerance: &Rational,
) -> Result<ProbeReport> {
    check_inputs(x, family, space, n_list, deltas)?;
    let zero = StepFunction::zero(x.domain());
    let points: Vec<Rational> = probe_points().into_iter().filter(|p| x.domain().contains(p)).collect();
    let mut records = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let xn = member_checked(x, family, n)?;
        let star = decreasing_rearrangement(&xn);
        let distances = deltas
            .iter()
            .map(|d| measure_distance(&star, &zero, d))
            .collect::<Result<Vec<_>>>()?;
        let pointwise = points.iter().map(|p| star.evaluate(p)).collect::<Result<Vec<_>>>()?;
        records.push(ProbeRecord {
            n,
            norm: norm(space, &xn),
            hlp_holds: true,
            distances,
            maximal_distances: Vec::new(),
            norm_gap: None,
            pointwise,
        });
    }

    let norms: Vec<ExtendedRational> = records.iter().map(|r| r.norm.clone()).collect();
    let k = nonincreasing_from(&norms);
    let last = norms.last().expect("nonempty");
    let min = norms.iter().min().expect("nonempty");
    let mut notes = Vec::new();
    let (verdict, lower_bound) = if last.cmp_rational(tolerance).is_lt() {
        notes.push(format!(
            "norms nonincreasing from n = {}, last norm {} < tolerance {}",
            records[k].n,
            last,
            format_rational(tolerance)
        ));
        (Verdict::ConsistentWithKoc, None)
    } else if !min.is_zero() {
        let bound = match min {
            ExtendedRational::Finite(m) => m.clone(),
            ExtendedRational::Infinite => int(1),
        };
        notes.push(format!("every norm is at least {}", format_rational(&bound)));
        (Verdict::ConsistentWithFailure, Some(bound))
    } else {
        (Verdict::Inconclusive, None)
    };

    let in_measure = (0..deltas.len()).all(|j| {
        let seq: Vec<_> = records.iter().map(|r| r.distances[j].clone()).collect();
        vanishes(&seq)
    });
    let min_delta = deltas.iter().min();
    let pointwise = (0..points.len()).all(|j| {
        let seq: Vec<_> = records.iter().map(|r| r.pointwise[j].clone()).collect();
        nonincreasing_from(&seq) == 0 && min_delta.is_none_or(|d| seq.last().is_some_and(|v| v <= d))
    });
    let star_at_infinity = rearrangement(x).star_at_infinity;
    if !star_at_infinity.is_zero() {
        notes.push("x*(inf) > 0: in-measure and a.e. convergence need not match".into());
    }
    Ok(ProbeReport {
        probe: "koc".into(),
        family: family.name.clone(),
        space: space.label().into(),
        n_list: n_list.to_vec(),
        deltas: deltas.to_vec(),
        records,
        verdict,
        monotone_from: Some(k),
        lower_bound,
        star_at_infinity,
        diagnostics_agree: Some(in_measure == pointwise),
        notes,
    })
}

/// Finite evidence on whether `x_n ≺ x` with norms approaching `||x||` forces
/// `x_n* -> x*` and `x_n** -> x**` globally in measure.
///
/// `consistent_with_convergence`: norm gaps and every distance sequence are
/// nonincreasing, ending at 0 or strictly below where they started.
/// `consistent_with_failure`: some distance sequence stays at or above a
/// positive bound over the second half of `n_list`.
pub fn probe_lkm(
    x: &StepFunction,
    family: &SequenceFamily,
    space: &SpaceSpec,
    n_list: &[u64],
    deltas: &[Rational],
) -> Result<ProbeReport> {
    check_inputs(x, family, space, n_list, deltas)?;
    let rx = rearrangement(x);
    if !rx.star_at_infinity.is_zero() {
        return Err(Error::NonzeroAtInfinity);
    }
    let norm_x = norm(space, x);
    let mut records = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let xn = member_checked(x, family, n)?;
        let star = decreasing_rearrangement(&xn);
        let norm_n = norm(space, &xn);
        let distances = deltas
            .iter()
            .map(|d| measure_distance(&star, &rx.star, d))
            .collect::<Result<Vec<_>>>()?;
        let maximal_distances = deltas
            .iter()
            .map(|d| maximal_distance(&star, &rx.star, d))
            .collect::<Result<Vec<_>>>()?;
        records.push(ProbeRecord {
            n,
            norm_gap: Some(norm_n.abs_diff(&norm_x)),
            norm: norm_n,
            hlp_holds: true,
            distances,
            maximal_distances,
            pointwise: Vec::new(),
        });
    }

    let mut sequences: Vec<Vec<ExtendedRational>> = Vec::new();
    for j in 0..deltas.len() {
        sequences.push(records.iter().map(|r| r.distances[j].clone()).collect());
        sequences.push(records.iter().map(|r| r.maximal_distances[j].clone()).collect());
    }
    let gaps: Vec<_> = records.iter().map(|r| r.norm_gap.clone().expect("gap")).collect();
    let settles = |s: &Vec<ExtendedRational>| {
        nonincreasing_from(s) == 0 && (s.last().is_some_and(|v| v.is_zero()) || s.last() < s.first())
    };
    let half = records.len() / 2;
    let mut notes = Vec::new();
    let (verdict, lower_bound, monotone_from) = if settles(&gaps) && sequences.iter().all(settles) {
        (Verdict::ConsistentWithConvergence, None, Some(0))
    } else {
        let stuck = sequences
            .iter()
            .filter_map(|s| s[half..].iter().min().cloned())
            .filter(|m| !m.is_zero())
            .min();
        match stuck {
            Some(m) => {
                let bound = m.finite().cloned().unwrap_or_else(|| int(1));
                notes.push(format!(
                    "a distance stays at least {} from n = {}",
                    format_rational(&bound),
                    records[half].n
                ));
                (Verdict::ConsistentWithFailure, Some(bound), Some(half))
            }
            None => (Verdict::Inconclusive, None, None),
        }
    };
    if gaps.iter().all(|g| g.is_zero()) {
        notes.push("norms equal ||x|| for every n".into());
    }
    Ok(ProbeReport {
        probe: "lkm".into(),
        family: family.name.clone(),
        space: space.label().into(),
        n_list: n_list.to_vec(),
        deltas: deltas.to_vec(),
        records,
        verdict,
        monotone_from,
        lower_bound,
        star_at_infinity: rx.star_at_infinity,
        diagnostics_agree: None,
        notes,
    })
}

impl ProbeReport {
    pub fn header(&self) -> Vec<String> {
        let mut cols = vec!["n".to_string(), "norm".to_string(), "hlp".to_string()];
        if self.probe == "lkm" {
            cols.push("gap".into());
        }
        for d in &self.deltas {
            cols.push(format!("d({})", format_rational(d)));
        }
        if self.probe == "lkm" {
            for d in &self.deltas {
                cols.push(format!("d**({})", format_rational(d)));
            }
        }
        cols
    }

    pub fn rows(&self) -> Vec<Vec<String>> {
        self.records
            .iter()
            .map(|r| {
                let mut row = vec![r.n.to_string(), r.norm.to_string(), r.hlp_holds.to_string()];
                if let Some(g) = &r.norm_gap {
                    row.push(g.to_string());
                }
                row.extend(r.distances.iter().map(|d| d.to_string()));
                row.extend(r.maximal_distances.iter().map(|d| d.to_string()));
                row
            })
            .collect()
    }

    /// Fixed-width text table followed by the verdict line.
    pub fn to_table(&self) -> String {
        let mut out = render_table(&self.header(), &self.rows());
        let _ = writeln!(out, "verdict: {}", self.verdict.label());
        for note in &self.notes {
            let _ = writeln!(out, "note: {note}");
        }
        out
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.header().join(",");
        out.push('\n');
        for row in self.rows() {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

/// Left-aligned columns separated by two spaces.
pub fn render_table(header: &[String], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: &[String]| {
        let mut s = String::new();
        for (i, (cell, w)) in cells.iter().zip(&widths).enumerate() {
            if i > 0 {
                s.push_str("  ");
            }
            let _ = write!(s, "{cell:<w$}");
        }
        s.trim_end().to_string() + "\n"
    };
    let mut out = line(header);
    for row in rows {
        out.push_str(&line(row));
    }
    out
}
