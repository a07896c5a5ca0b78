//! Exact rearrangement and Hardy-Littlewood-Polya majorization calculus on
//! rational step functions.
//!
//! Every quantity is an arbitrary-precision rational (or `+inf`), so the
//! order `x ≺ y`, norm suprema and construction invariants are decided
//! exactly rather than approximated.

pub mod cli;
pub mod error;
pub mod experiments;
pub mod gen;
pub mod majorize;
pub mod pl;
pub mod rational;
pub mod rearrange;
pub mod spaces;
pub mod step;
pub mod suites;

pub use error::{Error, Result};
pub use experiments::{
    builtin_family, flatten_head, measure_distance, FamilySpec, ProbeReport, SequenceFamily, Verdict,
};
pub use pl::{PiecewiseLinear, PiecewiseLinearConcave};
pub use rational::{int, rat, ExtendedRational, Rational};
pub use rearrange::{
    decreasing_rearrangement, distribution, equimeasurable, level_integral, maximal_eval, rearrangement,
    RearrangementResult,
};
pub use spaces::{norm, FundamentalFunction, SpaceKind, SpaceSpec};
pub use step::{Combine, Domain, StepFunction};
