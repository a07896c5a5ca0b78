//! The `rearrcalc` command line: argument model, dispatch and output rendering.
//!
//! Everything here is deterministic: the same arguments and seed give the
//! same bytes on stdout.

use std::io::Read;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::Error;
use crate::experiments::{builtin_family, flatten_head, probe_koc, probe_lkm, render_table, FamilySpec, ProbeReport};
use crate::majorize::{hlp_compare, majorant_pair, sample_family_member, ConstructionTrace};
use crate::pl::PiecewiseLinearConcave;
use crate::rational::{format_rational, int, parse_rational, rat, serde_rational, ExtendedRational, Rational};
use crate::rearrange::{level_integral, maximal_eval, rearrangement};
use crate::spaces::{embeds_in_l1, fundamental_eval, mphi_a_member, norm, FundamentalFunction, SpaceSpec};
use crate::step::{Domain, StepFunction};
use crate::suites::{run_suite, Suite};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_PRECONDITION: i32 = 3;
pub const EXIT_PROPERTY: i32 = 4;

pub const SEED_ENV: &str = "REARRCALC_SEED";

#[derive(Parser, Debug)]
#[command(
    name = "rearrcalc",
    version,
    about = "Exact rearrangement and majorization calculus on rational step functions"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Read the JSON input from FILE, or from stdin with `-`.
    #[arg(long, global = true, value_name = "FILE|-")]
    pub input: Option<String>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Overridden by the REARRCALC_SEED environment variable.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    #[arg(long, global = true, default_value_t = 1000)]
    pub cases: u64,

    /// Index range `A..B` (inclusive), a single `N`, or a list `1,2,5`.
    #[arg(long = "n", global = true, value_name = "A..B")]
    pub n: Option<String>,

    /// Comma-separated positive rationals.
    #[arg(long, global = true, value_name = "LIST")]
    pub delta: Option<String>,

    #[arg(long, global = true, value_name = "p/q")]
    pub tolerance: Option<String>,

    /// Evaluation points for `maximal` and `fundamental`, comma-separated.
    #[arg(long, global = true, value_name = "LIST")]
    pub t: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// x*, Phi_x and x*(inf) of a step function.
    Rearrange { json: Option<String> },
    /// x**(t) at the points given by --t.
    Maximal { json: Option<String> },
    /// Decide x ≺ y; input {"x", "y"}.
    Hlp { json: Option<String> },
    /// Exact norm; input {"space", "x"}.
    Norm { json: Option<String> },
    /// Fundamental function of a space at the points given by --t.
    Fundamental { json: Option<String> },
    /// Two-majorant construction; input {"x", "tau", "eps"}.
    MajorantPair { json: Option<String> },
    /// A member of M(x, tau, eps) chosen by --seed; input {"x", "tau", "eps"}.
    SampleMember { json: Option<String> },
    /// Head-flattened functions y_n for n in --n.
    FlattenHead { json: Option<String> },
    /// K-order continuity probe; input {"x", "family", "space"}.
    ProbeKoc { json: Option<String> },
    /// Lower K-monotonicity probe; input {"x", "family", "space"}.
    ProbeLkm { json: Option<String> },
    /// Re-run one of the worked examples.
    Replicate { which: Replication },
    /// Randomized property suite with shrinking.
    PropTest { suite: SuiteArg },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Replication {
    Remark45,
    Example46,
    Prop32Case1,
    Prop32Case2,
    Lemma43,
    Thm47,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SuiteArg {
    Rearrange,
    Hlp,
    Prop32,
    Spaces,
    Hardy,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Suite {
        match s {
            SuiteArg::Rearrange => Suite::Rearrange,
            SuiteArg::Hlp => Suite::Hlp,
            SuiteArg::Prop32 => Suite::Prop32,
            SuiteArg::Spaces => Suite::Spaces,
            SuiteArg::Hardy => Suite::Hardy,
        }
    }
}

/// What a run produced: exit status and the bytes for stdout and stderr.
#[derive(Debug, PartialEq, Eq)]
pub struct RunOutput {
    pub status: i32,
    pub stdout: String,
    pub stderr: String,
}

/// A result ready for rendering in any format.
struct Rendered {
    json: Value,
    table: Option<(Vec<String>, Vec<Vec<String>>)>,
    footer: Vec<String>,
}

impl Rendered {
    fn plain<T: Serialize>(value: &T) -> Result<Self, Error> {
        Ok(Rendered {
            json: to_json(value)?,
            table: None,
            footer: Vec::new(),
        })
    }

    fn render(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string_pretty(&self.json).expect("values serialize") + "\n",
            Format::Table => {
                let (header, rows) = self.table.clone().unwrap_or_else(|| key_value(&self.json));
                let mut out = render_table(&header, &rows);
                for line in &self.footer {
                    out.push_str(line);
                    out.push('\n');
                }
                out
            }
            Format::Csv => {
                let (header, rows) = self.table.clone().unwrap_or_else(|| key_value(&self.json));
                let mut out = csv_line(&header);
                for row in &rows {
                    out.push_str(&csv_line(row));
                }
                out
            }
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<Value, Error> {
    serde_json::to_value(value).map_err(|e| Error::Internal(e.to_string()))
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}

fn key_value(json: &Value) -> (Vec<String>, Vec<Vec<String>>) {
    let header = vec!["field".to_string(), "value".to_string()];
    let rows = match json {
        Value::Object(map) => map.iter().map(|(k, v)| vec![k.clone(), cell(v)]).collect(),
        other => vec![vec!["value".to_string(), cell(other)]],
    };
    (header, rows)
}

fn csv_line(cells: &[String]) -> String {
    let quoted: Vec<String> = cells
        .iter()
        .map(|c| {
            if c.contains([',', '"', '\n']) {
                format!("\"{}\"", c.replace('"', "\"\""))
            } else {
                c.clone()
            }
        })
        .collect();
    quoted.join(",") + "\n"
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_) => EXIT_PARSE,
        Error::Internal(_) => EXIT_INTERNAL,
        _ => EXIT_PRECONDITION,
    }
}

/// Parses `A..B`, `N`, or `a,b,c` into positive integers.
pub fn parse_n_list(s: &str) -> Result<Vec<u64>, Error> {
    let bad = || Error::Parse(format!("bad --n value {s:?}"));
    let num = |t: &str| t.trim().parse::<u64>().map_err(|_| bad());
    let list = if let Some((a, b)) = s.split_once("..") {
        let (a, b) = (num(a)?, num(b)?);
        if a > b {
            return Err(bad());
        }
        (a..=b).collect()
    } else {
        s.split(',').map(num).collect::<Result<Vec<_>, _>>()?
    };
    if list.is_empty() || list.contains(&0) {
        return Err(bad());
    }
    Ok(list)
}

pub fn parse_rational_list(s: &str) -> Result<Vec<Rational>, Error> {
    s.split(',').map(parse_rational).collect()
}

#[derive(Deserialize)]
struct PairInput {
    x: StepFunction,
    y: StepFunction,
}

#[derive(Deserialize)]
struct NormInput {
    space: SpaceSpec,
    x: StepFunction,
}

#[derive(Deserialize)]
struct FundamentalInput {
    space: SpaceSpec,
}

#[derive(Deserialize)]
struct FamilyInput {
    x: StepFunction,
    #[serde(with = "serde_rational")]
    tau: Rational,
    #[serde(with = "serde_rational")]
    eps: Rational,
}

#[derive(Deserialize)]
struct ProbeInput {
    x: StepFunction,
    family: FamilySpec,
    space: SpaceSpec,
}

#[derive(Serialize)]
struct PointValue {
    #[serde(with = "serde_rational")]
    t: Rational,
    #[serde(with = "serde_rational")]
    value: Rational,
}

#[derive(Serialize)]
struct FlattenRecord {
    n: u64,
    y: StepFunction,
}

#[derive(Serialize)]
struct CoveringReplication {
    trace: ConstructionTrace,
    sampled_members: usize,
    all_covered: bool,
}

struct Context<'a> {
    cli: &'a Cli,
    seed: u64,
    stdin: &'a mut dyn Read,
}

impl Context<'_> {
    fn input<T: for<'de> Deserialize<'de>>(&mut self, inline: &Option<String>) -> Result<T, Error> {
        let text = match (&self.cli.input, inline) {
            (Some(path), _) if path == "-" => {
                let mut s = String::new();
                self.stdin
                    .read_to_string(&mut s)
                    .map_err(|e| Error::Parse(format!("stdin: {e}")))?;
                s
            }
            (Some(path), _) => std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{path}: {e}")))?,
            (None, Some(json)) => json.clone(),
            (None, None) => return Err(Error::Parse("no input: pass inline JSON or --input FILE|-".into())),
        };
        serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))
    }

    fn n_list(&self, default: &str) -> Result<Vec<u64>, Error> {
        parse_n_list(self.cli.n.as_deref().unwrap_or(default))
    }

    fn deltas(&self) -> Result<Vec<Rational>, Error> {
        parse_rational_list(self.cli.delta.as_deref().unwrap_or("1/2,1/10"))
    }

    fn tolerance(&self) -> Result<Rational, Error> {
        parse_rational(self.cli.tolerance.as_deref().unwrap_or("1/10"))
    }

    fn points(&self) -> Result<Vec<Rational>, Error> {
        let t = self
            .cli
            .t
            .as_deref()
            .ok_or_else(|| Error::Parse("--t is required".into()))?;
        parse_rational_list(t)
    }
}

fn point_table(rows: &[PointValue], label: &str) -> (Vec<String>, Vec<Vec<String>>) {
    (
        vec!["t".into(), label.into()],
        rows.iter()
            .map(|r| vec![format_rational(&r.t), format_rational(&r.value)])
            .collect(),
    )
}

fn probe_rendered(report: &ProbeReport) -> Result<Rendered, Error> {
    Ok(Rendered {
        json: to_json(report)?,
        table: Some((report.header(), report.rows())),
        footer: std::iter::once(format!("verdict: {}", report.verdict.label()))
            .chain(report.notes.iter().map(|n| format!("note: {n}")))
            .collect(),
    })
}

fn box_fn(len: i64, c: Rational) -> StepFunction {
    StepFunction::head(Domain::HalfLine, &int(len), c).expect("positive length")
}

/// `2 chi_[0,1) + chi_[1,3)`.
fn two_one_three() -> StepFunction {
    StepFunction::new(Domain::HalfLine, vec![int(1), int(3)], vec![int(2), int(1)], int(0)).expect("valid")
}

fn hyperbolic_one() -> FundamentalFunction {
    FundamentalFunction::hyperbolic(int(1)).expect("c = 1")
}

fn replicate(ctx: &Context<'_>, which: Replication) -> Result<Rendered, Error> {
    let deltas = ctx.deltas()?;
    match which {
        Replication::Remark45 => {
            let x = box_fn(1, int(1));
            let fam = builtin_family(FamilySpec::Remark45)?;
            let report = probe_koc(
                &x,
                &fam,
                &SpaceSpec::l1(),
                &ctx.n_list("1..10")?,
                &deltas,
                &ctx.tolerance()?,
            )?;
            probe_rendered(&report)
        }
        Replication::Example46 => {
            let x = StepFunction::constant(Domain::HalfLine, int(1));
            let phi = hyperbolic_one();
            let space = SpaceSpec::marcinkiewicz_star(phi.clone());
            let fam = builtin_family(FamilySpec::Example46Heads)?;
            let mut report = probe_koc(&x, &fam, &space, &ctx.n_list("1..10")?, &deltas, &ctx.tolerance()?)?;
            report.notes.push(format!("norm of x: {}", norm(&space, &x)));
            report
                .notes
                .push(format!("x in (M_phi)_a: {}", mphi_a_member(&phi, &x)?));
            probe_rendered(&report)
        }
        Replication::Prop32Case1 | Replication::Prop32Case2 => {
            let (x, tau, eps) = if which == Replication::Prop32Case1 {
                (box_fn(1, int(1)), rat(1, 2), rat(1, 4))
            } else {
                let x = StepFunction::new(Domain::HalfLine, vec![int(1), int(4)], vec![int(2), int(1)], int(0))?;
                (x, int(2), rat(1, 5))
            };
            let trace = majorant_pair(&x, &tau, &eps)?;
            let seeds: Vec<u64> = (0..16).map(|k| ctx.seed.wrapping_add(k)).collect();
            let mut all_covered = true;
            for s in &seeds {
                let y = sample_family_member(&x, &tau, &eps, *s)?;
                all_covered &= trace.covers(&y)?;
            }
            Rendered::plain(&CoveringReplication {
                trace,
                sampled_members: seeds.len(),
                all_covered,
            })
        }
        Replication::Lemma43 => {
            let x = two_one_three();
            let t_x = int(2);
            let phi = hyperbolic_one();
            let space = SpaceSpec::marcinkiewicz(phi.clone());
            let ys = builtin_family(FamilySpec::Lemma43Y {
                x: x.clone(),
                t_x: t_x.clone(),
            })?;
            let xs = builtin_family(FamilySpec::Lemma43X { x: x.clone() })?;
            let height = rearrangement(&x).star.evaluate(&t_x)?;
            let mut rows = Vec::new();
            let mut json_rows = Vec::new();
            for n in ctx.n_list("1..10")? {
                let nr = int(n as i64);
                let ny = norm(&space, &ys.member(n)?);
                let s = &nr * &t_x;
                let formula = &height * &t_x * phi.eval(&s) / &s;
                let nx = norm(&space, &xs.member(n)?);
                let decay = maximal_eval(&x, &nr)? * phi.eval(&nr);
                let row = vec![
                    n.to_string(),
                    ny.to_string(),
                    format_rational(&formula),
                    nx.to_string(),
                    format_rational(&decay),
                ];
                json_rows.push(serde_json::json!({
                    "n": n, "norm_y": ny, "formula_y": format_rational(&formula),
                    "norm_x": nx, "phi_n_maximal_n": format_rational(&decay),
                }));
                rows.push(row);
            }
            let embeds = embeds_in_l1(&space)?;
            Ok(Rendered {
                json: serde_json::json!({ "t_x": format_rational(&t_x), "embeds_in_L1": embeds, "records": json_rows }),
                table: Some((
                    ["n", "norm_y", "formula_y", "norm_x", "phi(n)x**(n)"]
                        .map(String::from)
                        .to_vec(),
                    rows,
                )),
                footer: vec![format!("embeds_in_L1: {embeds}")],
            })
        }
        Replication::Thm47 => {
            let x = two_one_three();
            let phi = FundamentalFunction::piecewise(PiecewiseLinearConcave::from_slopes(
                int(0),
                &[(int(1), int(2)), (int(1), int(1))],
                int(0),
            )?)?;
            let space = SpaceSpec::marcinkiewicz(phi);
            let level_x = level_integral(&x);
            let mut rows = Vec::new();
            let mut json_rows = Vec::new();
            for n in ctx.n_list("1..10")? {
                let y = flatten_head(&x, n)?;
                let ny = norm(&space, &y);
                let bound = crate::spaces::flatten_head_bound(&space, &x, &int(n as i64))?;
                let holds = hlp_compare(&y, &x)?.holds;
                let level_y = level_integral(&y);
                let nodes_match = level_x
                    .breakpoints()
                    .iter()
                    .chain(level_y.breakpoints())
                    .filter(|t| **t >= int(n as i64))
                    .all(|t| level_x.eval(t) == level_y.eval(t));
                rows.push(vec![
                    n.to_string(),
                    ny.to_string(),
                    bound.to_string(),
                    holds.to_string(),
                    nodes_match.to_string(),
                ]);
                json_rows.push(serde_json::json!({
                    "n": n, "norm": ny, "bound": bound, "hlp": holds, "maximal_matches_beyond_n": nodes_match,
                }));
            }
            Ok(Rendered {
                json: serde_json::json!({ "records": json_rows }),
                table: Some((
                    ["n", "norm", "bound", "hlp", "x**=y**_beyond_n"]
                        .map(String::from)
                        .to_vec(),
                    rows,
                )),
                footer: Vec::new(),
            })
        }
    }
}

fn dispatch(ctx: &mut Context<'_>) -> Result<(Rendered, i32), Error> {
    let ok = |r| Ok((r, EXIT_OK));
    match &ctx.cli.command {
        Command::Rearrange { json } => {
            let x: StepFunction = ctx.input(json)?;
            ok(Rendered::plain(&rearrangement(&x))?)
        }
        Command::Maximal { json } => {
            let x: StepFunction = ctx.input(json)?;
            let rows = ctx
                .points()?
                .into_iter()
                .map(|t| maximal_eval(&x, &t).map(|value| PointValue { t, value }))
                .collect::<Result<Vec<_>, _>>()?;
            ok(Rendered {
                json: to_json(&rows)?,
                table: Some(point_table(&rows, "x**(t)")),
                footer: Vec::new(),
            })
        }
        Command::Hlp { json } => {
            let p: PairInput = ctx.input(json)?;
            ok(Rendered::plain(&hlp_compare(&p.x, &p.y)?)?)
        }
        Command::Norm { json } => {
            let p: NormInput = ctx.input(json)?;
            let value: ExtendedRational = norm(&p.space, &p.x);
            ok(Rendered::plain(
                &serde_json::json!({ "space": p.space.label(), "norm": value }),
            )?)
        }
        Command::Fundamental { json } => {
            let p: FundamentalInput = ctx.input(json)?;
            let rows = ctx
                .points()?
                .into_iter()
                .map(|t| fundamental_eval(&p.space, &t).map(|value| PointValue { t, value }))
                .collect::<Result<Vec<_>, _>>()?;
            ok(Rendered {
                json: to_json(&rows)?,
                table: Some(point_table(&rows, "phi(t)")),
                footer: Vec::new(),
            })
        }
        Command::MajorantPair { json } => {
            let p: FamilyInput = ctx.input(json)?;
            ok(Rendered::plain(&majorant_pair(&p.x, &p.tau, &p.eps)?)?)
        }
        Command::SampleMember { json } => {
            let p: FamilyInput = ctx.input(json)?;
            ok(Rendered::plain(&sample_family_member(&p.x, &p.tau, &p.eps, ctx.seed)?)?)
        }
        Command::FlattenHead { json } => {
            let x: StepFunction = ctx.input(json)?;
            let records = ctx
                .n_list("1..5")?
                .into_iter()
                .map(|n| flatten_head(&x, n).map(|y| FlattenRecord { n, y }))
                .collect::<Result<Vec<_>, _>>()?;
            let rows = records.iter().map(|r| vec![r.n.to_string(), r.y.to_string()]).collect();
            ok(Rendered {
                json: to_json(&records)?,
                table: Some((vec!["n".into(), "y_n".into()], rows)),
                footer: Vec::new(),
            })
        }
        Command::ProbeKoc { json } => {
            let p: ProbeInput = ctx.input(json)?;
            let family = builtin_family(p.family)?;
            let report = probe_koc(
                &p.x,
                &family,
                &p.space,
                &ctx.n_list("1..10")?,
                &ctx.deltas()?,
                &ctx.tolerance()?,
            )?;
            ok(probe_rendered(&report)?)
        }
        Command::ProbeLkm { json } => {
            let p: ProbeInput = ctx.input(json)?;
            let family = builtin_family(p.family)?;
            let report = probe_lkm(&p.x, &family, &p.space, &ctx.n_list("1..10")?, &ctx.deltas()?)?;
            ok(probe_rendered(&report)?)
        }
        Command::Replicate { which } => ok(replicate(ctx, *which)?),
        Command::PropTest { suite } => {
            let report = run_suite((*suite).into(), ctx.cli.cases, ctx.seed);
            let status = if report.ok() { EXIT_OK } else { EXIT_PROPERTY };
            Ok((Rendered::plain(&report)?, status))
        }
    }
}

/// Runs a parsed command. `env_seed` is the value of `REARRCALC_SEED`, if set.
pub fn run(cli: &Cli, env_seed: Option<&str>, stdin: &mut dyn Read) -> RunOutput {
    let seed = match env_seed.map(|s| s.trim().parse::<u64>()) {
        None => cli.seed,
        Some(Ok(s)) => s,
        Some(Err(_)) => {
            return RunOutput {
                status: EXIT_PARSE,
                stdout: String::new(),
                stderr: format!("error: {SEED_ENV} must be an unsigned integer\n"),
            }
        }
    };
    let mut ctx = Context { cli, seed, stdin };
    match dispatch(&mut ctx) {
        Ok((rendered, status)) => RunOutput {
            status,
            stdout: rendered.render(cli.format),
            stderr: String::new(),
        },
        Err(e) => RunOutput {
            status: exit_code(&e),
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

/// Parses `args` (including the program name) and runs; clap usage errors exit with status 2.
pub fn run_args<I, T>(args: I, env_seed: Option<&str>, stdin: &mut dyn Read) -> RunOutput
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli, env_seed, stdin),
        Err(e) => {
            let status = if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                RunOutput {
                    status,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                RunOutput {
                    status,
                    stdout: text,
                    stderr: String::new(),
                }
            }
        }
    }
}
