//! `shapekit` command-line front end. Every subcommand prints one JSON
//! document on stdout; errors go to stdout as `{"error": {...}}`.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use shapekit::buildings::{self, AreaRule, FeasibilityProblem, Scenario};
use shapekit::ech::{self, CurrentEnds, EmbeddedOrbit, Level, OrbitSet};
use shapekit::exactnum::{fmt_rational, parse_rational, ParseOptions};
use shapekit::fredholm::{self, CurveAsymptotics, FredholmEnd, RigidFamily};
use shapekit::linf::{self, BetaGen};
use shapekit::reeb::{Ellipsoid, OrbitKind};
use shapekit::shape::{self, plot, Domain4D, Inclusion, ProductCase, Region, Shape2};
use shapekit::{sweep, Error, PerturbedRational, Rational};

#[derive(Parser)]
#[command(name = "shapekit", version, about = "Exact shape-invariant and index computations")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// ECH grading of α₁^m1 α₂^m2.
    Grading {
        #[arg(long)]
        ellipsoid: String,
        #[arg(long, default_value_t = 0)]
        m1: u32,
        #[arg(long, default_value_t = 0)]
        m2: u32,
    },
    /// ECH index between two orbit sets.
    EchIndex(CurrentArgs),
    /// J₀ index and its lower-bound slack.
    J0(CurrentArgs),
    /// The orbit set on the bottom ellipsoid with the same grading.
    GradingMatch {
        #[arg(long)]
        top: String,
        /// `m1,m2`
        #[arg(long)]
        set: String,
        #[arg(long)]
        bottom: String,
        #[arg(long)]
        cap: String,
    },
    /// Fredholm index from a curve description or a raw end list.
    Fredholm {
        #[arg(long, requires_all = ["bottom", "curve"])]
        top: Option<String>,
        #[arg(long)]
        bottom: Option<String>,
        /// JSON `{"pos_short":[..],"pos_long":[..],"neg_short":[..],"neg_long":[..]}`
        #[arg(long)]
        curve: Option<String>,
        /// JSON list of `{"sign":"positive","cz":"3","mb_dim":0}`
        #[arg(long, conflicts_with_all = ["top", "curve"])]
        ends: Option<String>,
    },
    /// Negative-end degree making a curve rigid.
    RigidDegree {
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        k: i64,
    },
    /// Exhaustive check of the end-pattern index inequalities.
    IndexSuite {
        /// Range `lo..hi` (inclusive).
        #[arg(long, default_value = "2..6")]
        k: String,
        #[arg(long, default_value_t = 30)]
        m_max: u32,
        #[arg(long, default_value_t = 10)]
        r_max: u32,
        #[arg(long)]
        table: bool,
    },
    #[command(subcommand)]
    Shape(ShapeCmd),
    #[command(subcommand)]
    Buildings(BuildingsCmd),
    #[command(subcommand)]
    Linf(LinfCmd),
    /// Run one acceptance suite by name or number, or `all`.
    Sweep {
        suite: String,
        #[arg(long)]
        table: bool,
    },
}

#[derive(Args)]
struct CurrentArgs {
    #[arg(long)]
    top: String,
    /// `m1,m2`
    #[arg(long)]
    top_set: String,
    #[arg(long)]
    bottom: String,
    #[arg(long, default_value = "0,0")]
    bottom_set: String,
    #[arg(long, default_value_t = 0)]
    genus: u32,
    #[arg(long, default_value_t = 0)]
    delta: u32,
    /// Ends per embedded orbit, e.g. `top:long=1,bottom:short=1`.
    #[arg(long, default_value = "")]
    ends: String,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Mixed,
    Pure,
}

#[derive(Args)]
struct DomainArg {
    /// `E(a,b)`, `B(c)`, `P(a,b)` or `Z(c)`.
    #[arg(value_name = "DOMAIN", required_unless_present = "domain")]
    positional: Option<String>,
    #[arg(long, conflicts_with = "positional")]
    domain: Option<String>,
    /// Use the Hamiltonian shape (ellipsoids only).
    #[arg(long)]
    hamiltonian: bool,
}

#[derive(Subcommand)]
enum ShapeCmd {
    /// Cells and their vertices inside `[0, W]²`.
    Region {
        #[command(flatten)]
        d: DomainArg,
        #[arg(long)]
        viewport: Option<String>,
    },
    /// Membership of `(w1, w2)`.
    Member {
        #[command(flatten)]
        d: DomainArg,
        #[arg(long)]
        w1: String,
        #[arg(long)]
        w2: String,
    },
    /// Whether the shape of `x` lies inside the shape of `y`.
    Includes {
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        #[arg(long)]
        hamiltonian: bool,
        #[arg(long, default_value_t = shape::DEFAULT_SAMPLES)]
        samples: usize,
    },
    /// λ-capacity.
    Capacity {
        #[command(flatten)]
        d: DomainArg,
        #[arg(long)]
        lambda: String,
    },
    /// Move `(w1, w2)` into the fundamental domain.
    ReduceBasis {
        #[arg(long)]
        w1: String,
        #[arg(long)]
        w2: String,
    },
    /// Product-domain obstruction check.
    Obstruct {
        #[arg(long, value_enum)]
        case: CaseArg,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long)]
        c: String,
        #[arg(long)]
        d: Option<String>,
    },
    /// SVG or CSV rendering; SVG goes to stdout when no file is given.
    Plot {
        #[command(flatten)]
        d: DomainArg,
        #[arg(long)]
        svg: Option<PathBuf>,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        viewport: Option<String>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum CaseArg {
    PolyPoly,
    PolyEll,
}

#[derive(Args)]
struct ProblemArgs {
    #[arg(long)]
    a: String,
    /// Perturbed literal such as `6+d`.
    #[arg(long, alias = "b-delta")]
    b: String,
    #[arg(long)]
    x: String,
    #[arg(long, value_enum)]
    scenario: ScenarioArg,
    #[arg(long, value_enum, default_value = "plane-at-least-one")]
    rule: RuleArg,
}

#[derive(Clone, Copy, ValueEnum)]
enum ScenarioArg {
    Full,
    Hamiltonian,
}

#[derive(Clone, Copy, ValueEnum)]
enum RuleArg {
    StrictPositive,
    PlaneAtLeastOne,
}

#[derive(Subcommand)]
enum BuildingsCmd {
    /// All feasible configurations for one `m`.
    Enumerate {
        #[command(flatten)]
        p: ProblemArgs,
        #[arg(long)]
        m: u32,
        #[arg(long, default_value_t = buildings::DEFAULT_BUDGET)]
        budget: usize,
    },
    /// Least `m` with no feasible configuration.
    Scan {
        #[command(flatten)]
        p: ProblemArgs,
        #[arg(long, default_value_t = 15)]
        m_max: u32,
    },
}

#[derive(Subcommand)]
enum LinfCmd {
    /// Coefficient of the pairing at `k`.
    Pairing {
        #[arg(long)]
        k: u32,
    },
    /// Φ²(β_{i1,j1}, β_{i2,j2}) for large S.
    Phi2 {
        #[arg(long)]
        i1: u32,
        #[arg(long)]
        j1: u32,
        #[arg(long)]
        i2: u32,
        #[arg(long)]
        j2: u32,
    },
}

enum Failure {
    Lib(Error),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type Out = Result<(Value, ExitCode), Failure>;

fn ok(v: Value) -> Out {
    Ok((v, ExitCode::SUCCESS))
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

struct Ctx {
    opts: ParseOptions,
}

impl Ctx {
    fn ellipsoid(&self, s: &str) -> Result<Ellipsoid, Failure> {
        Ok(Ellipsoid::parse_with(s, self.opts)?)
    }

    fn perturbed(&self, s: &str) -> Result<PerturbedRational, Failure> {
        Ok(PerturbedRational::parse_with(s, self.opts)?)
    }
}

fn rational(s: &str) -> Result<Rational, Failure> {
    Ok(parse_rational(s)?)
}

fn orbit_set(s: &str) -> Result<OrbitSet, Failure> {
    let (a, b) = s.split_once(',').ok_or_else(|| usage(format!("expected m1,m2, got {s:?}")))?;
    let n = |t: &str| t.trim().parse::<u32>().map_err(|_| usage(format!("bad multiplicity {t:?}")));
    Ok(OrbitSet::new(n(a)?, n(b)?))
}

fn ends_map(s: &str) -> Result<BTreeMap<EmbeddedOrbit, u32>, Failure> {
    let mut map = BTreeMap::new();
    for item in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let bad = || usage(format!("expected level:kind=n, got {item:?}"));
        let (key, n) = item.split_once('=').ok_or_else(bad)?;
        let (level, kind) = key.split_once(':').ok_or_else(bad)?;
        let level = match level {
            "top" => Level::Top,
            "bottom" => Level::Bottom,
            _ => return Err(bad()),
        };
        let kind = match kind {
            "short" => OrbitKind::Short,
            "long" => OrbitKind::Long,
            _ => return Err(bad()),
        };
        let n = n.parse::<u32>().map_err(|_| bad())?;
        map.insert(EmbeddedOrbit { level, kind }, n);
    }
    Ok(map)
}

fn current(ctx: &Ctx, c: &CurrentArgs) -> Result<CurrentEnds, Failure> {
    Ok(CurrentEnds {
        top: ctx.ellipsoid(&c.top)?,
        top_set: orbit_set(&c.top_set)?,
        bottom: ctx.ellipsoid(&c.bottom)?,
        bottom_set: orbit_set(&c.bottom_set)?,
        genus: c.genus,
        delta: c.delta,
        ends_per_orbit: ends_map(&c.ends)?,
    })
}

fn to_value<T: serde::Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("library types serialize")
}

fn point(p: &shape::Point) -> Value {
    json!([fmt_rational(&p.0), fmt_rational(&p.1)])
}

impl DomainArg {
    fn domain(&self) -> Result<Domain4D, Failure> {
        let s = self.positional.as_deref().or(self.domain.as_deref()).ok_or_else(|| usage("missing domain"))?;
        Ok(Domain4D::parse(s)?)
    }

    fn region(&self) -> Result<Region, Failure> {
        let d = self.domain()?;
        if self.hamiltonian {
            Ok(shape::hamiltonian_shape(&d)?)
        } else {
            Ok(shape::reduced_shape(&d))
        }
    }
}

fn viewport(v: &Option<String>, r: &Region) -> Result<Rational, Failure> {
    match v {
        Some(s) => Ok(rational(s)?),
        None => Ok(r.domain.size() * Rational::from_integer(2.into()) + Rational::from_integer(1.into())),
    }
}

fn problem(ctx: &Ctx, p: &ProblemArgs, m: u32) -> Result<(FeasibilityProblem, AreaRule), Failure> {
    let scenario = match p.scenario {
        ScenarioArg::Full => Scenario::Full,
        ScenarioArg::Hamiltonian => Scenario::Hamiltonian,
    };
    let rule = match p.rule {
        RuleArg::StrictPositive => AreaRule::StrictPositive,
        RuleArg::PlaneAtLeastOne => AreaRule::PlaneAtLeastOne,
    };
    let a = PerturbedRational::from_rational(rational(&p.a)?);
    let prob = FeasibilityProblem::new(a, ctx.perturbed(&p.b)?, rational(&p.x)?, m, scenario)?;
    Ok((prob, rule))
}

fn k_range(s: &str) -> Result<std::ops::RangeInclusive<i64>, Failure> {
    let bad = || usage(format!("expected lo..hi, got {s:?}"));
    let (lo, hi) = s.split_once("..").ok_or_else(bad)?;
    let hi = hi.strip_prefix('=').unwrap_or(hi);
    Ok(lo.trim().parse().map_err(|_| bad())?..=hi.trim().parse().map_err(|_| bad())?)
}

fn run(cmd: &Cmd, ctx: &Ctx) -> Out {
    match cmd {
        Cmd::Grading { ellipsoid, m1, m2 } => {
            let e = ctx.ellipsoid(ellipsoid)?;
            let s = OrbitSet::new(*m1, *m2);
            ok(json!({"value": ech::grading(&e, &s)?, "inputs": {"ellipsoid": e, "set": s}}))
        }
        Cmd::EchIndex(c) => {
            let ce = current(ctx, c)?;
            ok(json!({"value": ech::ech_index(&ce)?, "inputs": ce}))
        }
        Cmd::J0(c) => {
            let ce = current(ctx, c)?;
            let check = ech::j0_bound_check(&ce)?;
            ok(json!({"value": check.j0, "bound": check, "inputs": ce}))
        }
        Cmd::GradingMatch { top, set, bottom, cap } => {
            let (t, b) = (ctx.ellipsoid(top)?, ctx.ellipsoid(bottom)?);
            let s = orbit_set(set)?;
            let cap = ctx.perturbed(cap)?;
            let m = ech::grading_match(&t, &s, &b, &cap)?;
            ok(json!({"value": m, "inputs": {"top": t, "set": s, "bottom": b, "cap": cap}}))
        }
        Cmd::Fredholm { top, bottom, curve, ends } => {
            if let Some(ends) = ends {
                let list: Vec<FredholmEnd> =
                    serde_json::from_str(ends).map_err(|e| usage(format!("bad --ends JSON: {e}")))?;
                return ok(json!({"value": fredholm::fredholm_index(&list)?}));
            }
            let (Some(top), Some(bottom), Some(curve)) = (top, bottom, curve) else {
                return Err(usage("need --top, --bottom and --curve, or --ends"));
            };
            let ca: CurveAsymptotics =
                serde_json::from_str(curve).map_err(|e| usage(format!("bad --curve JSON: {e}")))?;
            let v = fredholm::ind_cobordism(&ctx.ellipsoid(top)?, &ctx.ellipsoid(bottom)?, &ca)?;
            ok(json!({"value": v}))
        }
        Cmd::RigidDegree { family, m, k } => {
            let f = match family {
                FamilyArg::Mixed => RigidFamily::Mixed,
                FamilyArg::Pure => RigidFamily::Pure,
            };
            ok(json!({"value": fredholm::rigid_negative_degree(*k, *m, f)?}))
        }
        Cmd::IndexSuite { k, m_max, r_max, table } => {
            let report = fredholm::index_suite(k_range(k)?, *m_max, *r_max)?;
            if *table {
                return ok(Value::String(report.to_table()));
            }
            let mut v = to_value(&report);
            v["passed"] = json!(report.passed());
            ok(v)
        }
        Cmd::Shape(s) => run_shape(s),
        Cmd::Buildings(b) => run_buildings(b, ctx),
        Cmd::Linf(l) => run_linf(l),
        Cmd::Sweep { suite, table } => {
            let outcomes = if suite == "all" {
                sweep::run_all()
            } else {
                vec![sweep::run_suite(suite)?]
            };
            let code = if outcomes.iter().all(|o| o.passed) {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            };
            let v = if *table {
                Value::String(outcomes.iter().map(|o| o.line() + "\n").collect())
            } else {
                to_value(&outcomes)
            };
            Ok((v, code))
        }
    }
}

fn run_shape(cmd: &ShapeCmd) -> Out {
    match cmd {
        ShapeCmd::Region { d, viewport: vp } => {
            let r = d.region()?;
            let w = viewport(vp, &r)?;
            let mut v = to_value(&r);
            let shapes = r.vertices(&w);
            for (cell, shape) in v["cells"].as_array_mut().expect("cells").iter_mut().zip(&shapes) {
                let kind = match shape {
                    Shape2::Polygon(_) => "polygon",
                    Shape2::Segment(..) => "segment",
                    Shape2::Point(_) => "point",
                    Shape2::Empty => "empty",
                };
                cell["kind"] = json!(kind);
                cell["vertices"] = Value::Array(shape.vertices().iter().map(point).collect());
            }
            v["viewport"] = json!(fmt_rational(&w));
            ok(v)
        }
        ShapeCmd::Member { d, w1, w2 } => {
            let p = (rational(w1)?, rational(w2)?);
            ok(json!({"value": d.region()?.contains(&p)}))
        }
        ShapeCmd::Includes { x, y, hamiltonian, samples } => {
            let build = |s: &str| -> Result<Region, Failure> {
                let d = Domain4D::parse(s)?;
                if *hamiltonian {
                    Ok(shape::hamiltonian_shape(&d)?)
                } else {
                    Ok(shape::reduced_shape(&d))
                }
            };
            match shape::includes_with_samples(&build(x)?, &build(y)?, *samples)? {
                Inclusion::Included => ok(json!({"value": "included"})),
                Inclusion::Witness(p) => ok(json!({"value": "witness", "witness": point(&p)})),
            }
        }
        ShapeCmd::Capacity { d, lambda } => {
            let c = shape::capacity_lambda(&d.domain()?, &rational(lambda)?)?;
            ok(json!({"value": fmt_rational(&c)}))
        }
        ShapeCmd::ReduceBasis { w1, w2 } => {
            let (change, out) = shape::reduce_basis(&rational(w1)?, &rational(w2)?)?;
            ok(json!({"a": change.a, "matrix": change.matrix(), "value": out}))
        }
        ShapeCmd::Obstruct { case, a, b, c, d } => {
            let case = match case {
                CaseArg::PolyPoly => ProductCase::PolyPoly {
                    a: rational(a)?,
                    b: rational(b)?,
                    c: rational(c)?,
                    d: rational(d.as_deref().ok_or_else(|| usage("poly-poly needs --d"))?)?,
                },
                CaseArg::PolyEll => ProductCase::PolyEll {
                    a: rational(a)?,
                    b: b.trim().parse().map_err(|_| usage(format!("b = {b:?} must be an integer")))?,
                    c: rational(c)?,
                },
            };
            ok(to_value(&shape::product_obstruction_check(&case)?))
        }
        ShapeCmd::Plot { d, svg, csv, viewport: vp } => {
            let r = d.region()?;
            let w = viewport(vp, &r)?;
            let write = |path: &PathBuf, text: String| {
                fs::write(path, text).map_err(|e| usage(format!("cannot write {}: {e}", path.display())))
            };
            if svg.is_none() && csv.is_none() {
                return ok(Value::String(plot::to_svg(&r, &w)));
            }
            let mut v = json!({"viewport": fmt_rational(&w)});
            if let Some(p) = svg {
                write(p, plot::to_svg(&r, &w))?;
                v["svg"] = json!(p.display().to_string());
            }
            if let Some(p) = csv {
                write(p, plot::to_csv(&r, &w))?;
                v["csv"] = json!(p.display().to_string());
            }
            ok(v)
        }
    }
}

fn run_buildings(cmd: &BuildingsCmd, ctx: &Ctx) -> Out {
    match cmd {
        BuildingsCmd::Enumerate { p, m, budget } => {
            let (prob, rule) = problem(ctx, p, *m)?;
            ok(to_value(&buildings::enumerate_feasible(&prob, rule, *budget)?))
        }
        BuildingsCmd::Scan { p, m_max } => {
            let (prob, rule) = problem(ctx, p, 1)?;
            let v = buildings::obstruction_scan(&prob.a, &prob.b, &prob.x, prob.scenario, *m_max, rule)?;
            ok(to_value(&v))
        }
    }
}

fn run_linf(cmd: &LinfCmd) -> Out {
    match cmd {
        LinfCmd::Pairing { k } => ok(json!({"value": fmt_rational(&linf::pairing_coefficient(*k)?)})),
        LinfCmd::Phi2 { i1, j1, i2, j2 } => {
            let v = linf::phi2(BetaGen::new(*i1, *j1)?, BetaGen::new(*i2, *j2)?, true)?;
            ok(json!({"terms": v}))
        }
    }
}

fn error_value(f: &Failure, command: &str) -> (Value, ExitCode) {
    let mut context = json!({"command": command});
    let (code, message, exit) = match f {
        Failure::Usage(m) => ("UsageError", m.clone(), 2),
        Failure::Lib(e) => {
            match e {
                Error::NotFound { grading } => context["grading"] = json!(grading),
                Error::MultipleMatches { grading, count } => {
                    context["grading"] = json!(grading);
                    context["count"] = json!(count);
                }
                Error::SearchBudgetExceeded { budget, found } => {
                    context["budget"] = json!(budget);
                    context["found"] = json!(found);
                }
                Error::SNotLargeEnough { s, d } => {
                    context["s"] = json!(s);
                    context["d"] = json!(d);
                }
                Error::TieDetected(q) => context["q"] = json!(q),
                _ => {}
            }
            let exit = match e {
                Error::IndeterminateComparison(_) => 3,
                Error::SearchBudgetExceeded { .. } => 4,
                Error::InclusionCrossCheck(_) => 1,
                _ => 2,
            };
            (e.code(), e.to_string(), exit)
        }
    };
    (
        json!({"error": {"code": code, "message": message, "context": context}}),
        ExitCode::from(exit),
    )
}

fn command_name(cmd: &Cmd) -> &'static str {
    match cmd {
        Cmd::Grading { .. } => "grading",
        Cmd::EchIndex(_) => "ech-index",
        Cmd::J0(_) => "j0",
        Cmd::GradingMatch { .. } => "grading-match",
        Cmd::Fredholm { .. } => "fredholm",
        Cmd::RigidDegree { .. } => "rigid-degree",
        Cmd::IndexSuite { .. } => "index-suite",
        Cmd::Shape(s) => match s {
            ShapeCmd::Region { .. } => "shape region",
            ShapeCmd::Member { .. } => "shape member",
            ShapeCmd::Includes { .. } => "shape includes",
            ShapeCmd::Capacity { .. } => "shape capacity",
            ShapeCmd::ReduceBasis { .. } => "shape reduce-basis",
            ShapeCmd::Obstruct { .. } => "shape obstruct",
            ShapeCmd::Plot { .. } => "shape plot",
        },
        Cmd::Buildings(BuildingsCmd::Enumerate { .. }) => "buildings enumerate",
        Cmd::Buildings(BuildingsCmd::Scan { .. }) => "buildings scan",
        Cmd::Linf(LinfCmd::Pairing { .. }) => "linf pairing",
        Cmd::Linf(LinfCmd::Phi2 { .. }) => "linf phi2",
        Cmd::Sweep { .. } => "sweep",
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let name = command_name(&cli.cmd);
    let result = ParseOptions::from_env()
        .map_err(Failure::from)
        .and_then(|opts| run(&cli.cmd, &Ctx { opts }));
    let (v, code) = match result {
        Ok(r) => r,
        Err(f) => error_value(&f, name),
    };
    let text = match v {
        Value::String(text) => text,
        other => format!("{other}\n"),
    };
    let _ = std::io::stdout().write_all(text.as_bytes());
    code
}
