use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};

use leviflat::foliation::{
    level_set_pullback, restrict_foliation, tangent_to_leviflat, verify_first_integral, web_from_family,
};
use leviflat::hermitian::cone_certificate;
use leviflat::levicheck::{check_levi_foliation, cr_tangent, multi_leaf_detector, sample_leaves};
use leviflat::model::ModelFile;
use leviflat::segre::{degenerate_locus, parse_point, segre_variety};
use leviflat::{
    parse_poly, print_poly_auto, Budget, Error, GaussianRational, HermitianPoly, Ideal, Polynomial, TermOrder,
    VarContext,
};

mod example;
mod render;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Parser)]
#[command(name = "leviflat", version, about = "Exact computations on real-algebraic Levi-flat sets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    global: Global,
}

#[derive(Args, Clone)]
struct Global {
    /// Gröbner basis budget (reduction steps plus S-pairs).
    #[arg(long, global = true)]
    budget: Option<u64>,
    /// Term order for printed bases: grevlex, lex, block-z, block-w.
    #[arg(long, global = true, default_value = "grevlex")]
    order: String,
    /// Seed for sampling commands.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Human-readable output instead of JSON.
    #[arg(long, global = true)]
    pretty: bool,
}

#[derive(Args, Clone)]
struct ModelArg {
    /// Model file, or a built-in fixture: ex1, ex2, ex3-circle.
    #[arg(long)]
    model: String,
}

#[derive(Args, Clone)]
struct PointArg {
    /// Point of C^N, e.g. "0,1,1,0" or "(3/5, 1, 0, -i)".
    #[arg(long)]
    at: String,
}

#[derive(Args, Clone)]
struct ModelAt {
    #[command(flatten)]
    model: ModelArg,
    #[command(flatten)]
    at: PointArg,
}

#[derive(Subcommand)]
enum Command {
    /// Complexify a polynomial in z and ~z.
    Complexify {
        #[arg(long)]
        expr: String,
        /// Read variable names from this model.
        #[arg(long)]
        model: Option<String>,
    },
    /// Intrinsic complexification I(H^ι).
    Icomp(ModelArg),
    /// Segre variety at a point.
    Segre(ModelAt),
    /// Ordinary or degenerate point.
    Classify(ModelAt),
    /// Segre-degenerate locus.
    SdLocus(ModelArg),
    /// Tangency of the model's foliation to H.
    Tangent(ModelArg),
    /// Check the model's rational first integral.
    FirstIntegral(ModelArg),
    /// Containment of H in the preimage of the level curve.
    LevelSet(ModelArg),
    /// Web equation of the model's leaf family.
    Web(ModelArg),
    /// CR tangent space at a point.
    Cr(ModelAt),
    /// Check the leaf family at sampled points.
    CheckLevi {
        #[command(flatten)]
        model: ModelArg,
        #[arg(long, default_value_t = 5)]
        samples: usize,
    },
    /// Count the leaves of the family through a point.
    Multileaf(ModelAt),
    /// Restrict the model's foliation to the hyperplane expr = 0.
    Restrict {
        #[command(flatten)]
        model: ModelArg,
        #[arg(long)]
        expr: String,
    },
    /// Run a built-in example end to end.
    Example {
        /// ex1, ex2 or ex3-circle.
        name: String,
    },
}

/// What a command produced: a verdict, its result and supporting data.
pub struct Outcome {
    pub verdict: bool,
    pub result: Value,
    pub certificates: Value,
}

impl Outcome {
    fn new(verdict: bool, result: Value) -> Self {
        Outcome {
            verdict,
            result,
            certificates: json!({}),
        }
    }

    fn with(mut self, certificates: Value) -> Self {
        self.certificates = certificates;
        self
    }
}

pub fn polys(ps: &[Polynomial]) -> Value {
    Value::Array(ps.iter().map(|p| Value::String(print_poly_auto(p))).collect())
}

pub fn point(p: &[GaussianRational]) -> Value {
    Value::Array(p.iter().map(|c| Value::String(c.to_string())).collect())
}

fn basis(ideal: &Ideal, order: &TermOrder, b: &Budget) -> leviflat::Result<Value> {
    Ok(polys(&ideal.groebner_basis(order, b)?.polys()))
}

/// Smallest zw context covering the `z<k>` names in `src`.
fn infer_context(src: &str) -> Arc<VarContext> {
    let bytes = src.as_bytes();
    let mut n = 1;
    let mut i = 0;
    while i < bytes.len() {
        let starts = bytes[i] == b'z' && (i == 0 || !(bytes[i - 1].is_ascii_alphanumeric() || bytes[i - 1] == b'_'));
        if starts {
            let j = bytes[i + 1..].iter().take_while(|c| c.is_ascii_digit()).count();
            if j > 0 {
                if let Ok(k) = src[i + 1..i + 1 + j].parse::<usize>() {
                    n = n.max(k);
                }
            }
            i += 1 + j;
        } else {
            i += 1;
        }
    }
    VarContext::zw(n)
}

struct Runner {
    global: Global,
    order: TermOrder,
    inputs: Map<String, Value>,
}

impl Runner {
    fn budget(&self) -> Budget {
        self.global.budget.map(Budget::new).unwrap_or_default()
    }

    fn load(&mut self, m: &ModelArg) -> leviflat::Result<ModelFile> {
        self.inputs.insert("model".into(), json!(m.model));
        let mut mf = ModelFile::load(&m.model)?;
        mf.model = mf.model.with_budget(self.budget());
        Ok(mf)
    }

    fn point(&mut self, p: &PointArg, n: usize) -> leviflat::Result<Vec<GaussianRational>> {
        self.inputs.insert("at".into(), json!(p.at));
        parse_point(&p.at, n)
    }

    fn run(&mut self, cmd: &Command) -> leviflat::Result<Outcome> {
        let order = self.order.clone();
        match cmd {
            Command::Complexify { expr, model } => {
                self.inputs.insert("expr".into(), json!(expr));
                let ctx = match model {
                    Some(m) => self.load(&ModelArg { model: m.clone() })?.model.context().clone(),
                    None => infer_context(expr),
                };
                let h = HermitianPoly::parse(expr, &ctx)?;
                let c = h.complexify();
                Ok(Outcome::new(
                    true,
                    json!({
                        "complexified": print_poly_auto(&c),
                        "real": h.is_real(),
                        "imaginary": h.is_imaginary(),
                    }),
                ))
            }
            Command::Icomp(m) => {
                let mf = self.load(m)?;
                let model = &mf.model;
                let b = model.budget();
                let icomp = model.intrinsic_complexification()?;
                let dim = model.icomp_dimension()?;
                let expected = model.levi_dim() as i64 + 1;
                let (incl, strict) = model.mirror_sum_inclusion()?;
                Ok(Outcome::new(
                    dim.as_i64() == expected,
                    json!({
                        "ideal": basis(icomp, &order, b)?,
                        "dimension": dim.as_i64(),
                        "expected_dimension": expected,
                    }),
                )
                .with(json!({
                    "complexified_basis": basis(model.complexified(), &order, b)?,
                    "mirror_sum_included": incl,
                    "mirror_sum_strict": strict,
                    "cone": cone_certificate(model.generators()).ok().map(|c| format!("{:?}", c.degrees)),
                })))
            }
            Command::Segre(ModelAt { model: m, at: p }) => {
                let mf = self.load(m)?;
                let pt = self.point(p, mf.model.ambient_dim())?;
                let s = segre_variety(&mf.model, &pt)?;
                Ok(Outcome::new(
                    true,
                    json!({
                        "ideal": basis(&s.ideal, &order, mf.model.budget())?,
                        "dimension": s.dimension.as_i64(),
                        "codim": s.codim_in_icomp,
                        "classification": s.classification.to_string(),
                        "contains_point": s.contains_point,
                    }),
                ))
            }
            Command::Classify(ModelAt { model: m, at: p }) => {
                let mf = self.load(m)?;
                let pt = self.point(p, mf.model.ambient_dim())?;
                let s = segre_variety(&mf.model, &pt)?;
                Ok(Outcome::new(
                    true,
                    json!({"classification": s.classification.to_string(), "codim": s.codim_in_icomp}),
                )
                .with(json!({"segre_ideal": basis(&s.ideal, &order, mf.model.budget())?})))
            }
            Command::SdLocus(m) => {
                let mf = self.load(m)?;
                let sd = degenerate_locus(&mf.model)?;
                Ok(Outcome::new(
                    sd.codim_ok,
                    json!({
                        "ideal": basis(&sd.ideal, &order, mf.model.budget())?,
                        "dimension": sd.dimension.as_i64(),
                        "codim": sd.codim_in_icomp,
                        "codim_ok": sd.codim_ok,
                    }),
                ))
            }
            Command::Tangent(m) => {
                let mf = self.load(m)?;
                let f = mf.foliation.as_ref().ok_or_else(|| missing("foliation"))?;
                let t = tangent_to_leviflat(f, &mf.model)?;
                let witness = t.witness.as_ref().map(|(i, j, nf)| {
                    json!({"field": i, "generator": j, "normal_form": print_poly_auto(nf)})
                });
                Ok(Outcome::new(t.tangent, json!({"tangent": t.tangent, "rank": f.rank()}))
                    .with(json!({"witness": witness})))
            }
            Command::FirstIntegral(m) => {
                let mf = self.load(m)?;
                let f = mf.foliation.as_ref().ok_or_else(|| missing("foliation"))?;
                let (num, den) = mf.first_integral.as_ref().ok_or_else(|| missing("first-integral"))?;
                let ambient = mf.model.intrinsic_complexification()?;
                let r = verify_first_integral(num, den, f, ambient, mf.model.budget())?;
                let failures: Vec<Value> = r
                    .failures
                    .iter()
                    .map(|(k, nf)| json!({"field": k, "residue": print_poly_auto(nf)}))
                    .collect();
                Ok(Outcome::new(
                    r.is_first_integral && !r.constant,
                    json!({
                        "num": print_poly_auto(num),
                        "den": print_poly_auto(den),
                        "is_first_integral": r.is_first_integral,
                        "constant": r.constant,
                    }),
                )
                .with(json!({"failures": failures})))
            }
            Command::LevelSet(m) => {
                let mf = self.load(m)?;
                let (num, den) = mf.first_integral.as_ref().ok_or_else(|| missing("first-integral"))?;
                let s = mf.level_curve.as_ref().ok_or_else(|| missing("level-curve"))?;
                let (pullback, inside) = level_set_pullback(&mf.model, num, den, s)?;
                Ok(Outcome::new(
                    inside,
                    json!({"contained": inside, "curve": print_poly_auto(s.body())}),
                )
                .with(json!({"pullback": print_poly_auto(&pullback)})))
            }
            Command::Web(m) => {
                let mf = self.load(m)?;
                let fam = mf.family.as_ref().ok_or_else(|| missing("family"))?;
                if fam.params().len() != 1 {
                    return Err(Error::InvalidInput("the web needs a one-parameter family".into()));
                }
                let w = web_from_family(&fam.leaf_equations()[0], &fam.params()[0])?;
                Ok(Outcome::new(
                    true,
                    json!({"order": w.order, "equation": print_poly_auto(&w.equation)}),
                ))
            }
            Command::Cr(ModelAt { model: m, at: p }) => {
                let mf = self.load(m)?;
                let pt = self.point(p, mf.model.ambient_dim())?;
                let r = cr_tangent(&mf.model, &pt)?;
                Ok(Outcome::new(
                    r.regular,
                    json!({
                        "cr_dimension": r.cr_dimension,
                        "jacobian_rank": r.jacobian_rank,
                        "real_rank": r.real_rank,
                        "regular": r.regular,
                    }),
                )
                .with(json!({"kernel": r.kernel.iter().map(|v| point(v)).collect::<Vec<_>>()})))
            }
            Command::CheckLevi { model, samples } => {
                let mf = self.load(model)?;
                self.inputs.insert("samples".into(), json!(samples));
                self.inputs.insert("seed".into(), json!(self.global.seed));
                let fam = mf.family.as_ref().ok_or_else(|| missing("family"))?;
                let s = sample_leaves(&mf.model, fam, *samples, self.global.seed)?;
                let r = check_levi_foliation(&mf.model, fam, &s)?;
                let rows: Vec<Value> = r
                    .samples
                    .iter()
                    .map(|s| {
                        json!({
                            "params": point(&s.params),
                            "point": point(&s.point),
                            "leaf_dimension": s.leaf_dimension.map(|d| d.as_i64()),
                            "cr_dimension": s.cr_dimension,
                            "passed": s.passed(),
                            "failures": s.failures,
                        })
                    })
                    .collect();
                Ok(Outcome::new(r.passed(), json!({"passed": r.passed(), "samples": rows})))
            }
            Command::Multileaf(ModelAt { model: m, at: p }) => {
                let mf = self.load(m)?;
                let pt = self.point(p, mf.model.ambient_dim())?;
                let fam = mf.family.as_ref().ok_or_else(|| missing("family"))?;
                let r = multi_leaf_detector(&mf.model, fam, &pt)?;
                let leaves: Vec<Value> = r
                    .rational
                    .iter()
                    .map(|w| {
                        json!({
                            "params": point(&w.params),
                            "leaf": polys(w.leaf.generators()),
                            "verified": w.verified,
                        })
                    })
                    .collect();
                let intervals: Vec<Value> = r
                    .irrational
                    .iter()
                    .map(|(a, b)| json!([a.to_string(), b.to_string()]))
                    .collect();
                Ok(Outcome::new(
                    r.count >= 2,
                    json!({"count": r.count, "multiple": r.count >= 2}),
                )
                .with(json!({"rational_leaves": leaves, "irrational_intervals": intervals})))
            }
            Command::Restrict { model, expr } => {
                let mf = self.load(model)?;
                self.inputs.insert("expr".into(), json!(expr));
                let f = mf.foliation.as_ref().ok_or_else(|| missing("foliation"))?;
                let h = parse_poly(expr, &mf.model.z_context())?;
                let r = restrict_foliation(f, &h, mf.model.budget())?;
                Ok(Outcome::new(
                    r.generic,
                    json!({
                        "generic": r.generic,
                        "rank": r.foliation.rank(),
                        "singular_locus": basis(&r.singular.ideal, &order, mf.model.budget())?,
                        "singular_codim": r.singular.codim,
                    }),
                ))
            }
            Command::Example { name } => {
                self.inputs.insert("name".into(), json!(name));
                let mut mf = ModelFile::load(name)?;
                if leviflat::model::fixture(name).is_none() {
                    return Err(Error::InvalidInput(format!("unknown example `{name}`")));
                }
                mf.model = mf.model.with_budget(self.budget());
                let checks = example::run(name, &mf)?;
                let ok = checks.iter().all(|(_, v)| *v);
                let rows: Map<String, Value> = checks.into_iter().map(|(k, v)| (k, json!(v))).collect();
                Ok(Outcome::new(ok, json!({"all_green": ok, "checks": rows})))
            }
        }
    }
}

fn missing(section: &str) -> Error {
    Error::InvalidInput(format!("the model has no [{section}] section"))
}

fn command_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Complexify { .. } => "complexify",
        Command::Icomp(_) => "icomp",
        Command::Segre(_) => "segre",
        Command::Classify(_) => "classify",
        Command::SdLocus(_) => "sd-locus",
        Command::Tangent(_) => "tangent",
        Command::FirstIntegral(_) => "first-integral",
        Command::LevelSet(_) => "level-set",
        Command::Web(_) => "web",
        Command::Cr(_) => "cr",
        Command::CheckLevi { .. } => "check-levi",
        Command::Multileaf(_) => "multileaf",
        Command::Restrict { .. } => "restrict",
        Command::Example { .. } => "example",
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let name = command_name(&cli.command);
    let Some(order) = TermOrder::parse(&cli.global.order) else {
        eprintln!("error: unknown term order `{}`", cli.global.order);
        return ExitCode::from(2);
    };
    let mut inputs = Map::new();
    if let Some(b) = cli.global.budget {
        inputs.insert("budget".into(), json!(b));
    }
    if cli.global.order != "grevlex" {
        inputs.insert("order".into(), json!(cli.global.order));
    }
    let mut runner = Runner {
        global: cli.global.clone(),
        order,
        inputs,
    };
    let outcome = runner.run(&cli.command);
    let timings = json!({"total_ms": start.elapsed().as_secs_f64() * 1e3});
    let mut report = Map::new();
    report.insert("schema_version".into(), json!(SCHEMA_VERSION));
    report.insert("command".into(), json!(name));
    report.insert("inputs".into(), Value::Object(runner.inputs));
    let code = match outcome {
        Ok(o) => {
            report.insert("result".into(), o.result);
            report.insert("certificates".into(), o.certificates);
            if o.verdict {
                0
            } else {
                1
            }
        }
        Err(e) => {
            let (code, kind) = match e {
                Error::BudgetExceeded { .. } => (3, "budget_exceeded"),
                _ => (2, "input_error"),
            };
            eprintln!("error: {e}");
            report.insert("result".into(), Value::Null);
            report.insert("certificates".into(), json!({}));
            report.insert("error".into(), json!({"kind": kind, "message": e.to_string()}));
            code
        }
    };
    report.insert("timings".into(), timings);
    let report = Value::Object(report);
    if cli.global.pretty {
        print!("{}", render::pretty(&report));
    } else {
        println!("{}", serde_json::to_string(&report).expect("serializable"));
    }
    ExitCode::from(code)
}
