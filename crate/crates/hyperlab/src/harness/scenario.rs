//! Scenario files: a TOML document declaring named models and a sequence of
//! experiments over them. Same scenario + seed gives bit-identical output.

use super::report::{Report, ReportRow};
use crate::boundary::{fixed_points, limit_set_sample, BoundaryPoint, EvalParams};
use crate::busemann::{cocycle, CocycleConvention};
use crate::error::{Error, Result};
use crate::filling::{
    barycenter_descent, coset_relation_defect, embedding_check, gromov_comparison,
    line_extension_witnesses, MetricInstance,
};
use crate::gromov::delta_estimate;
use crate::matrix::{ExtReal, Mat2};
use crate::rigidsets::{build_e_phi, choose_theta, sparsity_check, BuildConfig};
use crate::spaces::{ActionModel, Point, DEFAULT_VERTEX_BUDGET};
use crate::spectrum::{
    mls_compare, mls_table, translation_length, translation_length_auto, LengthMethod,
};
use crate::word::Word;
use serde::Deserialize;
use std::collections::BTreeMap;
use std::path::Path;

#[derive(Debug, Clone, Deserialize)]
pub struct Scenario {
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub output_dir: Option<String>,
    pub models: BTreeMap<String, ModelDecl>,
    #[serde(default)]
    pub experiments: Vec<Experiment>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct Tolerances {
    /// Extra slack added to every bound check.
    #[serde(default)]
    pub delta_margin: f64,
    #[serde(default = "default_tol")]
    pub tol: f64,
}

fn default_tol() -> f64 {
    1e-9
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { delta_margin: 0.0, tol: default_tol() }
    }
}

#[derive(Debug, Clone, Deserialize)]
pub struct ModelDecl {
    pub kind: String,
    #[serde(default)]
    pub rank: Option<usize>,
    #[serde(default)]
    pub generators: Option<toml::Value>,
    #[serde(default)]
    pub radius: Option<u32>,
    #[serde(default)]
    pub delta: Option<f64>,
    #[serde(default)]
    pub base: Option<toml::Value>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct Experiment {
    pub name: String,
    pub op: String,
    #[serde(default)]
    pub model: Option<String>,
    #[serde(default)]
    pub model_b: Option<String>,
    #[serde(flatten)]
    pub args: toml::Table,
}

impl Scenario {
    pub fn from_toml(text: &str) -> Result<Self> {
        let sc: Scenario =
            toml::from_str(text).map_err(|e| Error::Config(format!("scenario parse: {e}")))?;
        Ok(sc)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Scenario::from_toml(&std::fs::read_to_string(path)?)
    }

    /// The tree oracle suite shipped with the crate.
    pub fn bundled_tree_exactness() -> Self {
        Scenario::from_toml(include_str!("../../scenarios/tree-exactness.toml"))
            .expect("bundled scenario is well-formed")
    }
}

fn build_model(name: &str, decl: &ModelDecl) -> Result<ActionModel> {
    let model = match decl.kind.as_str() {
        "free-tree" => {
            let rank = decl.rank.ok_or_else(|| Error::Config("free-tree needs rank".into()))?;
            ActionModel::free_tree(name, rank)
        }
        "word-metric" => {
            let rank = decl.rank.ok_or_else(|| Error::Config("word-metric needs rank".into()))?;
            let gens = string_list(decl.generators.as_ref(), "word-metric generators")?
                .iter()
                .map(|s| Word::parse(s, rank))
                .collect::<Result<Vec<_>>>()?;
            let radius = decl.radius.unwrap_or(6);
            ActionModel::word_metric_ball(name, rank, gens, radius, DEFAULT_VERTEX_BUDGET)?
        }
        "plane" => {
            let rows = matrix_list(decl.generators.as_ref())?;
            let delta = decl.delta.unwrap_or(0.75);
            ActionModel::upper_half_plane(name, rows, delta)
        }
        other => return Err(Error::Config(format!("unknown model kind `{other}`"))),
    };
    let model = match (&decl.base, &model.kind) {
        (None, _) => model,
        (Some(toml::Value::String(w)), _) => {
            let rank = decl.rank.unwrap_or(2);
            let word = Word::parse(w, rank)?;
            let base = if decl.kind == "word-metric" {
                Point::Ball(word)
            } else {
                Point::Tree(word)
            };
            model.with_base(base)
        }
        (Some(toml::Value::Array(xs)), _) if xs.len() == 2 => {
            let re = as_f64(&xs[0])?;
            let im = as_f64(&xs[1])?;
            model.with_base(Point::Plane(num_complex::Complex64::new(re, im)))
        }
        _ => return Err(Error::Config("base must be a word or [re, im]".into())),
    };
    Ok(model)
}

fn string_list(v: Option<&toml::Value>, what: &str) -> Result<Vec<String>> {
    match v {
        Some(toml::Value::Array(xs)) => xs
            .iter()
            .map(|x| match x {
                toml::Value::String(s) => Ok(s.clone()),
                _ => Err(Error::Config(format!("{what} must be strings"))),
            })
            .collect(),
        _ => Err(Error::Config(format!("{what} missing"))),
    }
}

fn as_f64(v: &toml::Value) -> Result<f64> {
    match v {
        toml::Value::Float(f) => Ok(*f),
        toml::Value::Integer(i) => Ok(*i as f64),
        _ => Err(Error::Config("expected a number".into())),
    }
}

fn matrix_list(v: Option<&toml::Value>) -> Result<Vec<Mat2>> {
    let toml::Value::Array(xs) = v.ok_or_else(|| Error::Config("plane needs generators".into()))?
    else {
        return Err(Error::Config("plane generators must be an array".into()));
    };
    xs.iter()
        .map(|row| {
            let toml::Value::Array(es) = row else {
                return Err(Error::Config("matrix rows must be [a, b, c, d]".into()));
            };
            if es.len() != 4 {
                return Err(Error::Config("matrix rows must have 4 entries".into()));
            }
            Mat2::new(as_f64(&es[0])?, as_f64(&es[1])?, as_f64(&es[2])?, as_f64(&es[3])?)
        })
        .collect()
}

struct Ctx<'a> {
    models: &'a BTreeMap<String, ActionModel>,
    tol: Tolerances,
    seed: u64,
}

impl<'a> Ctx<'a> {
    fn model(&self, exp: &Experiment) -> Result<&'a ActionModel> {
        let name = exp
            .model
            .as_deref()
            .ok_or_else(|| Error::Config(format!("experiment `{}` needs a model", exp.name)))?;
        self.models
            .get(name)
            .ok_or_else(|| Error::Config(format!("unknown model `{name}`")))
    }

    fn model_b(&self, exp: &Experiment) -> Result<&'a ActionModel> {
        let name = exp
            .model_b
            .as_deref()
            .ok_or_else(|| Error::Config(format!("experiment `{}` needs model_b", exp.name)))?;
        self.models
            .get(name)
            .ok_or_else(|| Error::Config(format!("unknown model `{name}`")))
    }
}

fn arg_str<'a>(exp: &'a Experiment, key: &str) -> Result<&'a str> {
    match exp.args.get(key) {
        Some(toml::Value::String(s)) => Ok(s),
        Some(_) => Err(Error::Config(format!("`{key}` must be a string"))),
        None => Err(Error::Config(format!("experiment `{}` needs `{key}`", exp.name))),
    }
}

fn arg_f64(exp: &Experiment, key: &str, default: f64) -> Result<f64> {
    match exp.args.get(key) {
        Some(v) => as_f64(v),
        None => Ok(default),
    }
}

fn arg_u64(exp: &Experiment, key: &str, default: u64) -> Result<u64> {
    match exp.args.get(key) {
        Some(toml::Value::Integer(i)) if *i >= 0 => Ok(*i as u64),
        Some(_) => Err(Error::Config(format!("`{key}` must be a nonnegative integer"))),
        None => Ok(default),
    }
}

fn opt_f64(exp: &Experiment, key: &str) -> Result<Option<f64>> {
    exp.args.get(key).map(as_f64).transpose()
}

/// "prefix;period" or "word" -> periodic ray; "plus:w" / "minus:w" -> fixed
/// point; "ray:t" / "ray:inf" -> explicit plane direction.
pub fn parse_ray(model: &ActionModel, spec: &str) -> Result<BoundaryPoint> {
    if let Some(w) = spec.strip_prefix("plus:") {
        let g = model.parse_element(w)?;
        return Ok(fixed_points(model, &g)?.0);
    }
    if let Some(w) = spec.strip_prefix("minus:") {
        let g = model.parse_element(w)?;
        return Ok(fixed_points(model, &g)?.1);
    }
    if let Some(t) = spec.strip_prefix("ray:") {
        let xi = if t == "inf" {
            ExtReal::Infinity
        } else {
            ExtReal::Finite(t.parse().map_err(|_| Error::Config(format!("bad ray `{t}`")))?)
        };
        return Ok(BoundaryPoint::explicit(xi));
    }
    let rank = model.rank().max(2);
    match spec.split_once(';') {
        Some((p, c)) => BoundaryPoint::stream(&Word::parse(p, rank)?, &Word::parse(c, rank)?),
        None => BoundaryPoint::stream(&Word::identity(), &Word::parse(spec, rank)?),
    }
}

fn parse_point(model: &ActionModel, spec: &str) -> Result<Point> {
    if model.is_tree_like() {
        let w = Word::parse(spec, model.rank())?;
        Ok(match &model.base {
            Point::Ball(_) => Point::Ball(w),
            _ => Point::Tree(w),
        })
    } else {
        let (re, im) = spec
            .split_once(',')
            .ok_or_else(|| Error::Config("plane point must be `re,im`".into()))?;
        let re: f64 = re.trim().parse().map_err(|_| Error::Config("bad point".into()))?;
        let im: f64 = im.trim().parse().map_err(|_| Error::Config("bad point".into()))?;
        Ok(Point::Plane(num_complex::Complex64::new(re, im)))
    }
}

fn parse_convention(exp: &Experiment) -> Result<CocycleConvention> {
    match exp.args.get("convention") {
        None => Ok(CocycleConvention::default()),
        Some(toml::Value::String(s)) => s.parse(),
        Some(_) => Err(Error::Config("convention must be a string".into())),
    }
}

/// Pass check against an optional `expect` value at tolerance `tol`, or an
/// optional `expect_max` ceiling; informational row otherwise.
fn expectation(row: ReportRow, exp: &Experiment, mid: f64, tol: f64) -> Result<ReportRow> {
    if let Some(e) = opt_f64(exp, "expect")? {
        let row = ReportRow { bound: Some(tol), margin: Some(tol - (mid - e).abs()), ..row };
        return Ok(row.verdict((mid - e).abs() <= tol));
    }
    if let Some(m) = opt_f64(exp, "expect_max")? {
        let row = ReportRow { bound: Some(m), margin: Some(m - mid), ..row };
        return Ok(row.verdict(mid <= m + tol));
    }
    Ok(row)
}

fn run_experiment(ctx: &Ctx, exp: &Experiment, out: &mut Report) -> Result<()> {
    let params = EvalParams::default();
    let tol = ctx.tol.tol;
    match exp.op.as_str() {
        "delta-estimate" => {
            let m = ctx.model(exp)?;
            let radius = arg_f64(exp, "radius", 4.0)?;
            let count = arg_u64(exp, "count", 2000)? as usize;
            let est = delta_estimate(m, radius, count, ctx.seed)?;
            let row = ReportRow::new(&exp.name, &m.id, format!("pinned four-point, {count} samples"))
                .scalar(est.value);
            out.push(expectation(row, exp, est.value, tol)?);
        }
        "gromov" => {
            let m = ctx.model(exp)?;
            let x = parse_ray(m, arg_str(exp, "x")?)?;
            let y = parse_ray(m, arg_str(exp, "y")?)?;
            let v = crate::boundary::extended_gromov(m, &x, &y, &m.base, &params)?;
            let row = ReportRow::new(&exp.name, &m.id, format!("<{x}, {y}>")).value(&v);
            out.push(expectation(row, exp, v.midpoint(), tol)?);
        }
        "busemann" => {
            let m = ctx.model(exp)?;
            let g = m.parse_element(arg_str(exp, "gamma")?)?;
            let x = parse_ray(m, arg_str(exp, "x")?)?;
            let conv = parse_convention(exp)?;
            let v = cocycle(m, &g, &x, conv, &params)?;
            let row = ReportRow::new(&exp.name, &m.id, format!("c({g}, {x}) [{conv:?}]")).value(&v);
            out.push(expectation(row, exp, v.midpoint(), tol)?);
        }
        "length" => {
            let m = ctx.model(exp)?;
            let g = m.parse_element(arg_str(exp, "gamma")?)?;
            let est = match exp.args.get("method") {
                Some(toml::Value::String(s)) if s == "power-difference" => {
                    translation_length(m, &g, LengthMethod::PowerDifference(1 << 10))?
                }
                Some(toml::Value::String(s)) if s == "trace" => {
                    translation_length(m, &g, LengthMethod::Trace)?
                }
                _ => translation_length_auto(m, &g)?,
            };
            let row = ReportRow::new(&exp.name, &m.id, format!("l({g}) via {}", est.method))
                .value(&est.value);
            out.push(expectation(row, exp, est.value.midpoint(), tol)?);
        }
        "spectrum" => {
            let m = ctx.model(exp)?;
            let radius = arg_u64(exp, "radius", 2)? as u32;
            let table = mls_table(m, &m.ball_enumerate(radius)?)?;
            for r in &table.rows {
                out.push(
                    ReportRow::new(&exp.name, &m.id, format!("l[{}] = {}", r.element, r.key))
                        .value(&r.value),
                );
            }
        }
        "compare" => {
            let m = ctx.model(exp)?;
            let b = ctx.model_b(exp)?;
            let radius = arg_u64(exp, "radius", 2)? as u32;
            let cmp = mls_compare(m, b, &m.ball_enumerate(radius)?)?;
            let detail = format!(
                "max spectrum diff at {}",
                cmp.diff_witness.as_deref().unwrap_or("-")
            );
            let row = ReportRow::new(&exp.name, &m.id, detail).scalar(cmp.max_diff);
            out.push(expectation(row, exp, cmp.max_diff, tol)?);
        }
        "rigid-set" => {
            let m = ctx.model(exp)?;
            let g = m.parse_element(arg_str(exp, "gamma")?)?;
            let cfg = BuildConfig {
                radius: arg_u64(exp, "radius", 1)? as u32,
                per_eta: arg_u64(exp, "per_eta", 2)? as usize,
                severity: arg_f64(exp, "severity", 1.0)?,
                ..BuildConfig::default()
            };
            let theta = choose_theta(m, &g)?;
            let set = build_e_phi(m, &g, &theta, &cfg)?;
            for (g, prov) in &set.members {
                out.push(
                    ReportRow::new(&exp.name, &m.id, format!("member {g} [{prov:?}]"))
                        .scalar(prov.length),
                );
            }
            let sp = sparsity_check(&set, m, &cfg.budget)?;
            out.push(
                ReportRow::new(&exp.name, &m.id, format!("sparsity, {} members", set.members.len()))
                    .scalar(set.members.len() as f64)
                    .verdict(sp.pass),
            );
        }
        "filling-distance" => {
            let m = ctx.model(exp)?;
            let p = parse_point(m, arg_str(exp, "p")?)?;
            let q = parse_point(m, arg_str(exp, "q")?)?;
            let k = arg_f64(exp, "k", 101.0)?;
            let rep = embedding_check(m, &p, &q, k, &params)?;
            out.push(
                ReportRow::new(&exp.name, &m.id, format!("rho vs d = {}", rep.distance))
                    .value(&rep.rho)
                    .verdict(rep.pass),
            );
        }
        "descent" => {
            let m = ctx.model(exp)?;
            let r = parse_point(m, arg_str(exp, "target")?)?;
            let start = parse_point(m, arg_str(exp, "start")?)?;
            let k = arg_f64(exp, "k", 101.0)?;
            let stop = opt_f64(exp, "stop_radius")?;
            let max_steps = arg_u64(exp, "max_steps", 100)? as usize;
            let (w1, w2) = line_extension_witnesses(m, &start, &r)?;
            let target = MetricInstance::new(m, r, vec![w1, w2], k)?;
            let p = EvalParams::default().with_ceiling(1e12).with_depth(64, 1 << 22);
            let trace = barycenter_descent(&target, start, k, max_steps, &p, stop)?;
            for (i, s) in trace.steps.iter().enumerate() {
                out.push(
                    ReportRow::new(&exp.name, &m.id, format!("step {i} at {} -> {}", s.point, s.target))
                        .value(&s.rho),
                );
            }
            out.push(
                ReportRow::new(
                    &exp.name,
                    &m.id,
                    format!("{} steps, stop radius {}", trace.steps.len(), trace.stop_radius),
                )
                .value(&trace.final_rho)
                .verdict(trace.converged && trace.non_decreasing_steps.is_empty()),
            );
        }
        "compare-boundary" => {
            let m = ctx.model(exp)?;
            let b = ctx.model_b(exp)?;
            let count = arg_u64(exp, "count", 6)? as usize;
            let radius = arg_u64(exp, "radius", 2)? as u32;
            let ws = limit_set_sample(m, count, radius, ctx.seed)?;
            let mut pairs = Vec::new();
            for i in 0..ws.len() {
                for j in 0..i {
                    pairs.push((ws[i].clone(), ws[j].clone()));
                }
            }
            let cmp = gromov_comparison(m, b, &pairs, &params)?;
            let detail = match &cmp.witness {
                Some((x, y)) => format!("max |g| at ({x}, {y})"),
                None => "no pairs".into(),
            };
            let row = ReportRow::new(&exp.name, &m.id, detail).scalar(cmp.max_l);
            out.push(expectation(row, exp, cmp.max_l, tol)?);
        }
        "coset-defect" => {
            let m = ctx.model(exp)?;
            let b = ctx.model_b(exp)?;
            let h = m.parse_element(arg_str(exp, "h")?)?;
            let g = m.parse_element(arg_str(exp, "gamma")?)?;
            let n = arg_u64(exp, "n", 6)? as u32;
            let conv = parse_convention(exp)?;
            let p = EvalParams::default().with_ceiling(1e6);
            let d = coset_relation_defect(m, b, &h, &g, n, conv, &p)?;
            out.push(
                ReportRow::new(&exp.name, &m.id, format!("coset relation, h={h}, gamma={g}, n={n}"))
                    .value(&d.main)
                    .check(d.bound + d.main.width() + ctx.tol.delta_margin),
            );
            for (k, c) in &d.schedule {
                out.push(
                    ReportRow::new(&exp.name, &m.id, format!("c(gamma^{k}, gamma-)/{k}")).value(c),
                );
            }
        }
        other => return Err(Error::Config(format!("unknown op `{other}`"))),
    }
    Ok(())
}

pub fn run_scenario(sc: &Scenario) -> Result<Report> {
    let mut models = BTreeMap::new();
    for (name, decl) in &sc.models {
        models.insert(name.clone(), build_model(name, decl)?);
    }
    for exp in &sc.experiments {
        if let Some(m) = &exp.model {
            if !models.contains_key(m) {
                return Err(Error::Config(format!(
                    "experiment `{}` references undeclared model `{m}`",
                    exp.name
                )));
            }
        }
    }
    let ctx = Ctx { models: &models, tol: sc.tolerances.clone(), seed: sc.seed };
    let mut report = Report::default();
    for exp in &sc.experiments {
        run_experiment(&ctx, exp, &mut report)?;
    }
    Ok(report)
}
