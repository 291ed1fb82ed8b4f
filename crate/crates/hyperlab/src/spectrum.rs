//! Translation lengths by three methods with exact oracles where the model
//! allows, stable-length and main-relation defect meters, and marked length
//! spectrum tables and comparisons.

use crate::boundary::{extended_gromov, fixed_points, EvalParams};
use crate::busemann::{cocycle, CocycleConvention};
use crate::error::{Error, Result};
use crate::interval::IntervalValue;
use crate::spaces::{ActionModel, Classification, GroupElement, ModelKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LengthMethod {
    CyclicReduction,
    Trace,
    /// Difference quotient (d(g^2N o, o) - d(g^N o, o)) / N.
    PowerDifference(u32),
}

impl std::fmt::Display for LengthMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LengthMethod::CyclicReduction => write!(f, "cyclic-reduction"),
            LengthMethod::Trace => write!(f, "trace"),
            LengthMethod::PowerDifference(n) => write!(f, "power-difference({n})"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct LengthEstimate {
    pub value: IntervalValue,
    pub method: LengthMethod,
    pub element: GroupElement,
    pub classification: Classification,
}

pub fn translation_length(
    model: &ActionModel,
    gamma: &GroupElement,
    method: LengthMethod,
) -> Result<LengthEstimate> {
    let classification = model.classify(gamma)?;
    let value = match method {
        LengthMethod::CyclicReduction => match &model.kind {
            ModelKind::FreeTree { .. } => {
                IntervalValue::exact(gamma.word()?.cyclic_len() as f64, 0)
            }
            ModelKind::WordMetricBall { .. } => ball_length(model, gamma)?,
            ModelKind::UpperHalfPlane { .. } => {
                return Err(Error::ModelMismatch(
                    "cyclic reduction needs a word-metric model".into(),
                ))
            }
        },
        LengthMethod::Trace => {
            let tr = gamma.matrix()?.trace().abs();
            let v = if tr >= 2.0 { 2.0 * (tr / 2.0).acosh() } else { 0.0 };
            IntervalValue::exact(v, 0)
        }
        LengthMethod::PowerDifference(n) => {
            return power_difference(model, gamma, n, classification);
        }
    };
    Ok(LengthEstimate { value, method, element: gamma.clone(), classification })
}

/// Best available method for the model: exact oracles on word metrics and
/// traces on the plane.
pub fn translation_length_auto(model: &ActionModel, gamma: &GroupElement) -> Result<LengthEstimate> {
    let method = match &model.kind {
        ModelKind::FreeTree { .. } | ModelKind::WordMetricBall { .. } => {
            LengthMethod::CyclicReduction
        }
        ModelKind::UpperHalfPlane { .. } => {
            if gamma.matrix.is_some() {
                LengthMethod::Trace
            } else {
                LengthMethod::PowerDifference(1 << 10)
            }
        }
    };
    translation_length(model, gamma, method)
}

/// Minimum of d(v, gamma v) over vertex balls of growing radius. In a tree
/// d(v, gamma v) = l(gamma) + 2 d(v, axis), so a plateau between radii
/// certifies exactness.
fn ball_length(model: &ActionModel, gamma: &GroupElement) -> Result<IntervalValue> {
    let ModelKind::WordMetricBall { radius, table, .. } = &model.kind else {
        unreachable!()
    };
    let g = gamma.word()?;
    let mut layers: Vec<Vec<&crate::word::Word>> = vec![Vec::new(); *radius as usize + 1];
    for (w, &d) in table {
        layers[d as usize].push(w);
    }
    let mut best = u32::MAX;
    let mut prev_best = u32::MAX;
    for (r, layer) in layers.iter().enumerate() {
        for v in layer {
            let moved = v.inverse().concat(g).concat(v);
            let d = *table.get(&moved).ok_or(Error::BallExceeded {
                word: moved.to_string(),
                radius: *radius,
            })?;
            best = best.min(d);
        }
        if r > 0 && best == prev_best {
            return Ok(IntervalValue::exact(best as f64, r as u32));
        }
        prev_best = best;
    }
    Err(Error::BallExceeded { word: g.to_string(), radius: *radius })
}

fn power_difference(
    model: &ActionModel,
    gamma: &GroupElement,
    n0: u32,
    classification: Classification,
) -> Result<LengthEstimate> {
    let o = &model.base;
    let dist_at = |k: u32| -> Result<f64> {
        match &model.kind {
            ModelKind::UpperHalfPlane { .. } => Ok(crate::matrix::power_orbit_distance(
                &gamma.matrix()?,
                o.plane()?,
                k as u64,
            )),
            _ => model.distance(o, &model.orbit(&gamma.pow(k as i64))?),
        }
    };
    let mut n = n0.max(1);
    loop {
        let d2 = dist_at(2 * n)?;
        let d1 = dist_at(n)?;
        let v = (d2 - d1) / n as f64;
        let slack = 4.0 * model.delta() / n as f64 + model.tol;
        let value = IntervalValue::new((v - slack).max(0.0), v + slack, n);
        if value.width() < 1e-2 {
            if classification == Classification::Hyperbolic && value.upper <= slack {
                return Err(Error::IncreaseN(n));
            }
            return Ok(LengthEstimate {
                value,
                method: LengthMethod::PowerDifference(n),
                element: gamma.clone(),
                classification,
            });
        }
        if n >= 1 << 22 {
            return Err(Error::IncreaseN(n));
        }
        n *= 2;
    }
}

#[derive(Debug, Clone, Copy)]
pub struct StableLengthDefect {
    pub plus: IntervalValue,
    pub minus: IntervalValue,
}

/// Defects of c(g, g+-) = +-l(g) (direct) or its sign-flipped inverse form.
pub fn stable_length_defect(
    model: &ActionModel,
    gamma: &GroupElement,
    convention: CocycleConvention,
    params: &EvalParams,
) -> Result<StableLengthDefect> {
    if model.classify(gamma)? != Classification::Hyperbolic {
        return Err(Error::NoAxis);
    }
    let (plus_pt, minus_pt) = fixed_points(model, gamma)?;
    let l = translation_length_auto(model, gamma)?.value;
    let cp = cocycle(model, gamma, &plus_pt, convention, params)?;
    let cm = cocycle(model, gamma, &minus_pt, convention, params)?;
    Ok(match convention {
        CocycleConvention::Direct => {
            StableLengthDefect { plus: cp.sub(&l), minus: cm.add(&l) }
        }
        CocycleConvention::Inverse => {
            StableLengthDefect { plus: cp.add(&l), minus: cm.sub(&l) }
        }
    })
}

#[derive(Debug, Clone)]
pub struct MainRelationDefect {
    /// c(eta, gamma+) + n l(gamma) - l(eta gamma^n), chosen convention.
    pub literal: IntervalValue,
    /// |<gamma+,gamma-> - <eta gamma+,gamma->| + 12 delta.
    pub literal_bound: f64,
    /// l(eta gamma^n) - [n l(gamma) - c~(eta, gamma+)
    ///   + 2(<gamma+,gamma-> - <eta gamma+,gamma->)], inverse convention.
    pub corrected: IntervalValue,
    pub length_whole: LengthEstimate,
    pub length_gamma: LengthEstimate,
}

pub fn main_relation_defect(
    model: &ActionModel,
    eta: &GroupElement,
    gamma: &GroupElement,
    n: u32,
    convention: CocycleConvention,
    params: &EvalParams,
) -> Result<MainRelationDefect> {
    if model.classify(gamma)? != Classification::Hyperbolic {
        return Err(Error::NoAxis);
    }
    let whole = eta.mul(&gamma.pow(n as i64));
    if model.classify(&whole)? != Classification::Hyperbolic {
        return Err(Error::Precondition(format!(
            "eta gamma^{n} is not hyperbolic (the excluded exponent)"
        )));
    }
    let (gplus, gminus) = fixed_points(model, gamma)?;
    let moved_plus = gplus.translate(model, eta)?;
    let o = model.base.clone();
    // finite product certifies eta gamma+ != gamma-
    let moved_vs_minus = extended_gromov(model, &moved_plus, &gminus, &o, params)?;
    let plus_vs_minus = extended_gromov(model, &gplus, &gminus, &o, params)?;
    let l_gamma = translation_length_auto(model, gamma)?;
    let l_whole = translation_length_auto(model, &whole)?;
    let c_eta = cocycle(model, eta, &gplus, convention, params)?;
    let nl = l_gamma.value.scale(n as f64);
    let literal = c_eta.add(&nl).sub(&l_whole.value);
    let literal_bound =
        (plus_vs_minus.midpoint() - moved_vs_minus.midpoint()).abs() + 12.0 * model.delta();
    let c_tilde = cocycle(model, eta, &gplus, CocycleConvention::Inverse, params)?;
    let predicted = nl
        .sub(&c_tilde)
        .add(&plus_vs_minus.sub(&moved_vs_minus).scale(2.0));
    let corrected = l_whole.value.sub(&predicted);
    Ok(MainRelationDefect {
        literal,
        literal_bound,
        corrected,
        length_whole: l_whole,
        length_gamma: l_gamma,
    })
}

#[derive(Debug, Clone)]
pub struct SpectrumRow {
    /// Conjugacy-class key: lex-minimal cyclic rotation where words exist.
    pub key: String,
    pub element: String,
    pub value: IntervalValue,
    pub method: LengthMethod,
    pub classification: Classification,
}

#[derive(Debug, Clone)]
pub struct SpectrumTable {
    pub model_id: String,
    pub rows: Vec<SpectrumRow>,
}

pub fn mls_table(model: &ActionModel, elements: &[GroupElement]) -> Result<SpectrumTable> {
    let mut rows = Vec::with_capacity(elements.len());
    for g in elements {
        let est = translation_length_auto(model, g)?;
        let key = match &g.word {
            Some(w) => w.canonical_cyclic_key().to_string(),
            None => format!("{g}"),
        };
        rows.push(SpectrumRow {
            key,
            element: format!("{g}"),
            value: est.value,
            method: est.method,
            classification: est.classification,
        });
    }
    Ok(SpectrumTable { model_id: model.id.clone(), rows })
}

#[derive(Debug, Clone)]
pub struct MlsComparison {
    pub max_diff: f64,
    pub diff_witness: Option<String>,
    /// Max of l_A/l_B and l_B/l_A over elements hyperbolic in both models.
    pub max_ratio: f64,
    pub ratio_witness: Option<String>,
}

pub fn mls_compare(
    model_a: &ActionModel,
    model_b: &ActionModel,
    elements: &[GroupElement],
) -> Result<MlsComparison> {
    let mut out = MlsComparison {
        max_diff: 0.0,
        diff_witness: None,
        max_ratio: 1.0,
        ratio_witness: None,
    };
    for g in elements {
        let ga = materialize(model_a, g)?;
        let gb = materialize(model_b, g)?;
        let la = translation_length_auto(model_a, &ga)?.value.midpoint();
        let lb = translation_length_auto(model_b, &gb)?.value.midpoint();
        let diff = (la - lb).abs();
        if diff > out.max_diff {
            out.max_diff = diff;
            out.diff_witness = Some(format!("{g}"));
        }
        if la > 0.0 && lb > 0.0 {
            let ratio = (la / lb).max(lb / la);
            if ratio > out.max_ratio {
                out.max_ratio = ratio;
                out.ratio_witness = Some(format!("{g}"));
            }
        }
    }
    Ok(out)
}

/// Realize a shared group word in a given model (attach the matrix form on
/// plane models).
pub fn materialize(model: &ActionModel, g: &GroupElement) -> Result<GroupElement> {
    match (&model.kind, &g.word) {
        (ModelKind::UpperHalfPlane { .. }, Some(w)) if g.matrix.is_none() => {
            Ok(model.element(w))
        }
        (ModelKind::UpperHalfPlane { .. }, None) => Ok(g.clone()),
        (_, Some(_)) => Ok(g.clone()),
        (_, None) => Err(Error::ModelMismatch("element has no word form".into())),
    }
}
