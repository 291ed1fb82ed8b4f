//! Pointed metric instances compared through boundary Gromov products: the
//! witness-set metric rho, relative Busemann functions, embedding bounds,
//! barycenter descent toward a target instance, boundary-product comparison
//! across models, and the coset-relation defect.

use crate::boundary::{extended_gromov, BoundaryPoint, EvalParams};
use crate::busemann::{cocycle, CocycleConvention};
use crate::error::{Error, Result};
use crate::gromov::gromov_product;
use crate::interval::IntervalValue;
use crate::matrix::{geodesic_endpoints, geodesic_toward, perpendicular_endpoint};
use crate::spaces::{ActionModel, Classification, GroupElement, Point};
use crate::word::{letter_inverse, Word};

/// A pointed copy of a model with a finite boundary witness set standing in
/// for the full boundary.
pub struct MetricInstance<'a> {
    pub model: &'a ActionModel,
    pub base: Point,
    pub witnesses: Vec<BoundaryPoint>,
    pub delta: f64,
    pub k: f64,
}

impl<'a> MetricInstance<'a> {
    pub fn new(
        model: &'a ActionModel,
        base: Point,
        witnesses: Vec<BoundaryPoint>,
        k: f64,
    ) -> Result<Self> {
        if k <= 100.0 {
            return Err(Error::Config(format!("K must exceed 100, got {k}")));
        }
        for i in 0..witnesses.len() {
            for j in 0..i {
                if witnesses[i].same_point(model, &witnesses[j])? {
                    return Err(Error::Config(format!(
                        "witnesses {} and {} coincide",
                        witnesses[j].describe(),
                        witnesses[i].describe()
                    )));
                }
            }
        }
        Ok(MetricInstance { model, base, witnesses, delta: model.delta(), k })
    }

    /// Same instance moved to another base point.
    pub fn at(&self, base: Point) -> MetricInstance<'a> {
        MetricInstance {
            model: self.model,
            base,
            witnesses: self.witnesses.clone(),
            delta: self.delta,
            k: self.k,
        }
    }

    /// <x, y>_{o_D} with an exact closed evaluation on tree-like models.
    pub fn product(
        &self,
        x: &BoundaryPoint,
        y: &BoundaryPoint,
        params: &EvalParams,
    ) -> Result<IntervalValue> {
        if self.model.is_tree_like() {
            if x.same_point(self.model, y)? {
                return Err(Error::CoincidentBoundaryPoints(0.0));
            }
            let (xp, xc) = x.stream_form()?;
            let (yp, yc) = y.stream_form()?;
            // on a tree the product stabilizes once both rays pass the base
            // projection and their mutual branch point
            let depth = (self.base.tree_word()?.len()
                + xp.len().max(yp.len())
                + 2 * (xc.len() + yc.len())
                + 8) as u32;
            let xs = BoundaryPoint::stream(&xp, &xc)?;
            let ys = BoundaryPoint::stream(&yp, &yc)?;
            let p = xs.point_at(self.model, depth)?;
            let q = ys.point_at(self.model, depth)?;
            let v = gromov_product(self.model, &p, &q, &self.base)?;
            Ok(IntervalValue::exact(v, depth))
        } else {
            extended_gromov(self.model, x, y, &self.base, params)
        }
    }

    /// Finite proxy of the visual condition: every witness has another
    /// witness at product <= K - 1 from it.
    pub fn visual_check(&self, params: &EvalParams) -> Result<bool> {
        for (j, y) in self.witnesses.iter().enumerate() {
            let mut best = f64::INFINITY;
            for (i, x) in self.witnesses.iter().enumerate() {
                if i == j {
                    continue;
                }
                best = best.min(self.product(x, y, params)?.upper);
            }
            if best > self.k - 1.0 {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

#[derive(Debug, Clone)]
pub struct RhoEstimate {
    /// Lower bound for the boundary sup: max over witness pairs.
    pub lower_bound: IntervalValue,
    pub witness: (String, String),
}

/// rho(D1, D2): witness-pair max of |<x,y>_{D1} - <x,y>_{D2}|. A lower
/// bound for the true boundary supremum; exact on trees whenever the
/// witness set contains the extremal pair.
pub fn rho_distance(
    d1: &MetricInstance,
    d2: &MetricInstance,
    params: &EvalParams,
) -> Result<RhoEstimate> {
    if d1.witnesses.len() != d2.witnesses.len() {
        return Err(Error::Precondition("witness sets must be identified index-wise".into()));
    }
    if d1.witnesses.len() < 2 {
        return Err(Error::Precondition("need at least two witnesses".into()));
    }
    let n = d1.witnesses.len();
    let mut best: Option<(IntervalValue, (String, String))> = None;
    for i in 0..n {
        for j in 0..i {
            let a = d1.product(&d1.witnesses[i], &d1.witnesses[j], params)?;
            let b = d2.product(&d2.witnesses[i], &d2.witnesses[j], params)?;
            let diff = a.sub(&b).abs();
            if best.as_ref().map_or(true, |(v, _)| diff.midpoint() > v.midpoint()) {
                best = Some((
                    diff,
                    (d1.witnesses[i].describe(), d1.witnesses[j].describe()),
                ));
            }
        }
    }
    let (lower_bound, witness) = best.unwrap();
    Ok(RhoEstimate { lower_bound, witness })
}

/// Sequence y_n branching off x at depth n, used as the refining sequence
/// of the relative Busemann liminf.
fn refine_toward(
    model: &ActionModel,
    x: &BoundaryPoint,
    n: u32,
) -> Result<BoundaryPoint> {
    if model.is_tree_like() {
        let (pre, per) = x
            .stream_form()
            .map_err(|_| Error::WitnessTooCoarse("refinement needs a word-stream form".into()))?;
        let xs = BoundaryPoint::stream(&pre, &per)?;
        let wn = xs.point_at(model, n)?.tree_word()?.clone();
        let next = xs.point_at(model, n + 1)?.tree_word()?.clone();
        let next_letter = *next.letters().last().unwrap();
        let avoid_back = wn.letters().last().map(|&l| letter_inverse(l));
        let l = (0..2 * model.rank() as u8)
            .find(|&l| l != next_letter && Some(l) != avoid_back)
            .ok_or_else(|| Error::WitnessTooCoarse("no branching letter available".into()))?;
        let mut prefix = wn;
        prefix.push(l);
        BoundaryPoint::stream(&prefix, &Word::single(l))
    } else {
        use crate::matrix::ExtReal;
        let xi = x.endpoint(model)?;
        Ok(match xi {
            ExtReal::Infinity => BoundaryPoint::explicit(ExtReal::Finite(2f64.powi(n as i32))),
            ExtReal::Finite(t) => {
                BoundaryPoint::explicit(ExtReal::Finite(t + 3.0 * 2f64.powi(-(n as i32))))
            }
        })
    }
}

/// f_{D1,D2}(x) = (1/2) liminf_{y -> x} (<x,y>_{D1} - <x,y>_{D2}),
/// evaluated as a running min over a refining sequence branching off x at
/// doubling depths.
pub fn relative_busemann(
    d1: &MetricInstance,
    d2: &MetricInstance,
    x: &BoundaryPoint,
    params: &EvalParams,
) -> Result<IntervalValue> {
    let mut n = params.initial_depth.max(2);
    let mut prev: Option<(f64, f64)> = None;
    loop {
        // tail window of branch depths in [n/2, n]
        let lo = (n / 2).max(1);
        let mut m_lo = f64::INFINITY;
        let mut m_hi = f64::INFINITY;
        let mut depth = 0;
        let samples = 4u32;
        for s in 0..samples {
            let bn = lo + (n - lo) * s / (samples - 1).max(1);
            let y = refine_toward(d1.model, x, bn)?;
            let a = d1.product(x, &y, params)?;
            let b = d2.product(x, &y, params)?;
            let v = a.sub(&b).scale(0.5);
            m_lo = m_lo.min(v.lower);
            m_hi = m_hi.min(v.upper);
            depth = depth.max(v.depth);
        }
        let done = prev.map_or(false, |(pl, ph)| {
            (m_lo - pl).abs() < params.tol && (m_hi - ph).abs() < params.tol
        }) || n >= params.depth_ceiling;
        if done {
            return Ok(IntervalValue::new(m_lo.min(m_hi), m_hi.max(m_lo), depth));
        }
        prev = Some((m_lo, m_hi));
        n = n.saturating_mul(2).min(params.depth_ceiling);
    }
}

#[derive(Debug, Clone)]
pub struct SupInfReport {
    pub sup_f: f64,
    pub inf_f: f64,
    /// |sup + inf|, expected <= 5 delta + 1.5 K.
    pub combo: f64,
    pub bound: f64,
    pub pass: bool,
}

/// Checks that the extremes of the relative Busemann function over the
/// witness set are roughly opposite.
pub fn supinf_opposite_check(
    d1: &MetricInstance,
    d2: &MetricInstance,
    params: &EvalParams,
) -> Result<SupInfReport> {
    let mut sup_f = f64::NEG_INFINITY;
    let mut inf_f = f64::INFINITY;
    for x in &d1.witnesses {
        let f = relative_busemann(d1, d2, x, params)?.midpoint();
        sup_f = sup_f.max(f);
        inf_f = inf_f.min(f);
    }
    let combo = (sup_f + inf_f).abs();
    let bound = 5.0 * d1.delta + 1.5 * d1.k;
    Ok(SupInfReport { sup_f, inf_f, combo, bound, pass: combo <= bound })
}

#[derive(Debug, Clone)]
pub struct RhoSupReport {
    pub rho: IntervalValue,
    pub sup_f: f64,
    /// rho <= 2|sup f| + 3.5 K + 14 delta.
    pub upper_bound: f64,
    /// rho >= 2|sup f| - K - 12 delta.
    pub lower_bound: f64,
    pub pass: bool,
}

/// Checks rho against twice the witness sup of the relative Busemann.
pub fn rho_vs_sup_check(
    d1: &MetricInstance,
    d2: &MetricInstance,
    params: &EvalParams,
) -> Result<RhoSupReport> {
    let rho = rho_distance(d1, d2, params)?.lower_bound;
    let mut sup_f = f64::NEG_INFINITY;
    for x in &d1.witnesses {
        sup_f = sup_f.max(relative_busemann(d1, d2, x, params)?.midpoint());
    }
    let upper_bound = 2.0 * sup_f.abs() + 3.5 * d1.k + 14.0 * d1.delta;
    let lower_bound = 2.0 * sup_f.abs() - d1.k - 12.0 * d1.delta;
    let r = rho.midpoint();
    Ok(RhoSupReport {
        rho,
        sup_f,
        upper_bound,
        lower_bound,
        pass: r <= upper_bound && r >= lower_bound,
    })
}

/// Defect of the two-point identity
/// |<x,y>_{D1} - <x,y>_{D2} - f(x) - f(y)| with its K/2 + 4 delta bound.
pub fn busemann_identity_defect(
    d1: &MetricInstance,
    d2: &MetricInstance,
    x: &BoundaryPoint,
    y: &BoundaryPoint,
    params: &EvalParams,
) -> Result<(IntervalValue, f64)> {
    let a = d1.product(x, y, params)?;
    let b = d2.product(x, y, params)?;
    let fx = relative_busemann(d1, d2, x, params)?;
    let fy = relative_busemann(d1, d2, y, params)?;
    let defect = a.sub(&b).sub(&fx).sub(&fy);
    Ok((defect, 0.5 * d1.k + 4.0 * d1.delta))
}

/// Two rays leaving q in distinct directions other than back toward p.
/// Their product is d(p,q) at p and 0 at q, so the pair realizes the
/// instance distance exactly on trees.
pub fn line_extension_witnesses(
    model: &ActionModel,
    p: &Point,
    q: &Point,
) -> Result<(BoundaryPoint, BoundaryPoint)> {
    if model.is_tree_like() {
        let pw = p.tree_word()?;
        let qw = q.tree_word()?;
        if pw == qw {
            return Err(Error::Precondition("p and q must differ".into()));
        }
        // letter of the last edge on the geodesic p -> q
        let cp = pw.common_prefix_len(qw);
        let arriving = if qw.len() > cp {
            *qw.letters().last().unwrap()
        } else {
            // q is an ancestor of p: the path arrives against pw's edge
            letter_inverse(pw.letters()[qw.len()])
        };
        let mut picks = (0..2 * model.rank() as u8).filter(|&l| l != letter_inverse(arriving));
        let l1 = picks.next().ok_or(Error::Precondition("rank too small".into()))?;
        let l2 = picks.next().ok_or(Error::Precondition("rank too small".into()))?;
        let mk = |l: u8| -> Result<BoundaryPoint> {
            let mut prefix = qw.clone();
            prefix.push(l);
            BoundaryPoint::stream(&prefix, &Word::single(l))
        };
        Ok((mk(l1)?, mk(l2)?))
    } else {
        let zp = p.plane()?;
        let zq = q.plane()?;
        let (beyond_q, _) = geodesic_endpoints(zp, zq);
        let perp = perpendicular_endpoint(zp, zq);
        Ok((BoundaryPoint::explicit(beyond_q), BoundaryPoint::explicit(perp)))
    }
}

#[derive(Debug, Clone)]
pub struct EmbeddingReport {
    pub distance: f64,
    pub rho: IntervalValue,
    /// d - 4K - 13 delta.
    pub lower_bound: f64,
    /// d + 4 delta.
    pub upper_bound: f64,
    pub pass: bool,
}

/// Verifies that base-point shifts embed roughly isometrically:
/// d(p,q) - 4K - 13 delta <= rho(D_p, D_q) <= d(p,q) + 4 delta.
pub fn embedding_check(
    model: &ActionModel,
    p: &Point,
    q: &Point,
    k: f64,
    params: &EvalParams,
) -> Result<EmbeddingReport> {
    let d = model.distance(p, q)?;
    if d == 0.0 {
        return Err(Error::Precondition("p and q must differ".into()));
    }
    let (x, y) = line_extension_witnesses(model, p, q)?;
    let dp = MetricInstance::new(model, p.clone(), vec![x.clone(), y.clone()], k)?;
    let dq = dp.at(q.clone());
    let rho = rho_distance(&dp, &dq, params)?.lower_bound;
    let lower_bound = d - 4.0 * k - 13.0 * model.delta();
    let upper_bound = d + 4.0 * model.delta();
    let r = rho.midpoint();
    Ok(EmbeddingReport {
        distance: d,
        rho,
        lower_bound,
        upper_bound,
        pass: r >= lower_bound && r <= upper_bound,
    })
}

/// Point at the given distance from p along the geodesic toward x.
pub fn walk_toward(
    model: &ActionModel,
    p: &Point,
    x: &BoundaryPoint,
    dist: f64,
) -> Result<Point> {
    if model.is_tree_like() {
        let pw = p.tree_word()?;
        let steps = dist.round().max(0.0) as usize;
        let (pre, per) = x.stream_form()?;
        let xs = BoundaryPoint::stream(&pre, &per)?;
        let depth = (pw.len() + steps + pre.len() + 2 * per.len() + 4) as u32;
        let far = xs.point_at(model, depth)?;
        let xw = far.tree_word()?;
        let cp = pw.common_prefix_len(xw);
        let back = pw.len() - cp;
        let letters: Vec<u8> = if steps <= back {
            pw.letters()[..pw.len() - steps].to_vec()
        } else {
            xw.letters()[..cp + (steps - back)].to_vec()
        };
        let w = Word::from_letters(letters);
        Ok(match p {
            Point::Ball(_) => Point::Ball(w),
            _ => Point::Tree(w),
        })
    } else {
        Ok(Point::Plane(geodesic_toward(p.plane()?, x.endpoint(model)?, dist)))
    }
}

#[derive(Debug, Clone)]
pub struct DescentStep {
    pub point: String,
    pub rho: IntervalValue,
    pub target: String,
    pub step: f64,
}

#[derive(Debug, Clone)]
pub struct DescentTrace {
    pub steps: Vec<DescentStep>,
    pub final_point: Point,
    pub final_rho: IntervalValue,
    pub stop_radius: f64,
    pub converged: bool,
    /// Indices of steps where the rho estimate failed to decrease.
    pub non_decreasing_steps: Vec<usize>,
}

/// Greedy barycenter descent: repeatedly move toward the witness maximizing
/// the relative Busemann function by 50K + 50 delta, until the rho estimate
/// falls inside the stopping radius (1000K + 1000 delta unless overridden).
pub fn barycenter_descent(
    target: &MetricInstance,
    start: Point,
    k: f64,
    max_steps: usize,
    params: &EvalParams,
    stop_radius: Option<f64>,
) -> Result<DescentTrace> {
    let delta = target.delta;
    let stop = stop_radius.unwrap_or(1000.0 * k + 1000.0 * delta);
    let step_size = 50.0 * k + 50.0 * delta;
    let mut p = start;
    let mut steps = Vec::new();
    let mut non_decreasing = Vec::new();
    let mut converged = false;
    let mut rho = rho_distance(&target.at(p.clone()), target, params)?.lower_bound;
    for _ in 0..max_steps {
        if rho.midpoint() <= stop {
            converged = true;
            break;
        }
        let moving = target.at(p.clone());
        let mut best: Option<(f64, usize)> = None;
        for (i, x) in target.witnesses.iter().enumerate() {
            let f = relative_busemann(&moving, target, x, params)?.midpoint();
            if best.map_or(true, |(bf, _)| f > bf) {
                best = Some((f, i));
            }
        }
        let (_, xi) = best.ok_or(Error::Precondition("no witnesses".into()))?;
        let x = &target.witnesses[xi];
        p = walk_toward(target.model, &p, x, step_size)?;
        let new_rho = rho_distance(&target.at(p.clone()), target, params)?.lower_bound;
        if new_rho.midpoint() >= rho.midpoint() {
            non_decreasing.push(steps.len());
        }
        steps.push(DescentStep {
            point: format!("{p}"),
            rho: new_rho,
            target: x.describe(),
            step: step_size,
        });
        rho = new_rho;
    }
    if rho.midpoint() <= stop {
        converged = true;
    }
    Ok(DescentTrace {
        steps,
        final_point: p,
        final_rho: rho,
        stop_radius: stop,
        converged,
        non_decreasing_steps: non_decreasing,
    })
}

#[derive(Debug, Clone)]
pub struct GromovComparison {
    /// Empirical sup of |<x,y>_A - <x,y>_B| over the witness pairs.
    pub max_l: f64,
    pub witness: Option<(String, String)>,
}

fn model_product(
    model: &ActionModel,
    x: &BoundaryPoint,
    y: &BoundaryPoint,
    params: &EvalParams,
) -> Result<IntervalValue> {
    let inst = MetricInstance {
        model,
        base: model.base.clone(),
        witnesses: Vec::new(),
        delta: model.delta(),
        k: 101.0,
    };
    inst.product(x, y, params)
}

/// Max boundary-product discrepancy between two models over witness pairs
/// identified by shared ray specifications.
pub fn gromov_comparison(
    model_a: &ActionModel,
    model_b: &ActionModel,
    pairs: &[(BoundaryPoint, BoundaryPoint)],
    params: &EvalParams,
) -> Result<GromovComparison> {
    let mut out = GromovComparison { max_l: 0.0, witness: None };
    for (x, y) in pairs {
        let a = model_product(model_a, &x.rematerialize(model_a)?, &y.rematerialize(model_a)?, params)?;
        let b = model_product(model_b, &x.rematerialize(model_b)?, &y.rematerialize(model_b)?, params)?;
        let d = (a.midpoint() - b.midpoint()).abs();
        if d > out.max_l {
            out.max_l = d;
            out.witness = Some((x.describe(), y.describe()));
        }
    }
    Ok(out)
}

/// Finite-ball sup of |g(x,y) - g(gx, gy)| where g is the product
/// discrepancy between the models; a lower bound for the true sup.
pub fn cobound_estimate(
    model_a: &ActionModel,
    model_b: &ActionModel,
    x: &BoundaryPoint,
    y: &BoundaryPoint,
    radius: u32,
    params: &EvalParams,
) -> Result<IntervalValue> {
    let g = |x: &BoundaryPoint, y: &BoundaryPoint| -> Result<IntervalValue> {
        let a = model_product(model_a, &x.rematerialize(model_a)?, &y.rematerialize(model_a)?, params)?;
        let b = model_product(model_b, &x.rematerialize(model_b)?, &y.rematerialize(model_b)?, params)?;
        Ok(a.sub(&b))
    };
    let base = g(x, y)?;
    let mut best = IntervalValue::exact(0.0, base.depth);
    for gamma in model_a.ball_enumerate(radius)? {
        if gamma.is_identity() {
            continue;
        }
        let gx = x.rematerialize(model_a)?.translate(model_a, &gamma)?;
        let gy = y.rematerialize(model_a)?.translate(model_a, &gamma)?;
        if gx.same_point(model_a, &gy)? {
            continue;
        }
        let moved = g(&gx, &gy)?;
        let dg = base.sub(&moved).abs();
        if dg.midpoint() > best.midpoint() {
            best = dg;
        }
    }
    Ok(best)
}

#[derive(Debug, Clone)]
pub struct CosetDefect {
    /// g(gamma-, w+) - g(h gamma-, w+) - c(w, gamma-) - c(w, w+) for
    /// w = h gamma^n, with g and c taken as model-A-minus-model-B values.
    pub main: IntervalValue,
    pub bound: f64,
    /// (n, enclosure of (c_A - c_B)(gamma^n, gamma-)/n) on a doubling
    /// schedule; shrinks toward 0 for equal-spectrum pairs.
    pub schedule: Vec<(u32, IntervalValue)>,
}

pub fn coset_relation_defect(
    model_a: &ActionModel,
    model_b: &ActionModel,
    h: &GroupElement,
    gamma: &GroupElement,
    n: u32,
    convention: CocycleConvention,
    params: &EvalParams,
) -> Result<CosetDefect> {
    use crate::boundary::fixed_points;
    let ga = crate::spectrum::materialize(model_a, gamma)?;
    if model_a.classify(&ga)? != Classification::Hyperbolic {
        return Err(Error::NoAxis);
    }
    let ha = crate::spectrum::materialize(model_a, h)?;
    let w = ha.mul(&ga.pow(n as i64));
    if model_a.classify(&w)? != Classification::Hyperbolic {
        return Err(Error::Precondition(format!("h gamma^{n} is not hyperbolic")));
    }
    let (gplus_a, gminus_a) = fixed_points(model_a, &ga)?;
    let moved_plus = gplus_a.translate(model_a, &ha)?;
    if moved_plus.same_point(model_a, &gminus_a)? {
        return Err(Error::Precondition("h gamma+ coincides with gamma-".into()));
    }
    let (wplus_a, _) = fixed_points(model_a, &w)?;
    let hminus_a = gminus_a.translate(model_a, &ha)?;

    let g2 = |x: &BoundaryPoint, y: &BoundaryPoint| -> Result<IntervalValue> {
        let a = model_product(model_a, &x.rematerialize(model_a)?, &y.rematerialize(model_a)?, params)?;
        let b = model_product(model_b, &x.rematerialize(model_b)?, &y.rematerialize(model_b)?, params)?;
        Ok(a.sub(&b))
    };
    let c2 = |e: &GroupElement, x: &BoundaryPoint| -> Result<IntervalValue> {
        let ca = cocycle(
            model_a,
            &crate::spectrum::materialize(model_a, e)?,
            &x.rematerialize(model_a)?,
            convention,
            params,
        )?;
        let cb = cocycle(
            model_b,
            &crate::spectrum::materialize(model_b, e)?,
            &x.rematerialize(model_b)?,
            convention,
            params,
        )?;
        Ok(ca.sub(&cb))
    };
    let main = g2(&gminus_a, &wplus_a)?
        .sub(&g2(&hminus_a, &wplus_a)?)
        .sub(&c2(&w, &gminus_a)?)
        .sub(&c2(&w, &wplus_a)?);
    let bound = 8.0 * model_a.delta().max(model_b.delta());
    let mut schedule = Vec::new();
    let mut m = 8u32;
    while m <= 64 {
        let c = c2(&ga.pow(m as i64), &gminus_a)?;
        schedule.push((m, c.scale(1.0 / m as f64)));
        m *= 2;
    }
    Ok(CosetDefect { main, bound, schedule })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boundary::limit_set_sample;
    use crate::word::Word;

    fn w(s: &str) -> Word {
        Word::parse(s, 2).unwrap()
    }

    fn tree() -> ActionModel {
        ActionModel::free_tree("t", 2)
    }

    fn tp(s: &str) -> Point {
        Point::Tree(w(s))
    }

    fn tree_witnesses(model: &ActionModel) -> Vec<BoundaryPoint> {
        limit_set_sample(model, 4, 1, 0).unwrap()
    }

    #[test]
    fn rho_zero_on_equal_instances() {
        let m = tree();
        let d1 = MetricInstance::new(&m, tp(""), tree_witnesses(&m), 101.0).unwrap();
        let d2 = MetricInstance::new(&m, tp(""), tree_witnesses(&m), 101.0).unwrap();
        let p = EvalParams::default();
        let r = rho_distance(&d1, &d2, &p).unwrap();
        assert_eq!(r.lower_bound.midpoint(), 0.0);
    }

    #[test]
    fn rho_equals_distance_with_line_extension() {
        let m = tree();
        let p = EvalParams::default();
        let (x, y) = line_extension_witnesses(&m, &tp(""), &tp("ab")).unwrap();
        let d1 = MetricInstance::new(&m, tp(""), vec![x.clone(), y.clone()], 101.0).unwrap();
        let d2 = d1.at(tp("ab"));
        let r = rho_distance(&d1, &d2, &p).unwrap();
        assert_eq!(r.lower_bound.midpoint(), 2.0);
    }

    #[test]
    fn relative_busemann_tree_value() {
        let m = tree();
        let p = EvalParams::default();
        let x = BoundaryPoint::stream(&w(""), &w("a")).unwrap();
        let d1 = MetricInstance::new(&m, tp(""), vec![x.clone()], 101.0).unwrap();
        let d2 = d1.at(tp("a"));
        let f = relative_busemann(&d1, &d2, &x, &p).unwrap();
        assert_eq!(f.midpoint(), 0.5);
        assert_eq!(f.width(), 0.0);
        // same instance: zero
        let z = relative_busemann(&d1, &d1, &x, &p).unwrap();
        assert_eq!(z.midpoint(), 0.0);
    }

    #[test]
    fn supinf_symmetric_tree() {
        let m = tree();
        let p = EvalParams::default();
        let (x, y) = line_extension_witnesses(&m, &tp(""), &tp("ab")).unwrap();
        // add the two opposite-direction rays at e for symmetry
        let (xe, ye) = line_extension_witnesses(&m, &tp("ab"), &tp("")).unwrap();
        let d1 = MetricInstance::new(&m, tp(""), vec![x, y, xe, ye], 101.0).unwrap();
        let d2 = d1.at(tp("ab"));
        let rep = supinf_opposite_check(&d1, &d2, &p).unwrap();
        assert_eq!(rep.combo, 0.0, "{rep:?}");
        assert!(rep.pass);
        let same = supinf_opposite_check(&d1, &d1, &p).unwrap();
        assert_eq!(same.sup_f, 0.0);
        assert!(same.pass);
    }

    #[test]
    fn rho_vs_sup_tree() {
        let m = tree();
        let p = EvalParams::default();
        let (x, y) = line_extension_witnesses(&m, &tp(""), &tp("ab")).unwrap();
        let d1 = MetricInstance::new(&m, tp(""), vec![x, y], 101.0).unwrap();
        let d2 = d1.at(tp("ab"));
        let rep = rho_vs_sup_check(&d1, &d2, &p).unwrap();
        assert_eq!(rep.rho.midpoint(), 2.0);
        assert_eq!(rep.sup_f, 1.0);
        assert!(rep.pass, "{rep:?}");
    }

    #[test]
    fn busemann_identity_within_bound() {
        let m = tree();
        let p = EvalParams::default();
        let (x, y) = line_extension_witnesses(&m, &tp(""), &tp("ab")).unwrap();
        let d1 = MetricInstance::new(&m, tp(""), vec![x.clone(), y.clone()], 101.0).unwrap();
        let d2 = d1.at(tp("ab"));
        let (defect, bound) = busemann_identity_defect(&d1, &d2, &x, &y, &p).unwrap();
        assert!(defect.midpoint().abs() <= bound + defect.width(), "{defect:?} vs {bound}");
    }

    #[test]
    fn embedding_tree_exact() {
        let m = tree();
        let p = EvalParams::default();
        let rep = embedding_check(&m, &tp(""), &tp("abab"), 101.0, &p).unwrap();
        assert_eq!(rep.rho.midpoint(), 4.0);
        assert!(rep.pass);
        assert!(embedding_check(&m, &tp("ab"), &tp("ab"), 101.0, &p).is_err());
    }

    #[test]
    fn embedding_plane_bounds() {
        let g = crate::matrix::Mat2::new(2.0, 0.0, 0.0, 0.5).unwrap();
        let m = ActionModel::upper_half_plane("h", vec![g], 0.75);
        let p = EvalParams::default();
        let a = Point::Plane(num_complex::Complex64::new(0.0, 1.0));
        let b = Point::Plane(num_complex::Complex64::new(3.0, 2.0));
        let rep = embedding_check(&m, &a, &b, 101.0, &p).unwrap();
        assert!(rep.pass, "{rep:?}");
    }

    #[test]
    fn walk_toward_tree() {
        let m = tree();
        let x = BoundaryPoint::stream(&w(""), &w("ab")).unwrap();
        // from bb toward (ab)^oo: back up two steps, then along the ray
        let p1 = walk_toward(&m, &tp("bb"), &x, 2.0).unwrap();
        assert_eq!(p1, tp(""));
        let p2 = walk_toward(&m, &tp("bb"), &x, 5.0).unwrap();
        assert_eq!(p2, tp("aba"));
    }

    #[test]
    fn descent_reaches_target() {
        let m = tree();
        let p = EvalParams::default().with_ceiling(1e9);
        let r = tp("");
        let far = Word::parse(&"ab".repeat(5000), 2).unwrap();
        let (x1, x2) = line_extension_witnesses(&m, &Point::Tree(far.clone()), &r).unwrap();
        let target = MetricInstance::new(&m, r.clone(), vec![x1, x2], 101.0).unwrap();
        let start = Point::Tree(far);
        // d(start, r) = 10^4 < default stop radius: zero steps
        let t0 = barycenter_descent(&target, start.clone(), 101.0, 50, &p, None).unwrap();
        assert!(t0.converged);
        assert!(t0.steps.is_empty());
        // exercised with a smaller stopping radius
        let t = barycenter_descent(&target, start, 101.0, 50, &p, Some(6000.0)).unwrap();
        assert!(t.converged, "{:?}", t.final_rho);
        assert!(t.final_rho.midpoint() <= 6000.0);
        assert!(t.non_decreasing_steps.is_empty(), "{:?}", t.non_decreasing_steps);
        // each step decreases rho by the step size on the tree
        let step = 50.0 * 101.0;
        let mut prev = 10_000.0;
        for s in &t.steps {
            assert!((prev - s.rho.midpoint() - step).abs() <= 1e-9 || s.rho.midpoint() <= 6000.0);
            prev = s.rho.midpoint();
        }
    }

    #[test]
    fn gromov_comparison_base_shift() {
        let m = tree();
        let shifted = ActionModel::free_tree("t2", 2).with_base(tp("ab"));
        let p = EvalParams::default();
        let ws = tree_witnesses(&m);
        let mut pairs = Vec::new();
        for i in 0..ws.len() {
            for j in 0..i {
                pairs.push((ws[i].clone(), ws[j].clone()));
            }
        }
        let rep = gromov_comparison(&m, &shifted, &pairs, &p).unwrap();
        assert!(rep.max_l <= 2.0 + 4.0 * m.delta(), "{rep:?}");
        let same = gromov_comparison(&m, &m, &pairs, &p).unwrap();
        assert_eq!(same.max_l, 0.0);
    }

    #[test]
    fn cobound_shift_bounded_and_monotone() {
        let m = tree();
        let shifted = ActionModel::free_tree("t2", 2).with_base(tp("ab"));
        let p = EvalParams::default();
        let x = BoundaryPoint::stream(&w(""), &w("a")).unwrap();
        let y = BoundaryPoint::stream(&w(""), &w("b")).unwrap();
        let h2 = cobound_estimate(&m, &shifted, &x, &y, 2, &p).unwrap();
        assert!(h2.midpoint().abs() <= 2.0 * 2.0 + 8.0 * m.delta(), "{h2:?}");
        let h1 = cobound_estimate(&m, &shifted, &x, &y, 1, &p).unwrap();
        assert!(h2.midpoint() >= h1.midpoint());
        let zero = cobound_estimate(&m, &m, &x, &y, 2, &p).unwrap();
        assert_eq!(zero.midpoint(), 0.0);
    }

    #[test]
    fn coset_defect_equal_models_zero() {
        let m = tree();
        let p = EvalParams::default().with_ceiling(1e6);
        let h = m.parse_element("b").unwrap();
        let gamma = m.parse_element("ab").unwrap();
        let d = coset_relation_defect(&m, &m, &h, &gamma, 6, CocycleConvention::Inverse, &p)
            .unwrap();
        assert_eq!(d.main.midpoint(), 0.0);
        for (_, c) in &d.schedule {
            assert_eq!(c.midpoint(), 0.0);
        }
    }

    #[test]
    fn rho_symmetry_and_triangle() {
        let m = tree();
        let p = EvalParams::default();
        let ws = tree_witnesses(&m);
        let d1 = MetricInstance::new(&m, tp(""), ws.clone(), 101.0).unwrap();
        let d2 = d1.at(tp("ab"));
        let d3 = d1.at(tp("ba"));
        let r12 = rho_distance(&d1, &d2, &p).unwrap().lower_bound;
        let r21 = rho_distance(&d2, &d1, &p).unwrap().lower_bound;
        assert_eq!(r12.midpoint(), r21.midpoint());
        let r13 = rho_distance(&d1, &d3, &p).unwrap().lower_bound;
        let r23 = rho_distance(&d2, &d3, &p).unwrap().lower_bound;
        let slack = r12.width() + r13.width() + r23.width();
        assert!(r13.midpoint() <= r12.midpoint() + r23.midpoint() + slack + 1e-9);
    }

    #[test]
    fn instance_validation() {
        let m = tree();
        assert!(MetricInstance::new(&m, tp(""), tree_witnesses(&m), 100.0).is_err());
        let x = BoundaryPoint::stream(&w(""), &w("a")).unwrap();
        let dup = BoundaryPoint::stream(&w(""), &w("aa")).unwrap();
        assert!(MetricInstance::new(&m, tp(""), vec![x, dup], 101.0).is_err());
        // visual check with all four generator directions present
        let inst = MetricInstance::new(&m, tp(""), tree_witnesses(&m), 101.0).unwrap();
        assert!(inst.visual_check(&EvalParams::default()).unwrap());
    }
}
