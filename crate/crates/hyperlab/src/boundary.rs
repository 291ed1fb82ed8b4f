//! Boundary points as lazy rays, extended Gromov products with certified
//! enclosures, fixed points of hyperbolic elements, and limit-set samples.

use crate::error::{Error, Result};
use crate::interval::IntervalValue;
use crate::matrix::{geodesic_toward, ExtReal};
use crate::spaces::{ActionModel, Classification, GroupElement, ModelKind, Point};
use crate::word::{letter_inverse, Word};
use std::fmt;

#[derive(Debug, Clone)]
pub enum OriginTag {
    FixedPlus(GroupElement),
    FixedMinus(GroupElement),
    InfiniteWord,
    ExplicitRay,
}

#[derive(Debug, Clone)]
enum RayKind {
    /// Infinite reduced word prefix . period . period . ...
    Stream { prefix: Word, period: Word },
    /// n -> pre * gamma^n * o.
    Power { pre: GroupElement, gamma: GroupElement },
    /// Unit-speed geodesic from the base point toward a boundary real.
    Explicit { xi: ExtReal },
}

/// A point of the Gromov boundary, evaluated lazily along a ray.
#[derive(Debug, Clone)]
pub struct BoundaryPoint {
    pub tag: OriginTag,
    ray: RayKind,
}

impl BoundaryPoint {
    /// Eventually periodic infinite word. The (prefix, period) pair is
    /// normalized: period cyclically reduced and primitive, no cancellation
    /// at the junction, and the prefix as short as possible.
    pub fn stream(prefix: &Word, period: &Word) -> Result<Self> {
        let (prefix, period) = normalize_stream(prefix, period)?;
        Ok(BoundaryPoint { tag: OriginTag::InfiniteWord, ray: RayKind::Stream { prefix, period } })
    }

    pub fn explicit(xi: ExtReal) -> Self {
        BoundaryPoint { tag: OriginTag::ExplicitRay, ray: RayKind::Explicit { xi } }
    }

    /// Point of the ray at depth n.
    pub fn point_at(&self, model: &ActionModel, n: u32) -> Result<Point> {
        match &self.ray {
            RayKind::Stream { prefix, period } => {
                let w = stream_word(prefix, period, n as usize);
                match &model.kind {
                    ModelKind::FreeTree { .. } => Ok(Point::Tree(w)),
                    ModelKind::WordMetricBall { .. } => Ok(Point::Ball(w)),
                    ModelKind::UpperHalfPlane { .. } => {
                        Err(Error::ModelMismatch("word stream on a plane model".into()))
                    }
                }
            }
            RayKind::Power { pre, gamma } => match (&model.kind, gamma.matrix()) {
                // iterate the action instead of forming gamma^n: entries of
                // matrix powers reach 2^n and the orbit's imaginary part is
                // lost to cancellation, while stepwise application contracts
                // toward the fixed point and stays well-conditioned
                (ModelKind::UpperHalfPlane { .. }, Ok(g)) => {
                    let mut z = model.base.plane()?;
                    for _ in 0..n {
                        z = g.apply(z);
                    }
                    Ok(Point::Plane(pre.matrix()?.apply(z)))
                }
                _ => model.orbit(&pre.mul(&gamma.pow(n as i64))),
            },
            RayKind::Explicit { xi } => match &model.kind {
                ModelKind::UpperHalfPlane { .. } => {
                    Ok(Point::Plane(geodesic_toward(model.base.plane()?, *xi, n as f64)))
                }
                _ => Err(Error::ModelMismatch("explicit ray on a tree model".into())),
            },
        }
    }

    /// Image under the left action of eta.
    pub fn translate(&self, model: &ActionModel, eta: &GroupElement) -> Result<Self> {
        let tag = match &self.tag {
            OriginTag::FixedPlus(g) => {
                OriginTag::FixedPlus(eta.mul(g).mul(&eta.inverse()))
            }
            OriginTag::FixedMinus(g) => {
                OriginTag::FixedMinus(eta.mul(g).mul(&eta.inverse()))
            }
            t => t.clone(),
        };
        let ray = match &self.ray {
            RayKind::Stream { prefix, period } => {
                let (prefix, period) = normalize_stream(&eta.word()?.concat(prefix), period)?;
                RayKind::Stream { prefix, period }
            }
            RayKind::Power { pre, gamma } => {
                RayKind::Power { pre: eta.mul(pre), gamma: gamma.clone() }
            }
            RayKind::Explicit { xi } => {
                let _ = model;
                RayKind::Explicit { xi: eta.matrix()?.apply_boundary(*xi) }
            }
        };
        Ok(BoundaryPoint { tag, ray })
    }

    /// Normalized (prefix, period) form of the infinite reduced word this
    /// ray converges to; tree-like models only.
    pub fn stream_form(&self) -> Result<(Word, Word)> {
        match &self.ray {
            RayKind::Stream { prefix, period } => Ok((prefix.clone(), period.clone())),
            RayKind::Power { pre, gamma } => {
                let g = gamma.word()?;
                let (u, c) = g.cyclic_decompose();
                if c.is_empty() {
                    return Err(Error::NoAxis);
                }
                normalize_stream(&pre.word()?.concat(&u), &c)
            }
            RayKind::Explicit { .. } => {
                Err(Error::ModelMismatch("explicit ray has no word stream".into()))
            }
        }
    }

    /// Boundary real this ray converges to; plane models only.
    pub fn endpoint(&self, model: &ActionModel) -> Result<ExtReal> {
        match &self.ray {
            RayKind::Explicit { xi } => Ok(*xi),
            RayKind::Power { pre, gamma } => {
                let (plus, _) = gamma.matrix()?.fixed_points()?;
                let _ = model;
                Ok(pre.matrix()?.apply_boundary(plus))
            }
            RayKind::Stream { .. } => {
                Err(Error::ModelMismatch("word stream has no plane endpoint".into()))
            }
        }
    }

    /// Structural equality of boundary points: exact on tree-like models via
    /// normalized stream forms, numerically on the plane via endpoints.
    pub fn same_point(&self, model: &ActionModel, other: &BoundaryPoint) -> Result<bool> {
        if model.is_tree_like() {
            Ok(self.stream_form()? == other.stream_form()?)
        } else {
            let tol = model.tol.max(1e-9);
            Ok(self.endpoint(model)?.approx_eq(&other.endpoint(model)?, tol))
        }
    }

    /// Same boundary point rebuilt against another model: word-backed rays
    /// pick up that model's matrices so one ray spec can be evaluated in
    /// several models.
    pub fn rematerialize(&self, model: &ActionModel) -> Result<Self> {
        let ray = match &self.ray {
            RayKind::Power { pre, gamma } => {
                if model.is_tree_like() {
                    RayKind::Power {
                        pre: GroupElement::from_word(pre.word()?.clone()),
                        gamma: GroupElement::from_word(gamma.word()?.clone()),
                    }
                } else {
                    RayKind::Power {
                        pre: model.element(pre.word()?),
                        gamma: model.element(gamma.word()?),
                    }
                }
            }
            r => r.clone(),
        };
        Ok(BoundaryPoint { tag: self.tag.clone(), ray })
    }

    pub fn describe(&self) -> String {
        match (&self.tag, &self.ray) {
            (OriginTag::FixedPlus(g), _) => format!("plus({g})"),
            (OriginTag::FixedMinus(g), _) => format!("minus({g})"),
            (_, RayKind::Stream { prefix, period }) => format!("stream({prefix};{period})"),
            (_, RayKind::Explicit { xi }) => format!("ray({xi})"),
            (_, RayKind::Power { pre, gamma }) => format!("power({pre};{gamma})"),
        }
    }
}

impl fmt::Display for BoundaryPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.describe())
    }
}

fn stream_word(prefix: &Word, period: &Word, n: usize) -> Word {
    let mut letters = Vec::with_capacity(n);
    letters.extend_from_slice(&prefix.letters()[..prefix.len().min(n)]);
    let p = period.letters();
    while letters.len() < n {
        let take = p.len().min(n - letters.len());
        letters.extend_from_slice(&p[..take]);
    }
    // the normalized junction never cancels, so this is already reduced
    Word::from_letters(letters)
}

/// Normal form of prefix . period^oo: cyclically reduced primitive period,
/// reduced junction, shortest prefix.
fn normalize_stream(prefix: &Word, period: &Word) -> Result<(Word, Word)> {
    let (v, core) = period.cyclic_decompose();
    if core.is_empty() {
        return Err(Error::Config("stream period must be nontrivial".into()));
    }
    let (root, _) = core.primitive_root();
    let mut prefix = prefix.concat(&v);
    let mut period: Vec<u8> = root.letters().to_vec();
    loop {
        // cancellation at the junction: drop the last prefix letter, rotate left
        if let Some(&last) = prefix.letters().last() {
            if last == letter_inverse(period[0]) {
                prefix = Word::from_letters(prefix.letters()[..prefix.len() - 1].iter().copied());
                period.rotate_left(1);
                continue;
            }
            // prefix ends with the period's last letter: absorb it, rotate right
            if last == period[period.len() - 1] {
                prefix = Word::from_letters(prefix.letters()[..prefix.len() - 1].iter().copied());
                period.rotate_right(1);
                continue;
            }
        }
        break;
    }
    Ok((prefix, Word::from_letters(period)))
}

/// Attracting and repelling fixed points of a hyperbolic element.
pub fn fixed_points(
    model: &ActionModel,
    gamma: &GroupElement,
) -> Result<(BoundaryPoint, BoundaryPoint)> {
    if model.classify(gamma)? != Classification::Hyperbolic {
        return Err(Error::NoAxis);
    }
    let plus = BoundaryPoint {
        tag: OriginTag::FixedPlus(gamma.clone()),
        ray: RayKind::Power { pre: GroupElement::identity(), gamma: gamma.clone() },
    };
    let minus = BoundaryPoint {
        tag: OriginTag::FixedMinus(gamma.clone()),
        ray: RayKind::Power { pre: GroupElement::identity(), gamma: gamma.inverse() },
    };
    Ok((plus, minus))
}

/// Truncation policy for extended products.
#[derive(Debug, Clone, Copy)]
pub struct EvalParams {
    pub initial_depth: u32,
    pub depth_ceiling: u32,
    pub grid: usize,
    pub tol: f64,
    /// Products above this are treated as divergent (coincident points).
    /// None: 10^3 + 2 delta-hat.
    pub divergence_ceiling: Option<f64>,
}

impl Default for EvalParams {
    fn default() -> Self {
        EvalParams {
            initial_depth: 64,
            depth_ceiling: 1 << 14,
            grid: 8,
            tol: 0.01,
            divergence_ceiling: None,
        }
    }
}

impl EvalParams {
    pub fn with_depth(mut self, initial: u32, ceiling: u32) -> Self {
        self.initial_depth = initial;
        self.depth_ceiling = ceiling;
        self
    }

    pub fn with_ceiling(mut self, c: f64) -> Self {
        self.divergence_ceiling = Some(c);
        self
    }

    fn ceiling(&self, model: &ActionModel) -> f64 {
        self.divergence_ceiling.unwrap_or(1e3 + 2.0 * model.delta())
    }

    fn window(&self, n: u32) -> Vec<u32> {
        let lo = (n / 2).max(1);
        let k = self.grid.max(2) as u32;
        (0..k).map(|i| lo + (n - lo) * i / (k - 1)).collect()
    }
}

fn raw_product(model: &ActionModel, p: &Point, q: &Point, o: &Point) -> Result<f64> {
    let dp = model.distance(o, p)?;
    let dq = model.distance(o, q)?;
    let dpq = model.distance(p, q)?;
    Ok(0.5 * (dp + dq - dpq))
}

/// Tail-window min of <x_i, y_j>_o over i, j in [N/2, N].
pub fn window_min(
    model: &ActionModel,
    x: &BoundaryPoint,
    y: &BoundaryPoint,
    o: &Point,
    n: u32,
    params: &EvalParams,
) -> Result<f64> {
    let win = params.window(n);
    let mut m = f64::INFINITY;
    for &i in &win {
        let p = x.point_at(model, i)?;
        for &j in &win {
            let q = y.point_at(model, j)?;
            m = m.min(raw_product(model, &p, &q, o)?);
        }
    }
    Ok(m)
}

/// Extended Gromov product of two boundary points: the tail-window liminf
/// with the 2-delta enclosure. Zero width on trees.
pub fn extended_gromov(
    model: &ActionModel,
    x: &BoundaryPoint,
    y: &BoundaryPoint,
    o: &Point,
    params: &EvalParams,
) -> Result<IntervalValue> {
    let ceiling = params.ceiling(model);
    let mut n = params.initial_depth.max(2);
    let mut prev: Option<f64> = None;
    loop {
        let m = window_min(model, x, y, o, n, params)?;
        if m > ceiling {
            return Err(Error::CoincidentBoundaryPoints(ceiling));
        }
        if let Some(p0) = prev {
            if (m - p0).abs() < params.tol || n >= params.depth_ceiling {
                return Ok(IntervalValue::new(m, m + 2.0 * model.delta(), n));
            }
        }
        if n >= params.depth_ceiling {
            return Ok(IntervalValue::new(m, m + 2.0 * model.delta(), n));
        }
        prev = Some(m);
        n = n.saturating_mul(2).min(params.depth_ceiling);
    }
}

/// Extended product of an interior point against a boundary point.
pub fn point_boundary_gromov(
    model: &ActionModel,
    p: &Point,
    x: &BoundaryPoint,
    o: &Point,
    params: &EvalParams,
) -> Result<IntervalValue> {
    let mut n = params.initial_depth.max(2);
    let mut prev: Option<f64> = None;
    loop {
        let win = params.window(n);
        let mut m = f64::INFINITY;
        for &i in &win {
            let q = x.point_at(model, i)?;
            m = m.min(raw_product(model, p, &q, o)?);
        }
        if let Some(p0) = prev {
            if (m - p0).abs() < params.tol || n >= params.depth_ceiling {
                return Ok(IntervalValue::new(m, m + 2.0 * model.delta(), n));
            }
        }
        if n >= params.depth_ceiling {
            return Ok(IntervalValue::new(m, m + 2.0 * model.delta(), n));
        }
        prev = Some(m);
        n = n.saturating_mul(2).min(params.depth_ceiling);
    }
}

/// Attracting fixed points of hyperbolic elements in a ball, deduplicated.
/// The seed shuffles the scan order; results stay reproducible per seed.
pub fn limit_set_sample(
    model: &ActionModel,
    count: usize,
    radius: u32,
    seed: u64,
) -> Result<Vec<BoundaryPoint>> {
    if count == 0 {
        return Err(Error::Config("limit set sample needs count >= 1".into()));
    }
    let mut ball = model.ball_enumerate(radius)?;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(seed);
    // shuffle within each word-length layer: short elements stay first, so
    // small radii keep their canonical fixed points in every sample
    let mut i = 0;
    while i < ball.len() {
        let len_i = ball[i].word.as_ref().map_or(0, |w| w.len());
        let mut j = i;
        while j < ball.len() && ball[j].word.as_ref().map_or(0, |w| w.len()) == len_i {
            j += 1;
        }
        ball[i..j].shuffle(&mut rng);
        i = j;
    }
    let mut out: Vec<BoundaryPoint> = Vec::new();
    for g in ball {
        if model.classify(&g)? != Classification::Hyperbolic {
            continue;
        }
        let (plus, _) = fixed_points(model, &g)?;
        let mut dup = false;
        for known in &out {
            if known.same_point(model, &plus)? {
                dup = true;
                break;
            }
        }
        if !dup {
            out.push(plus);
            if out.len() == count {
                return Ok(out);
            }
        }
    }
    if out.is_empty() {
        return Err(Error::NoHyperbolicElement(radius));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::Mat2;

    fn w(s: &str) -> Word {
        Word::parse(s, 2).unwrap()
    }

    fn tree() -> ActionModel {
        ActionModel::free_tree("t", 2)
    }

    fn bp(prefix: &str, period: &str) -> BoundaryPoint {
        BoundaryPoint::stream(&w(prefix), &w(period)).unwrap()
    }

    #[test]
    fn stream_normal_form() {
        // a (ba)^oo = (ab)^oo
        assert_eq!(bp("a", "ba").stream_form().unwrap(), bp("", "ab").stream_form().unwrap());
        // junction cancellation: A (ab)^oo = (ba)^oo shifted
        assert_eq!(bp("A", "ab").stream_form().unwrap(), (w(""), w("ba")));
        // period reduced cyclically and to its primitive root
        assert_eq!(bp("", "abab").stream_form().unwrap(), (w(""), w("ab")));
        assert_eq!(bp("", "bAB").stream_form().unwrap().1, w("A"));
    }

    #[test]
    fn stream_points_lie_on_ray() {
        let x = bp("a", "b");
        let m = tree();
        assert_eq!(x.point_at(&m, 0).unwrap(), Point::Tree(w("")));
        assert_eq!(x.point_at(&m, 1).unwrap(), Point::Tree(w("a")));
        assert_eq!(x.point_at(&m, 3).unwrap(), Point::Tree(w("abb")));
    }

    #[test]
    fn extended_products_tree() {
        let m = tree();
        let p = EvalParams::default();
        let e = Point::Tree(Word::identity());
        let v = extended_gromov(&m, &bp("", "a"), &bp("", "b"), &e, &p).unwrap();
        assert_eq!((v.lower, v.upper), (0.0, 0.0));
        let v = extended_gromov(&m, &bp("", "a"), &bp("a", "b"), &e, &p).unwrap();
        assert_eq!((v.lower, v.upper), (1.0, 1.0));
    }

    #[test]
    fn coincident_points_detected() {
        let m = tree();
        let p = EvalParams::default();
        let e = Point::Tree(Word::identity());
        match extended_gromov(&m, &bp("", "a"), &bp("", "aa"), &e, &p) {
            Err(Error::CoincidentBoundaryPoints(_)) => {}
            other => panic!("expected coincidence error, got {other:?}"),
        }
    }

    #[test]
    fn fixed_points_tree() {
        let m = tree();
        let g = m.parse_element("ab").unwrap();
        let (plus, minus) = fixed_points(&m, &g).unwrap();
        assert_eq!(plus.stream_form().unwrap(), (w(""), w("ab")));
        assert_eq!(minus.stream_form().unwrap(), (w(""), w("BA")));
        // conjugate element: power ray normalizes through the conjugator
        let h = m.parse_element("bab A B").unwrap();
        let (hp, _) = fixed_points(&m, &h).unwrap();
        assert_eq!(hp.stream_form().unwrap().0, w("ba"));
    }

    #[test]
    fn fixed_points_plane() {
        let g = Mat2::new(2f64.sqrt(), 0.0, 0.0, 1.0 / 2f64.sqrt()).unwrap();
        let m = ActionModel::upper_half_plane("h", vec![g], 0.75);
        let (plus, minus) = fixed_points(&m, &GroupElement::from_matrix(g)).unwrap();
        assert!(matches!(plus.endpoint(&m).unwrap(), ExtReal::Infinity));
        assert!(minus.endpoint(&m).unwrap().approx_eq(&ExtReal::Finite(0.0), 1e-9));
    }

    #[test]
    fn translate_equivariance() {
        let m = tree();
        let g = m.parse_element("ab").unwrap();
        let eta = m.parse_element("ba").unwrap();
        let (plus, _) = fixed_points(&m, &g).unwrap();
        let moved = plus.translate(&m, &eta).unwrap();
        let conj = eta.mul(&g).mul(&eta.inverse());
        let (cplus, _) = fixed_points(&m, &conj).unwrap();
        assert!(moved.same_point(&m, &cplus).unwrap());
    }

    #[test]
    fn explicit_ray_products_plane() {
        let m = ActionModel::upper_half_plane("h", vec![], 0.75);
        let x = BoundaryPoint::explicit(ExtReal::Finite(1.0));
        let y = BoundaryPoint::explicit(ExtReal::Finite(-1.0));
        let o = m.base.clone();
        let v = extended_gromov(&m, &x, &y, &o, &EvalParams::default()).unwrap();
        // geodesic (-1, 1) passes through i = o, so the product is ~0
        assert!(v.lower >= -0.2 && v.upper <= 0.2 + 1.5, "{v:?}");
        assert!(v.width() <= 2.0 * m.delta() + 1e-12);
    }

    #[test]
    fn limit_set_sample_tree() {
        let m = tree();
        let pts = limit_set_sample(&m, 4, 2, 11).unwrap();
        assert_eq!(pts.len(), 4);
        for i in 0..pts.len() {
            for j in 0..i {
                assert!(!pts[i].same_point(&m, &pts[j]).unwrap());
            }
        }
        let forms: Vec<_> = pts.iter().map(|p| p.stream_form().unwrap()).collect();
        assert!(forms.contains(&(w(""), w("a"))));
        assert!(forms.contains(&(w(""), w("b"))));
    }

    #[test]
    fn product_growth_along_power_tails() {
        // <(eta gamma^n)+, eta gamma+> grows in n when eta gamma+ != gamma-
        let m = tree();
        let gamma = m.parse_element("ab").unwrap();
        let eta = m.parse_element("a").unwrap();
        let e = Point::Tree(Word::identity());
        let (gplus, _) = fixed_points(&m, &gamma).unwrap();
        let target = gplus.translate(&m, &eta).unwrap();
        let mut last = -1.0;
        for n in [4i64, 8, 16, 32] {
            let gn = eta.mul(&gamma.pow(n));
            let (gnp, _) = fixed_points(&m, &gn).unwrap();
            let v = extended_gromov(
                &m,
                &gnp,
                &target,
                &e,
                &EvalParams::default().with_ceiling(1e6),
            )
            .unwrap();
            assert!(v.lower > last, "n={n}: {} !> {last}", v.lower);
            last = v.lower;
        }
    }
}
