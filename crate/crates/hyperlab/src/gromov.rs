//! Gromov products, hyperbolicity estimation by the pinned four-point
//! condition, rough cross-ratios, and rough-geodesic defect meters.

use crate::boundary::{window_min, BoundaryPoint, EvalParams};
use crate::error::{Error, Result};
use crate::interval::IntervalValue;
use crate::spaces::{ActionModel, Point};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

/// <p, q>_o = (d(p,o) + d(q,o) - d(p,q)) / 2.
pub fn gromov_product(model: &ActionModel, p: &Point, q: &Point, o: &Point) -> Result<f64> {
    let dp = model.distance(o, p)?;
    let dq = model.distance(o, q)?;
    let dpq = model.distance(p, q)?;
    Ok(0.5 * (dp + dq - dpq))
}

/// min(<p,r>_o, <r,q>_o) - <p,q>_o.
pub fn four_point_defect(
    model: &ActionModel,
    o: &Point,
    p: &Point,
    q: &Point,
    r: &Point,
) -> Result<f64> {
    let pr = gromov_product(model, p, r, o)?;
    let rq = gromov_product(model, r, q, o)?;
    let pq = gromov_product(model, p, q, o)?;
    Ok(pr.min(rq) - pq)
}

#[derive(Debug, Clone)]
pub struct DeltaEstimate {
    /// Max observed four-point defect, clamped at 0.
    pub value: f64,
    pub sample_size: usize,
    /// (o, p, q, r) achieving the max defect.
    pub witness: [Point; 4],
}

impl DeltaEstimate {
    /// The space is certified (by the sample) to violate delta-thinness by
    /// at most `value` at the pinned basepoint; the four-point condition
    /// with a free basepoint then holds with twice that.
    pub fn doubled(&self) -> f64 {
        2.0 * self.value
    }
}

/// Estimate delta by sampling triples against the pinned base point.
///
/// Sampling has the prefix property: the first n draws of a larger run
/// equal an n-sized run with the same seed, so the estimate is monotone
/// non-decreasing in the sample size.
pub fn delta_estimate(
    model: &ActionModel,
    radius: f64,
    count: usize,
    seed: u64,
) -> Result<DeltaEstimate> {
    if count == 0 {
        return Err(Error::Config("delta estimate needs count >= 1".into()));
    }
    if radius <= 0.0 {
        return Err(Error::Config("empty sampling region".into()));
    }
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let o = model.base.clone();
    let mut best = 0.0f64;
    let mut witness = [o.clone(), o.clone(), o.clone(), o.clone()];
    for _ in 0..count {
        let p = model.sample_point(&mut rng, radius);
        let q = model.sample_point(&mut rng, radius);
        let r = model.sample_point(&mut rng, radius);
        let d = four_point_defect(model, &o, &p, &q, &r)?;
        if d > best {
            best = d;
            witness = [o.clone(), p.clone(), q.clone(), r.clone()];
        }
    }
    Ok(DeltaEstimate { value: best, sample_size: count, witness })
}

/// Rough cross-ratio (x,y;z,w)_o = <x,y> + <z,w> - <z,y> - <x,w>.
///
/// All four extended products are evaluated at one shared truncation depth
/// so their errors correlate; the enclosure width is at most 8 delta.
pub fn cross_ratio(
    model: &ActionModel,
    x: &BoundaryPoint,
    y: &BoundaryPoint,
    z: &BoundaryPoint,
    w: &BoundaryPoint,
    o: &Point,
    params: &EvalParams,
) -> Result<IntervalValue> {
    let pts = [x, y, z, w];
    let names = ["x", "y", "z", "w"];
    for i in 0..4 {
        for j in 0..i {
            if pts[i].same_point(model, pts[j])? {
                return Err(Error::NotPairwiseDistinct(format!(
                    "{} = {}",
                    names[j], names[i]
                )));
            }
        }
    }
    // find a depth at which every pair product has stabilized
    let pairs = [(x, y), (z, w), (z, y), (x, w)];
    let mut depth = params.initial_depth.max(2);
    let ceiling = params
        .divergence_ceiling
        .unwrap_or(1e3 + 2.0 * model.delta());
    let mut prev: Option<[f64; 4]> = None;
    let vals = loop {
        let mut cur = [0.0f64; 4];
        for (k, (a, b)) in pairs.iter().enumerate() {
            cur[k] = window_min(model, a, b, o, depth, params)?;
            if cur[k] > ceiling {
                return Err(Error::CoincidentBoundaryPoints(ceiling));
            }
        }
        let done = prev.map_or(false, |p| {
            (0..4).all(|k| (cur[k] - p[k]).abs() < params.tol)
        }) || depth >= params.depth_ceiling;
        if done {
            break cur;
        }
        prev = Some(cur);
        depth = depth.saturating_mul(2).min(params.depth_ceiling);
    };
    let d = 2.0 * model.delta();
    let iv = |m: f64| IntervalValue::new(m, m + d, depth);
    Ok(iv(vals[0]).add(&iv(vals[1])).sub(&iv(vals[2])).sub(&iv(vals[3])))
}

/// A discrete path claimed to be a rough geodesic with constant `c`.
#[derive(Debug, Clone)]
pub struct RoughGeodesic {
    pub grid: Vec<f64>,
    pub points: Vec<Point>,
    pub c: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct RoughGeodesicDefect {
    /// Max over t1 < t2 < t3 of the product of the endpoints at the midpoint.
    pub product_max: f64,
    /// Max over t1 < t2 of |t2 - t1| minus the product of the later points
    /// at the first.
    pub gap_max: f64,
    /// 1.5 * c, the expected ceiling for both maxima.
    pub bound: f64,
}

pub fn rough_geodesic_defect(model: &ActionModel, tau: &RoughGeodesic) -> Result<RoughGeodesicDefect> {
    let n = tau.grid.len();
    if n < 3 || tau.points.len() != n {
        return Err(Error::Precondition("rough geodesic needs >= 3 grid points".into()));
    }
    if tau.grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Precondition("grid must be strictly increasing".into()));
    }
    let mut product_max = f64::NEG_INFINITY;
    let mut gap_max = f64::NEG_INFINITY;
    for i in 0..n {
        for j in (i + 1)..n {
            for k in (j + 1)..n {
                let p = gromov_product(model, &tau.points[i], &tau.points[k], &tau.points[j])?;
                product_max = product_max.max(p);
                let g = gromov_product(model, &tau.points[j], &tau.points[k], &tau.points[i])?;
                gap_max = gap_max.max((tau.grid[j] - tau.grid[i]) - g);
            }
        }
    }
    Ok(RoughGeodesicDefect { product_max, gap_max, bound: 1.5 * tau.c })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boundary::BoundaryPoint;
    use crate::word::Word;
    use num_complex::Complex64;

    fn w(s: &str) -> Word {
        Word::parse(s, 2).unwrap()
    }

    fn tp(s: &str) -> Point {
        Point::Tree(w(s))
    }

    fn tree() -> ActionModel {
        ActionModel::free_tree("t", 2)
    }

    #[test]
    fn products_exact_on_tree() {
        let m = tree();
        let e = tp("");
        assert_eq!(gromov_product(&m, &tp("ab"), &tp("ba"), &e).unwrap(), 0.0);
        assert_eq!(gromov_product(&m, &tp("abab"), &tp("ab"), &e).unwrap(), 2.0);
        // <p,p>_o = d(p,o)
        assert_eq!(gromov_product(&m, &tp("abab"), &tp("abab"), &e).unwrap(), 4.0);
    }

    #[test]
    fn product_symmetric_bounded() {
        let m = tree();
        let e = tp("");
        let (p, q) = (tp("aab"), tp("ba"));
        let v = gromov_product(&m, &p, &q, &e).unwrap();
        assert_eq!(v, gromov_product(&m, &q, &p, &e).unwrap());
        assert!(v >= 0.0);
        assert!(v <= m.distance(&p, &e).unwrap().min(m.distance(&q, &e).unwrap()));
    }

    #[test]
    fn tree_four_point_exhaustive_zero() {
        let m = tree();
        let ball = m.ball_enumerate(4).unwrap();
        let pts: Vec<Point> = ball.iter().map(|g| Point::Tree(g.word().unwrap().clone())).collect();
        let o = tp("");
        // exhaustive triples is 161^3; sample a deterministic stride instead
        for (i, p) in pts.iter().enumerate().step_by(3) {
            for (j, q) in pts.iter().enumerate().step_by(5) {
                for r in pts.iter().skip((i + j) % 7).step_by(7) {
                    assert!(four_point_defect(&m, &o, p, q, r).unwrap() <= 0.0);
                }
            }
        }
    }

    #[test]
    fn tree_delta_estimate_zero() {
        let m = tree();
        let est = delta_estimate(&m, 6.0, 2000, 42).unwrap();
        assert_eq!(est.value, 0.0);
        assert_eq!(est.sample_size, 2000);
    }

    #[test]
    fn plane_delta_estimate_in_range() {
        let m = ActionModel::upper_half_plane("h", vec![], 0.0);
        let est = delta_estimate(&m, 5.0, 20_000, 42).unwrap();
        assert!(est.value > 0.0 && est.value <= 2.0, "{}", est.value);
        assert!(est.doubled() == 2.0 * est.value);
    }

    #[test]
    fn delta_estimate_monotone_in_sample_size() {
        let m = ActionModel::upper_half_plane("h", vec![], 0.0);
        let small = delta_estimate(&m, 5.0, 2000, 7).unwrap();
        let large = delta_estimate(&m, 5.0, 4000, 7).unwrap();
        assert!(large.value >= small.value);
    }

    #[test]
    fn degenerate_sample_zero_defect() {
        let m = tree();
        let o = tp("");
        let p = tp("ab");
        assert_eq!(four_point_defect(&m, &o, &p, &p, &p).unwrap(), 0.0);
    }

    #[test]
    fn cross_ratio_tree_oracle() {
        let m = tree();
        let params = EvalParams::default();
        let x = BoundaryPoint::stream(&w(""), &w("a")).unwrap();
        let y = BoundaryPoint::stream(&w(""), &w("b")).unwrap();
        let z = BoundaryPoint::stream(&w("a"), &w("b")).unwrap();
        let v = BoundaryPoint::stream(&w("aa"), &w("b")).unwrap();
        let e = tp("");
        let cr = cross_ratio(&m, &x, &y, &z, &v, &e, &params).unwrap();
        assert_eq!((cr.lower, cr.upper), (-1.0, -1.0));
        // exact basepoint invariance on trees
        let cr2 = cross_ratio(&m, &x, &y, &z, &v, &tp("a"), &params).unwrap();
        assert_eq!((cr2.lower, cr2.upper), (-1.0, -1.0));
    }

    #[test]
    fn cross_ratio_antisymmetry() {
        let m = tree();
        let params = EvalParams::default();
        let x = BoundaryPoint::stream(&w(""), &w("a")).unwrap();
        let y = BoundaryPoint::stream(&w(""), &w("b")).unwrap();
        let z = BoundaryPoint::stream(&w("a"), &w("b")).unwrap();
        let v = BoundaryPoint::stream(&w("aa"), &w("b")).unwrap();
        let e = tp("");
        let c1 = cross_ratio(&m, &x, &y, &z, &v, &e, &params).unwrap();
        assert_eq!(c1.midpoint(), -1.0);
        let c2 = cross_ratio(&m, &z, &y, &x, &v, &e, &params).unwrap();
        assert_eq!(c1.midpoint() + c2.midpoint(), 0.0);
        // and the exact symmetry (x,y;z,w) = (y,x;w,z)
        let c3 = cross_ratio(&m, &y, &x, &v, &z, &e, &params).unwrap();
        assert_eq!(c1.midpoint(), c3.midpoint());
    }

    #[test]
    fn cross_ratio_rejects_coincident() {
        let m = tree();
        let params = EvalParams::default();
        let x = BoundaryPoint::stream(&w(""), &w("a")).unwrap();
        let x2 = BoundaryPoint::stream(&w(""), &w("aa")).unwrap();
        let y = BoundaryPoint::stream(&w(""), &w("b")).unwrap();
        let z = BoundaryPoint::stream(&w("a"), &w("b")).unwrap();
        match cross_ratio(&m, &x, &y, &z, &x2, &tp(""), &params) {
            Err(Error::NotPairwiseDistinct(_)) => {}
            other => panic!("expected distinctness error, got {other:?}"),
        }
    }

    #[test]
    fn cross_ratio_basepoint_overlap_plane() {
        let m = ActionModel::upper_half_plane("h", vec![], 0.75);
        let params = EvalParams::default();
        use crate::matrix::ExtReal;
        let x = BoundaryPoint::explicit(ExtReal::Finite(0.0));
        let y = BoundaryPoint::explicit(ExtReal::Finite(2.0));
        let z = BoundaryPoint::explicit(ExtReal::Finite(-3.0));
        let v = BoundaryPoint::explicit(ExtReal::Infinity);
        let o1 = Point::Plane(Complex64::new(0.0, 1.0));
        let o2 = Point::Plane(Complex64::new(1.0, 3.0));
        let c1 = cross_ratio(&m, &x, &y, &z, &v, &o1, &params).unwrap();
        let c2 = cross_ratio(&m, &x, &y, &z, &v, &o2, &params).unwrap();
        assert!(c1.widen(16.0 * m.delta()).overlaps(&c2.widen(16.0 * m.delta())));
    }

    #[test]
    fn tree_geodesic_defects_zero() {
        let m = tree();
        let tau = RoughGeodesic {
            grid: vec![0.0, 1.0, 2.0, 3.0],
            points: vec![tp(""), tp("a"), tp("ab"), tp("aba")],
            c: 0.0,
        };
        let d = rough_geodesic_defect(&m, &tau).unwrap();
        assert_eq!(d.product_max, 0.0);
        assert_eq!(d.gap_max, 0.0);
        assert_eq!(d.bound, 0.0);
    }

    #[test]
    fn geodesic_grid_validation() {
        let m = tree();
        let bad = RoughGeodesic {
            grid: vec![0.0, 2.0, 1.0],
            points: vec![tp(""), tp("a"), tp("ab")],
            c: 0.0,
        };
        assert!(rough_geodesic_defect(&m, &bad).is_err());
        let short = RoughGeodesic { grid: vec![0.0, 1.0], points: vec![tp(""), tp("a")], c: 0.0 };
        assert!(rough_geodesic_defect(&m, &short).is_err());
    }
}
