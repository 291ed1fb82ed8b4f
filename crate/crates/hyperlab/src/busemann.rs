//! Busemann functions and the rough Busemann cocycle, under both the
//! direct and the inverse convention, with defect meters for the cocycle
//! identity, the product transform, and almost-continuity.

use crate::boundary::{point_boundary_gromov, BoundaryPoint, EvalParams};
use crate::error::{Error, Result};
use crate::interval::IntervalValue;
use crate::spaces::{ActionModel, GroupElement, Point};
use serde::{Deserialize, Serialize};

/// Which group translate defines the cocycle.
///
/// Direct: c(g, x) = B_{o, go}(x). Inverse: c~(g, x) = B_{o, g^-1 o}(x).
/// The inverse convention is the one under which the cocycle identity
/// c(gh, x) = c(g, hx) + c(h, x) is exact on trees; the direct convention
/// instead satisfies c(gh, x) = c(g, x) + c(h, g^-1 x).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CocycleConvention {
    Direct,
    Inverse,
}

impl Default for CocycleConvention {
    fn default() -> Self {
        CocycleConvention::Inverse
    }
}

impl std::str::FromStr for CocycleConvention {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "direct" => Ok(CocycleConvention::Direct),
            "inverse" => Ok(CocycleConvention::Inverse),
            _ => Err(Error::Config(format!("unknown convention {s:?}"))),
        }
    }
}

/// B_{o,p}(x) = 2 <p, x>_o - d(o, p).
pub fn busemann(
    model: &ActionModel,
    o: &Point,
    p: &Point,
    x: &BoundaryPoint,
    params: &EvalParams,
) -> Result<IntervalValue> {
    let prod = point_boundary_gromov(model, p, x, o, params)?;
    Ok(prod.scale(2.0).add_scalar(-model.distance(o, p)?))
}

/// Busemann cocycle at the model base point.
pub fn cocycle(
    model: &ActionModel,
    gamma: &GroupElement,
    x: &BoundaryPoint,
    convention: CocycleConvention,
    params: &EvalParams,
) -> Result<IntervalValue> {
    let o = model.base.clone();
    let p = match convention {
        CocycleConvention::Direct => model.orbit(gamma)?,
        CocycleConvention::Inverse => model.orbit(&gamma.inverse())?,
    };
    busemann(model, &o, &p, x, params)
}

/// Cocycle extended to interior points: c(g, p) = d(o, p) - d(go, p).
/// Exact, no enclosure needed.
pub fn extended_cocycle(model: &ActionModel, gamma: &GroupElement, p: &Point) -> Result<f64> {
    let o = &model.base;
    Ok(model.distance(o, p)? - model.distance(&model.orbit(gamma)?, p)?)
}

/// c(gh, x) - c(g, hx) - c(h, x) under the chosen convention.
pub fn cocycle_identity_defect(
    model: &ActionModel,
    gamma: &GroupElement,
    gamma2: &GroupElement,
    x: &BoundaryPoint,
    convention: CocycleConvention,
    params: &EvalParams,
) -> Result<IntervalValue> {
    let whole = cocycle(model, &gamma.mul(gamma2), x, convention, params)?;
    let moved = x.translate(model, gamma2)?;
    let first = cocycle(model, gamma, &moved, convention, params)?;
    let second = cocycle(model, gamma2, x, convention, params)?;
    Ok(whole.sub(&first).sub(&second))
}

/// c(gh, x) - c(g, x) - c(h, g^-1 x): the identity the direct convention
/// satisfies exactly on trees.
pub fn direct_identity_defect(
    model: &ActionModel,
    gamma: &GroupElement,
    gamma2: &GroupElement,
    x: &BoundaryPoint,
    params: &EvalParams,
) -> Result<IntervalValue> {
    let conv = CocycleConvention::Direct;
    let whole = cocycle(model, &gamma.mul(gamma2), x, conv, params)?;
    let first = cocycle(model, gamma, x, conv, params)?;
    let moved = x.translate(model, &gamma.inverse())?;
    let second = cocycle(model, gamma2, &moved, conv, params)?;
    Ok(whole.sub(&first).sub(&second))
}

#[derive(Debug, Clone, Copy)]
pub struct ProductTransformDefect {
    /// <x,y> - <gx,gy> - c(g,x) - c(g,y), cocycle under the chosen convention.
    pub literal: IntervalValue,
    /// <x,y> - <gx,gy> - (c~(g,x) + c~(g,y)) / 2, always inverse convention;
    /// the variant that vanishes identically on trees.
    pub half_sum: IntervalValue,
}

pub fn product_transform_defect(
    model: &ActionModel,
    gamma: &GroupElement,
    x: &BoundaryPoint,
    y: &BoundaryPoint,
    convention: CocycleConvention,
    params: &EvalParams,
) -> Result<ProductTransformDefect> {
    let o = model.base.clone();
    let xy = crate::boundary::extended_gromov(model, x, y, &o, params)?;
    let gx = x.translate(model, gamma)?;
    let gy = y.translate(model, gamma)?;
    let gxgy = crate::boundary::extended_gromov(model, &gx, &gy, &o, params)?;
    let cx = cocycle(model, gamma, x, convention, params)?;
    let cy = cocycle(model, gamma, y, convention, params)?;
    let literal = xy.sub(&gxgy).sub(&cx).sub(&cy);
    let icx = cocycle(model, gamma, x, CocycleConvention::Inverse, params)?;
    let icy = cocycle(model, gamma, y, CocycleConvention::Inverse, params)?;
    let half_sum = xy.sub(&gxgy).sub(&icx.add(&icy).scale(0.5));
    Ok(ProductTransformDefect { literal, half_sum })
}

/// (running min of c(g, y_i) over the tail of the sequence) - c(g, x),
/// after certifying y_i -> x by growing extended products <y_i, x>.
pub fn continuity_defect(
    model: &ActionModel,
    gamma: &GroupElement,
    ys: &[BoundaryPoint],
    x: &BoundaryPoint,
    convention: CocycleConvention,
    params: &EvalParams,
) -> Result<IntervalValue> {
    if ys.is_empty() {
        return Err(Error::Precondition("empty approximating sequence".into()));
    }
    let o = model.base.clone();
    let mut prev: Option<f64> = None;
    for y in ys {
        let p = if y.same_point(model, x)? {
            f64::INFINITY
        } else {
            crate::boundary::extended_gromov(model, y, x, &o, params)?.lower
        };
        if let Some(q) = prev {
            let both_diverged = q.is_infinite() && p.is_infinite();
            if !(both_diverged || p > q + params.tol) {
                return Err(Error::NotConverging);
            }
        }
        prev = Some(p);
    }
    let tail = &ys[ys.len() / 2..];
    let mut lo = f64::INFINITY;
    let mut hi = f64::INFINITY;
    let mut depth = 0;
    for y in tail {
        let c = cocycle(model, gamma, y, convention, params)?;
        lo = lo.min(c.lower);
        hi = hi.min(c.upper);
        depth = depth.max(c.depth);
    }
    let cx = cocycle(model, gamma, x, convention, params)?;
    Ok(IntervalValue::new(lo.min(hi), hi.max(lo), depth).sub(&cx))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boundary::fixed_points;
    use crate::matrix::ExtReal;
    use crate::spaces::random_reduced_word;
    use crate::word::Word;
    use num_complex::Complex64;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    fn w(s: &str) -> Word {
        Word::parse(s, 2).unwrap()
    }

    fn tree() -> ActionModel {
        ActionModel::free_tree("t", 2)
    }

    fn bp(prefix: &str, period: &str) -> BoundaryPoint {
        BoundaryPoint::stream(&w(prefix), &w(period)).unwrap()
    }

    fn exact(v: &IntervalValue) -> f64 {
        assert_eq!(v.lower, v.upper, "expected zero width: {v:?}");
        v.lower
    }

    #[test]
    fn busemann_tree_values() {
        let m = tree();
        let p = EvalParams::default();
        let a_inf = bp("", "a");
        let v = busemann(&m, &Point::Tree(w("")), &Point::Tree(w("a")), &a_inf, &p).unwrap();
        assert_eq!(exact(&v), 1.0);
        let z = busemann(&m, &Point::Tree(w("")), &Point::Tree(w("")), &a_inf, &p).unwrap();
        assert_eq!(exact(&z), 0.0);
    }

    #[test]
    fn busemann_plane_vertical() {
        // B_{i, p}(oo) = log Im p
        let m = ActionModel::upper_half_plane("h", vec![], 0.75);
        let p = EvalParams::default();
        let inf = BoundaryPoint::explicit(ExtReal::Infinity);
        let o = Point::Plane(Complex64::new(0.0, 1.0));
        let two_i = Point::Plane(Complex64::new(0.0, 2.0));
        let v = busemann(&m, &o, &two_i, &inf, &p).unwrap();
        assert!(v.widen(1e-9).contains(2f64.ln()), "{v:?}");
    }

    #[test]
    fn cocycle_conventions_tree() {
        let m = tree();
        let p = EvalParams::default();
        let a = m.parse_element("a").unwrap();
        let a_inf = bp("", "a");
        let direct = cocycle(&m, &a, &a_inf, CocycleConvention::Direct, &p).unwrap();
        assert_eq!(exact(&direct), 1.0);
        let inverse = cocycle(&m, &a, &a_inf, CocycleConvention::Inverse, &p).unwrap();
        assert_eq!(exact(&inverse), -1.0);
        let id = cocycle(&m, &GroupElement::identity(), &a_inf, CocycleConvention::Direct, &p)
            .unwrap();
        assert_eq!(exact(&id), 0.0);
    }

    #[test]
    fn extended_cocycle_values() {
        let m = tree();
        let a = m.parse_element("a").unwrap();
        assert_eq!(extended_cocycle(&m, &a, &Point::Tree(w("ab"))).unwrap(), 1.0);
        // c(g, o) = -d(go, o)
        let g = m.parse_element("abA").unwrap();
        assert_eq!(extended_cocycle(&m, &g, &Point::Tree(w(""))).unwrap(), -3.0);
    }

    #[test]
    fn extended_cocycle_finite_relation_exact() {
        let m = tree();
        let mut rng = ChaCha20Rng::seed_from_u64(5);
        for _ in 0..300 {
            let g = GroupElement::from_word(random_reduced_word(&mut rng, 2, 6));
            let h = GroupElement::from_word(random_reduced_word(&mut rng, 2, 6));
            let p = m.sample_point(&mut rng, 8.0);
            let lhs = extended_cocycle(&m, &g.mul(&h), &p).unwrap();
            let gp = m.apply(&g.inverse(), &p).unwrap();
            let rhs = extended_cocycle(&m, &g, &p).unwrap() + extended_cocycle(&m, &h, &gp).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn identity_defect_conventions() {
        let m = tree();
        let p = EvalParams::default();
        let a = m.parse_element("a").unwrap();
        let b = m.parse_element("b").unwrap();
        let b_inf = bp("", "b");
        let inv = cocycle_identity_defect(&m, &a, &b, &b_inf, CocycleConvention::Inverse, &p)
            .unwrap();
        assert_eq!(exact(&inv), 0.0);
        let dir = cocycle_identity_defect(&m, &a, &b, &b_inf, CocycleConvention::Direct, &p)
            .unwrap();
        assert_eq!(exact(&dir), -2.0);
        let fixed = direct_identity_defect(&m, &a, &b, &b_inf, &p).unwrap();
        assert_eq!(exact(&fixed), 0.0);
    }

    #[test]
    fn identity_defect_inverse_exact_sampled() {
        let m = tree();
        let p = EvalParams::default();
        let mut rng = ChaCha20Rng::seed_from_u64(17);
        for _ in 0..60 {
            let g = GroupElement::from_word(random_reduced_word(&mut rng, 2, 12));
            let h = GroupElement::from_word(random_reduced_word(&mut rng, 2, 12));
            let prefix = random_reduced_word(&mut rng, 2, 3);
            let mut period = random_reduced_word(&mut rng, 2, 4);
            if period.cyclic_len() == 0 {
                period = w("ab");
            }
            let x = BoundaryPoint::stream(&prefix, &period).unwrap();
            let d = cocycle_identity_defect(&m, &g, &h, &x, CocycleConvention::Inverse, &p)
                .unwrap();
            assert_eq!(exact(&d), 0.0, "g={g} h={h} x={x}");
            let d = direct_identity_defect(&m, &g, &h, &x, &p).unwrap();
            assert_eq!(exact(&d), 0.0, "g={g} h={h} x={x}");
        }
    }

    #[test]
    fn product_transform_tree() {
        let m = tree();
        let p = EvalParams::default();
        let a = m.parse_element("a").unwrap();
        let x = bp("", "a");
        let y = bp("", "b");
        let d = product_transform_defect(&m, &a, &x, &y, CocycleConvention::Direct, &p).unwrap();
        assert_eq!(exact(&d.half_sum), 0.0);
        assert_eq!(exact(&d.literal), -1.0);
    }

    #[test]
    fn half_sum_exact_sampled_tree() {
        let m = tree();
        let p = EvalParams::default();
        let mut rng = ChaCha20Rng::seed_from_u64(23);
        for _ in 0..40 {
            let g = GroupElement::from_word(random_reduced_word(&mut rng, 2, 8));
            let x = bp("", "a");
            let y = bp("b", "a");
            let d = product_transform_defect(&m, &g, &x, &y, CocycleConvention::Inverse, &p)
                .unwrap();
            assert_eq!(exact(&d.half_sum), 0.0, "g={g}");
        }
    }

    #[test]
    fn half_sum_bounded_plane() {
        let g = crate::matrix::Mat2::new(2.0, 0.0, 0.0, 0.5).unwrap();
        let m = ActionModel::upper_half_plane("h", vec![g], 0.75);
        let p = EvalParams::default();
        let gamma = GroupElement::from_matrix(g);
        let x = BoundaryPoint::explicit(ExtReal::Finite(1.0));
        let y = BoundaryPoint::explicit(ExtReal::Finite(-2.0));
        let d = product_transform_defect(&m, &gamma, &x, &y, CocycleConvention::Inverse, &p)
            .unwrap();
        let bound = 4.0 * m.delta() + d.half_sum.width();
        let mid = d.half_sum.midpoint().abs();
        assert!(mid <= bound, "defect {mid} vs bound {bound}");
    }

    #[test]
    fn continuity_defect_tree() {
        let m = tree();
        let p = EvalParams::default();
        let a = m.parse_element("a").unwrap();
        let x = bp("", "a");
        let ys: Vec<BoundaryPoint> = (1..=6).map(|i| bp(&"a".repeat(i), "b")).collect();
        let d = continuity_defect(&m, &a, &ys, &x, CocycleConvention::Inverse, &p).unwrap();
        assert_eq!(exact(&d), 0.0);
        // constant sequence equal to x
        let consts = vec![x.clone(), x.clone(), x.clone()];
        let d = continuity_defect(&m, &a, &consts, &x, CocycleConvention::Inverse, &p).unwrap();
        assert_eq!(exact(&d), 0.0);
        // sequence stuck away from x
        let stuck = vec![bp("", "b"), bp("", "b"), bp("", "b")];
        match continuity_defect(&m, &a, &stuck, &x, CocycleConvention::Inverse, &p) {
            Err(Error::NotConverging) => {}
            other => panic!("expected NotConverging, got {other:?}"),
        }
    }

    #[test]
    fn fixed_point_cocycle_signs() {
        // c(g, g+) = l(g), c(g, g-) = -l(g) under the direct convention
        let m = tree();
        let p = EvalParams::default();
        let g = m.parse_element("ab").unwrap();
        let (plus, minus) = fixed_points(&m, &g).unwrap();
        let cp = cocycle(&m, &g, &plus, CocycleConvention::Direct, &p).unwrap();
        assert_eq!(exact(&cp), 2.0);
        let cm = cocycle(&m, &g, &minus, CocycleConvention::Direct, &p).unwrap();
        assert_eq!(exact(&cm), -2.0);
    }
}
