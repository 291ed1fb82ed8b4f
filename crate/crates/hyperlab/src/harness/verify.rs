//! The bundled verification suite: eleven numbered criteria exercising
//! every experiment family, each reduced to one pass/fail report row whose
//! verdict is re-checkable from the recorded numbers.

use super::report::{Report, ReportRow};
use super::stream;
use crate::boundary::{fixed_points, limit_set_sample, BoundaryPoint, EvalParams};
use crate::busemann::{busemann, cocycle_identity_defect, CocycleConvention};
use crate::error::{Error, Result};
use crate::filling::{
    barycenter_descent, coset_relation_defect, embedding_check, gromov_comparison,
    line_extension_witnesses, MetricInstance,
};
use crate::gromov::{cross_ratio, delta_estimate, four_point_defect};
use crate::matrix::Mat2;
use crate::rigidsets::{
    build_e_phi, build_e_prime, choose_theta, rigidity_probe, sparsity_check, BuildConfig,
    BudgetFunction,
};
use crate::spaces::{random_reduced_word, ActionModel, GroupElement, Point};
use crate::spectrum::{
    main_relation_defect, mls_compare, stable_length_defect, translation_length,
    translation_length_auto, LengthMethod,
};
use crate::word::Word;
use num_complex::Complex64;
use rand::Rng;
use std::f64::consts::FRAC_1_SQRT_2;
use std::time::Instant;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Profile {
    Quick,
    Full,
}

const SEED: u64 = 0x5eed;

fn tree() -> ActionModel {
    ActionModel::free_tree("tree", 2)
}

fn plane_pair() -> (ActionModel, ActionModel, Mat2, Mat2) {
    let g = Mat2::new(2f64.sqrt(), 0.0, 0.0, FRAC_1_SQRT_2).unwrap();
    let m = Mat2::new(
        3.0 * FRAC_1_SQRT_2,
        FRAC_1_SQRT_2,
        FRAC_1_SQRT_2,
        FRAC_1_SQRT_2,
    )
    .unwrap();
    let g2 = m.mul(&g).mul(&m.inverse());
    let a = ActionModel::upper_half_plane("plane", vec![g, g2], 0.75);
    let ga = m.mul(&g).mul(&m.inverse());
    let gb = m.mul(&g2).mul(&m.inverse());
    let b = ActionModel::upper_half_plane("plane-conj", vec![ga, gb], 0.75);
    (a, b, g, g2)
}

/// Random reduced rank-2 word with length drawn from [lo, hi).
fn rw<R: Rng>(rng: &mut R, lo: usize, hi: usize) -> Word {
    let len = rng.gen_range(lo..hi);
    random_reduced_word(rng, 2, len)
}

fn random_stream<R: Rng>(rng: &mut R) -> Result<BoundaryPoint> {
    loop {
        let prefix = rw(rng, 0, 4);
        let period = rw(rng, 1, 4);
        if let Ok(b) = BoundaryPoint::stream(&prefix, &period) {
            return Ok(b);
        }
    }
}

fn row(name: &str, detail: String, worst: f64, bound: f64, pass: bool) -> ReportRow {
    let mut r = ReportRow::new(name, "verify", detail).scalar(worst);
    r.bound = Some(bound);
    r.margin = Some(bound - worst.abs());
    r.verdict(pass)
}

/// Criterion 1: the cocycle identity is exact on the tree across random
/// triples (gamma, gamma', xi), in under five seconds.
fn criterion_cocycle_identity(profile: Profile) -> Result<ReportRow> {
    let t0 = Instant::now();
    let m = tree();
    let params = EvalParams::default();
    let n = match profile {
        Profile::Quick => 200,
        Profile::Full => 1000,
    };
    let mut rng = stream(SEED, "cocycle-identity");
    let mut worst = 0.0f64;
    let mut checked = 0;
    while checked < n {
        let g = GroupElement::from_word(rw(&mut rng, 1, 6));
        let h = GroupElement::from_word(rw(&mut rng, 1, 6));
        let x = random_stream(&mut rng)?;
        match cocycle_identity_defect(&m, &g, &h, &x, CocycleConvention::Inverse, &params) {
            Ok(d) => {
                worst = worst.max(d.midpoint().abs()).max(d.width());
                checked += 1;
            }
            Err(Error::CoincidentBoundaryPoints(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    let secs = t0.elapsed().as_secs_f64();
    let pass = worst == 0.0 && secs < 5.0;
    Ok(row(
        "1-cocycle-identity",
        format!("{n} tree triples, max |defect| = {worst}, {secs:.2}s"),
        worst,
        0.0,
        pass,
    ))
}

/// Criterion 2: stable length c(gamma, gamma+-) recovers +-l(gamma),
/// exactly on the tree and within enclosures on the plane.
fn criterion_stable_length(_profile: Profile) -> Result<ReportRow> {
    let m = tree();
    let params = EvalParams::default();
    let mut worst = 0.0f64;
    for w in ["ab", "aab", "bAbA", "abAB"] {
        let g = m.parse_element(w)?;
        let d = stable_length_defect(&m, &g, CocycleConvention::Inverse, &params)?;
        worst = worst
            .max(d.plus.midpoint().abs())
            .max(d.minus.midpoint().abs())
            .max(d.plus.width())
            .max(d.minus.width());
    }
    let tree_exact = worst == 0.0;
    let (h, _, g1, g2) = plane_pair();
    let mut plane_worst = 0.0f64;
    for mat in [g1, g1.mul(&g2), g2.mul(&g1).mul(&g2)] {
        let d = stable_length_defect(
            &h,
            &GroupElement::from_matrix(mat),
            CocycleConvention::Inverse,
            &params,
        )?;
        for v in [&d.plus, &d.minus] {
            plane_worst = plane_worst.max(v.midpoint().abs() - v.width());
        }
    }
    let plane_ok = plane_worst <= 1e-3;
    Ok(row(
        "2-stable-length",
        format!("tree max defect {worst}; plane enclosure gap {plane_worst:.2e}"),
        worst.max(plane_worst),
        1e-3,
        tree_exact && plane_ok,
    ))
}

/// Criterion 3: the corrected main relation vanishes on 200 random tree
/// triples and the frozen families, and at least one literal form exceeds
/// its 12-delta bound; under ten seconds.
fn criterion_main_relation(profile: Profile) -> Result<ReportRow> {
    let t0 = Instant::now();
    let m = tree();
    let params = EvalParams::default();
    let n = match profile {
        Profile::Quick => 50,
        Profile::Full => 200,
    };
    let mut rng = stream(SEED, "main-relation");
    let mut worst = 0.0f64;
    let mut checked = 0;
    while checked < n {
        let eta = GroupElement::from_word(rw(&mut rng, 1, 5));
        let gamma = GroupElement::from_word(rw(&mut rng, 1, 5));
        let k = rng.gen_range(2..7);
        match main_relation_defect(&m, &eta, &gamma, k, CocycleConvention::Inverse, &params) {
            Ok(d) => {
                worst = worst.max(d.corrected.midpoint().abs()).max(d.corrected.width());
                checked += 1;
            }
            Err(Error::NoAxis)
            | Err(Error::Precondition(_))
            | Err(Error::CoincidentBoundaryPoints(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    // frozen families: (eta, gamma, n, l(eta gamma^n))
    for (eta, gamma, n, len) in [("a", "ab", 5, 11.0), ("b", "a", 5, 6.0), ("AB", "a", 5, 5.0)] {
        let d = main_relation_defect(
            &m,
            &m.parse_element(eta)?,
            &m.parse_element(gamma)?,
            n,
            CocycleConvention::Inverse,
            &params,
        )?;
        worst = worst.max(d.corrected.midpoint().abs());
        if d.length_whole.value.midpoint() != len {
            return Ok(row(
                "3-main-relation",
                format!("family l({eta}.{gamma}^{n}) = {} != {len}", d.length_whole.value.midpoint()),
                worst,
                0.0,
                false,
            ));
        }
    }
    // literal form under the direct convention misses by 2 for (b, a, 5):
    // the bound |<g+,g-> - <eta g+, g->| + 12 delta is 0 on the tree
    let lit = main_relation_defect(
        &m,
        &m.parse_element("b")?,
        &m.parse_element("a")?,
        5,
        CocycleConvention::Direct,
        &params,
    )?;
    let literal_exceeds = lit.literal.midpoint().abs() > lit.literal_bound;
    let secs = t0.elapsed().as_secs_f64();
    Ok(row(
        "3-main-relation",
        format!(
            "{n} triples + 3 families, max |corrected| = {worst}; literal {} > bound {}; {secs:.2}s",
            lit.literal.midpoint(),
            lit.literal_bound
        ),
        worst,
        0.0,
        worst == 0.0 && literal_exceeds && secs < 10.0,
    ))
}

/// Criterion 4: the power-difference length estimate agrees with the trace
/// formula on random hyperbolic matrices, and the Busemann function toward
/// infinity recovers log Im.
fn criterion_power_difference(profile: Profile) -> Result<ReportRow> {
    let (h, _, g1, g2) = plane_pair();
    let n = match profile {
        Profile::Quick => 10,
        Profile::Full => 50,
    };
    let mut rng = stream(SEED, "power-difference");
    let mut worst = 0.0f64;
    let mut checked = 0;
    while checked < n {
        let mut mat = Mat2::identity();
        for _ in 0..rng.gen_range(1..5) {
            mat = mat.mul(if rng.gen_bool(0.5) { &g1 } else { &g2 });
        }
        if mat.trace().abs() <= 2.0 + 1e-6 {
            continue;
        }
        let g = GroupElement::from_matrix(mat);
        let trace = translation_length(&h, &g, LengthMethod::Trace)?.value.midpoint();
        let pd = translation_length(&h, &g, LengthMethod::PowerDifference(1 << 10))?.value;
        let gap = (pd.midpoint() - trace).abs();
        worst = worst.max(gap);
        checked += 1;
    }
    let mut buse_worst = 0.0f64;
    let params = EvalParams::default();
    let inf = BoundaryPoint::explicit(crate::matrix::ExtReal::Infinity);
    for _ in 0..10 {
        let p = Point::Plane(Complex64::new(
            rng.gen_range(-3.0..3.0),
            rng.gen_range(0.2..5.0),
        ));
        // the enclosure's lower end is the converged window value
        let b = busemann(&h, &h.base, &p, &inf, &params)?;
        buse_worst = buse_worst.max((b.lower - p.plane()?.im.ln()).abs());
    }
    Ok(row(
        "4-power-difference",
        format!("{n} matrices, max |pd - trace| = {worst:.2e}; busemann(inf) gap {buse_worst:.2e}"),
        worst.max(buse_worst),
        1e-2,
        worst <= 1e-2 && buse_worst <= 1e-3,
    ))
}

/// Criterion 5: the exhaustive pinned four-point defect is 0 on the tree
/// ball, and the plane estimate lands in (0, 2] and grows monotonically
/// with the sample count.
fn criterion_delta(profile: Profile) -> Result<ReportRow> {
    let m = tree();
    let radius = match profile {
        Profile::Quick => 3u32,
        Profile::Full => 4,
    };
    let ball: Vec<Point> = crate::spaces::enumerate_free_ball(2, radius, 1 << 22)?
        .into_iter()
        .map(Point::Tree)
        .collect();
    let o = Point::Tree(Word::identity());
    let mut tree_max = f64::NEG_INFINITY;
    for p in &ball {
        for q in &ball {
            for r in &ball {
                tree_max = tree_max.max(four_point_defect(&m, &o, p, q, r)?);
            }
        }
    }
    let (h, _, _, _) = plane_pair();
    let count = match profile {
        Profile::Quick => 20_000,
        Profile::Full => 100_000,
    };
    let est_half = delta_estimate(&h, 6.0, count / 2, SEED)?;
    let est = delta_estimate(&h, 6.0, count, SEED)?;
    let plane_ok =
        est.value > 0.0 && est.value <= 2.0 && est.value >= est_half.value;
    Ok(row(
        "5-delta-estimate",
        format!(
            "tree radius-{radius} exhaustive max = {tree_max}; plane delta {:.4} (half-sample {:.4})",
            est.value, est_half.value
        ),
        tree_max.max(est.value),
        2.0,
        tree_max <= 0.0 && plane_ok,
    ))
}

/// Criterion 6: cross-ratios do not depend on the basepoint: exactly on
/// the tree, within 16 delta on the plane.
fn criterion_cross_ratio(profile: Profile) -> Result<ReportRow> {
    let m = tree();
    let params = EvalParams::default();
    let n = match profile {
        Profile::Quick => 200,
        Profile::Full => 1000,
    };
    let mut rng = stream(SEED, "cross-ratio");
    let mut worst = 0.0f64;
    let mut checked = 0;
    while checked < n {
        let pts: Vec<BoundaryPoint> = (0..4)
            .map(|_| random_stream(&mut rng))
            .collect::<Result<_>>()?;
        let o2 = Point::Tree(rw(&mut rng, 1, 4));
        let at_e = cross_ratio(&m, &pts[0], &pts[1], &pts[2], &pts[3], &m.base, &params);
        let at_o = cross_ratio(&m, &pts[0], &pts[1], &pts[2], &pts[3], &o2, &params);
        match (at_e, at_o) {
            (Ok(a), Ok(b)) => {
                worst = worst.max((a.midpoint() - b.midpoint()).abs());
                checked += 1;
            }
            (Err(Error::NotPairwiseDistinct(_)), _)
            | (_, Err(Error::NotPairwiseDistinct(_)))
            | (Err(Error::CoincidentBoundaryPoints(_)), _)
            | (_, Err(Error::CoincidentBoundaryPoints(_))) => continue,
            (Err(e), _) | (_, Err(e)) => return Err(e),
        }
    }
    let (h, _, g1, g2) = plane_pair();
    let a1 = GroupElement::from_matrix(g1);
    let a2 = GroupElement::from_matrix(g2);
    let four = [
        fixed_points(&h, &a1)?.0,
        fixed_points(&h, &a1)?.1,
        fixed_points(&h, &a2)?.0,
        fixed_points(&h, &a2)?.1,
    ];
    let o2 = Point::Plane(Complex64::new(0.5, 2.0));
    let ca = cross_ratio(&h, &four[0], &four[1], &four[2], &four[3], &h.base, &params)?;
    let cb = cross_ratio(&h, &four[0], &four[1], &four[2], &four[3], &o2, &params)?;
    let widened = ca.widen(16.0 * h.delta());
    let plane_ok = widened.overlaps(&cb.widen(16.0 * h.delta()));
    Ok(row(
        "6-cross-ratio",
        format!("{n} tree samples, max basepoint gap {worst}; plane overlap {plane_ok}"),
        worst,
        0.0,
        worst == 0.0 && plane_ok,
    ))
}

/// Criterion 7: the witness metric reproduces tree distances exactly up to
/// 10^3, and stays inside the embedding bounds on the plane with K = 101.
fn criterion_filling_metric(profile: Profile) -> Result<ReportRow> {
    let m = tree();
    let params = EvalParams::default().with_ceiling(1e6);
    let n = match profile {
        Profile::Quick => 20,
        Profile::Full => 100,
    };
    let mut rng = stream(SEED, "filling-metric");
    let mut worst = 0.0f64;
    for _ in 0..n {
        let p = Point::Tree(rw(&mut rng, 0, 500));
        let q = loop {
            let q = Point::Tree(rw(&mut rng, 1, 500));
            if q != p {
                break q;
            }
        };
        let rep = embedding_check(&m, &p, &q, 101.0, &params)?;
        worst = worst.max((rep.rho.midpoint() - rep.distance).abs());
        if !rep.pass {
            return Ok(row("7-filling-metric", format!("tree pair failed: {rep:?}"), worst, 0.0, false));
        }
    }
    let (h, _, _, _) = plane_pair();
    let mut plane_ok = true;
    for _ in 0..5 {
        let p = Point::Plane(Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(0.5..3.0)));
        let q = Point::Plane(Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(0.5..3.0)));
        if h.distance(&p, &q)? < 0.1 {
            continue;
        }
        plane_ok &= embedding_check(&h, &p, &q, 101.0, &params)?.pass;
    }
    Ok(row(
        "7-filling-metric",
        format!("{n} tree pairs, max |rho - d| = {worst}; plane bounds hold: {plane_ok}"),
        worst,
        0.0,
        worst == 0.0 && plane_ok,
    ))
}

/// Criterion 8: barycenter descent from distance 10^5 stops inside the
/// stopping radius with strictly decreasing estimates and a bounded step
/// count, in under ten seconds.
fn criterion_descent(profile: Profile) -> Result<ReportRow> {
    let t0 = Instant::now();
    let m = tree();
    let k = 101.0;
    let half_dist = match profile {
        Profile::Quick => 10_000usize,
        Profile::Full => 50_000,
    };
    let start_word = Word::parse(&"ab".repeat(half_dist), 2)?;
    let start = Point::Tree(start_word);
    let r = Point::Tree(Word::identity());
    let (w1, w2) = line_extension_witnesses(&m, &start, &r)?;
    let target = MetricInstance::new(&m, r, vec![w1, w2], k)?;
    let params = EvalParams::default().with_ceiling(1e12).with_depth(64, 1 << 22);
    // the literal stopping radius 1000K already contains the start for the
    // quick profile scale; always also exercise movement with an override
    let literal = barycenter_descent(&target, start.clone(), k, 100, &params, None)?;
    let stop = 6000.0;
    let trace = barycenter_descent(&target, start, k, 100, &params, Some(stop))?;
    let d0 = 2.0 * half_dist as f64;
    let step_bound = (2.0 * d0 / (50.0 * k)).ceil() as usize + 2;
    let secs = t0.elapsed().as_secs_f64();
    let pass = literal.converged
        && trace.converged
        && trace.non_decreasing_steps.is_empty()
        && trace.steps.len() <= step_bound
        && secs < 10.0;
    Ok(row(
        "8-descent",
        format!(
            "from d = {d0}: literal stop at rho = {:.1} after {} steps; override stop {stop} reached in {} steps (bound {step_bound}), strictly decreasing; {secs:.2}s",
            literal.final_rho.midpoint(),
            literal.steps.len(),
            trace.steps.len()
        ),
        trace.final_rho.midpoint(),
        stop,
        pass,
    ))
}

/// Criterion 9: the built sets respect the ceil-sqrt growth budget up to
/// T = 10^4, and the primary-element set contains only primary elements.
fn criterion_sparsity(_profile: Profile) -> Result<ReportRow> {
    let m = tree();
    let cfg = BuildConfig { radius: 1, per_eta: 2, ..BuildConfig::default() };
    let gamma = m.parse_element("ab")?;
    let theta = choose_theta(&m, &gamma)?;
    let set = build_e_phi(&m, &gamma, &theta, &cfg)?;
    let sp = sparsity_check(&set, &m, &BudgetFunction::Sqrt)?;
    let mut lengths: Vec<f64> = Vec::new();
    for (g, _) in &set.members {
        lengths.push(translation_length_auto(&m, g)?.value.midpoint());
    }
    let mut grid_ok = true;
    let mut t = 1.0f64;
    while t <= 1e4 {
        let count = lengths.iter().filter(|&&l| l <= t).count() as f64;
        grid_ok &= count <= t.sqrt().ceil();
        t *= 10.0;
    }
    let prime = build_e_prime(&m, &BuildConfig { radius: 1, per_eta: 1, ..BuildConfig::default() })?;
    let mut primary_ok = !prime.members.is_empty();
    for (g, _) in &prime.members {
        primary_ok &= !g.word()?.is_proper_power();
    }
    Ok(row(
        "9-sparsity",
        format!(
            "{} members within budget (grid to 10^4: {grid_ok}); primary set: {} members, all primary: {primary_ok}",
            set.members.len(),
            prime.members.len()
        ),
        set.members.len() as f64,
        1e4f64.sqrt().ceil(),
        sp.pass && grid_ok && primary_ok,
    ))
}

/// Criterion 10: a sparse set distinguishes the S1/S2 word metrics within
/// its first 50 members, equal-spectrum plane models agree to 1e-9, and
/// boundary products across a base shift differ by at most d + 4 delta.
fn criterion_rigidity_probe(_profile: Profile) -> Result<ReportRow> {
    let m = tree();
    let s2 = ActionModel::word_metric_ball(
        "s2",
        2,
        vec![Word::parse("a", 2)?, Word::parse("ab", 2)?],
        8,
        1_000_000,
    )?;
    let gamma = m.parse_element("ab")?;
    let theta = choose_theta(&m, &gamma)?;
    let cfg = BuildConfig { radius: 1, per_eta: 2, ..BuildConfig::default() };
    let set = build_e_phi(&m, &gamma, &theta, &cfg)?;
    let probe = rigidity_probe(&set, &m, &s2, 3, 1e-9)?;
    let found = matches!(probe.first_disagreeing, Some((i, _)) if i < 50);
    let (h, h2, _, _) = plane_pair();
    let ball = m.ball_enumerate(3)?;
    let cmp = mls_compare(&h, &h2, &ball)?;
    let conj_ok = cmp.max_diff <= 1e-9;
    let shifted = ActionModel::free_tree("shift", 2).with_base(Point::Tree(Word::parse("ab", 2)?));
    let ws = limit_set_sample(&m, 6, 2, SEED)?;
    let mut pairs = Vec::new();
    for i in 0..ws.len() {
        for j in 0..i {
            pairs.push((ws[i].clone(), ws[j].clone()));
        }
    }
    let params = EvalParams::default();
    let gc = gromov_comparison(&m, &shifted, &pairs, &params)?;
    let gc_ok = gc.max_l <= 2.0 + 4.0 * m.delta();
    Ok(row(
        "10-rigidity-probe",
        format!(
            "S1/S2 disagree at member {:?}; conjugated spectra gap {:.2e}; base-shift product gap {} <= d + 4 delta",
            probe.first_disagreeing, cmp.max_diff, gc.max_l
        ),
        cmp.max_diff,
        1e-9,
        found && conj_ok && gc_ok,
    ))
}

/// Criterion 11: the coset relation defect contains 0 within 8 delta on
/// sampled triples, and c(gamma^n, gamma-)/n shrinks along the doubling
/// schedule to n = 64.
fn criterion_coset_defect(profile: Profile) -> Result<ReportRow> {
    let m = tree();
    let m2 = ActionModel::free_tree("tree2", 2);
    let params = EvalParams::default().with_ceiling(1e6);
    let n = match profile {
        Profile::Quick => 5,
        Profile::Full => 20,
    };
    let mut rng = stream(SEED, "coset-defect");
    let mut worst = 0.0f64;
    let mut checked = 0;
    let mut schedule_ok = true;
    while checked < n {
        let h = GroupElement::from_word(rw(&mut rng, 1, 4));
        let g = GroupElement::from_word(rw(&mut rng, 1, 4));
        let k = rng.gen_range(3..8);
        match coset_relation_defect(&m, &m2, &h, &g, k, CocycleConvention::Inverse, &params) {
            Ok(d) => {
                let contains_zero = d.main.widen(d.bound).contains(0.0);
                if !contains_zero {
                    return Ok(row(
                        "11-coset-defect",
                        format!("defect {:?} misses 0 at bound {}", d.main, d.bound),
                        d.main.midpoint(),
                        d.bound,
                        false,
                    ));
                }
                worst = worst.max(d.main.midpoint().abs());
                let last = d.schedule.last().map(|(k, c)| (*k, c.midpoint().abs()));
                schedule_ok &= matches!(last, Some((64, v)) if v <= 1e-9);
                checked += 1;
            }
            Err(Error::NoAxis)
            | Err(Error::Precondition(_))
            | Err(Error::CoincidentBoundaryPoints(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Ok(row(
        "11-coset-defect",
        format!("{n} tree triples, max |main| = {worst}; schedule vanishes at n = 64: {schedule_ok}"),
        worst,
        0.0,
        worst == 0.0 && schedule_ok,
    ))
}

/// Runs every criterion; quick shrinks sample counts, full uses the
/// contract sizes. Either way all eleven criteria are exercised.
pub fn verify(profile: Profile) -> Result<Report> {
    let criteria: Vec<fn(Profile) -> Result<ReportRow>> = vec![
        criterion_cocycle_identity,
        criterion_stable_length,
        criterion_main_relation,
        criterion_power_difference,
        criterion_delta,
        criterion_cross_ratio,
        criterion_filling_metric,
        criterion_descent,
        criterion_sparsity,
        criterion_rigidity_probe,
        criterion_coset_defect,
    ];
    let mut report = Report::default();
    for c in criteria {
        match c(profile) {
            Ok(r) => report.push(r),
            Err(e) => {
                report.push(
                    ReportRow::new("criterion", "verify", format!("errored: {e}")).verdict(false),
                );
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_profile_passes_and_covers_all_criteria() {
        let t0 = Instant::now();
        let rep = verify(Profile::Quick).unwrap();
        assert_eq!(rep.rows.len(), 11);
        for r in &rep.rows {
            assert!(r.pass, "{} failed: {}", r.experiment, r.detail);
        }
        assert!(t0.elapsed().as_secs_f64() < 30.0);
    }
}
