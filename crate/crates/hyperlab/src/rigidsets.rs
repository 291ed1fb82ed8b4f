//! Sparse spectrally rigid sets: greedy construction with growth budgets,
//! severity schedules, branch selection, sparsity recounts, and an
//! empirical rigidity probe across models.

use crate::boundary::{extended_gromov, fixed_points, point_boundary_gromov, BoundaryPoint, EvalParams};
use crate::error::{Error, Result};
use crate::gromov::gromov_product;
use crate::spaces::{ActionModel, Classification, GroupElement};
use crate::spectrum::translation_length_auto;
use serde::{Deserialize, Serialize};

/// Growth budget f: the built set keeps #{members with length <= T} <= f(T).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub enum BudgetFunction {
    Sqrt,
    Log,
    /// Step function given as sorted (threshold T, value) pairs.
    Table(Vec<(f64, f64)>),
}

impl BudgetFunction {
    pub fn eval(&self, t: f64) -> f64 {
        let t = t.max(0.0);
        match self {
            BudgetFunction::Sqrt => t.sqrt().ceil().max(1.0),
            BudgetFunction::Log => (1.0 + t).ln().ceil().max(1.0),
            BudgetFunction::Table(rows) => {
                let mut v = 1.0f64;
                for &(tk, vk) in rows {
                    if tk <= t {
                        v = v.max(vk);
                    }
                }
                v
            }
        }
    }

    /// Smallest length threshold whose budget reaches y; infinity when the
    /// budget never reaches y (Table budgets are bounded).
    pub fn inv_threshold(&self, y: f64) -> f64 {
        if y <= 1.0 {
            return 0.0;
        }
        match self {
            BudgetFunction::Sqrt => (y - 1.0) * (y - 1.0) + 1.0,
            BudgetFunction::Log => (y - 1.0).exp(),
            BudgetFunction::Table(rows) => rows
                .iter()
                .find(|&&(_, vk)| vk >= y)
                .map(|&(tk, _)| tk)
                .unwrap_or(f64::INFINITY),
        }
    }
}

impl std::str::FromStr for BudgetFunction {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sqrt" => Ok(BudgetFunction::Sqrt),
            "log" => Ok(BudgetFunction::Log),
            _ => Err(Error::Config(format!("unknown budget {s:?} (sqrt|log)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Branch {
    E1,
    E2,
    Case1,
}

impl std::fmt::Display for Branch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Branch::E1 => write!(f, "E1"),
            Branch::E2 => write!(f, "E2"),
            Branch::Case1 => write!(f, "case1"),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Provenance {
    /// 1-based index of eta in the enumeration order.
    pub eta_index: usize,
    pub eta: String,
    pub exponent: i64,
    pub branch: Branch,
    pub theta: Option<String>,
    pub gamma: String,
    /// Measured translation length at construction time.
    pub length: f64,
}

#[derive(Debug, Clone)]
pub struct RigidSet {
    pub model_id: String,
    pub members: Vec<(GroupElement, Provenance)>,
    /// Etas skipped because eta gamma+ coincided with gamma-.
    pub skipped: Vec<String>,
    pub severity: f64,
    pub budget: BudgetFunction,
}

#[derive(Debug, Clone)]
pub struct BuildConfig {
    pub budget: BudgetFunction,
    /// Scale s of the escape threshold s * i^2 * (delta + 1).
    pub severity: f64,
    /// Members per eta.
    pub per_eta: usize,
    /// Enumeration radius for eta (and for gamma in the primary-set build).
    pub radius: u32,
    pub params: EvalParams,
    /// Hard cap on exponent search, for infeasibility reporting.
    pub max_exponent: i64,
}

impl Default for BuildConfig {
    fn default() -> Self {
        BuildConfig {
            budget: BudgetFunction::Sqrt,
            severity: 1.0,
            per_eta: 2,
            radius: 1,
            params: EvalParams::default(),
            max_exponent: 200_000,
        }
    }
}

/// First element in canonical ball order moving gamma-.
pub fn choose_theta(model: &ActionModel, gamma: &GroupElement) -> Result<GroupElement> {
    choose_theta_within(model, gamma, 3)
}

pub fn choose_theta_within(
    model: &ActionModel,
    gamma: &GroupElement,
    radius: u32,
) -> Result<GroupElement> {
    let (_, gminus) = fixed_points(model, gamma)?;
    for theta in model.ball_enumerate(radius)? {
        if theta.is_identity() {
            continue;
        }
        let moved = gminus.translate(model, &theta)?;
        if !moved.same_point(model, &gminus)? {
            return Ok(theta);
        }
    }
    Err(Error::MaybeElementary(radius))
}

/// <p, x>_o, with an exact finite-word fast path on tree-like models.
fn escape_product(
    model: &ActionModel,
    p: &crate::spaces::Point,
    x: &BoundaryPoint,
    params: &EvalParams,
) -> Result<f64> {
    if model.is_tree_like() {
        let (pre, per) = x.stream_form()?;
        let stream = BoundaryPoint::stream(&pre, &per)?;
        let depth = p.tree_word()?.len() + pre.len() + 2 * per.len() + 8;
        let q = stream.point_at(model, depth as u32)?;
        gromov_product(model, p, &q, &model.base)
    } else {
        Ok(point_boundary_gromov(model, p, x, &model.base, params)?.lower)
    }
}

struct EtaBuild<'a> {
    model: &'a ActionModel,
    gamma: &'a GroupElement,
    cfg: &'a BuildConfig,
    target: BoundaryPoint,
    branch: Branch,
    theta: Option<&'a GroupElement>,
    /// Bump the exponent past proper powers (the primary-set build).
    require_primary: bool,
}

impl EtaBuild<'_> {
    /// gamma^{-n} eta^{-1}, with the theta prefix on the E2 branch.
    fn candidate(&self, eta: &GroupElement, n: i64) -> GroupElement {
        let core = self.gamma.pow(-n).mul(&eta.inverse());
        match (self.branch, self.theta) {
            (Branch::E2, Some(t)) => t.mul(&core),
            _ => core,
        }
    }

    fn build(&self, eta: &GroupElement, eta_index: usize, out: &mut Vec<(GroupElement, Provenance)>) -> Result<()> {
        let i = eta_index as f64;
        let escape_floor = self.cfg.severity * i * i * (self.model.delta() + 1.0);
        let l_gamma = translation_length_auto(self.model, self.gamma)?.value.midpoint();
        let mut n: i64 = 0;
        for m in 1..=self.cfg.per_eta {
            let length_floor = self
                .cfg
                .budget
                .inv_threshold((m as f64) * 2f64.powi(eta_index as i32));
            if length_floor.is_infinite() {
                return Err(Error::BudgetInfeasible {
                    severity: self.cfg.severity,
                    detail: format!("budget never reaches {}", (m as f64) * 2f64.powi(eta_index as i32)),
                });
            }
            // jump near the first exponent that can clear the length floor
            let jump = ((length_floor - 4.0 * self.gamma.word.as_ref().map_or(0, |w| w.len()) as f64)
                / l_gamma.max(1e-9))
            .floor() as i64;
            n = (n + 1).max(jump.min(self.cfg.max_exponent));
            loop {
                if n > self.cfg.max_exponent {
                    return Err(Error::BudgetInfeasible {
                        severity: self.cfg.severity,
                        detail: format!(
                            "no exponent <= {} meets floors (length {length_floor:.1}, escape {escape_floor:.1}) for eta {eta}",
                            self.cfg.max_exponent
                        ),
                    });
                }
                let cand = self.candidate(eta, n);
                let len = translation_length_auto(self.model, &cand)?.value.midpoint();
                let fresh = !out.iter().any(|(g, _)| g == &cand);
                let primary_ok = !self.require_primary
                    || !cand.word.as_ref().map_or(false, |w| w.is_proper_power());
                if len >= length_floor && fresh && primary_ok {
                    let p = self.model.orbit(&cand)?;
                    let esc = escape_product(self.model, &p, &self.target, &self.cfg.params)?;
                    if esc >= escape_floor {
                        out.push((
                            cand,
                            Provenance {
                                eta_index,
                                eta: format!("{eta}"),
                                exponent: n,
                                branch: self.branch,
                                theta: self.theta.map(|t| format!("{t}")),
                                gamma: format!("{}", self.gamma),
                                length: len,
                            },
                        ));
                        break;
                    }
                }
                n += 1;
            }
        }
        Ok(())
    }
}

/// The two-branch rigid set for a hyperbolic gamma and a mover theta.
pub fn build_e_phi(
    model: &ActionModel,
    gamma: &GroupElement,
    theta: &GroupElement,
    cfg: &BuildConfig,
) -> Result<RigidSet> {
    if model.classify(gamma)? != Classification::Hyperbolic {
        return Err(Error::NoAxis);
    }
    if cfg.per_eta == 0 {
        return Err(Error::Config("per_eta must be >= 1".into()));
    }
    let (gplus, gminus) = fixed_points(model, gamma)?;
    let theta_minus = gminus.translate(model, theta)?;
    let o = model.base.clone();
    let theta_prod = extended_gromov(model, &theta_minus, &gminus, &o, &cfg.params)?;
    let mut members = Vec::new();
    let mut skipped = Vec::new();
    for (idx, eta) in model.ball_enumerate(cfg.radius)?.into_iter().enumerate() {
        let eta_index = idx + 1;
        let (branch, target, th) = if model.quasi_parabolic {
            (Branch::Case1, gminus.clone(), None)
        } else {
            let moved_plus = gplus.translate(model, &eta)?;
            if moved_plus.same_point(model, &gminus)? {
                skipped.push(format!("{eta}"));
                continue;
            }
            let eta_prod = match extended_gromov(model, &moved_plus, &gminus, &o, &cfg.params) {
                Ok(v) => v,
                Err(Error::CoincidentBoundaryPoints(_)) => {
                    skipped.push(format!("{eta}"));
                    continue;
                }
                Err(e) => return Err(e),
            };
            // tie at the threshold resolves to E1 by upper endpoint
            if eta_prod.upper <= theta_prod.upper + 2.0 * model.delta() {
                (Branch::E1, gminus.clone(), None)
            } else {
                (Branch::E2, theta_minus.clone(), Some(theta))
            }
        };
        let eb = EtaBuild {
            model,
            gamma,
            cfg,
            target,
            branch,
            theta: th,
            require_primary: false,
        };
        eb.build(&eta, eta_index, &mut members)?;
    }
    Ok(RigidSet {
        model_id: model.id.clone(),
        members,
        skipped,
        severity: cfg.severity,
        budget: cfg.budget.clone(),
    })
}

/// Ratio-detecting set over all primary hyperbolic gamma in a ball.
/// Every member is asserted primary (no proper power).
pub fn build_e_prime(model: &ActionModel, cfg: &BuildConfig) -> Result<RigidSet> {
    if !model.is_tree_like() {
        return Err(Error::ModelMismatch(
            "primary-element detection needs a word-metric model".into(),
        ));
    }
    let ball = model.ball_enumerate(cfg.radius)?;
    let mut members = Vec::new();
    let mut skipped = Vec::new();
    let mut index = 0usize;
    for gamma in &ball {
        if model.classify(gamma)? != Classification::Hyperbolic {
            continue;
        }
        let gw = gamma.word()?;
        if gw.is_proper_power() {
            continue;
        }
        index += 1;
        let (root, _) = gw.primitive_root();
        let (gplus, gminus) = fixed_points(model, gamma)?;
        // first canonical element outside the maximal cyclic group around gamma
        let mut eta = None;
        for cand in &ball {
            let cw = cand.word()?;
            if cw.is_power_of(&root) {
                continue;
            }
            let moved = gminus.translate(model, cand)?;
            if moved.same_point(model, &gplus)? {
                continue;
            }
            eta = Some(cand.clone());
            break;
        }
        let Some(eta) = eta else {
            skipped.push(format!("{gamma}"));
            continue;
        };
        let eb = EtaBuild {
            model,
            gamma,
            cfg,
            target: gminus.clone(),
            branch: Branch::E1,
            theta: None,
            require_primary: true,
        };
        eb.build(&eta, index, &mut members)?;
    }
    Ok(RigidSet {
        model_id: model.id.clone(),
        members,
        skipped,
        severity: cfg.severity,
        budget: cfg.budget.clone(),
    })
}

#[derive(Debug, Clone)]
pub struct SparsityReport {
    pub pass: bool,
    /// (length value T, members with length <= T, budget f(T)).
    pub histogram: Vec<(f64, u64, f64)>,
    pub first_violation: Option<(f64, u64, f64)>,
}

/// Exact recount of #{members with length <= T} <= f(T) at every member
/// length (the only candidate violation points).
pub fn sparsity_check(
    set: &RigidSet,
    model: &ActionModel,
    f: &BudgetFunction,
) -> Result<SparsityReport> {
    let mut lengths: Vec<f64> = Vec::with_capacity(set.members.len());
    for (g, _) in &set.members {
        lengths.push(translation_length_auto(model, g)?.value.midpoint());
    }
    lengths.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut histogram = Vec::new();
    let mut first_violation = None;
    let mut i = 0usize;
    while i < lengths.len() {
        let t = lengths[i];
        let mut j = i;
        while j < lengths.len() && lengths[j] <= t {
            j += 1;
        }
        let count = j as u64;
        let budget = f.eval(t);
        histogram.push((t, count, budget));
        if count as f64 > budget && first_violation.is_none() {
            first_violation = Some((t, count, budget));
        }
        i = j;
    }
    Ok(SparsityReport { pass: first_violation.is_none(), histogram, first_violation })
}

#[derive(Debug, Clone)]
pub struct RigidityProbe {
    pub max_diff_on_set: f64,
    pub set_witness: Option<String>,
    /// Members skipped because a model could not evaluate them.
    pub set_skipped: usize,
    pub max_diff_on_ball: f64,
    pub ball_witness: Option<String>,
    /// First member of the set whose lengths disagree, with its index.
    pub first_disagreeing: Option<(usize, String)>,
}

/// Compare two marked length spectra on the set and on a comparison ball.
/// If the spectra disagree on the ball, a disagreeing member of the set is
/// searched for in construction order.
pub fn rigidity_probe(
    set: &RigidSet,
    model_a: &ActionModel,
    model_b: &ActionModel,
    ball_radius: u32,
    tol: f64,
) -> Result<RigidityProbe> {
    let both = |g: &GroupElement| -> Result<Option<f64>> {
        let ga = crate::spectrum::materialize(model_a, g)?;
        let gb = crate::spectrum::materialize(model_b, g)?;
        let la = match translation_length_auto(model_a, &ga) {
            Ok(v) => v.value.midpoint(),
            Err(Error::BallExceeded { .. }) => return Ok(None),
            Err(e) => return Err(e),
        };
        let lb = match translation_length_auto(model_b, &gb) {
            Ok(v) => v.value.midpoint(),
            Err(Error::BallExceeded { .. }) => return Ok(None),
            Err(e) => return Err(e),
        };
        Ok(Some((la - lb).abs()))
    };
    let mut probe = RigidityProbe {
        max_diff_on_set: 0.0,
        set_witness: None,
        set_skipped: 0,
        max_diff_on_ball: 0.0,
        ball_witness: None,
        first_disagreeing: None,
    };
    for (idx, (g, _)) in set.members.iter().enumerate() {
        match both(g)? {
            None => probe.set_skipped += 1,
            Some(d) => {
                if d > probe.max_diff_on_set {
                    probe.max_diff_on_set = d;
                    probe.set_witness = Some(format!("{g}"));
                }
                if d > tol && probe.first_disagreeing.is_none() {
                    probe.first_disagreeing = Some((idx, format!("{g}")));
                }
            }
        }
    }
    for g in model_a.ball_enumerate(ball_radius)? {
        if let Some(d) = both(&g)? {
            if d > probe.max_diff_on_ball {
                probe.max_diff_on_ball = d;
                probe.ball_witness = Some(format!("{g}"));
            }
        }
    }
    Ok(probe)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::Word;

    fn w(s: &str) -> Word {
        Word::parse(s, 2).unwrap()
    }

    fn tree() -> ActionModel {
        ActionModel::free_tree("t", 2)
    }

    #[test]
    fn budget_functions() {
        let f = BudgetFunction::Sqrt;
        assert_eq!(f.eval(100.0), 10.0);
        assert_eq!(f.eval(101.0), 11.0);
        assert!(f.eval(0.0) >= 1.0);
        // monotone
        for t in 0..50 {
            assert!(f.eval(t as f64) <= f.eval(t as f64 + 1.0));
        }
        // inv is a true threshold
        for y in 2..12 {
            let t = f.inv_threshold(y as f64);
            assert!(f.eval(t) >= y as f64);
            assert!(f.eval(t - 1.5) < y as f64);
        }
        let g = BudgetFunction::Log;
        assert!(g.eval(g.inv_threshold(5.0)) >= 5.0);
        let tab = BudgetFunction::Table(vec![(10.0, 3.0), (100.0, 7.0)]);
        assert_eq!(tab.eval(5.0), 1.0);
        assert_eq!(tab.eval(50.0), 3.0);
        assert_eq!(tab.eval(500.0), 7.0);
        assert!(tab.inv_threshold(100.0).is_infinite());
    }

    #[test]
    fn theta_for_generator() {
        let m = tree();
        let theta = choose_theta(&m, &m.parse_element("a").unwrap()).unwrap();
        assert_eq!(theta.word().unwrap(), &w("b"));
        let theta = choose_theta(&m, &m.parse_element("ab").unwrap()).unwrap();
        assert!(!theta.is_identity());
    }

    #[test]
    fn e_phi_identity_eta_members() {
        let m = tree();
        let gamma = m.parse_element("ab").unwrap();
        let theta = m.parse_element("a").unwrap();
        let cfg = BuildConfig { radius: 0, per_eta: 2, ..Default::default() };
        let set = build_e_phi(&m, &gamma, &theta, &cfg).unwrap();
        assert_eq!(set.members.len(), 2);
        // eta = e: members are powers (ab)^{-n}, branch E1
        for (g, p) in &set.members {
            assert_eq!(p.branch, Branch::E1);
            assert!(g.word().unwrap().is_power_of(&w("BA")));
        }
        // budget floors: l_1 >= f_inv(2) = 2, l_2 >= f_inv(4) = 10
        assert!(set.members[0].1.length >= 2.0);
        assert!(set.members[1].1.length >= 10.0);
        // exponents strictly increase per eta
        assert!(set.members[1].1.exponent > set.members[0].1.exponent);
    }

    #[test]
    fn e_phi_sparsity_and_provenance() {
        let m = tree();
        let gamma = m.parse_element("ab").unwrap();
        let theta = choose_theta(&m, &gamma).unwrap();
        let cfg = BuildConfig { radius: 1, per_eta: 2, severity: 0.01, ..Default::default() };
        let set = build_e_phi(&m, &gamma, &theta, &cfg).unwrap();
        assert!(!set.members.is_empty());
        // provenance rebuilds the member exactly
        for (g, p) in &set.members {
            let eta = m.parse_element(&p.eta.replace('e', "")).unwrap();
            let mut rebuilt = gamma.pow(-p.exponent).mul(&eta.inverse());
            if p.branch == Branch::E2 {
                rebuilt = theta.mul(&rebuilt);
            }
            assert_eq!(g.word().unwrap(), rebuilt.word().unwrap(), "{p:?}");
        }
        // members pairwise distinct
        for i in 0..set.members.len() {
            for j in 0..i {
                assert_ne!(
                    set.members[i].0.word().unwrap(),
                    set.members[j].0.word().unwrap()
                );
            }
        }
        let rep = sparsity_check(&set, &m, &BudgetFunction::Sqrt).unwrap();
        assert!(rep.pass, "{:?}", rep.first_violation);
        // members with length <= 100 stay within sqrt budget
        let n100 = set.members.iter().filter(|(_, p)| p.length <= 100.0).count();
        assert!(n100 <= 10, "{n100}");
    }

    #[test]
    fn case1_branch_with_flag() {
        let mut m = tree();
        m.quasi_parabolic = true;
        let gamma = m.parse_element("ab").unwrap();
        let theta = m.parse_element("a").unwrap();
        let cfg = BuildConfig { radius: 0, per_eta: 1, ..Default::default() };
        let set = build_e_phi(&m, &gamma, &theta, &cfg).unwrap();
        assert!(set.members.iter().all(|(_, p)| p.branch == Branch::Case1));
    }

    #[test]
    fn e_prime_primary_members() {
        let m = tree();
        let cfg = BuildConfig { radius: 1, per_eta: 1, severity: 0.01, ..Default::default() };
        let set = build_e_prime(&m, &cfg).unwrap();
        assert!(!set.members.is_empty());
        for (g, _) in &set.members {
            assert!(!g.word().unwrap().is_proper_power(), "{g}");
        }
        // gamma = a gets eta = b: member a^{-n} b^{-1}
        let first = &set.members[0];
        assert_eq!(first.1.gamma, "a");
        assert_eq!(first.1.eta, "b");
        assert!(first.0.word().unwrap().to_string().ends_with('B'));
        let rep = sparsity_check(&set, &m, &BudgetFunction::Sqrt).unwrap();
        assert!(rep.pass, "{:?}", rep.first_violation);
    }

    #[test]
    fn sparsity_adversarial_fails() {
        let m = tree();
        let ball = m.ball_enumerate(3).unwrap();
        let set = RigidSet {
            model_id: m.id.clone(),
            members: ball
                .into_iter()
                .map(|g| {
                    let l = g.word().unwrap().cyclic_len() as f64;
                    (
                        g,
                        Provenance {
                            eta_index: 1,
                            eta: "e".into(),
                            exponent: 1,
                            branch: Branch::E1,
                            theta: None,
                            gamma: "a".into(),
                            length: l,
                        },
                    )
                })
                .collect(),
            skipped: Vec::new(),
            severity: 1.0,
            budget: BudgetFunction::Table(vec![(0.0, 1.0)]),
        };
        let one = BudgetFunction::Table(vec![(0.0, 1.0)]);
        let rep = sparsity_check(&set, &m, &one).unwrap();
        assert!(!rep.pass);
        assert!(rep.first_violation.is_some());
        // empty set passes any budget
        let empty = RigidSet {
            model_id: m.id.clone(),
            members: Vec::new(),
            skipped: Vec::new(),
            severity: 1.0,
            budget: BudgetFunction::Sqrt,
        };
        assert!(sparsity_check(&empty, &m, &one).unwrap().pass);
    }

    #[test]
    fn probe_same_model_all_zero() {
        let m = tree();
        let gamma = m.parse_element("ab").unwrap();
        let theta = choose_theta(&m, &gamma).unwrap();
        let cfg = BuildConfig { radius: 0, per_eta: 2, ..Default::default() };
        let set = build_e_phi(&m, &gamma, &theta, &cfg).unwrap();
        let p = rigidity_probe(&set, &m, &m, 2, 1e-9).unwrap();
        assert_eq!(p.max_diff_on_set, 0.0);
        assert_eq!(p.max_diff_on_ball, 0.0);
        assert!(p.first_disagreeing.is_none());
    }

    #[test]
    fn probe_detects_generator_change() {
        let t = tree();
        let gamma = t.parse_element("ab").unwrap();
        let theta = choose_theta(&t, &gamma).unwrap();
        let cfg = BuildConfig { radius: 0, per_eta: 2, ..Default::default() };
        let set = build_e_phi(&t, &gamma, &theta, &cfg).unwrap();
        let s2 = vec![w("a"), w("ab")];
        let wm = ActionModel::word_metric_ball("w", 2, s2, 8, 1_000_000).unwrap();
        let p = rigidity_probe(&set, &t, &wm, 2, 1e-9).unwrap();
        assert!(p.max_diff_on_ball >= 1.0, "{p:?}");
        // (ab)^{-n} members: l = 2n in S1 but n in S2
        assert!(p.first_disagreeing.is_some(), "{p:?}");
    }

    #[test]
    fn escape_trend_beyond_severity() {
        let m = tree();
        let gamma = m.parse_element("ab").unwrap();
        let theta = choose_theta(&m, &gamma).unwrap();
        let cfg = BuildConfig { radius: 1, per_eta: 2, severity: 1.0, ..Default::default() };
        let set = build_e_phi(&m, &gamma, &theta, &cfg).unwrap();
        let (_, gminus) = fixed_points(&m, &gamma).unwrap();
        let theta_minus = gminus.translate(&m, &theta).unwrap();
        for (g, p) in &set.members {
            let target = match p.branch {
                Branch::E2 => &theta_minus,
                _ => &gminus,
            };
            let orbit = m.orbit(g).unwrap();
            let esc = escape_product(&m, &orbit, target, &cfg.params).unwrap();
            let floor = p.eta_index.pow(2) as f64 * (m.delta() + 1.0);
            assert!(esc >= floor, "esc {esc} < floor {floor} for {g}");
        }
    }
}
