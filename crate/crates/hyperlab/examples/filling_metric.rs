//! The witness-set metric between pointed copies of a model: exact
//! recovery of tree distances, the relative Busemann function, and
//! barycenter descent toward a target instance.

use hyperlab::boundary::EvalParams;
use hyperlab::filling::{
    barycenter_descent, embedding_check, line_extension_witnesses, relative_busemann,
    rho_distance, MetricInstance,
};
use hyperlab::spaces::{ActionModel, Point};
use hyperlab::word::Word;

fn main() -> hyperlab::Result<()> {
    let m = ActionModel::free_tree("tree", 2);
    let params = EvalParams::default().with_ceiling(1e9);
    let p = Point::Tree(Word::identity());
    let q = Point::Tree(Word::parse("abab", 2)?);

    let (x, y) = line_extension_witnesses(&m, &p, &q)?;
    let dp = MetricInstance::new(&m, p.clone(), vec![x.clone(), y], 101.0)?;
    let dq = dp.at(q.clone());
    let rho = rho_distance(&dp, &dq, &params)?;
    println!("rho(D_e, D_abab) = {} via pair {:?}", rho.lower_bound.midpoint(), rho.witness);
    let f = relative_busemann(&dp, &dq, &x, &params)?;
    println!("relative busemann at {x}: {}", f.midpoint());

    let rep = embedding_check(&m, &p, &q, 101.0, &params)?;
    println!(
        "embedding: d = {}, rho in [{}, {}], bounds [{}, {}] -> {}",
        rep.distance, rep.rho.lower, rep.rho.upper, rep.lower_bound, rep.upper_bound, rep.pass
    );

    // walk back to the base from 10^4 away, 50K + 50 delta at a time
    let start = Point::Tree(Word::parse(&"ab".repeat(5000), 2)?);
    let (w1, w2) = line_extension_witnesses(&m, &start, &p)?;
    let target = MetricInstance::new(&m, p, vec![w1, w2], 101.0)?;
    let deep = EvalParams::default().with_ceiling(1e12).with_depth(64, 1 << 22);
    let trace = barycenter_descent(&target, start, 101.0, 50, &deep, Some(600.0))?;
    for (i, s) in trace.steps.iter().enumerate() {
        println!("  step {i}: rho = {} toward {}", s.rho.midpoint(), s.target);
    }
    println!("converged: {} (stop radius {})", trace.converged, trace.stop_radius);
    Ok(())
}
