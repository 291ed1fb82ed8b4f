//! Sparse candidate rigidity sets: membership driven by escape products
//! and a ceil-sqrt growth budget, then probed against a second word metric
//! that the set is expected to distinguish.

use hyperlab::rigidsets::{
    build_e_phi, build_e_prime, choose_theta, rigidity_probe, sparsity_check, BuildConfig,
    BudgetFunction,
};
use hyperlab::spaces::ActionModel;
use hyperlab::word::Word;

fn main() -> hyperlab::Result<()> {
    let m = ActionModel::free_tree("tree", 2);
    let gamma = m.parse_element("ab")?;
    let theta = choose_theta(&m, &gamma)?;
    let cfg = BuildConfig { radius: 1, per_eta: 2, ..BuildConfig::default() };
    let set = build_e_phi(&m, &gamma, &theta, &cfg)?;
    println!("E for gamma = ab ({} members):", set.members.len());
    for (g, prov) in &set.members {
        println!(
            "  {g}  <- eta {} ^ {} [{:?}], length {}",
            prov.eta, prov.exponent, prov.branch, prov.length
        );
    }
    let sp = sparsity_check(&set, &m, &BudgetFunction::Sqrt)?;
    println!("sparsity within ceil-sqrt budget: {}", sp.pass);

    let prime = build_e_prime(&m, &BuildConfig { radius: 1, per_eta: 1, ..cfg })?;
    println!("primary-element set: {:?}", prime.members.iter().map(|(g, _)| g.to_string()).collect::<Vec<_>>());

    // S2 = {a, ab} scales some lengths; the set notices immediately
    let s2 = ActionModel::word_metric_ball(
        "s2",
        2,
        vec![Word::parse("a", 2)?, Word::parse("ab", 2)?],
        8,
        1_000_000,
    )?;
    let probe = rigidity_probe(&set, &m, &s2, 3, 1e-9)?;
    println!(
        "probe vs S2: ball diff {} at {:?}, first disagreeing member {:?}",
        probe.max_diff_on_ball, probe.ball_witness, probe.first_disagreeing
    );
    Ok(())
}
