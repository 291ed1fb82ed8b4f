//! The length of eta gamma^n against n l(gamma) and the cocycle at the
//! attracting fixed point: the corrected form vanishes identically on
//! trees, while the literal form can exceed its stated bound.

use hyperlab::boundary::EvalParams;
use hyperlab::busemann::CocycleConvention;
use hyperlab::spaces::ActionModel;
use hyperlab::spectrum::main_relation_defect;

fn main() -> hyperlab::Result<()> {
    let m = ActionModel::free_tree("tree", 2);
    let params = EvalParams::default();
    for (eta, gamma, n) in [("a", "ab", 5), ("b", "a", 5), ("AB", "a", 5)] {
        let d = main_relation_defect(
            &m,
            &m.parse_element(eta)?,
            &m.parse_element(gamma)?,
            n,
            CocycleConvention::Inverse,
            &params,
        )?;
        println!(
            "eta={eta:>2} gamma={gamma:>2} n={n}: l = {}, corrected = {}, literal = {} (bound {})",
            d.length_whole.value.midpoint(),
            d.corrected.midpoint(),
            d.literal.midpoint(),
            d.literal_bound,
        );
    }

    // under the direct convention the literal form misses by a genuine gap
    let d = main_relation_defect(
        &m,
        &m.parse_element("b")?,
        &m.parse_element("a")?,
        5,
        CocycleConvention::Direct,
        &params,
    )?;
    println!(
        "direct literal for (b, a, 5): {} exceeds bound {}",
        d.literal.midpoint(),
        d.literal_bound
    );
    Ok(())
}
