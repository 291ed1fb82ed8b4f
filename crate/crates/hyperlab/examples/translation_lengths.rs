//! Translation lengths three ways — cyclic reduction, the trace formula,
//! and power differences — plus marked length spectra and a comparison
//! between two generating sets of the same group.

use hyperlab::matrix::Mat2;
use hyperlab::spaces::ActionModel;
use hyperlab::spectrum::{mls_compare, mls_table, translation_length, LengthMethod};
use hyperlab::word::Word;

fn main() -> hyperlab::Result<()> {
    let tree = ActionModel::free_tree("tree", 2);
    let g = tree.parse_element("aabAB")?;
    for method in [LengthMethod::CyclicReduction, LengthMethod::PowerDifference(1 << 10)] {
        let est = translation_length(&tree, &g, method)?;
        println!("l(aabAB) via {}: [{}, {}]", est.method, est.value.lower, est.value.upper);
    }

    let mat = Mat2::new(2f64.sqrt(), 0.0, 0.0, 1.0 / 2f64.sqrt())?;
    let plane = ActionModel::upper_half_plane("plane", vec![mat], 0.75);
    let gm = hyperlab::spaces::GroupElement::from_matrix(mat);
    let tr = translation_length(&plane, &gm, LengthMethod::Trace)?;
    let pd = translation_length(&plane, &gm, LengthMethod::PowerDifference(1 << 10))?;
    println!("plane trace:     {}", tr.value.midpoint());
    println!("plane power-diff: [{}, {}]", pd.value.lower, pd.value.upper);

    // word metric with S2 = {a, ab} doubles the length of b
    let s2 = ActionModel::word_metric_ball(
        "s2",
        2,
        vec![Word::parse("a", 2)?, Word::parse("ab", 2)?],
        8,
        1_000_000,
    )?;
    let table = mls_table(&tree, &tree.ball_enumerate(1)?)?;
    for row in &table.rows {
        println!("  S1 spectrum: l[{}] = {}", row.element, row.value.midpoint());
    }
    let cmp = mls_compare(&tree, &s2, &tree.ball_enumerate(2)?)?;
    println!(
        "S1 vs S2: max diff {} at {:?}, max ratio {} at {:?}",
        cmp.max_diff, cmp.diff_witness, cmp.max_ratio, cmp.ratio_witness
    );
    Ok(())
}
