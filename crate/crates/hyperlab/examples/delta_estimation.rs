//! Sampled hyperbolicity estimates: exact zero on the free-group tree,
//! a stable value in (0, 2] on the hyperbolic plane.

use hyperlab::gromov::delta_estimate;
use hyperlab::matrix::Mat2;
use hyperlab::spaces::ActionModel;

fn main() -> hyperlab::Result<()> {
    let tree = ActionModel::free_tree("tree", 2);
    let est = delta_estimate(&tree, 4.0, 5000, 1)?;
    println!("tree: delta = {} over {} samples", est.value, est.sample_size);
    println!("  worst quadruple: {:?}", est.witness);

    let g = Mat2::new(2f64.sqrt(), 0.0, 0.0, 1.0 / 2f64.sqrt())?;
    let h = Mat2::new(1.0, 1.0, 0.0, 1.0)?;
    let plane = ActionModel::upper_half_plane("plane", vec![g, h], 0.75);
    for count in [1000, 10_000, 100_000] {
        let est = delta_estimate(&plane, 6.0, count, 1)?;
        println!(
            "plane: delta = {:.6} over {count} samples (free-basepoint bound {:.6})",
            est.value,
            est.doubled()
        );
    }
    Ok(())
}
