//! Boundary points as lazy rays: normal forms of eventually periodic
//! words, extended Gromov products with certified enclosures, and the
//! basepoint-stable cross-ratio.

use hyperlab::boundary::{extended_gromov, fixed_points, BoundaryPoint, EvalParams};
use hyperlab::gromov::cross_ratio;
use hyperlab::spaces::{ActionModel, Point};
use hyperlab::word::Word;

fn main() -> hyperlab::Result<()> {
    let m = ActionModel::free_tree("tree", 2);
    let w = |s: &str| Word::parse(s, 2);

    // a(ba)^oo and (ab)^oo are the same ray; the constructor normalizes
    let x = BoundaryPoint::stream(&w("a")?, &w("ba")?)?;
    let y = BoundaryPoint::stream(&w("")?, &w("ab")?)?;
    println!("a(ba)^oo normalizes to {x}, same as {y}: {}", x.same_point(&m, &y)?);

    let params = EvalParams::default();
    let a = BoundaryPoint::stream(&w("")?, &w("a")?)?;
    let b = BoundaryPoint::stream(&w("")?, &w("b")?)?;
    let ab = BoundaryPoint::stream(&w("")?, &w("ab")?)?;
    for (p, q, name) in [(&a, &b, "<a^oo, b^oo>"), (&a, &ab, "<a^oo, (ab)^oo>")] {
        let v = extended_gromov(&m, p, q, &m.base, &params)?;
        println!("{name} = [{}, {}] at depth {}", v.lower, v.upper, v.depth);
    }

    // fixed points of a hyperbolic element carry their origin
    let g = m.parse_element("bab")?;
    let (plus, minus) = fixed_points(&m, &g)?;
    println!("fixed points of bab: {plus} and {minus}");

    // the four-ray cross-ratio does not depend on the basepoint
    let z = BoundaryPoint::stream(&w("aa")?, &w("b")?)?;
    let c1 = cross_ratio(&m, &a, &b, &ab, &z, &m.base, &params)?;
    let c2 = cross_ratio(&m, &a, &b, &ab, &z, &Point::Tree(w("ba")?), &params)?;
    println!("cross-ratio at e:  [{}, {}]", c1.lower, c1.upper);
    println!("cross-ratio at ba: [{}, {}]", c2.lower, c2.upper);
    Ok(())
}
