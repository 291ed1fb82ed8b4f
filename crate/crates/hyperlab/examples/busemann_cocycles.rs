//! Busemann cocycles under both conventions: the inverse convention makes
//! the cocycle identity exact on trees, the direct one picks up a defect
//! that the half-sum transform of the Gromov product absorbs.

use hyperlab::boundary::{BoundaryPoint, EvalParams};
use hyperlab::busemann::{
    cocycle, cocycle_identity_defect, extended_cocycle, product_transform_defect,
    CocycleConvention,
};
use hyperlab::spaces::ActionModel;
use hyperlab::word::Word;

fn main() -> hyperlab::Result<()> {
    let m = ActionModel::free_tree("tree", 2);
    let params = EvalParams::default();
    let a_inf = BoundaryPoint::stream(&Word::identity(), &Word::parse("a", 2)?)?;
    let g = m.parse_element("a")?;

    for conv in [CocycleConvention::Direct, CocycleConvention::Inverse] {
        let c = cocycle(&m, &g, &a_inf, conv, &params)?;
        println!("c(a, a^oo) [{conv:?}] = [{}, {}]", c.lower, c.upper);
    }

    let h = m.parse_element("b")?;
    let x = BoundaryPoint::stream(&Word::parse("ab", 2)?, &Word::parse("b", 2)?)?;
    let inv = cocycle_identity_defect(&m, &g, &h, &x, CocycleConvention::Inverse, &params)?;
    let dir = cocycle_identity_defect(&m, &g, &h, &x, CocycleConvention::Direct, &params)?;
    println!("identity defect, inverse convention: {}", inv.midpoint());
    println!("identity defect, direct convention:  {}", dir.midpoint());

    let y = BoundaryPoint::stream(&Word::identity(), &Word::parse("ba", 2)?)?;
    let t = product_transform_defect(&m, &g, &x, &y, CocycleConvention::Direct, &params)?;
    println!("product transform: literal {} vs half-sum {}", t.literal.midpoint(), t.half_sum.midpoint());

    // the cocycle extends to interior points exactly
    let p = m.apply(&m.parse_element("abab")?, &m.base)?;
    println!("extended c(a, abab.o) = {}", extended_cocycle(&m, &g, &p)?);
    Ok(())
}
