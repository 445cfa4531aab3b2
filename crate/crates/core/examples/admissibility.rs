//! Every nonzero dual lattice point has coordinate product a nonzero integer,
//! so small axis-parallel boxes hold few dual points.

use frolov::verify::{random_box, random_nonzero_vector, suite_rng};
use frolov::{FrolovBasis, PolyKind};

fn main() -> frolov::Result<()> {
    let mut rng = suite_rng(7, 0);
    for d in 2..=5 {
        let basis = FrolovBasis::new(d, PolyKind::Standard)?;
        let m = random_nonzero_vector(&mut rng, d, 20);
        let c = basis.check_product_integrality(&m)?;
        println!("d={d} m={m:?}: product {:.6e} -> {} ({})", c.product, c.nearest_integer, if c.ok { "ok" } else { "off" });
    }

    let basis = FrolovBasis::new(2, PolyKind::Standard)?;
    let a = 2.0;
    for _ in 0..5 {
        let region = random_box(&mut rng, 2, 0.1, 100.0);
        let count = basis.count_dual_in_box(a, &region)?;
        println!(
            "box {:?}..{:?}: {count} dual points, limit {:.2}",
            region.lo().iter().map(|v| (v * 100.0).round() / 100.0).collect::<Vec<_>>(),
            region.hi().iter().map(|v| (v * 100.0).round() / 100.0).collect::<Vec<_>>(),
            region.volume() / (a * a) + 1.0
        );
    }
    Ok(())
}
