//! Enumerate the nodes in the unit cube and write them in the export format.

use std::io::{stdout, BufWriter};

use frolov::lattice::write_nodes;
use frolov::{AxisBox, FrolovBasis, PolyKind};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let basis = FrolovBasis::new(2, PolyKind::Standard)?;

    let nodes = basis.enumerate_nodes(4.0)?;
    write_nodes(BufWriter::new(stdout()), &basis, &nodes)?;

    // Nodes restricted to a sub-box, with the generating integers.
    let region = AxisBox::new(vec![0.0, 0.0], vec![0.5, 0.5])?;
    let corner = basis.enumerate_nodes_in(16.0, &region, frolov::lattice::DEFAULT_BUDGET)?;
    println!("# {} nodes of a=16 in [0, 0.5)^2, first few:", corner.count());
    for (m, x) in corner.generating_integers().zip(corner.points()).take(5) {
        println!("# m = {m:?} -> x = [{:.6}, {:.6}]", x[0], x[1]);
    }
    Ok(())
}
