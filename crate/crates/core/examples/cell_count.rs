//! Unit cells meeting the parallelepiped a T^{-1}([0,1]^d), and the ratio
//! C(a, T) that tends to one.

use frolov::analysis::cell_count;
use frolov::{FrolovBasis, PolyKind};

fn main() -> frolov::Result<()> {
    for d in [2, 3] {
        let basis = FrolovBasis::new(d, PolyKind::Standard)?;
        let grid: &[f64] = if d == 2 { &[4.0, 8.0, 16.0, 32.0, 64.0] } else { &[2.0, 4.0, 8.0] };
        for &a in grid {
            let c = cell_count(&basis, a)?;
            println!("d={d} a={a:>4}: {:>6} cells, C = {:.4}", c.cells, c.ratio);
        }
    }
    Ok(())
}
