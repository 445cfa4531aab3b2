//! The cubature sum equals a sum of Fourier transform values over the dual
//! lattice.

use frolov::analysis::poisson_check;
use frolov::{testfunctions, FrolovBasis, PolyKind};

fn main() -> frolov::Result<()> {
    for d in [1, 2] {
        let basis = FrolovBasis::new(d, PolyKind::Standard)?;
        let f = testfunctions::sine_power(d, 2)?;
        for a in [1.0, 2.5, 3.0] {
            print!("d={d} a={a}:");
            for m in [25, 50, 100, 200] {
                let c = poisson_check(&basis, a, &f, m)?;
                print!("  M={m} {:.2e}", c.discrepancy);
            }
            let c = poisson_check(&basis, a, &f, 200)?;
            println!("\n    node sum {:.15}, dual sum {:.15}", c.node_sum, c.dual_sum);
        }
    }
    Ok(())
}
