//! The worst-case error bound and its constant.

use frolov::cubature::bound_constant;
use frolov::polylog_negative_order;
use frolov::theoretical_bound;

fn main() -> frolov::Result<()> {
    for d in 1..=4 {
        for s in 1..=3 {
            let li = polylog_negative_order(d as u32 - 1, 2f64.powi(1 - 2 * s as i32))?;
            print!("s={s} d={d}: Li = {li:.6}, c = {:>10.4}", bound_constant(s, d)?);
            for a in [4.0, 16.0] {
                print!(", bound(a={a}) = {:.4e}", theoretical_bound(s, d, a)?);
            }
            println!();
        }
    }
    Ok(())
}
