//! Equal-weight cubature for an integrand vanishing on the boundary.

use frolov::{testfunctions, theoretical_bound, CubatureRule, FrolovBasis, PolyKind};

fn main() -> frolov::Result<()> {
    let d = 3;
    let basis = FrolovBasis::new(d, PolyKind::Standard)?;
    let f = testfunctions::bump(d, 2)?;

    println!("{:>6} {:>8} {:>12} {:>12}", "a", "nodes", "error", "bound");
    for a in [4.0, 6.0, 8.0, 12.0] {
        let rule = CubatureRule::vanishing(&basis, a)?;
        let estimate = rule.integrate_parallel(|x| f.evaluate(x))?;
        let error = (estimate - f.exact_integral()).abs();
        println!("{a:>6} {:>8} {error:>12.3e} {:>12.3e}", rule.count(), theoretical_bound(2, d, a)?);
    }

    // Any closure works as an integrand.
    let rule = CubatureRule::vanishing(&basis, 8.0)?;
    let g = |x: &[f64]| x.iter().map(|t| (std::f64::consts::PI * t).sin()).product::<f64>();
    println!("int prod sin(pi x_j) ~ {:.8} (exact {:.8})", rule.integrate(g)?, (2.0 / std::f64::consts::PI).powi(3));
    Ok(())
}
