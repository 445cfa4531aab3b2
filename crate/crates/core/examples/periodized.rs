//! Integrands that do not vanish at the boundary go through the periodizing
//! substitution first.

use frolov::cubature::periodize;
use frolov::{CubatureRule, FrolovBasis, PolyKind};

fn main() -> frolov::Result<()> {
    let basis = FrolovBasis::new(2, PolyKind::Standard)?;
    let f = |x: &[f64]| (x[0] + 2.0 * x[1]).exp();
    let exact = (std::f64::consts::E - 1.0) * (std::f64::consts::E.powi(2) - 1.0) / 2.0;

    for a in [8.0, 16.0, 32.0] {
        let plain = CubatureRule::vanishing(&basis, a)?.integrate(f)?;
        let rule = CubatureRule::periodized(&basis, a, 3)?;
        let smooth = rule.integrate(f)?;
        println!(
            "a={a:>4}: plain error {:.3e}, periodized error {:.3e} ({} nodes)",
            (plain - exact).abs(),
            (smooth - exact).abs(),
            rule.count()
        );
    }

    // The same transform as a standalone integrand.
    let g = periodize(f, 3)?;
    let value = CubatureRule::vanishing(&basis, 32.0)?.integrate(&g)?;
    println!("via periodize(): {value:.12} vs {exact:.12}");
    Ok(())
}
