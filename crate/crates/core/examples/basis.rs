//! Roots of the generating polynomial and the lattice matrices built on them.
//!
//! cargo run --example basis -- 4

use frolov::{FrolovBasis, FrolovPolynomial, PolyKind};

fn main() -> frolov::Result<()> {
    let d: usize = std::env::args().nth(1).map_or(3, |s| s.parse().expect("dimension"));

    let poly = FrolovPolynomial::standard(d)?;
    let roots = poly.find_roots()?;
    println!("P_{d}: {} roots, residual {:.2e}", roots.roots().len(), roots.residual());
    for (i, r) in roots.values().iter().enumerate() {
        println!("  xi_{} = {r:.15}", i + 1);
    }

    let basis = FrolovBasis::from_roots(roots)?;
    println!("B (Vandermonde):\n{:.6}", basis.dual_generator());
    println!("T = (B^T)^-1:\n{:.6}", basis.generator());
    println!("det T = {:.6e}, |det B| = {:.6}", basis.det_generator(), basis.abs_det_generator_inverse());

    if d.is_power_of_two() {
        let cheb = FrolovBasis::new(d, PolyKind::Chebyshev)?;
        println!("chebyshev variant: |det T| = {:.6e}", cheb.abs_det_generator());
    }
    Ok(())
}
