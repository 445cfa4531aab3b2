use rayon::prelude::*;

use crate::error::{FrolovError, Result};
use crate::lattice::{AxisBox, FrolovBasis, DEFAULT_BUDGET};
use crate::sum::NeumaierSum;
use crate::testfunctions::TestFunction;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoissonCheck {
    /// `a^{-d} |det T| sum_{x in a^{-1} T(Z^d) ∩ [0,1)^d} f(x)`.
    pub node_sum: f64,
    /// `sum_{|m|_inf <= M} f^(a B m)`, real part.
    pub dual_sum: f64,
    pub discrepancy: f64,
}

/// Both sides of the lattice Poisson summation formula for `f`.
///
/// The lattice is `a^{-1} T(Z^d)` with dual `a B(Z^d)`; the dual sum is
/// truncated to the integer cube `|m|_inf <= truncation`. Any `a > 0` is
/// accepted, including the unscaled lattice `a = 1`.
pub fn poisson_check(basis: &FrolovBasis, a: f64, f: &TestFunction, truncation: u32) -> Result<PoissonCheck> {
    let d = basis.dimension();
    if f.dimension() != d {
        return Err(FrolovError::InvalidParameter(format!(
            "test function has dimension {}, lattice has {d}",
            f.dimension()
        )));
    }
    if !f.has_transform() {
        return Err(FrolovError::UnsupportedFunction(f.selector()));
    }
    if !f.is_vanishing() {
        return Err(FrolovError::InvalidParameter("Poisson check needs a function supported in the cube".into()));
    }

    let nodes = basis.enumerate_points(a, &AxisBox::unit(d), DEFAULT_BUDGET)?;
    let node_sum = basis.abs_det_generator() / a.powi(d as i32)
        * nodes.points().map(|x| f.evaluate(x)).collect::<NeumaierSum>().value();

    let dual = basis.dual_generator();
    let m_max = truncation as i64;
    let side = (2 * m_max + 1) as u128;
    let terms = side.checked_pow(d as u32).unwrap_or(u128::MAX);
    if terms > DEFAULT_BUDGET as u128 {
        return Err(FrolovError::BudgetExceeded { candidates: terms, limit: DEFAULT_BUDGET });
    }
    let chunks: Vec<Vec<f64>> = (-m_max..=m_max)
        .into_par_iter()
        .map(|first| -> Result<Vec<f64>> {
            let mut out = Vec::new();
            let mut m = vec![-m_max; d];
            m[0] = first;
            let mut y = vec![0.0; d];
            loop {
                for (i, yi) in y.iter_mut().enumerate() {
                    *yi = a * (0..d).map(|j| dual[(i, j)] * m[j] as f64).sum::<f64>();
                }
                out.push(f.fourier_transform(&y)?.re);
                let mut k = d - 1;
                loop {
                    if k == 0 {
                        return Ok(out);
                    }
                    if m[k] < m_max {
                        m[k] += 1;
                        break;
                    }
                    m[k] = -m_max;
                    k -= 1;
                }
            }
        })
        .collect::<Result<_>>()?;
    let dual_sum = chunks.into_iter().flatten().collect::<NeumaierSum>().value();
    Ok(PoissonCheck { node_sum, dual_sum, discrepancy: (node_sum - dual_sum).abs() })
}
