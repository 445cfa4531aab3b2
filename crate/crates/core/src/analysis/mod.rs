//! Instruments for checking the analytic side of the construction.
//!
//! * [`multiplier`]: the Fourier weight `nu_s` that turns mixed-derivative
//!   norms into weighted sums of Fourier coefficients.
//! * [`poisson_check`]: compares the cubature sum against a truncated sum of
//!   Fourier transform values over the dual lattice.
//! * [`cell_count`]: the number of unit cells meeting the parallelepiped
//!   `a T^{-1}([0, 1]^d)` and the ratio `C(a, T)` that tends to one.
//! * [`convergence_study`] and [`fit_order`]: measured errors against the
//!   theoretical bound, and log-log slope estimation.

mod cells;
mod poisson;
mod simplex;
mod study;

pub use cells::{cell_count, CellCount};
pub use poisson::{poisson_check, PoissonCheck};
pub use study::{
    convergence_study, fit_order, read_csv, write_csv, ConvergenceRecord, StudyOptions, CSV_HEADER, NOISE_FLOOR,
};

use std::f64::consts::PI;

use crate::error::{FrolovError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MultiplierParams {
    s: u32,
    d: usize,
}

impl MultiplierParams {
    pub fn new(s: u32, d: usize) -> Result<Self> {
        if s == 0 || d == 0 {
            return Err(FrolovError::InvalidParameter("multiplier needs s >= 1 and d >= 1".into()));
        }
        Ok(Self { s, d })
    }

    pub fn smoothness(&self) -> u32 {
        self.s
    }

    pub fn dimension(&self) -> usize {
        self.d
    }
}

/// `nu_s(y) = prod_j sum_{l=0}^{s} (2 pi |y_j|)^{2l}`, Horner in `(2 pi y_j)^2`.
pub fn multiplier(params: MultiplierParams, y: &[f64]) -> f64 {
    assert_eq!(y.len(), params.d, "point has wrong dimension");
    y.iter()
        .map(|&v| {
            let w = (2.0 * PI * v).powi(2);
            (0..params.s).fold(1.0, |acc, _| acc * w + 1.0)
        })
        .product()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    /// Sum over all multi-indices with max-norm <= s, expanded term by term.
    fn multiplier_expanded(s: u32, y: &[f64]) -> f64 {
        let d = y.len();
        let mut alpha = vec![0u32; d];
        let mut total = 0.0;
        loop {
            total += y
                .iter()
                .zip(&alpha)
                .map(|(&v, &a)| (2.0 * PI * v.abs()).powi(2 * a as i32))
                .product::<f64>();
            let mut k = 0;
            while k < d {
                if alpha[k] < s {
                    alpha[k] += 1;
                    break;
                }
                alpha[k] = 0;
                k += 1;
            }
            if k == d {
                return total;
            }
        }
    }

    #[test]
    fn examples() {
        let p = MultiplierParams::new(1, 2).unwrap();
        assert_eq!(multiplier(p, &[0.0, 0.0]), 1.0);
        let p = MultiplierParams::new(1, 1).unwrap();
        assert_relative_eq!(multiplier(p, &[1.0]), 1.0 + 4.0 * PI * PI, max_relative = 1e-15);
        let p = MultiplierParams::new(2, 1).unwrap();
        let expect = 1.0 + 4.0 * PI.powi(2) + 16.0 * PI.powi(4);
        assert_relative_eq!(multiplier(p, &[1.0]), expect, max_relative = 1e-14);
        assert_relative_eq!(expect, 1599.0239, max_relative = 1e-7);
    }

    #[test]
    fn rejects_zero_parameters() {
        assert!(MultiplierParams::new(0, 2).is_err());
        assert!(MultiplierParams::new(1, 0).is_err());
    }

    #[test]
    fn product_form_equals_expanded_sum() {
        for s in 1..=2 {
            for d in 1..=3 {
                let p = MultiplierParams::new(s, d).unwrap();
                for seed in 0..20 {
                    let y: Vec<f64> = (0..d).map(|j| ((seed * 7 + j * 3) % 11) as f64 * 0.37 - 1.8).collect();
                    assert_relative_eq!(multiplier(p, &y), multiplier_expanded(s, &y), max_relative = 1e-10);
                }
            }
        }
    }

    proptest! {
        #[test]
        fn at_least_one_even_and_monotone(
            s in 1u32..4,
            y in proptest::collection::vec(-3.0f64..3.0, 1..4),
            bump in 0.01f64..1.0,
        ) {
            let p = MultiplierParams::new(s, y.len()).unwrap();
            let v = multiplier(p, &y);
            prop_assert!(v >= 1.0);
            if y.iter().any(|&c| c != 0.0) {
                prop_assert!(v > 1.0);
            }
            let neg: Vec<f64> = y.iter().map(|c| -c).collect();
            prop_assert_eq!(v, multiplier(p, &neg));
            let mut bigger = y.clone();
            bigger[0] = bigger[0].abs() + bump;
            let mut base = y.clone();
            base[0] = base[0].abs();
            prop_assert!(multiplier(p, &bigger) > multiplier(p, &base));
        }
    }
}
