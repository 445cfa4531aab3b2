//! Polylogarithm at non-positive integer order.
//!
//! `Li_{-k}(z) = sum_{l >= 1} l^k z^l`, summed directly. For the arguments
//! used by the error constant (`z = 2^(1 - 2s) <= 1/2`) the series converges
//! geometrically.

use crate::error::{FrolovError, Result};
use crate::sum::NeumaierSum;

const RELATIVE_CUTOFF: f64 = 1e-16;

/// `Li_{-k}(z)` for `0 < z < 1`.
pub fn polylog_negative_order(k: u32, z: f64) -> Result<f64> {
    if !(z > 0.0 && z < 1.0) {
        return Err(FrolovError::DomainError(format!("polylogarithm argument must lie in (0, 1), got {z}")));
    }
    // Terms increase until l ~ k / (-ln z); only stop on the decreasing tail.
    let peak = k as f64 / -z.ln();
    let mut acc = NeumaierSum::new();
    let mut power = 1.0;
    let mut l: u64 = 0;
    loop {
        l += 1;
        power *= z;
        let term = (l as f64).powi(k as i32) * power;
        acc.add(term);
        if l as f64 > peak && term < RELATIVE_CUTOFF * acc.value() {
            break;
        }
        if term == 0.0 {
            break;
        }
    }
    Ok(acc.value())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn brute_force(k: u32, z: f64, terms: u32) -> f64 {
        (1..=terms).map(|l| (l as f64).powi(k as i32) * z.powi(l as i32)).sum()
    }

    #[test]
    fn closed_forms() {
        assert_relative_eq!(polylog_negative_order(0, 0.5).unwrap(), 1.0, max_relative = 1e-14);
        assert_relative_eq!(polylog_negative_order(1, 0.5).unwrap(), 2.0, max_relative = 1e-14);
        assert_relative_eq!(polylog_negative_order(2, 0.5).unwrap(), brute_force(2, 0.5, 200), max_relative = 1e-14);
        assert_relative_eq!(polylog_negative_order(2, 0.5).unwrap(), 6.0, max_relative = 1e-14);
    }

    #[test]
    fn order_zero_is_geometric() {
        for z in [1e-3, 0.125, 0.3, 0.5, 0.9, 0.99] {
            assert_relative_eq!(polylog_negative_order(0, z).unwrap(), z / (1.0 - z), max_relative = 1e-14);
        }
    }

    #[test]
    fn higher_orders_match_rational_forms() {
        // Li_{-1}(z) = z/(1-z)^2, Li_{-2}(z) = z(1+z)/(1-z)^3,
        // Li_{-3}(z) = z(1 + 4z + z^2)/(1-z)^4
        for z in [0.125f64, 0.5, 0.8] {
            assert_relative_eq!(polylog_negative_order(1, z).unwrap(), z / (1.0 - z).powi(2), max_relative = 1e-13);
            assert_relative_eq!(
                polylog_negative_order(2, z).unwrap(),
                z * (1.0 + z) / (1.0 - z).powi(3),
                max_relative = 1e-13
            );
            assert_relative_eq!(
                polylog_negative_order(3, z).unwrap(),
                z * (1.0 + 4.0 * z + z * z) / (1.0 - z).powi(4),
                max_relative = 1e-13
            );
        }
    }

    #[test]
    fn rejects_arguments_outside_unit_interval() {
        for z in [0.0, 1.0, -0.5, 1.5, f64::NAN] {
            assert!(matches!(polylog_negative_order(1, z), Err(FrolovError::DomainError(_))));
        }
    }

    #[test]
    fn increasing_in_z() {
        for k in 0..6 {
            let values: Vec<f64> = (1..99).map(|i| polylog_negative_order(k, i as f64 / 100.0).unwrap()).collect();
            assert!(values.windows(2).all(|w| w[1] > w[0]), "k={k}");
        }
    }
}
