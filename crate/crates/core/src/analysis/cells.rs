use nalgebra::DMatrix;
use rayon::prelude::*;

use super::simplex::{maximize, LpOutcome};
use crate::error::{FrolovError, Result};
use crate::lattice::{FrolovBasis, DEFAULT_BUDGET};

/// Largest dimension for the cell-count diagnostic.
pub const CELL_COUNT_MAX_DIMENSION: usize = 4;

/// Interior margin a cell must share with the parallelepiped to count.
const CELL_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellCount {
    /// Number of open unit cells `m + (0, 1)^d` meeting `a T^{-1}([0, 1]^d)`.
    pub cells: u64,
    /// `a^{-d} |det T| cells`, at least one and tending to one.
    pub ratio: f64,
}

/// Counts the unit cells meeting the parallelepiped `a T^{-1}([0, 1]^d)`.
///
/// Cells whose corners all map inside the parallelepiped are accepted and
/// cells separated by one of its facet planes are rejected outright. The
/// rest are decided by a small linear program that maximizes the margin by
/// which a point of the parallelepiped sits inside the open cell.
pub fn cell_count(basis: &FrolovBasis, a: f64) -> Result<CellCount> {
    let d = basis.dimension();
    if d > CELL_COUNT_MAX_DIMENSION {
        return Err(FrolovError::InvalidParameter(format!(
            "cell count supports d <= {CELL_COUNT_MAX_DIMENSION}, got {d}"
        )));
    }
    if !(a > 1.0 && a.is_finite()) {
        return Err(FrolovError::InvalidParameter(format!("scale a must be a finite real > 1, got {a}")));
    }
    // Parallelepiped P = G [0,1]^d with G = a B^T = a T^{-1}; G^{-1} = T / a.
    let forward: DMatrix<f64> = basis.dual_generator().transpose() * a;
    let inverse: DMatrix<f64> = basis.generator() / a;

    let mut lower = vec![0i64; d];
    let mut upper = vec![0i64; d];
    for k in 0..d {
        let row = forward.row(k);
        let min: f64 = row.iter().map(|v| v.min(0.0)).sum();
        let max: f64 = row.iter().map(|v| v.max(0.0)).sum();
        lower[k] = min.floor() as i64;
        upper[k] = max.ceil() as i64 - 1;
    }
    let total = (0..d)
        .map(|k| (upper[k] - lower[k] + 1) as u128)
        .try_fold(1u128, |acc, n| acc.checked_mul(n))
        .unwrap_or(u128::MAX);
    if total > DEFAULT_BUDGET as u128 {
        return Err(FrolovError::BudgetExceeded { candidates: total, limit: DEFAULT_BUDGET });
    }

    let cells: u64 = (lower[0]..=upper[0])
        .into_par_iter()
        .map(|first| {
            let mut m = lower.clone();
            m[0] = first;
            let mut count = 0u64;
            loop {
                if cell_meets(&forward, &inverse, &m) {
                    count += 1;
                }
                let mut k = 1;
                while k < d {
                    if m[k] < upper[k] {
                        m[k] += 1;
                        break;
                    }
                    m[k] = lower[k];
                    k += 1;
                }
                if k >= d {
                    return count;
                }
            }
        })
        .sum();
    let ratio = basis.abs_det_generator() / a.powi(d as i32) * cells as f64;
    Ok(CellCount { cells, ratio })
}

fn cell_meets(forward: &DMatrix<f64>, inverse: &DMatrix<f64>, m: &[i64]) -> bool {
    let d = m.len();
    // Preimage coordinates of every cell corner.
    let corners: Vec<Vec<f64>> = (0..1usize << d)
        .map(|mask| {
            (0..d)
                .map(|k| (0..d).map(|j| inverse[(k, j)] * (m[j] + ((mask >> j) & 1) as i64) as f64).sum())
                .collect()
        })
        .collect();
    if corners.iter().all(|u: &Vec<f64>| u.iter().all(|&v| (0.0..=1.0).contains(&v))) {
        return true;
    }
    for k in 0..d {
        if corners.iter().all(|u| u[k] >= 1.0) || corners.iter().all(|u| u[k] <= 0.0) {
            return false;
        }
    }
    max_margin(forward, m) > CELL_TOLERANCE
}

/// `max t` such that some `u in [0,1]^d` has `m_i + t <= (G u)_i <= m_i + 1 - t`.
fn max_margin(forward: &DMatrix<f64>, m: &[i64]) -> f64 {
    let d = m.len();
    // Shift t = t' - K so that the origin is feasible.
    let shift = m.iter().map(|v| v.abs()).max().unwrap_or(0) as f64 + 2.0;
    let mut rows = Vec::with_capacity(3 * d);
    let mut rhs = Vec::with_capacity(3 * d);
    for i in 0..d {
        let mut lower: Vec<f64> = (0..d).map(|j| -forward[(i, j)]).collect();
        lower.push(1.0);
        rows.push(lower);
        rhs.push(shift - m[i] as f64);
        let mut upper: Vec<f64> = (0..d).map(|j| forward[(i, j)]).collect();
        upper.push(1.0);
        rows.push(upper);
        rhs.push(m[i] as f64 + 1.0 + shift);
    }
    for j in 0..d {
        let mut bound = vec![0.0; d + 1];
        bound[j] = 1.0;
        rows.push(bound);
        rhs.push(1.0);
    }
    let mut objective = vec![0.0; d + 1];
    objective[d] = 1.0;
    match maximize(&rows, &rhs, &objective) {
        LpOutcome::Optimal(v) => v - shift,
        LpOutcome::Unbounded => unreachable!("margin is bounded by one half"),
    }
}
