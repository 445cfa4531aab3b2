//! Dense primal simplex for `max c.x` subject to `A x <= b`, `x >= 0`,
//! `b >= 0`. The origin is feasible, so no first phase is needed. Bland's
//! rule prevents cycling; the problems here have at most a dozen columns.

const PIVOT_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum LpOutcome {
    Optimal(f64),
    Unbounded,
}

pub(crate) fn maximize(a: &[Vec<f64>], b: &[f64], c: &[f64]) -> LpOutcome {
    let rows = a.len();
    let cols = c.len();
    debug_assert!(b.iter().all(|&v| v >= 0.0));
    // Tableau with slack columns; last column is the right-hand side.
    let width = cols + rows + 1;
    let mut t = vec![vec![0.0; width]; rows + 1];
    for i in 0..rows {
        t[i][..cols].copy_from_slice(&a[i]);
        t[i][cols + i] = 1.0;
        t[i][width - 1] = b[i];
    }
    for j in 0..cols {
        t[rows][j] = -c[j];
    }
    let mut basis: Vec<usize> = (cols..cols + rows).collect();

    loop {
        let Some(enter) = (0..width - 1).find(|&j| t[rows][j] < -PIVOT_EPS) else {
            return LpOutcome::Optimal(t[rows][width - 1]);
        };
        let mut leave: Option<(usize, f64)> = None;
        for i in 0..rows {
            if t[i][enter] > PIVOT_EPS {
                let ratio = t[i][width - 1] / t[i][enter];
                let better = match leave {
                    None => true,
                    Some((l, r)) => ratio < r - PIVOT_EPS || (ratio <= r + PIVOT_EPS && basis[i] < basis[l]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((pivot_row, _)) = leave else {
            return LpOutcome::Unbounded;
        };
        let p = t[pivot_row][enter];
        for v in t[pivot_row].iter_mut() {
            *v /= p;
        }
        let pivot = t[pivot_row].clone();
        for (i, row) in t.iter_mut().enumerate() {
            if i != pivot_row {
                let factor = row[enter];
                if factor != 0.0 {
                    for (v, pv) in row.iter_mut().zip(&pivot) {
                        *v -= factor * pv;
                    }
                }
            }
        }
        basis[pivot_row] = enter;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn textbook_problem() {
        // max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18 -> 36 at (2, 6).
        let a = vec![vec![1.0, 0.0], vec![0.0, 2.0], vec![3.0, 2.0]];
        assert_eq!(maximize(&a, &[4.0, 12.0, 18.0], &[3.0, 5.0]), LpOutcome::Optimal(36.0));
    }

    #[test]
    fn unbounded_problem() {
        let a = vec![vec![1.0, -1.0]];
        assert_eq!(maximize(&a, &[1.0], &[0.0, 1.0]), LpOutcome::Unbounded);
    }

    #[test]
    fn degenerate_problem_terminates() {
        // Several constraints tight at the origin.
        let a = vec![vec![1.0, 1.0], vec![1.0, -1.0], vec![-1.0, 1.0], vec![1.0, 0.0]];
        match maximize(&a, &[2.0, 0.0, 0.0, 5.0], &[1.0, 1.0]) {
            LpOutcome::Optimal(v) => assert!((v - 2.0).abs() < 1e-12),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn matches_vertex_enumeration_on_random_boxes() {
        // max c.x over [0, u1] x [0, u2]: optimum at a vertex.
        for k in 0..20 {
            let u = [1.0 + k as f64 * 0.3, 2.0 + (k % 5) as f64];
            let c = [((k * 7) % 5) as f64 - 1.0, ((k * 3) % 4) as f64 - 0.5];
            let a = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
            let best = [0.0, u[0]]
                .iter()
                .flat_map(|&x| [0.0, u[1]].map(|y| c[0] * x + c[1] * y))
                .fold(f64::NEG_INFINITY, f64::max);
            match maximize(&a, &u, &c) {
                LpOutcome::Optimal(v) => assert!((v - best).abs() < 1e-12),
                other => panic!("{other:?}"),
            }
        }
    }
}
