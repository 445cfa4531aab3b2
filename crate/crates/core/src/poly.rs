//! The defining polynomials of the Frolov lattice and their real roots.
//!
//! Two constructions are supported:
//!
//! * `Standard`: `P_d(t) = (t - 1)(t - 3)...(t - (2d - 1)) - 1`. Monic with
//!   integer coefficients, irreducible over the rationals and with `d`
//!   distinct real roots.
//! * `Chebyshev`: `2 cos(d arccos(t / 2))`, the monic rescaled Chebyshev
//!   polynomial, only for `d` a power of two. Its roots are explicit.
//!
//! Evaluation never expands the product into monomial coefficients; those
//! overflow 64-bit integers around `d = 16`.

use crate::ddouble::DoubleDouble;
use crate::error::{FrolovError, Result};

/// Largest dimension for which roots are computed.
pub const MAX_DIMENSION: usize = 32;

/// Largest dimension accepted by [`FrolovPolynomial::has_no_rational_root`].
pub const RATIONAL_ROOT_MAX_DIMENSION: usize = 12;

const BISECTION_WIDTH: f64 = 1e-10;
const MIN_GRID_SPACING: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PolyKind {
    Standard,
    Chebyshev,
}

impl PolyKind {
    pub fn name(self) -> &'static str {
        match self {
            PolyKind::Standard => "standard",
            PolyKind::Chebyshev => "chebyshev",
        }
    }
}

impl std::str::FromStr for PolyKind {
    type Err = FrolovError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "standard" => Ok(PolyKind::Standard),
            "chebyshev" => Ok(PolyKind::Chebyshev),
            other => Err(FrolovError::InvalidParameter(format!("unknown polynomial kind '{other}'"))),
        }
    }
}

impl std::fmt::Display for PolyKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FrolovPolynomial {
    d: usize,
    kind: PolyKind,
}

impl FrolovPolynomial {
    pub fn new(d: usize, kind: PolyKind) -> Result<Self> {
        if d == 0 || d > MAX_DIMENSION {
            return Err(FrolovError::InvalidParameter(format!(
                "dimension must lie in 1..={MAX_DIMENSION}, got {d}"
            )));
        }
        if kind == PolyKind::Chebyshev && !d.is_power_of_two() {
            return Err(FrolovError::InvalidParameter(format!(
                "the Chebyshev construction needs a power-of-two dimension, got {d}"
            )));
        }
        Ok(Self { d, kind })
    }

    pub fn standard(d: usize) -> Result<Self> {
        Self::new(d, PolyKind::Standard)
    }

    pub fn chebyshev(d: usize) -> Result<Self> {
        Self::new(d, PolyKind::Chebyshev)
    }

    pub fn degree(&self) -> usize {
        self.d
    }

    pub fn kind(&self) -> PolyKind {
        self.kind
    }

    /// The abscissae `1, 3, ..., 2d - 1` of the standard product form.
    pub fn abscissae(&self) -> impl Iterator<Item = i64> {
        (1..=self.d as i64).map(|j| 2 * j - 1)
    }

    pub fn evaluate(&self, t: f64) -> f64 {
        match self.kind {
            PolyKind::Standard => self.abscissae().map(|b| t - b as f64).product::<f64>() - 1.0,
            PolyKind::Chebyshev => {
                if t.abs() <= 2.0 {
                    2.0 * (self.d as f64 * (t / 2.0).acos()).cos()
                } else {
                    let (mut prev, mut cur) = (2.0, t);
                    for _ in 1..self.d {
                        let next = t * cur - prev;
                        prev = cur;
                        cur = next;
                    }
                    cur
                }
            }
        }
    }

    /// Exact value at an integer argument, or `None` if it does not fit in
    /// an `i128`. For the standard kind `None` implies `|P(t)| > 2^126`.
    pub fn evaluate_exact(&self, t: i64) -> Option<i128> {
        match self.kind {
            PolyKind::Standard => {
                let factors: Vec<i128> = self.abscissae().map(|b| t as i128 - b as i128).collect();
                if factors.contains(&0) {
                    return Some(-1);
                }
                factors
                    .into_iter()
                    .try_fold(1i128, |acc, f| acc.checked_mul(f))
                    .map(|p| p - 1)
            }
            PolyKind::Chebyshev => {
                let t = t as i128;
                let (mut prev, mut cur) = (2i128, t);
                for _ in 1..self.d {
                    let next = t.checked_mul(cur)?.checked_sub(prev)?;
                    prev = cur;
                    cur = next;
                }
                Some(cur)
            }
        }
    }

    /// Value and first derivative in double-double precision.
    pub fn evaluate_with_derivative(&self, t: DoubleDouble) -> (DoubleDouble, DoubleDouble) {
        match self.kind {
            PolyKind::Standard => {
                let mut p = DoubleDouble::ONE;
                let mut dp = DoubleDouble::ZERO;
                for b in self.abscissae() {
                    let f = t - DoubleDouble::from(b);
                    dp = dp * f + p;
                    p = p * f;
                }
                (p - DoubleDouble::ONE, dp)
            }
            PolyKind::Chebyshev => {
                let two = DoubleDouble::from_f64(2.0);
                let (mut prev, mut cur) = (two, t);
                let (mut dprev, mut dcur) = (DoubleDouble::ZERO, DoubleDouble::ONE);
                for _ in 1..self.d {
                    let next = t * cur - prev;
                    let dnext = cur + t * dcur - dprev;
                    prev = cur;
                    cur = next;
                    dprev = dcur;
                    dcur = dnext;
                }
                (cur, dcur)
            }
        }
    }

    fn sign_at(&self, t: f64) -> i8 {
        let v = if t.fract() == 0.0 {
            self.evaluate_exact(t as i64).map(|v| v.signum() as f64)
        } else {
            None
        }
        .unwrap_or_else(|| self.evaluate_with_derivative(DoubleDouble::from_f64(t)).0.hi());
        if v > 0.0 {
            1
        } else if v < 0.0 {
            -1
        } else {
            0
        }
    }

    /// Real roots in decreasing order, polished to double-double accuracy.
    pub fn find_roots(&self) -> Result<RootSet> {
        let mut roots = match self.kind {
            PolyKind::Standard => self.standard_roots()?,
            PolyKind::Chebyshev => (1..=self.d)
                .map(|i| {
                    let angle = std::f64::consts::PI * (2 * i - 1) as f64 / (2 * self.d) as f64;
                    self.polish(DoubleDouble::from_f64(2.0 * angle.cos()))
                })
                .collect(),
        };
        roots.sort_by(|a, b| b.partial_cmp(a).expect("finite roots"));
        let residual = roots
            .iter()
            .map(|r| self.evaluate_with_derivative(DoubleDouble::from_f64(r.hi())).0.to_f64().abs())
            .fold(0.0, f64::max);
        Ok(RootSet { d: self.d, kind: self.kind, roots, residual })
    }

    fn standard_roots(&self) -> Result<Vec<DoubleDouble>> {
        // Every root lies in [-1, 2d]. Dyadic spacings keep the odd
        // abscissae on the grid, where P = -1 exactly.
        let lo = -1.0;
        let hi = 2.0 * self.d as f64;
        let mut spacing = 0.5;
        let mut found = 0;
        while spacing >= MIN_GRID_SPACING {
            let steps = ((hi - lo) / spacing).round() as usize;
            let mut roots = Vec::with_capacity(self.d);
            let mut prev: Option<(f64, i8)> = None;
            for i in 0..=steps {
                let t = lo + i as f64 * spacing;
                let sign = self.sign_at(t);
                if sign == 0 {
                    roots.push(self.polish(DoubleDouble::from_f64(t)));
                } else if let Some((pt, ps)) = prev {
                    if ps != 0 && ps != sign {
                        roots.push(self.bracketed_root(pt, t, ps));
                    }
                }
                prev = Some((t, sign));
            }
            found = roots.len();
            if found == self.d {
                return Ok(roots);
            }
            spacing /= 2.0;
        }
        Err(FrolovError::RootCountMismatch { d: self.d, found })
    }

    fn bracketed_root(&self, mut left: f64, mut right: f64, left_sign: i8) -> DoubleDouble {
        while right - left > BISECTION_WIDTH {
            let mid = 0.5 * (left + right);
            let s = self.sign_at(mid);
            if s == 0 {
                return self.polish(DoubleDouble::from_f64(mid));
            }
            if s == left_sign {
                left = mid;
            } else {
                right = mid;
            }
        }
        self.polish(DoubleDouble::from_f64(0.5 * (left + right)))
    }

    fn polish(&self, start: DoubleDouble) -> DoubleDouble {
        let mut t = start;
        for _ in 0..8 {
            let (p, dp) = self.evaluate_with_derivative(t);
            if p.is_zero() || dp.is_zero() {
                break;
            }
            let step = p / dp;
            t = t - step;
            if step.abs().hi() <= 1e-32 * t.abs().hi().max(1.0) {
                break;
            }
        }
        t
    }

    /// Rational-root test: true iff `P_d` has no rational root.
    ///
    /// A monic integer polynomial can only have integer rational roots, and
    /// those divide the constant term. Every such divisor is tested by exact
    /// integer evaluation. Having no rational root is necessary, not
    /// sufficient, for irreducibility. `d = 1` returns `false` since `t - 2`
    /// has the root 2; a linear polynomial is trivially irreducible, so
    /// callers skip it.
    pub fn has_no_rational_root(&self) -> Result<bool> {
        if self.kind != PolyKind::Standard || self.d > RATIONAL_ROOT_MAX_DIMENSION {
            return Err(FrolovError::InvalidParameter(format!(
                "rational-root test needs the standard kind with d <= {RATIONAL_ROOT_MAX_DIMENSION}"
            )));
        }
        let constant = self.evaluate_exact(0).expect("constant term fits in i128");
        if constant == 0 {
            return Ok(false);
        }
        let n = constant.unsigned_abs();
        let is_root = |t: i128| self.evaluate_exact(t as i64) == Some(0);
        let mut k: u128 = 1;
        while k * k <= n {
            if n.is_multiple_of(k) {
                for c in [k, n / k] {
                    let c = c as i128;
                    if is_root(c) || is_root(-c) {
                        return Ok(false);
                    }
                }
            }
            k += 1;
        }
        Ok(true)
    }
}

/// The `d` real roots of a [`FrolovPolynomial`], strictly decreasing.
#[derive(Debug, Clone, PartialEq)]
pub struct RootSet {
    d: usize,
    kind: PolyKind,
    roots: Vec<DoubleDouble>,
    residual: f64,
}

impl RootSet {
    pub fn dimension(&self) -> usize {
        self.d
    }

    pub fn kind(&self) -> PolyKind {
        self.kind
    }

    pub fn roots(&self) -> &[DoubleDouble] {
        &self.roots
    }

    pub fn values(&self) -> Vec<f64> {
        self.roots.iter().map(|r| r.to_f64()).collect()
    }

    /// `max |P(xi)|` evaluated at the `f64`-rounded roots.
    pub fn residual(&self) -> f64 {
        self.residual
    }

    /// Checks `|P(xi)| <= 1e-12 max(1, |P'(xi)|)` root by root.
    pub fn is_backward_stable(&self) -> bool {
        let p = FrolovPolynomial { d: self.d, kind: self.kind };
        self.roots.iter().all(|r| {
            let (v, dv) = p.evaluate_with_derivative(DoubleDouble::from_f64(r.hi()));
            v.to_f64().abs() <= 1e-12 * dv.to_f64().abs().max(1.0)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn evaluate_examples() {
        assert_eq!(FrolovPolynomial::standard(1).unwrap().evaluate(2.0), 0.0);
        assert_eq!(FrolovPolynomial::standard(2).unwrap().evaluate(0.0), 2.0);
        let cheb = FrolovPolynomial::chebyshev(2).unwrap();
        assert_abs_diff_eq!(cheb.evaluate(2f64.sqrt()), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn chebyshev_continuation_matches_recurrence_outside_interval() {
        // 2 T_4(t/2) = t^4 - 4t^2 + 2
        let cheb = FrolovPolynomial::chebyshev(4).unwrap();
        for t in [-3.5, -2.5, 2.25, 3.0, 7.0] {
            let t: f64 = t;
            let expect = t.powi(4) - 4.0 * t * t + 2.0;
            assert_abs_diff_eq!(cheb.evaluate(t), expect, epsilon = 1e-10 * expect.abs());
        }
        for t in [-2.0, -1.0, 0.3, 1.9] {
            let t: f64 = t;
            let expect = t.powi(4) - 4.0 * t * t + 2.0;
            assert_abs_diff_eq!(cheb.evaluate(t), expect, epsilon = 1e-12);
        }
    }

    #[test]
    fn chebyshev_requires_power_of_two() {
        assert!(FrolovPolynomial::chebyshev(3).is_err());
        assert!(FrolovPolynomial::chebyshev(6).is_err());
        assert!(FrolovPolynomial::chebyshev(1).is_ok());
        assert!(FrolovPolynomial::chebyshev(8).is_ok());
        assert!(FrolovPolynomial::standard(0).is_err());
        assert!(FrolovPolynomial::standard(33).is_err());
    }

    #[test]
    fn exact_evaluation_at_integers() {
        let p = FrolovPolynomial::standard(3).unwrap();
        // (t-1)(t-3)(t-5) - 1
        for t in -10i64..20 {
            let expect = (t - 1) as i128 * (t - 3) as i128 * (t - 5) as i128 - 1;
            assert_eq!(p.evaluate_exact(t), Some(expect));
        }
        let big = FrolovPolynomial::standard(32).unwrap();
        assert_eq!(big.evaluate_exact(1_000_000_000), None);
        assert_eq!(big.evaluate_exact(7), Some(-1));
    }

    #[test]
    fn roots_of_quadratic() {
        let roots = FrolovPolynomial::standard(2).unwrap().find_roots().unwrap();
        let v = roots.values();
        assert_eq!(v.len(), 2);
        assert_abs_diff_eq!(v[0], 2.0 + 2f64.sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(v[1], 2.0 - 2f64.sqrt(), epsilon = 1e-15);
    }

    #[test]
    fn root_of_linear() {
        let roots = FrolovPolynomial::standard(1).unwrap().find_roots().unwrap();
        assert_eq!(roots.values(), vec![2.0]);
        assert_eq!(roots.residual(), 0.0);
    }

    #[test]
    fn chebyshev_roots_d4() {
        let roots = FrolovPolynomial::chebyshev(4).unwrap().find_roots().unwrap();
        let expect = [1.847759065022573, 0.7653668647301796, -0.7653668647301796, -1.847759065022573];
        for (r, e) in roots.values().iter().zip(expect) {
            assert_abs_diff_eq!(*r, e, epsilon = 1e-12);
        }
    }

    #[test]
    fn roots_are_backward_stable_and_distinct() {
        for d in 1..=10 {
            for kind in [PolyKind::Standard, PolyKind::Chebyshev] {
                let Ok(p) = FrolovPolynomial::new(d, kind) else { continue };
                let roots = p.find_roots().unwrap();
                assert_eq!(roots.roots().len(), d);
                assert!(roots.is_backward_stable(), "d={d} {kind}");
                let v = roots.values();
                assert!(v.windows(2).all(|w| w[0] > w[1]), "d={d} {kind}: {v:?}");
                if kind == PolyKind::Chebyshev {
                    assert!(v.iter().all(|x| x.abs() < 2.0));
                }
            }
        }
    }

    #[test]
    fn large_dimensions_still_find_all_roots() {
        for d in [16, 24, 32] {
            let roots = FrolovPolynomial::standard(d).unwrap().find_roots().unwrap();
            assert_eq!(roots.roots().len(), d);
            assert!(roots.is_backward_stable());
        }
    }

    #[test]
    fn standard_roots_interlace_abscissae() {
        // Q(t) = prod (t - b_j) alternates sign between abscissae; P = Q - 1
        // has two roots in every bounded interval where Q > 0, one in the
        // unbounded interval where Q > 0 on the right, and one on the left
        // when d is even.
        for d in 2..=10 {
            let p = FrolovPolynomial::standard(d).unwrap();
            let v = p.find_roots().unwrap().values();
            let b: Vec<f64> = p.abscissae().map(|x| x as f64).collect();
            let mut counted = 0;
            for w in b.windows(2) {
                let inside = v.iter().filter(|&&r| r > w[0] && r < w[1]).count();
                let q_mid: f64 = b.iter().map(|x| 0.5 * (w[0] + w[1]) - x).product();
                assert_eq!(inside, if q_mid > 0.0 { 2 } else { 0 }, "d={d}");
                counted += inside;
            }
            let right = v.iter().filter(|&&r| r > *b.last().unwrap()).count();
            let left = v.iter().filter(|&&r| r < b[0]).count();
            assert_eq!(right, 1);
            assert_eq!(left, usize::from(d % 2 == 0));
            assert_eq!(counted + right + left, d);
        }
    }

    #[test]
    fn rational_root_examples() {
        assert!(!FrolovPolynomial::standard(1).unwrap().has_no_rational_root().unwrap());
        for d in 2..=RATIONAL_ROOT_MAX_DIMENSION {
            assert!(FrolovPolynomial::standard(d).unwrap().has_no_rational_root().unwrap(), "d={d}");
        }
        assert!(FrolovPolynomial::standard(13).unwrap().has_no_rational_root().is_err());
        assert!(FrolovPolynomial::chebyshev(4).unwrap().has_no_rational_root().is_err());
    }

    #[test]
    fn derivative_matches_finite_difference() {
        for (d, kind) in [(5, PolyKind::Standard), (8, PolyKind::Chebyshev)] {
            let p = FrolovPolynomial::new(d, kind).unwrap();
            for t in [-0.7, 0.4, 1.3, 1.95] {
                let h = 1e-6;
                let fd = (p.evaluate(t + h) - p.evaluate(t - h)) / (2.0 * h);
                let (_, dp) = p.evaluate_with_derivative(DoubleDouble::from_f64(t));
                assert!((fd - dp.to_f64()).abs() <= 1e-5 * dp.to_f64().abs().max(1.0));
            }
        }
    }
}
