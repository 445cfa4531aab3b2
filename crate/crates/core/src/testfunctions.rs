//! Integrands with certified exact integrals.
//!
//! All families are tensor products of a one-dimensional factor, extended by
//! zero outside `[0, 1]`:
//!
//! * `bump`: `c_p x^p (1 - x)^p` with `c_p = (2p + 1)! / (p!)^2`, so every
//!   factor integrates to one. Derivatives up to order `p - 1` vanish at the
//!   boundary and the derivative of order `p` is bounded, so the zero
//!   extension has square-integrable mixed derivatives up to order `p`.
//! * `sine`: `sin^(2s)(pi x)`, vanishing to order `2s` at the boundary, with
//!   a closed-form Fourier transform.
//! * `trig`: `cos(2 pi k x)`, smooth and periodic but not vanishing at the
//!   boundary.
//!
//! The mixed Sobolev norm of these functions is not computed; convergence
//! tests assert rates, which do not depend on it.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;

use crate::error::{FrolovError, Result};

const MAX_BUMP_ORDER: u32 = 30;
const MAX_SINE_POWER: u32 = 15;

#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    Bump { p: u32 },
    SinePower { s: u32 },
    TrigMode { k: Vec<i64> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct TestFunction {
    d: usize,
    family: Family,
    smoothness: Option<u32>,
    exact_integral: f64,
    provenance: &'static str,
    vanishing: bool,
    scale: f64,
}

fn factorial(n: u32) -> u128 {
    (1..=n as u128).product()
}

fn binomial(n: u32, k: u32) -> u128 {
    let k = k.min(n - k);
    (0..k as u128).fold(1u128, |acc, i| acc * (n as u128 - i) / (i + 1))
}

fn check_dimension(d: usize) -> Result<()> {
    if d == 0 {
        return Err(FrolovError::InvalidParameter("dimension must be at least 1".into()));
    }
    Ok(())
}

/// `sin(pi x)`, exactly zero at integers.
pub(crate) fn sin_pi(x: f64) -> f64 {
    let r = x - 2.0 * (0.5 * x).round();
    if r == 0.0 || r.abs() == 1.0 {
        return 0.0;
    }
    if r.abs() > 0.5 {
        (PI * (r.signum() - r)).sin()
    } else {
        (PI * r).sin()
    }
}

/// `cos(pi x)`, exactly zero at half-integers.
pub(crate) fn cos_pi(x: f64) -> f64 {
    let r = (x - 2.0 * (0.5 * x).round()).abs();
    if r == 0.5 {
        return 0.0;
    }
    if r > 0.5 {
        -(PI * (1.0 - r)).cos()
    } else {
        (PI * r).cos()
    }
}

/// `sin(pi w) / (pi w)`.
fn sinc(w: f64) -> f64 {
    if w == 0.0 {
        1.0
    } else {
        sin_pi(w) / (PI * w)
    }
}

/// `c_p x^p (1-x)^p` on `[0, 1]`, zero outside.
pub fn bump(d: usize, p: u32) -> Result<TestFunction> {
    check_dimension(d)?;
    if p == 0 || p > MAX_BUMP_ORDER {
        return Err(FrolovError::InvalidParameter(format!("bump order must lie in 1..={MAX_BUMP_ORDER}, got {p}")));
    }
    let scale = (factorial(2 * p + 1) / (factorial(p) * factorial(p))) as f64;
    Ok(TestFunction {
        d,
        family: Family::Bump { p },
        smoothness: Some(p),
        exact_integral: 1.0,
        provenance: "Beta integral: int_0^1 u^p (1-u)^p du = (p!)^2 / (2p+1)!",
        vanishing: true,
        scale,
    })
}

/// `prod_j sin^(2s)(pi x_j)`.
pub fn sine_power(d: usize, s: u32) -> Result<TestFunction> {
    check_dimension(d)?;
    if s == 0 || s > MAX_SINE_POWER {
        return Err(FrolovError::InvalidParameter(format!("sine power must lie in 1..={MAX_SINE_POWER}, got {s}")));
    }
    let one_d = binomial(2 * s, s) as f64 / 4f64.powi(s as i32);
    Ok(TestFunction {
        d,
        family: Family::SinePower { s },
        smoothness: Some(2 * s),
        exact_integral: one_d.powi(d as i32),
        provenance: "Wallis: int_0^1 sin^(2s)(pi u) du = binom(2s, s) / 4^s",
        vanishing: true,
        scale: 1.0,
    })
}

/// `prod_j cos(2 pi k_j x_j)`.
pub fn trig_mode(d: usize, k: Vec<i64>) -> Result<TestFunction> {
    check_dimension(d)?;
    if k.len() != d {
        return Err(FrolovError::InvalidParameter(format!("frequency vector has length {}, expected {d}", k.len())));
    }
    let exact = if k.iter().all(|&v| v == 0) { 1.0 } else { 0.0 };
    Ok(TestFunction {
        d,
        family: Family::TrigMode { k },
        smoothness: None,
        exact_integral: exact,
        provenance: "cosine over whole periods",
        vanishing: false,
        scale: 1.0,
    })
}

impl TestFunction {
    pub fn dimension(&self) -> usize {
        self.d
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn name(&self) -> &'static str {
        match self.family {
            Family::Bump { .. } => "bump",
            Family::SinePower { .. } => "sine",
            Family::TrigMode { .. } => "trig",
        }
    }

    /// Order `s` of square-integrable mixed derivatives; `None` for smooth
    /// periodic functions that are not in the vanishing class.
    pub fn smoothness(&self) -> Option<u32> {
        self.smoothness
    }

    pub fn exact_integral(&self) -> f64 {
        self.exact_integral
    }

    pub fn provenance(&self) -> &'static str {
        self.provenance
    }

    /// Support inside the open cube, with the zero extension continuous.
    pub fn is_vanishing(&self) -> bool {
        self.vanishing
    }

    pub fn has_transform(&self) -> bool {
        matches!(self.family, Family::SinePower { .. })
    }

    /// One-dimensional factor along coordinate `j`.
    pub fn factor(&self, j: usize, t: f64) -> f64 {
        match &self.family {
            Family::Bump { p } => {
                if !(0.0..=1.0).contains(&t) {
                    return 0.0;
                }
                self.scale * (t * (1.0 - t)).powi(*p as i32)
            }
            Family::SinePower { s } => {
                if !(0.0..=1.0).contains(&t) {
                    return 0.0;
                }
                sin_pi(t).powi(2 * *s as i32)
            }
            Family::TrigMode { k } => cos_pi(2.0 * k[j] as f64 * t),
        }
    }

    pub fn evaluate(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.d);
        x.iter().enumerate().map(|(j, &t)| self.factor(j, t)).product()
    }

    /// Fourier transform `int f(x) exp(-2 pi i <y, x>) dx` of the zero
    /// extension.
    pub fn fourier_transform(&self, y: &[f64]) -> Result<Complex64> {
        let Family::SinePower { s } = self.family else {
            return Err(FrolovError::UnsupportedFunction(self.selector()));
        };
        Ok(y.iter().map(|&v| sine_power_transform(s, v)).product())
    }

    /// Canonical selector string, e.g. `bump:d=2,p=2`.
    pub fn selector(&self) -> String {
        match &self.family {
            Family::Bump { p } => format!("bump:d={},p={p}", self.d),
            Family::SinePower { s } => format!("sine:d={},s={s}", self.d),
            Family::TrigMode { k } => {
                let k: Vec<String> = k.iter().map(|v| v.to_string()).collect();
                format!("trig:d={},k={}", self.d, k.join("/"))
            }
        }
    }
}

impl fmt::Display for TestFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.selector())
    }
}

/// Transform of `sin^(2s)(pi x)` restricted to `[0, 1]`.
///
/// Expanding `sin^(2s)(pi x) = 4^{-s} sum_{|k| <= s} (-1)^k binom(2s, s+k)
/// e^{2 pi i k x}` and summing the partial fractions gives
///
/// `f^(y) = e^{-i pi y} 4^{-s} (-1)^s (2s)! sin(pi y) / (pi prod_{|j| <= s} (y - j))`,
///
/// which has no cancellation for large `|y|`. Near an integer `k0` with
/// `|k0| <= s` the factor `sin(pi y) / (pi (y - k0))` becomes `(-1)^k0
/// sinc(y - k0)`.
pub fn sine_power_transform(s: u32, y: f64) -> Complex64 {
    let s_i = s as i64;
    let mut amplitude = factorial(2 * s) as f64 / 4f64.powi(s as i32);
    if s % 2 == 1 {
        amplitude = -amplitude;
    }
    let k0 = y.round() as i64;
    let kernel = if k0.abs() <= s_i {
        let sign = if k0 % 2 == 0 { 1.0 } else { -1.0 };
        let rest: f64 = (-s_i..=s_i).filter(|&j| j != k0).map(|j| y - j as f64).product();
        sign * sinc(y - k0 as f64) / rest
    } else {
        let all: f64 = (-s_i..=s_i).map(|j| y - j as f64).product();
        sin_pi(y) / (PI * all)
    };
    let phase = Complex64::new(cos_pi(y), -sin_pi(y));
    phase * (amplitude * kernel)
}

/// Parses `name:key=value[,key=value]*`.
///
/// Names: `bump` (keys `d`, `p`), `sine` (keys `d`, `s`) and `trig` (keys
/// `d`, `k` with `/`-separated frequencies). A missing `d` falls back to
/// `default_d`.
pub fn parse_selector(selector: &str, default_d: Option<usize>) -> Result<TestFunction> {
    let bad = |msg: String| FrolovError::InvalidParameter(format!("function selector '{selector}': {msg}"));
    let (name, rest) = selector.split_once(':').unwrap_or((selector, ""));
    let mut d = default_d;
    let mut p = None;
    let mut s = None;
    let mut k = None;
    for kv in rest.split(',').filter(|kv| !kv.is_empty()) {
        let (key, value) = kv.split_once('=').ok_or_else(|| bad(format!("expected key=value, got '{kv}'")))?;
        let int = |v: &str| v.parse::<u32>().map_err(|e| bad(format!("{key}: {e}")));
        match key {
            "d" => d = Some(int(value)? as usize),
            "p" => p = Some(int(value)?),
            "s" => s = Some(int(value)?),
            "k" => {
                let v: std::result::Result<Vec<i64>, _> = value.split('/').map(str::parse).collect();
                k = Some(v.map_err(|e| bad(format!("k: {e}")))?);
            }
            other => return Err(bad(format!("unknown key '{other}'"))),
        }
    }
    let d = d.ok_or_else(|| bad("dimension not given".into()))?;
    match name {
        "bump" => bump(d, p.unwrap_or(2)),
        "sine" | "sine_power" => sine_power(d, s.unwrap_or(2)),
        "trig" | "trig_mode" => {
            let mut k = k.unwrap_or_default();
            if k.len() == 1 && d > 1 {
                k.resize(d, 0);
            }
            if k.is_empty() {
                k = vec![0; d];
            }
            trig_mode(d, k)
        }
        other => Err(bad(format!("unknown function '{other}'"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    /// Composite Gauss-Legendre (5 points) on `n` panels of `[0, 1]`.
    fn composite_gauss(f: impl Fn(f64) -> f64, n: usize) -> f64 {
        let nodes = [
            0.0,
            -0.5384693101056831,
            0.5384693101056831,
            -0.906179845938664,
            0.906179845938664,
        ];
        let weights = [
            0.5688888888888889,
            0.47862867049936647,
            0.47862867049936647,
            0.23692688505618908,
            0.23692688505618908,
        ];
        let h = 1.0 / n as f64;
        let mut total = 0.0;
        for i in 0..n {
            let mid = (i as f64 + 0.5) * h;
            for (x, w) in nodes.iter().zip(weights) {
                total += w * f(mid + 0.5 * h * x) * 0.5 * h;
            }
        }
        total
    }

    #[test]
    fn bump_examples() {
        let f = bump(1, 1).unwrap();
        assert_eq!(f.evaluate(&[0.5]), 1.5);
        assert_eq!(f.exact_integral(), 1.0);
        let f = bump(2, 2).unwrap();
        assert_abs_diff_eq!(f.evaluate(&[0.3, 0.6]), 900.0 * (0.3f64 * 0.7).powi(2) * (0.6f64 * 0.4).powi(2), epsilon = 1e-12);
        for corner in [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0]] {
            assert_eq!(f.evaluate(&corner), 0.0);
        }
    }

    #[test]
    fn sine_power_integrals() {
        assert_eq!(sine_power(1, 1).unwrap().exact_integral(), 0.5);
        assert_eq!(sine_power(2, 1).unwrap().exact_integral(), 0.25);
        assert_eq!(sine_power(1, 2).unwrap().exact_integral(), 0.375);
    }

    #[test]
    fn trig_mode_integrals() {
        assert_eq!(trig_mode(1, vec![0]).unwrap().exact_integral(), 1.0);
        assert_eq!(trig_mode(1, vec![0]).unwrap().evaluate(&[0.37]), 1.0);
        assert_eq!(trig_mode(2, vec![1, 0]).unwrap().exact_integral(), 0.0);
        assert!(!trig_mode(2, vec![1, 0]).unwrap().is_vanishing());
        assert!(trig_mode(2, vec![1]).is_err());
    }

    #[test]
    fn exact_integrals_match_quadrature_oracle() {
        let corpus = vec![
            bump(1, 1).unwrap(),
            bump(1, 2).unwrap(),
            bump(1, 5).unwrap(),
            sine_power(1, 1).unwrap(),
            sine_power(1, 2).unwrap(),
            sine_power(1, 4).unwrap(),
            trig_mode(1, vec![0]).unwrap(),
            trig_mode(1, vec![3]).unwrap(),
        ];
        for f in corpus {
            let q = composite_gauss(|t| f.factor(0, t), 200);
            assert_abs_diff_eq!(q, f.exact_integral(), epsilon = 1e-12);
        }
        // Tensor products: exact integral is the product of the factors.
        let f = bump(3, 2).unwrap();
        let one = composite_gauss(|t| f.factor(0, t), 200);
        assert_abs_diff_eq!(one.powi(3), f.exact_integral(), epsilon = 1e-12);
    }

    #[test]
    fn bumps_are_symmetric() {
        for p in 1..=4 {
            let f = bump(2, p).unwrap();
            for &(x, y) in &[(0.1, 0.2), (0.33, 0.71), (0.5, 0.05)] {
                let v = f.evaluate(&[x, y]);
                assert_abs_diff_eq!(v, f.evaluate(&[1.0 - x, y]), epsilon = 1e-12 * v.abs().max(1.0));
                assert_abs_diff_eq!(v, f.evaluate(&[x, 1.0 - y]), epsilon = 1e-12 * v.abs().max(1.0));
            }
        }
    }

    #[test]
    fn transform_at_zero_is_integral() {
        for s in 1..=4 {
            for d in 1..=3 {
                let f = sine_power(d, s).unwrap();
                let v = f.fourier_transform(&vec![0.0; d]).unwrap();
                assert_abs_diff_eq!(v.re, f.exact_integral(), epsilon = 1e-12);
                assert_abs_diff_eq!(v.im, 0.0, epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn transform_matches_binomial_expansion() {
        // Independent route: sum of transformed exponentials.
        for s in 1..=3u32 {
            for &y in &[0.3, 1.0, 1.7, -2.25, 3.0, 4.5, 12.1, -40.3] {
                let mut direct = Complex64::new(0.0, 0.0);
                for k in -(s as i64)..=(s as i64) {
                    let c = binomial(2 * s, (s as i64 + k) as u32) as f64 / 4f64.powi(s as i32)
                        * if k % 2 == 0 { 1.0 } else { -1.0 };
                    let w: f64 = k as f64 - y;
                    let e = if w == 0.0 {
                        Complex64::new(1.0, 0.0)
                    } else {
                        (Complex64::new(0.0, 2.0 * PI * w).exp() - 1.0) / Complex64::new(0.0, 2.0 * PI * w)
                    };
                    direct += c * e;
                }
                let closed = sine_power_transform(s, y);
                assert!((closed - direct).norm() < 1e-13, "s={s} y={y}: {closed} vs {direct}");
            }
        }
    }

    #[test]
    fn transform_matches_numerical_quadrature() {
        let s = 2;
        for &y in &[0.0, 0.5, 2.0, 2.5, 7.3] {
            let re = composite_gauss(|t| sin_pi(t).powi(4) * (2.0 * PI * y * t).cos(), 400);
            let im = composite_gauss(|t| -sin_pi(t).powi(4) * (2.0 * PI * y * t).sin(), 400);
            let v = sine_power_transform(s, y);
            assert_abs_diff_eq!(v.re, re, epsilon = 1e-12);
            assert_abs_diff_eq!(v.im, im, epsilon = 1e-12);
        }
    }

    #[test]
    fn transform_vanishes_at_large_integers() {
        for s in 1..=3u32 {
            for y in (s as i64 + 1)..20 {
                assert_eq!(sine_power_transform(s, y as f64).norm(), 0.0);
                assert_eq!(sine_power_transform(s, -y as f64).norm(), 0.0);
            }
        }
    }

    #[test]
    fn transform_requires_sine_family() {
        let err = bump(1, 2).unwrap().fourier_transform(&[0.0]).unwrap_err();
        assert!(matches!(err, FrolovError::UnsupportedFunction(_)));
    }

    #[test]
    fn selectors_round_trip() {
        for f in [bump(2, 2).unwrap(), sine_power(3, 1).unwrap(), trig_mode(2, vec![1, -2]).unwrap()] {
            assert_eq!(parse_selector(&f.selector(), None).unwrap(), f);
        }
        assert_eq!(parse_selector("bump:p=3", Some(2)).unwrap(), bump(2, 3).unwrap());
        assert_eq!(parse_selector("bump", Some(1)).unwrap(), bump(1, 2).unwrap());
        assert_eq!(parse_selector("trig:k=3", Some(2)).unwrap(), trig_mode(2, vec![3, 0]).unwrap());
        assert!(parse_selector("bump:p=2", None).is_err());
        assert!(parse_selector("gauss:d=2", None).is_err());
        assert!(parse_selector("bump:d=2,q=1", None).is_err());
        assert!(parse_selector("bump:d=2,p", None).is_err());
    }

    #[test]
    fn trig_factor_is_exact_at_grid_points() {
        let f = trig_mode(1, vec![1]).unwrap();
        assert_eq!(f.evaluate(&[0.25]), 0.0);
        assert_eq!(f.evaluate(&[0.5]), -1.0);
    }
}
