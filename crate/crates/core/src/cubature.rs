//! Equal-weight Frolov cubature.
//!
//! The rule for integrands vanishing at the boundary is
//!
//! `Q_a(f) = a^{-d} |det T| sum_{x in X_a} f(x)`, `X_a = a^{-1} T(Z^d) ∩ [0, 1)^d`.
//!
//! The weights are equal but do not sum to one; their sum converges to the
//! volume of the domain as `a` grows. Integrands that do not vanish at the
//! boundary go through the periodizing substitution `x_j = psi_s(t_j)`,
//! whose density `psi_s'` vanishes to order `s` at both ends.

use rayon::prelude::*;

use crate::error::{FrolovError, Result};
use crate::lattice::{AxisBox, FrolovBasis, NodeSet, DEFAULT_BUDGET};
use crate::polylog::polylog_negative_order;
use crate::sum::NeumaierSum;

/// Smallest scale at which `error <= theoretical_bound` is asserted.
pub const BOUND_ASSERTION_MIN_SCALE: f64 = 4.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Vanishing,
    Periodized { s: u32 },
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Mode::Vanishing => f.write_str("vanishing"),
            Mode::Periodized { s } => write!(f, "periodized(s={s})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Domain {
    UnitCube,
    Box(AxisBox),
}

impl Domain {
    fn region(&self, d: usize) -> AxisBox {
        match self {
            Domain::UnitCube => AxisBox::unit(d),
            Domain::Box(b) => b.clone(),
        }
    }

    pub fn volume(&self) -> f64 {
        match self {
            Domain::UnitCube => 1.0,
            Domain::Box(b) => b.volume(),
        }
    }
}

/// `psi_s(t) = int_0^t u^s (1-u)^s du / B(s+1, s+1)` on `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodizationMap {
    s: u32,
    normalization: f64,
    // Coefficients of t^(s+1+k), k = 0..=s, before normalization.
    coefficients: Vec<f64>,
}

const MAX_PERIODIZATION_ORDER: u32 = 15;

impl PeriodizationMap {
    pub fn new(s: u32) -> Result<Self> {
        if s == 0 || s > MAX_PERIODIZATION_ORDER {
            return Err(FrolovError::InvalidParameter(format!(
                "periodization order must lie in 1..={MAX_PERIODIZATION_ORDER}, got {s}"
            )));
        }
        // 1 / B(s+1, s+1) = (2s+1)! / (s!)^2, formed exactly.
        let fact = |n: u32| -> u128 { (1..=n as u128).product() };
        let normalization = (fact(2 * s + 1) / (fact(s) * fact(s))) as f64;
        let coefficients = (0..=s)
            .map(|k| {
                let binom = (fact(s) / (fact(k) * fact(s - k))) as f64;
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                sign * binom / (s + k + 1) as f64
            })
            .collect();
        Ok(Self { s, normalization, coefficients })
    }

    pub fn order(&self) -> u32 {
        self.s
    }

    fn lower_half(&self, t: f64) -> f64 {
        let poly = self.coefficients.iter().rev().fold(0.0, |acc, &c| acc * t + c);
        self.normalization * t.powi(self.s as i32 + 1) * poly
    }

    pub fn value(&self, t: f64) -> f64 {
        if t <= 0.0 {
            0.0
        } else if t >= 1.0 {
            1.0
        } else if t <= 0.5 {
            self.lower_half(t)
        } else {
            1.0 - self.lower_half(1.0 - t)
        }
    }

    pub fn derivative(&self, t: f64) -> f64 {
        if t <= 0.0 || t >= 1.0 {
            0.0
        } else {
            self.normalization * (t * (1.0 - t)).powi(self.s as i32)
        }
    }
}

/// `g(t) = f(psi_s(t_1), ..., psi_s(t_d)) prod_j psi_s'(t_j)`.
///
/// `g` has the same integral over the unit cube as `f` and vanishes with
/// its first `s - 1` derivatives on the boundary.
pub fn periodize<F>(f: F, s: u32) -> Result<impl Fn(&[f64]) -> f64>
where
    F: Fn(&[f64]) -> f64,
{
    let map = PeriodizationMap::new(s)?;
    Ok(move |t: &[f64]| transformed_value(&map, &f, t))
}

fn transformed_value<F: Fn(&[f64]) -> f64 + ?Sized>(map: &PeriodizationMap, f: &F, t: &[f64]) -> f64 {
    let jacobian: f64 = t.iter().map(|&v| map.derivative(v)).product();
    let x: Vec<f64> = t.iter().map(|&v| map.value(v)).collect();
    f(&x) * jacobian
}

/// A built cubature rule: nodes plus the uniform weight `a^{-d} |det T|`.
#[derive(Debug, Clone)]
pub struct CubatureRule {
    basis: FrolovBasis,
    a: f64,
    nodes: NodeSet,
    weight: f64,
    mode: Mode,
    domain: Domain,
    map: Option<PeriodizationMap>,
}

impl CubatureRule {
    pub fn new(basis: &FrolovBasis, a: f64, mode: Mode, domain: Domain) -> Result<Self> {
        Self::with_budget(basis, a, mode, domain, DEFAULT_BUDGET)
    }

    pub fn with_budget(basis: &FrolovBasis, a: f64, mode: Mode, domain: Domain, budget: u64) -> Result<Self> {
        let d = basis.dimension();
        let map = match mode {
            Mode::Vanishing => None,
            Mode::Periodized { s } => {
                if domain != Domain::UnitCube {
                    return Err(FrolovError::InvalidParameter("periodized rules need the unit cube".into()));
                }
                Some(PeriodizationMap::new(s)?)
            }
        };
        let domain = match domain {
            Domain::Box(b) if b.is_unit_cube() => Domain::UnitCube,
            other => other,
        };
        let nodes = basis.enumerate_nodes_in(a, &domain.region(d), budget)?;
        let weight = basis.abs_det_generator() / a.powi(d as i32);
        Ok(Self { basis: basis.clone(), a, nodes, weight, mode, domain, map })
    }

    pub fn vanishing(basis: &FrolovBasis, a: f64) -> Result<Self> {
        Self::new(basis, a, Mode::Vanishing, Domain::UnitCube)
    }

    pub fn periodized(basis: &FrolovBasis, a: f64, s: u32) -> Result<Self> {
        Self::new(basis, a, Mode::Periodized { s }, Domain::UnitCube)
    }

    pub fn basis(&self) -> &FrolovBasis {
        &self.basis
    }

    pub fn scale(&self) -> f64 {
        self.a
    }

    pub fn nodes(&self) -> &NodeSet {
        &self.nodes
    }

    pub fn count(&self) -> usize {
        self.nodes.count()
    }

    pub fn weight(&self) -> f64 {
        self.weight
    }

    /// `weight * count`; tends to the domain volume.
    pub fn weight_sum(&self) -> f64 {
        self.weight * self.count() as f64
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    fn value_at<F: Fn(&[f64]) -> f64 + ?Sized>(&self, f: &F, x: &[f64]) -> Result<f64> {
        let v = match &self.map {
            None => f(x),
            Some(map) => transformed_value(map, f, x),
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(FrolovError::NonFiniteValue { value: v, point: x.to_vec() })
        }
    }

    pub fn integrate<F: Fn(&[f64]) -> f64>(&self, f: F) -> Result<f64> {
        let mut acc = NeumaierSum::new();
        for x in self.nodes.points() {
            acc.add(self.value_at(&f, x)?);
        }
        Ok(self.weight * acc.value())
    }

    /// Evaluates `f` in parallel, then reduces in node order, so the result
    /// is bit-identical to [`CubatureRule::integrate`].
    pub fn integrate_parallel<F: Fn(&[f64]) -> f64 + Sync>(&self, f: F) -> Result<f64> {
        let values: Vec<f64> = self
            .nodes
            .points()
            .collect::<Vec<_>>()
            .into_par_iter()
            .map(|x| self.value_at(&f, x))
            .collect::<Result<_>>()?;
        Ok(self.weight * values.into_iter().collect::<NeumaierSum>().value())
    }
}

/// `c_{s,d} = 2^{d+2s+1} Li_{1-d}(2^{1-2s})^{1/2}`.
pub fn bound_constant(s: u32, d: usize) -> Result<f64> {
    if s == 0 || d == 0 {
        return Err(FrolovError::InvalidParameter("smoothness and dimension must be positive".into()));
    }
    let z = 2f64.powi(1 - 2 * s as i32);
    let li = polylog_negative_order(d as u32 - 1, z)?;
    Ok(2f64.powi(d as i32 + 2 * s as i32 + 1) * li.sqrt())
}

/// Worst-case error bound `c_{s,d} a^{-sd} (log2(a^d))^{(d-1)/2}` over the
/// unit ball of the vanishing class, valid for `a` large enough.
pub fn theoretical_bound(s: u32, d: usize, a: f64) -> Result<f64> {
    let log = d as f64 * a.log2();
    if !(log > 0.0 && log.is_finite()) {
        return Err(FrolovError::DomainError(format!("log2(a^d) must be positive, got a = {a}")));
    }
    let c = bound_constant(s, d)?;
    Ok(c * a.powf(-(s as f64) * d as f64) * log.powf((d as f64 - 1.0) / 2.0))
}
