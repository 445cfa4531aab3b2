//! The Frolov lattice `T(Z^d)`, its dual `B(Z^d)` and node enumeration.
//!
//! `B` is the Vandermonde matrix `B[i][j] = xi_i^j` (`j` counted from zero)
//! built from the roots of the defining polynomial, and `T = (B^T)^{-1}`.
//! Every nonzero dual point `z = B m` has a coordinate product that is a
//! nonzero integer, which is what makes the lattice admissible.
//!
//! Node sets are the points of the shrunk lattice `a^{-1} T(Z^d)` inside a
//! half-open box. Enumeration scans the integer bounding box of the preimage
//! parallelepiped on all axes but one and solves for the remaining axis
//! directly, then filters each candidate with plain half-open comparisons.

use std::io::{self, BufRead, Write};

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::ddouble::DoubleDouble;
use crate::error::{FrolovError, Result};
use crate::format;
use crate::poly::{FrolovPolynomial, PolyKind, RootSet};

/// Default cap on the number of integer candidates an enumeration may scan.
pub const DEFAULT_BUDGET: u64 = 1_000_000_000;

/// Relative tolerance for snapping a dual coordinate product to an integer.
pub const PRODUCT_SNAP_TOLERANCE: f64 = 1e-6;

/// Generator matrices and determinants of the Frolov lattice in dimension `d`.
#[derive(Debug, Clone)]
pub struct FrolovBasis {
    roots: RootSet,
    dual: DMatrix<f64>,
    generator: DMatrix<f64>,
    det_dual: f64,
    det_generator: f64,
}

impl FrolovBasis {
    pub fn new(d: usize, kind: PolyKind) -> Result<Self> {
        let roots = FrolovPolynomial::new(d, kind)?.find_roots()?;
        Self::from_roots(roots)
    }

    pub fn from_roots(roots: RootSet) -> Result<Self> {
        let d = roots.dimension();
        let xi = roots.roots();
        let dual = DMatrix::from_fn(d, d, |i, j| xi[i].powi(j as u32).to_f64());

        let lu = dual.transpose().lu();
        let det_dual = lu.determinant();
        if !det_dual.is_finite() || det_dual == 0.0 {
            return Err(FrolovError::SingularMatrix { d });
        }
        let generator = lu.solve(&DMatrix::identity(d, d)).ok_or(FrolovError::SingularMatrix { d })?;
        let det_generator = generator.clone().lu().determinant();
        if !det_generator.is_finite() || det_generator == 0.0 || generator.iter().any(|v| !v.is_finite()) {
            return Err(FrolovError::SingularMatrix { d });
        }
        Ok(Self { roots, dual, generator, det_dual, det_generator })
    }

    pub fn dimension(&self) -> usize {
        self.roots.dimension()
    }

    pub fn kind(&self) -> PolyKind {
        self.roots.kind()
    }

    pub fn roots(&self) -> &RootSet {
        &self.roots
    }

    /// `B`, generator of the dual lattice.
    pub fn dual_generator(&self) -> &DMatrix<f64> {
        &self.dual
    }

    /// `T = (B^T)^{-1}`, generator of the lattice.
    pub fn generator(&self) -> &DMatrix<f64> {
        &self.generator
    }

    pub fn det_dual(&self) -> f64 {
        self.det_dual
    }

    /// Signed `det T`. Its sign depends on root ordering.
    pub fn det_generator(&self) -> f64 {
        self.det_generator
    }

    pub fn abs_det_generator(&self) -> f64 {
        self.det_generator.abs()
    }

    /// `|det T^{-1}| = |det B|`, the number of lattice points per unit volume.
    pub fn abs_det_generator_inverse(&self) -> f64 {
        self.det_dual.abs()
    }

    /// Dual coordinates `B m` in double-double precision, by Horner's rule.
    pub fn dual_coordinates_dd(&self, m: &[i64]) -> Vec<DoubleDouble> {
        assert_eq!(m.len(), self.dimension(), "integer vector has wrong length");
        self.roots
            .roots()
            .iter()
            .map(|&xi| {
                m.iter()
                    .rev()
                    .fold(DoubleDouble::ZERO, |acc, &mj| acc * xi + DoubleDouble::from(mj))
            })
            .collect()
    }

    /// The scaled dual-lattice point `a B m`.
    pub fn dual_point(&self, m: &[i64], a: f64) -> Vec<f64> {
        self.dual_coordinates_dd(m)
            .into_iter()
            .map(|z| (z * DoubleDouble::from_f64(a)).to_f64())
            .collect()
    }

    /// The lattice point `a^{-1} T m`, computed the same way enumeration does.
    pub fn lattice_point(&self, m: &[i64], a: f64) -> Vec<f64> {
        scaled_image(&self.generator, m, Scale::Divide(a))
    }

    /// Coordinate product of `B m`; nonzero integer for every nonzero `m`.
    pub fn check_product_integrality(&self, m: &[i64]) -> Result<ProductCheck> {
        if m.iter().all(|&v| v == 0) {
            return Err(FrolovError::ZeroVector);
        }
        let z = self.dual_coordinates_dd(m);
        let all_nonzero = z.iter().all(|c| !c.is_zero());
        let product = z.iter().fold(DoubleDouble::ONE, |acc, &c| acc * c);
        let nearest_integer = product.round_to_i128();
        let gap = (product - DoubleDouble::from_i128(nearest_integer)).abs().to_f64();
        let value = product.to_f64();
        let ok = all_nonzero && nearest_integer != 0 && gap <= PRODUCT_SNAP_TOLERANCE * value.abs().max(1.0);
        Ok(ProductCheck { product: value, nearest_integer, ok })
    }

    /// Points of `a^{-1} T(Z^d)` in `[0, 1)^d`.
    pub fn enumerate_nodes(&self, a: f64) -> Result<NodeSet> {
        self.enumerate_nodes_in(a, &AxisBox::unit(self.dimension()), DEFAULT_BUDGET)
    }

    /// Points of `a^{-1} T(Z^d)` in the half-open box `[lo, hi)`, sorted
    /// lexicographically by their integer coordinates.
    pub fn enumerate_nodes_in(&self, a: f64, region: &AxisBox, budget: u64) -> Result<NodeSet> {
        check_scale(a)?;
        self.enumerate_points(a, region, budget)
    }

    /// As [`FrolovBasis::enumerate_nodes_in`] for any finite `a > 0`.
    pub(crate) fn enumerate_points(&self, a: f64, region: &AxisBox, budget: u64) -> Result<NodeSet> {
        if !(a > 0.0 && a.is_finite()) {
            return Err(FrolovError::InvalidParameter(format!("scale must be positive, got {a}")));
        }
        self.check_region(region)?;
        let d = self.dimension();
        let map = LatticeMap { forward: &self.generator, preimage: self.dual.transpose(), scale: Scale::Divide(a) };
        let hits = scan(&map, region, Boundary::HalfOpen, budget)?;
        let mut points = Vec::with_capacity(hits.len() * d);
        let mut integers = Vec::with_capacity(hits.len() * d);
        for (m, x) in hits {
            integers.extend(m);
            points.extend(x);
        }
        Ok(NodeSet { d, a, region: region.clone(), points, integers })
    }

    /// Compares `|X_a^d|` with `a^d |det T^{-1}|`.
    pub fn node_count_deviation(&self, a: f64) -> Result<NodeCountDeviation> {
        let nodes = self.enumerate_nodes(a)?;
        let expected = a.powi(self.dimension() as i32) * self.abs_det_generator_inverse();
        let count = nodes.count();
        Ok(NodeCountDeviation { count, expected, deviation: count as f64 - expected })
    }

    /// Number of points of `a B(Z^d)` in the closed box.
    pub fn count_dual_in_box(&self, a: f64, region: &AxisBox) -> Result<usize> {
        self.count_dual_in_box_with_budget(a, region, DEFAULT_BUDGET)
    }

    pub fn count_dual_in_box_with_budget(&self, a: f64, region: &AxisBox, budget: u64) -> Result<usize> {
        if !(a > 0.0 && a.is_finite()) {
            return Err(FrolovError::InvalidParameter(format!("scale must be positive, got {a}")));
        }
        self.check_region(region)?;
        let map = LatticeMap { forward: &self.dual, preimage: self.generator.transpose(), scale: Scale::Multiply(a) };
        Ok(scan(&map, region, Boundary::Closed, budget)?.len())
    }

    fn check_region(&self, region: &AxisBox) -> Result<()> {
        if region.dimension() != self.dimension() {
            return Err(FrolovError::InvalidParameter(format!(
                "box has dimension {}, lattice has {}",
                region.dimension(),
                self.dimension()
            )));
        }
        Ok(())
    }
}

fn check_scale(a: f64) -> Result<()> {
    if a > 1.0 && a.is_finite() {
        Ok(())
    } else {
        Err(FrolovError::InvalidParameter(format!("scale a must be a finite real > 1, got {a}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProductCheck {
    pub product: f64,
    pub nearest_integer: i128,
    pub ok: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NodeCountDeviation {
    pub count: usize,
    pub expected: f64,
    pub deviation: f64,
}

/// An axis-aligned box `prod [lo_j, hi_j]` with finite positive side lengths.
#[derive(Debug, Clone, PartialEq)]
pub struct AxisBox {
    lo: Vec<f64>,
    hi: Vec<f64>,
}

impl AxisBox {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        if lo.len() != hi.len() || lo.is_empty() {
            return Err(FrolovError::InvalidParameter("box corners must have equal, nonzero length".into()));
        }
        if lo.iter().zip(&hi).any(|(l, h)| !(l.is_finite() && h.is_finite() && h > l)) {
            return Err(FrolovError::InvalidParameter(format!("box needs finite positive sides: {lo:?} .. {hi:?}")));
        }
        Ok(Self { lo, hi })
    }

    pub fn unit(d: usize) -> Self {
        Self { lo: vec![0.0; d], hi: vec![1.0; d] }
    }

    pub fn dimension(&self) -> usize {
        self.lo.len()
    }

    pub fn lo(&self) -> &[f64] {
        &self.lo
    }

    pub fn hi(&self) -> &[f64] {
        &self.hi
    }

    pub fn volume(&self) -> f64 {
        self.lo.iter().zip(&self.hi).map(|(l, h)| h - l).product()
    }

    pub fn is_unit_cube(&self) -> bool {
        self.lo.iter().all(|&l| l == 0.0) && self.hi.iter().all(|&h| h == 1.0)
    }

    pub fn contains_half_open(&self, x: &[f64]) -> bool {
        x.iter().zip(self.lo.iter().zip(&self.hi)).all(|(&v, (&l, &h))| l <= v && v < h)
    }

    pub fn contains_closed(&self, x: &[f64]) -> bool {
        x.iter().zip(self.lo.iter().zip(&self.hi)).all(|(&v, (&l, &h))| l <= v && v <= h)
    }
}

/// Enumerated points of a shrunk lattice inside a box.
#[derive(Debug, Clone)]
pub struct NodeSet {
    d: usize,
    a: f64,
    region: AxisBox,
    points: Vec<f64>,
    integers: Vec<i64>,
}

impl NodeSet {
    pub fn dimension(&self) -> usize {
        self.d
    }

    pub fn scale(&self) -> f64 {
        self.a
    }

    pub fn region(&self) -> &AxisBox {
        &self.region
    }

    pub fn count(&self) -> usize {
        self.points.len() / self.d
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.points.chunks_exact(self.d)
    }

    /// Integer vectors `m` with `x = a^{-1} T m`, in the same order as `points`.
    pub fn generating_integers(&self) -> impl ExactSizeIterator<Item = &[i64]> + '_ {
        self.integers.chunks_exact(self.d)
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.points[i * self.d..(i + 1) * self.d]
    }
}

#[derive(Clone, Copy)]
enum Scale {
    Divide(f64),
    Multiply(f64),
}

impl Scale {
    fn apply(self, v: f64) -> f64 {
        match self {
            Scale::Divide(a) => v / a,
            Scale::Multiply(a) => v * a,
        }
    }

    fn invert(self, v: f64) -> f64 {
        match self {
            Scale::Divide(a) => v * a,
            Scale::Multiply(a) => v / a,
        }
    }
}

#[derive(Clone, Copy, PartialEq)]
enum Boundary {
    HalfOpen,
    Closed,
}

struct LatticeMap<'a> {
    forward: &'a DMatrix<f64>,
    preimage: DMatrix<f64>,
    scale: Scale,
}

fn scaled_image(matrix: &DMatrix<f64>, m: &[i64], scale: Scale) -> Vec<f64> {
    (0..matrix.nrows())
        .map(|i| {
            let dot: f64 = m.iter().enumerate().map(|(j, &mj)| matrix[(i, j)] * mj as f64).sum();
            scale.apply(dot)
        })
        .collect()
}

/// All integer vectors `m` whose image lies in `region`, with their images,
/// sorted lexicographically by `m`.
fn scan(map: &LatticeMap<'_>, region: &AxisBox, boundary: Boundary, budget: u64) -> Result<Vec<(Vec<i64>, Vec<f64>)>> {
    let d = region.dimension();

    // Integer bounding box of the preimage parallelepiped, padded by one.
    let mut lower = vec![0i64; d];
    let mut upper = vec![0i64; d];
    for k in 0..d {
        let (mut min, mut max) = (0.0, 0.0);
        for j in 0..d {
            let c = map.preimage[(k, j)];
            let (p, q) = (c * map.scale.invert(region.lo[j]), c * map.scale.invert(region.hi[j]));
            min += p.min(q);
            max += p.max(q);
        }
        if !(min.is_finite() && max.is_finite()) || max.abs() > 4e18 || min.abs() > 4e18 {
            return Err(FrolovError::BudgetExceeded { candidates: u128::MAX, limit: budget });
        }
        lower[k] = min.floor() as i64 - 1;
        upper[k] = max.ceil() as i64 + 1;
    }

    // Solve along the widest axis; scan the others.
    let inner = (0..d).max_by_key(|&k| upper[k] - lower[k]).expect("d >= 1");
    let outer: Vec<usize> = (0..d).filter(|&k| k != inner).collect();
    let candidates = outer
        .iter()
        .map(|&k| (upper[k] - lower[k] + 1) as u128)
        .try_fold(1u128, |acc, n| acc.checked_mul(n))
        .unwrap_or(u128::MAX);
    if candidates > budget as u128 {
        return Err(FrolovError::BudgetExceeded { candidates, limit: budget });
    }

    let column: Vec<f64> = (0..d).map(|i| map.scale.apply(map.forward[(i, inner)])).collect();
    let accept = |x: &[f64]| match boundary {
        Boundary::HalfOpen => region.contains_half_open(x),
        Boundary::Closed => region.contains_closed(x),
    };

    let solve_inner = |m: &mut Vec<i64>, out: &mut Vec<(Vec<i64>, Vec<f64>)>| {
        m[inner] = 0;
        let base = scaled_image(map.forward, m, map.scale);
        let (mut t_lo, mut t_hi) = (f64::NEG_INFINITY, f64::INFINITY);
        for i in 0..d {
            let g = column[i];
            if g == 0.0 {
                if base[i] < region.lo[i] || base[i] > region.hi[i] {
                    return;
                }
                continue;
            }
            let (p, q) = ((region.lo[i] - base[i]) / g, (region.hi[i] - base[i]) / g);
            t_lo = t_lo.max(p.min(q));
            t_hi = t_hi.min(p.max(q));
        }
        if t_lo > t_hi + 2.0 {
            return;
        }
        let start = (t_lo.floor() as i64 - 1).max(lower[inner]);
        let stop = (t_hi.ceil() as i64 + 1).min(upper[inner]);
        for t in start..=stop {
            m[inner] = t;
            let x = scaled_image(map.forward, m, map.scale);
            if accept(&x) {
                out.push((m.clone(), x));
            }
        }
    };

    let mut hits: Vec<(Vec<i64>, Vec<f64>)> = if outer.is_empty() {
        let mut out = Vec::new();
        solve_inner(&mut vec![0i64; d], &mut out);
        out
    } else {
        let first = outer[0];
        let rest = &outer[1..];
        (lower[first]..=upper[first])
            .into_par_iter()
            .flat_map_iter(|v| {
                let mut out = Vec::new();
                let mut m = vec![0i64; d];
                m[first] = v;
                for &k in rest {
                    m[k] = lower[k];
                }
                loop {
                    solve_inner(&mut m, &mut out);
                    // Odometer over the remaining outer axes.
                    let mut advanced = false;
                    for &k in rest.iter().rev() {
                        if m[k] < upper[k] {
                            m[k] += 1;
                            advanced = true;
                            break;
                        }
                        m[k] = lower[k];
                    }
                    if !advanced {
                        break;
                    }
                }
                out
            })
            .collect()
    };
    hits.sort_unstable_by(|a, b| a.0.cmp(&b.0));
    Ok(hits)
}

/// Writes the node export format: a header line followed by one point per
/// line, coordinates with 17 significant digits separated by single spaces.
pub fn write_nodes<W: Write>(mut out: W, basis: &FrolovBasis, nodes: &NodeSet) -> io::Result<()> {
    writeln!(
        out,
        "# frolov d={} kind={} a={} count={} detT={}",
        basis.dimension(),
        basis.kind(),
        nodes.scale(),
        nodes.count(),
        basis.det_generator()
    )?;
    for p in nodes.points() {
        let line: Vec<String> = p.iter().map(|&v| format::exact(v)).collect();
        writeln!(out, "{}", line.join(" "))?;
    }
    Ok(())
}

/// Header fields of a node export file.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeFileHeader {
    pub d: usize,
    pub kind: PolyKind,
    pub a: f64,
    pub count: usize,
    pub det_t: f64,
}

/// Parses the node export format back into its header and points.
pub fn read_nodes<R: BufRead>(input: R) -> io::Result<(NodeFileHeader, Vec<Vec<f64>>)> {
    let bad = |msg: String| io::Error::new(io::ErrorKind::InvalidData, msg);
    let mut lines = input.lines();
    let header = lines.next().ok_or_else(|| bad("empty node file".into()))??;
    let body = header.strip_prefix("# frolov ").ok_or_else(|| bad(format!("bad header: {header}")))?;
    let mut fields = std::collections::HashMap::new();
    for kv in body.split(' ') {
        let (k, v) = kv.split_once('=').ok_or_else(|| bad(format!("bad header field: {kv}")))?;
        fields.insert(k, v);
    }
    let get = |k: &str| fields.get(k).copied().ok_or_else(|| bad(format!("missing header field {k}")));
    let num = |k: &str| -> io::Result<f64> { get(k)?.parse().map_err(|e| bad(format!("{k}: {e}"))) };
    let header = NodeFileHeader {
        d: get("d")?.parse().map_err(|e| bad(format!("d: {e}")))?,
        kind: get("kind")?.parse().map_err(|e: FrolovError| bad(e.to_string()))?,
        a: num("a")?,
        count: get("count")?.parse().map_err(|e| bad(format!("count: {e}")))?,
        det_t: num("detT")?,
    };
    let mut points = Vec::with_capacity(header.count);
    for line in lines {
        let line = line?;
        let p: Vec<f64> = line
            .split(' ')
            .map(|s| s.parse::<f64>().map_err(|e| bad(format!("{s}: {e}"))))
            .collect::<io::Result<_>>()?;
        if p.len() != header.d {
            return Err(bad(format!("expected {} coordinates, got {}", header.d, p.len())));
        }
        points.push(p);
    }
    if points.len() != header.count {
        return Err(bad(format!("header says {} points, file has {}", header.count, points.len())));
    }
    Ok((header, points))
}
