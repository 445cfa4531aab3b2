//! Seeded invariant suites shared by the `verify` command and the
//! acceptance tests.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::analysis::{poisson_check, NOISE_FLOOR};
use crate::error::Result;
use crate::lattice::{AxisBox, FrolovBasis};
use crate::testfunctions;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

impl Status {
    pub fn label(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
            Status::Skip => "skip",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub name: &'static str,
    pub status: Status,
    pub checks: usize,
    pub failures: usize,
    pub detail: String,
}

impl SuiteReport {
    fn tally(name: &'static str, checks: usize, failures: usize, detail: String) -> Self {
        let status = if failures == 0 { Status::Pass } else { Status::Fail };
        Self { name, status, checks, failures, detail }
    }

    fn skipped(name: &'static str, detail: &str) -> Self {
        Self { name, status: Status::Skip, checks: 0, failures: 0, detail: detail.into() }
    }

    fn errored(name: &'static str, err: impl std::fmt::Display) -> Self {
        Self { name, status: Status::Fail, checks: 0, failures: 1, detail: err.to_string() }
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }
}

/// Independent random stream for suite `stream` under `seed`.
pub fn suite_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub fn random_nonzero_vector<R: Rng>(rng: &mut R, d: usize, max_entry: i64) -> Vec<i64> {
    loop {
        let m: Vec<i64> = (0..d).map(|_| rng.random_range(-max_entry..=max_entry)).collect();
        if m.iter().any(|&v| v != 0) {
            return m;
        }
    }
}

/// A box with log-uniform volume in `[vol_min, vol_max]`, random aspect
/// ratios and a random corner near the origin.
pub fn random_box<R: Rng>(rng: &mut R, d: usize, vol_min: f64, vol_max: f64) -> AxisBox {
    let volume = (rng.random_range(vol_min.ln()..=vol_max.ln())).exp();
    let mut logs: Vec<f64> = (0..d).map(|_| rng.random_range(-1.5..=1.5)).collect();
    let mean = logs.iter().sum::<f64>() / d as f64;
    for l in &mut logs {
        *l -= mean;
    }
    let side = volume.powf(1.0 / d as f64);
    let widths: Vec<f64> = logs.iter().map(|l| side * l.exp()).collect();
    let lo: Vec<f64> = widths.iter().map(|w| rng.random_range(-3.0..=1.0) * w).collect();
    let hi: Vec<f64> = lo.iter().zip(&widths).map(|(l, w)| l + w).collect();
    AxisBox::new(lo, hi).expect("positive widths")
}

/// Every nonzero `m` has a nonzero integer coordinate product of `B m`.
pub fn product_integrality(basis: &FrolovBasis, samples: usize, max_entry: i64, seed: u64) -> SuiteReport {
    const NAME: &str = "product_integrality";
    let mut rng = suite_rng(seed, 1);
    let mut failures = 0;
    for _ in 0..samples {
        let m = random_nonzero_vector(&mut rng, basis.dimension(), max_entry);
        match basis.check_product_integrality(&m) {
            Ok(c) if c.ok => {}
            Ok(_) => failures += 1,
            Err(e) => return SuiteReport::errored(NAME, e),
        }
    }
    SuiteReport::tally(NAME, samples, failures, format!("{samples} vectors, entries in [-{max_entry}, {max_entry}]"))
}

/// Dual-lattice points in a box never exceed `a^{-d} vol + 1`.
pub fn box_counts(basis: &FrolovBasis, scales: &[f64], boxes: usize, seed: u64) -> SuiteReport {
    const NAME: &str = "box_counts";
    let d = basis.dimension();
    let mut rng = suite_rng(seed, 2);
    let mut failures = 0;
    let mut worst: f64 = 0.0;
    for &a in scales {
        for _ in 0..boxes {
            let region = random_box(&mut rng, d, 0.1, 100.0);
            let count = match basis.count_dual_in_box(a, &region) {
                Ok(c) => c,
                Err(e) => return SuiteReport::errored(NAME, e),
            };
            let limit = region.volume() / a.powi(d as i32) + 1.0;
            worst = worst.max(count as f64 / limit);
            if count as f64 > limit {
                failures += 1;
            }
        }
    }
    let checks = scales.len() * boxes;
    SuiteReport::tally(NAME, checks, failures, format!("{checks} boxes, max count/limit {:.3}", worst))
}

pub const POISSON_TOLERANCE: f64 = 1e-5;
pub const POISSON_TRUNCATIONS: [u32; 4] = [25, 50, 100, 200];

/// Node sum against truncated dual sum for `sin^4` products. Discrepancies
/// must fall strictly as the truncation doubles, unless already at round-off.
pub fn poisson(basis: &FrolovBasis, scales: &[f64]) -> SuiteReport {
    const NAME: &str = "poisson";
    let d = basis.dimension();
    if d > 2 {
        return SuiteReport::skipped(NAME, "dual sums only run for d <= 2");
    }
    let f = match testfunctions::sine_power(d, 2) {
        Ok(f) => f,
        Err(e) => return SuiteReport::errored(NAME, e),
    };
    let mut failures = 0;
    let mut worst: f64 = 0.0;
    for &a in scales {
        let mut previous = f64::INFINITY;
        for &m in &POISSON_TRUNCATIONS {
            let c = match poisson_check(basis, a, &f, m) {
                Ok(c) => c,
                Err(e) => return SuiteReport::errored(NAME, e),
            };
            if !(c.discrepancy < previous || previous <= NOISE_FLOOR) {
                failures += 1;
            }
            previous = c.discrepancy;
        }
        worst = worst.max(previous);
        if previous > POISSON_TOLERANCE {
            failures += 1;
        }
    }
    let checks = scales.len() * (POISSON_TRUNCATIONS.len() + 1);
    SuiteReport::tally(NAME, checks, failures, format!("max discrepancy at M=200 {worst:.3e}"))
}

/// `<a^{-1} T m, a B n> = m . n` for random small integer vectors.
pub fn duality(basis: &FrolovBasis, a: f64, samples: usize, seed: u64) -> SuiteReport {
    const NAME: &str = "duality";
    let d = basis.dimension();
    let mut rng = suite_rng(seed, 4);
    let mut failures = 0;
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let m: Vec<i64> = (0..d).map(|_| rng.random_range(-3..=3)).collect();
        let n: Vec<i64> = (0..d).map(|_| rng.random_range(-3..=3)).collect();
        let x = basis.lattice_point(&m, a);
        let y = basis.dual_point(&n, a);
        let inner: f64 = x.iter().zip(&y).map(|(p, q)| p * q).sum();
        let target: i64 = m.iter().zip(&n).map(|(p, q)| p * q).sum();
        let gap = (inner - target as f64).abs();
        worst = worst.max(gap);
        if gap > 1e-8 {
            failures += 1;
        }
    }
    SuiteReport::tally(NAME, samples, failures, format!("max |<x,y> - m.n| {worst:.3e}"))
}

/// Scale at which roughly `target` nodes are expected.
pub fn scale_for_count(basis: &FrolovBasis, target: f64) -> f64 {
    (target * basis.abs_det_generator()).powf(1.0 / basis.dimension() as f64).max(2.0)
}

/// Node count against `a^d |det B|`: within 2% at about 5000 expected
/// nodes, and for `d = 2` within 30 nodes at `a = 10`.
pub fn node_count(basis: &FrolovBasis) -> SuiteReport {
    const NAME: &str = "node_count";
    let run = || -> Result<SuiteReport> {
        let a = scale_for_count(basis, 5000.0);
        let dev = basis.node_count_deviation(a)?;
        let ratio = dev.count as f64 / dev.expected;
        let mut checks = 1;
        let mut failures = usize::from((ratio - 1.0).abs() > 0.02);
        let mut detail = format!("ratio {ratio:.5} at a={a:.4}");
        if basis.dimension() == 2 {
            let ten = basis.node_count_deviation(10.0)?;
            checks += 1;
            failures += usize::from(ten.deviation.abs() > 30.0);
            detail.push_str(&format!(", deviation {:.3} at a=10", ten.deviation));
        }
        Ok(SuiteReport::tally(NAME, checks, failures, detail))
    };
    run().unwrap_or_else(|e| SuiteReport::errored(NAME, e))
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyOptions {
    pub seed: u64,
    /// Scales for the box and Poisson suites.
    pub scales: Vec<f64>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self { seed: 0, scales: vec![1.0, 2.5, 3.0] }
    }
}

/// All suites in a fixed order.
pub fn run_all(basis: &FrolovBasis, options: &VerifyOptions) -> Vec<SuiteReport> {
    let duality_scale = options.scales.iter().copied().find(|&a| a > 1.0).unwrap_or(2.0);
    vec![
        product_integrality(basis, 1000, 20, options.seed),
        box_counts(basis, &options.scales, 200, options.seed),
        poisson(basis, &options.scales),
        duality(basis, duality_scale, 500, options.seed),
        node_count(basis),
    ]
}
