use std::io::{self, BufRead, Write};
use std::time::Instant;

use crate::cubature::{theoretical_bound, CubatureRule, Domain, Mode};
use crate::error::{FrolovError, Result};
use crate::format::exact;
use crate::lattice::{FrolovBasis, DEFAULT_BUDGET};
use crate::testfunctions::TestFunction;

/// Errors below this are treated as round-off and left out of slope fits.
pub const NOISE_FLOOR: f64 = 1e-14;

pub const CSV_HEADER: &str = "a,n,error,bound,seconds";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRecord {
    pub a: f64,
    pub n: u64,
    pub error: f64,
    pub bound: f64,
    pub seconds: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StudyOptions {
    /// Record wall time. Off by default so repeated runs are byte-identical.
    pub timing: bool,
    pub budget: u64,
}

impl Default for StudyOptions {
    fn default() -> Self {
        Self { timing: false, budget: DEFAULT_BUDGET }
    }
}

/// Integrates `f` for every scale in `a_grid` and records the error against
/// the exact integral together with the theoretical bound for smoothness `s`.
pub fn convergence_study(
    basis: &FrolovBasis,
    f: &TestFunction,
    s: u32,
    a_grid: &[f64],
    mode: Mode,
    options: StudyOptions,
) -> Result<Vec<ConvergenceRecord>> {
    let d = basis.dimension();
    if f.dimension() != d {
        return Err(FrolovError::InvalidParameter(format!(
            "test function has dimension {}, lattice has {d}",
            f.dimension()
        )));
    }
    if a_grid.is_empty() {
        return Err(FrolovError::InvalidParameter("empty scale grid".into()));
    }
    if a_grid.windows(2).any(|w| w[1].partial_cmp(&w[0]) != Some(std::cmp::Ordering::Greater)) {
        return Err(FrolovError::InvalidParameter("scale grid must be strictly increasing".into()));
    }
    let exact_value = f.exact_integral();
    a_grid
        .iter()
        .map(|&a| {
            let start = Instant::now();
            let rule = CubatureRule::with_budget(basis, a, mode, Domain::UnitCube, options.budget)?;
            let value = rule.integrate_parallel(|x| f.evaluate(x))?;
            let seconds = if options.timing { start.elapsed().as_secs_f64() } else { 0.0 };
            Ok(ConvergenceRecord {
                a,
                n: rule.count() as u64,
                error: (value - exact_value).abs(),
                bound: theoretical_bound(s, d, a)?,
                seconds,
            })
        })
        .collect()
}

/// Least-squares slope of `ln(error)` against `ln(n)`.
pub fn fit_order(records: &[ConvergenceRecord]) -> Result<f64> {
    let points: Vec<(f64, f64)> = records
        .iter()
        .filter(|r| r.error >= NOISE_FLOOR && r.n >= 1)
        .map(|r| ((r.n as f64).ln(), r.error.ln()))
        .collect();
    let usable = points.len();
    if usable < 3 {
        return Err(FrolovError::InsufficientData { usable });
    }
    let len = usable as f64;
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / len;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / len;
    let sxy: f64 = points.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    if sxx == 0.0 {
        return Err(FrolovError::InsufficientData { usable: 1 });
    }
    Ok(sxy / sxx)
}

pub fn write_csv<W: Write>(mut out: W, records: &[ConvergenceRecord]) -> io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in records {
        writeln!(out, "{},{},{},{},{}", exact(r.a), r.n, exact(r.error), exact(r.bound), exact(r.seconds))?;
    }
    Ok(())
}

pub fn read_csv<R: BufRead>(input: R) -> io::Result<Vec<ConvergenceRecord>> {
    let bad = |msg: String| io::Error::new(io::ErrorKind::InvalidData, msg);
    let mut lines = input.lines();
    let header = lines.next().transpose()?;
    if header.as_deref().map(str::trim) != Some(CSV_HEADER) {
        return Err(bad(format!("expected header '{CSV_HEADER}'")));
    }
    let mut records = Vec::new();
    for (i, line) in lines.enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 5 {
            return Err(bad(format!("line {}: expected 5 fields", i + 2)));
        }
        let real = |s: &str| s.parse::<f64>().map_err(|e| bad(format!("line {}: {e}", i + 2)));
        records.push(ConvergenceRecord {
            a: real(fields[0])?,
            n: fields[1].parse().map_err(|e| bad(format!("line {}: {e}", i + 2)))?,
            error: real(fields[2])?,
            bound: real(fields[3])?,
            seconds: real(fields[4])?,
        });
    }
    Ok(records)
}
