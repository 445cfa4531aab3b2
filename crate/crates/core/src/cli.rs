//! Batch command-line front end.
//!
//! [`run_from_args`] parses arguments, sizes the worker pool from
//! `FROLOV_THREADS` and dispatches; [`run`] executes an already parsed
//! [`CommandConfig`] against arbitrary output streams.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::analysis::{convergence_study, fit_order, write_csv, StudyOptions};
use crate::cubature::{bound_constant, theoretical_bound, CubatureRule, Domain, Mode};
use crate::error::FrolovError;
use crate::format::sig;
use crate::lattice::{write_nodes, FrolovBasis, DEFAULT_BUDGET};
use crate::poly::PolyKind;
use crate::testfunctions::{self, TestFunction};
use crate::verify::{self, VerifyOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
pub const EXIT_VERIFY: i32 = 4;

pub const THREADS_ENV: &str = "FROLOV_THREADS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Vanishing,
    Periodized,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    /// Five significant digits, aligned columns.
    Text,
    /// Seventeen significant digits, comma separated.
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Roots, generator determinant and residual of the lattice basis.
    Basis,
    /// Export the nodes of the scaled lattice in the unit cube.
    Nodes,
    /// Apply the cubature rule to a test function.
    Integrate,
    /// Run the seeded invariant suites.
    Verify,
    /// Error against scale, with the fitted convergence order.
    Study,
    /// Theoretical error bound and its constant.
    Bound,
}

#[derive(Debug, Clone, PartialEq, Parser)]
#[command(name = "frolov", version, about = "Frolov lattice cubature")]
pub struct CommandConfig {
    #[command(subcommand)]
    pub command: Command,

    #[arg(short = 'd', long = "dimension", global = true, default_value_t = 2)]
    pub dimension: usize,

    #[arg(short = 's', long = "smoothness", global = true)]
    pub smoothness: Option<u32>,

    /// Scale factor; repeat or separate by commas for a grid.
    #[arg(short = 'a', long = "scale", global = true, value_delimiter = ',')]
    pub scales: Vec<f64>,

    #[arg(long, global = true, default_value_t = PolyKind::Standard)]
    pub kind: PolyKind,

    #[arg(long, global = true, value_enum, default_value_t = ModeArg::Vanishing)]
    pub mode: ModeArg,

    /// Test function selector, e.g. `bump:p=2` or `sine:s=2`.
    #[arg(long = "function", global = true)]
    pub function: Option<String>,

    #[arg(short = 'o', long = "output", global = true)]
    pub output: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Csv)]
    pub format: OutputFormat,

    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Maximum number of enumeration candidates.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,

    /// Record wall time in study output.
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(Debug)]
enum Failure {
    Config(String),
    Budget(String),
    Verify(String),
    Other(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Config(_) => EXIT_CONFIG,
            Failure::Budget(_) => EXIT_BUDGET,
            Failure::Verify(_) => EXIT_VERIFY,
            Failure::Other(_) => EXIT_FAILURE,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Config(m) | Failure::Budget(m) | Failure::Verify(m) | Failure::Other(m) => m,
        }
    }
}

impl From<FrolovError> for Failure {
    fn from(e: FrolovError) -> Self {
        match e {
            FrolovError::BudgetExceeded { .. } => Failure::Budget(e.to_string()),
            FrolovError::InvalidParameter(_)
            | FrolovError::DomainError(_)
            | FrolovError::UnsupportedFunction(_)
            | FrolovError::ZeroVector => Failure::Config(e.to_string()),
            _ => Failure::Other(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Other(format!("i/o error: {e}"))
    }
}

type Outcome = std::result::Result<(), Failure>;

/// Parses `args` (program name first) and runs the command.
pub fn run_from_args<I, T, W, E>(args: I, out: &mut W, err: &mut E) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
    W: Write + Send,
    E: Write + Send,
{
    let config = match CommandConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(rendered.as_bytes()) } else { out.write_all(rendered.as_bytes()) };
            return code;
        }
    };
    let threads = match std::env::var(THREADS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) => n,
            Err(_) => {
                let _ = writeln!(err, "error: {THREADS_ENV} must be a non-negative integer, got '{v}'");
                return EXIT_CONFIG;
            }
        },
        Err(_) => 0,
    };
    match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(pool) => pool.install(|| run(&config, out, err)),
        Err(e) => {
            let _ = writeln!(err, "error: cannot start worker pool: {e}");
            EXIT_FAILURE
        }
    }
}

/// Executes `config`, writing results to `out` (or the output file) and
/// diagnostics to `err`. Returns the process exit code.
pub fn run<W: Write, E: Write>(config: &CommandConfig, out: &mut W, err: &mut E) -> i32 {
    let result = match config.command {
        Command::Basis => basis(config, out),
        Command::Nodes => nodes(config, out),
        Command::Integrate => integrate(config, out),
        Command::Verify => run_verify(config, out),
        Command::Study => study(config, out, err),
        Command::Bound => bound(config, out),
    };
    match result.and_then(|()| out.flush().map_err(Failure::from)) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message());
            f.code()
        }
    }
}

struct Table {
    format: OutputFormat,
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

impl Table {
    fn new(format: OutputFormat, header: &[&'static str]) -> Self {
        Self { format, header: header.to_vec(), rows: Vec::new() }
    }

    fn num(&self, v: f64) -> String {
        match self.format {
            OutputFormat::Text => sig(v, 5),
            OutputFormat::Csv => sig(v, 17),
        }
    }

    fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    fn write<W: Write + ?Sized>(&self, out: &mut W) -> io::Result<()> {
        match self.format {
            OutputFormat::Csv => {
                writeln!(out, "{}", self.header.join(","))?;
                for row in &self.rows {
                    let cells: Vec<String> = row.iter().map(|c| csv_cell(c)).collect();
                    writeln!(out, "{}", cells.join(","))?;
                }
            }
            OutputFormat::Text => {
                let widths: Vec<usize> = (0..self.header.len())
                    .map(|i| self.rows.iter().map(|r| r[i].len()).chain([self.header[i].len()]).max().unwrap_or(0))
                    .collect();
                let line = |cells: Vec<&str>| {
                    let padded: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
                    padded.join("  ").trim_end().to_string()
                };
                writeln!(out, "{}", line(self.header.clone()))?;
                for row in &self.rows {
                    writeln!(out, "{}", line(row.iter().map(String::as_str).collect()))?;
                }
            }
        }
        Ok(())
    }
}

fn csv_cell(cell: &str) -> String {
    if cell.contains([',', '"']) {
        format!("\"{}\"", cell.replace('"', "\"\""))
    } else {
        cell.to_string()
    }
}

fn make_basis(config: &CommandConfig) -> std::result::Result<FrolovBasis, Failure> {
    Ok(FrolovBasis::new(config.dimension, config.kind)?)
}

fn single_scale(config: &CommandConfig) -> std::result::Result<f64, Failure> {
    match config.scales.as_slice() {
        [a] => Ok(*a),
        [] => Err(Failure::Config("this command needs a scale (-a)".into())),
        _ => Err(Failure::Config("this command takes a single scale".into())),
    }
}

fn smoothness(config: &CommandConfig) -> std::result::Result<u32, Failure> {
    config.smoothness.ok_or_else(|| Failure::Config("this command needs a smoothness (-s)".into()))
}

fn mode(config: &CommandConfig) -> std::result::Result<Mode, Failure> {
    match config.mode {
        ModeArg::Vanishing => Ok(Mode::Vanishing),
        ModeArg::Periodized => Ok(Mode::Periodized { s: smoothness(config)? }),
    }
}

fn test_function(config: &CommandConfig) -> std::result::Result<TestFunction, Failure> {
    let selector = config.function.as_deref().unwrap_or("bump:p=2");
    let f = testfunctions::parse_selector(selector, Some(config.dimension))?;
    if f.dimension() != config.dimension {
        return Err(Failure::Config(format!(
            "function dimension {} does not match -d {}",
            f.dimension(),
            config.dimension
        )));
    }
    Ok(f)
}

/// Runs `body` against the output file if one was given, else `out`.
fn with_output<W: Write>(
    config: &CommandConfig,
    out: &mut W,
    body: impl FnOnce(&mut dyn Write) -> Outcome,
) -> Outcome {
    match &config.output {
        Some(path) => {
            let file = File::create(path).map_err(|e| Failure::Config(format!("cannot create {}: {e}", path.display())))?;
            let mut writer = BufWriter::new(file);
            body(&mut writer)?;
            writer.flush()?;
            Ok(())
        }
        None => body(out),
    }
}

fn basis<W: Write>(config: &CommandConfig, out: &mut W) -> Outcome {
    let basis = make_basis(config)?;
    let mut t = Table::new(config.format, &["quantity", "value"]);
    t.push(vec!["d".into(), basis.dimension().to_string()]);
    t.push(vec!["kind".into(), basis.kind().to_string()]);
    for (i, root) in basis.roots().values().iter().enumerate() {
        t.push(vec![format!("root_{}", i + 1), t.num(*root)]);
    }
    t.push(vec!["abs_det_t".into(), t.num(basis.abs_det_generator())]);
    t.push(vec!["residual".into(), t.num(basis.roots().residual())]);
    with_output(config, out, |w| Ok(t.write(w)?))
}

fn nodes<W: Write>(config: &CommandConfig, out: &mut W) -> Outcome {
    let basis = make_basis(config)?;
    let a = single_scale(config)?;
    let set = basis.enumerate_nodes_in(a, &crate::lattice::AxisBox::unit(config.dimension), config.budget)?;
    with_output(config, out, |w| Ok(write_nodes(w, &basis, &set)?))
}

fn integrate<W: Write>(config: &CommandConfig, out: &mut W) -> Outcome {
    let basis = make_basis(config)?;
    let a = single_scale(config)?;
    let f = test_function(config)?;
    let rule = CubatureRule::with_budget(&basis, a, mode(config)?, Domain::UnitCube, config.budget)?;
    let estimate = rule.integrate_parallel(|x| f.evaluate(x))?;
    let mut t = Table::new(config.format, &["quantity", "value"]);
    t.push(vec!["function".into(), f.selector()]);
    t.push(vec!["mode".into(), rule.mode().to_string()]);
    t.push(vec!["a".into(), t.num(a)]);
    t.push(vec!["nodes".into(), rule.count().to_string()]);
    t.push(vec!["estimate".into(), t.num(estimate)]);
    t.push(vec!["exact".into(), t.num(f.exact_integral())]);
    t.push(vec!["error".into(), t.num((estimate - f.exact_integral()).abs())]);
    if let Some(s) = config.smoothness {
        t.push(vec!["bound".into(), t.num(theoretical_bound(s, config.dimension, a)?)]);
    }
    with_output(config, out, |w| Ok(t.write(w)?))
}

fn run_verify<W: Write>(config: &CommandConfig, out: &mut W) -> Outcome {
    let basis = make_basis(config)?;
    let mut options = VerifyOptions { seed: config.seed, ..Default::default() };
    if !config.scales.is_empty() {
        options.scales = config.scales.clone();
    }
    let reports = verify::run_all(&basis, &options);
    let mut t = Table::new(config.format, &["suite", "status", "checks", "failures", "detail"]);
    for r in &reports {
        t.push(vec![r.name.into(), r.status.label().into(), r.checks.to_string(), r.failures.to_string(), r.detail.clone()]);
    }
    with_output(config, out, |w| Ok(t.write(w)?))?;
    let failed: Vec<&str> = reports.iter().filter(|r| !r.passed()).map(|r| r.name).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Verify(format!("failed suites: {}", failed.join(", "))))
    }
}

fn study<W: Write, E: Write>(config: &CommandConfig, out: &mut W, err: &mut E) -> Outcome {
    let basis = make_basis(config)?;
    if config.scales.is_empty() {
        return Err(Failure::Config("study needs a scale grid (-a)".into()));
    }
    let f = test_function(config)?;
    let s = match config.smoothness.or(f.smoothness()) {
        Some(s) => s,
        None => return Err(Failure::Config("study needs a smoothness (-s)".into())),
    };
    let options = StudyOptions { timing: config.timing, budget: config.budget };
    let records = convergence_study(&basis, &f, s, &config.scales, mode(config)?, options)?;
    let order = match fit_order(&records) {
        Ok(slope) => format!("fitted order: {}", sig(slope, 5)),
        Err(e) => format!("fitted order: unavailable ({e})"),
    };
    match &config.output {
        Some(_) => {
            with_output(config, out, |w| Ok(write_csv(w, &records)?))?;
            writeln!(out, "{order}")?;
        }
        None => {
            write_csv(&mut *out, &records)?;
            writeln!(err, "{order}")?;
        }
    }
    Ok(())
}

fn bound<W: Write>(config: &CommandConfig, out: &mut W) -> Outcome {
    let s = smoothness(config)?;
    let d = config.dimension;
    if config.scales.is_empty() {
        return Err(Failure::Config("bound needs a scale (-a)".into()));
    }
    let constant = bound_constant(s, d)?;
    let mut t = Table::new(config.format, &["s", "d", "a", "bound", "constant"]);
    for &a in &config.scales {
        let b = theoretical_bound(s, d, a)?;
        t.push(vec![s.to_string(), d.to_string(), t.num(a), t.num(b), t.num(constant)]);
    }
    with_output(config, out, |w| Ok(t.write(w)?))
}
