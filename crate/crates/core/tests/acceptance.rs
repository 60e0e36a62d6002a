//! The twelve acceptance criteria, each with its time limit. Prints one
//! PASS/FAIL line per criterion and exits non-zero if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use unisym::bench::bench_pfaffian;
use unisym::gamma::{verify_appendix, AppendixTable};
use unisym::pfaffian::random_skew;
use unisym::verify::{run_suite, Suite};
use unisym::{seeded_rng, Field, Report};

const SEED: u64 = 7;
const BOUND: u64 = 1000;

struct Outcome {
    passed: bool,
    detail: String,
}

fn from_reports(reports: &[Report]) -> Outcome {
    let assertions: u64 = reports.iter().map(|r| r.assertions).sum();
    let failures: u64 = reports.iter().map(|r| r.failure_count).sum();
    let mut detail = format!("{assertions} exact checks, {failures} failures");
    if let Some(f) = reports.iter().flat_map(|r| &r.failures).next() {
        detail.push_str(&format!("; first: expected {} got {} at {:?}", f.expected, f.got, f.specialization));
    }
    Outcome {
        passed: failures == 0 && assertions > 0,
        detail,
    }
}

fn suite(s: Suite, field: Field, trials: usize) -> Outcome {
    let mut rng = seeded_rng(SEED);
    match run_suite(s, field, trials, BOUND, &mut rng) {
        Ok(r) => from_reports(&[r]),
        Err(e) => Outcome {
            passed: false,
            detail: e.to_string(),
        },
    }
}

fn appendix(tables: &[AppendixTable]) -> Outcome {
    let mut rng = seeded_rng(SEED);
    let reports: Vec<Report> = tables
        .iter()
        .map(|&t| verify_appendix(t, Field::Rationals, 100, BOUND, &mut rng))
        .collect();
    from_reports(&reports)
}

fn oracle() -> Outcome {
    let mut o = suite(Suite::GammaOracle, Field::Rationals, 50);
    // 20 triples per matrix, plus one randomized-choice and one whole-map comparison
    o.passed &= o.detail.starts_with(&format!("{} ", 50 * 22));
    o
}

fn units() -> Outcome {
    let fields = [
        Field::Rationals,
        Field::FunctionField(2),
        Field::FunctionField(3),
        Field::FunctionField(5),
    ];
    let mut reports = Vec::new();
    for field in fields {
        let mut rng = seeded_rng(SEED);
        match run_suite(Suite::Units, field, 20, BOUND, &mut rng) {
            Ok(r) => reports.push(r),
            Err(e) => {
                return Outcome {
                    passed: false,
                    detail: format!("{field}: {e}"),
                }
            }
        }
    }
    from_reports(&reports)
}

fn benchmark() -> Outcome {
    let mut rng = seeded_rng(SEED);
    let report = match bench_pfaffian(12, BOUND, &mut rng) {
        Ok(r) => r,
        Err(e) => {
            return Outcome {
                passed: false,
                detail: e.to_string(),
            }
        }
    };
    let compared = report.rows.iter().filter(|r| r.agree.is_some()).count();
    let a = random_skew(Field::Rationals, 40, &mut rng, BOUND);
    let start = Instant::now();
    let pf = a.pf_eliminate();
    let big = start.elapsed();
    let squares = match (&pf, a.to_matrix().det()) {
        (Ok(p), Ok(d)) => p * p == d,
        _ => false,
    };
    Outcome {
        passed: report.all_agree() && compared == 12 && big < Duration::from_secs(1) && squares,
        detail: format!(
            "agree up to n = {compared}; 40x40 elimination {:.1} ms; crossover {:?}",
            big.as_secs_f64() * 1000.0,
            report.crossover
        ),
    }
}

type Criterion = (&'static str, Option<u64>, Box<dyn Fn() -> Outcome>);

fn main() -> ExitCode {
    let q = Field::Rationals;
    let criteria: Vec<Criterion> = vec![
        ("table a1", Some(5), Box::new(|| appendix(&[AppendixTable::A1]))),
        ("tables a2 and a3", Some(10), Box::new(|| appendix(&[AppendixTable::A2, AppendixTable::A3]))),
        ("oracle equals Pfaffian ratio", Some(60), Box::new(oracle)),
        ("Pfaffian identities", Some(30), Box::new(move || suite(Suite::Pfaffian, q, 500))),
        ("Dress-Wenzel identity", Some(30), Box::new(move || suite(Suite::DressWenzel, q, 200))),
        ("sections", Some(60), Box::new(move || suite(Suite::Sections, q, 100))),
        ("Witt extension", Some(30), Box::new(move || suite(Suite::Witt, q, 100))),
        ("complexes", Some(60), Box::new(move || suite(Suite::Complexes, q, 100))),
        ("s_m for m <= 12", None, Box::new(move || suite(Suite::Sm, q, 12))),
        ("seven-brace certificate", Some(10), Box::new(move || suite(Suite::Relation, q, 100))),
        ("unit searches", None, Box::new(units)),
        ("Pfaffian benchmark", None, Box::new(benchmark)),
    ];
    let mut all = true;
    for (i, (name, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let mut o = run();
        let secs = start.elapsed().as_secs_f64();
        if let Some(limit) = limit {
            if secs >= *limit as f64 {
                o.passed = false;
                o.detail.push_str(&format!("; over the {limit} s limit"));
            }
        }
        all &= o.passed;
        println!(
            "criterion {:>2} {} {name}: {} ({secs:.2} s)",
            i + 1,
            if o.passed { "PASS" } else { "FAIL" },
            o.detail
        );
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
