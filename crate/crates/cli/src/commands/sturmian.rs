use std::cmp::Ordering;

use esequence::arith::format_rational;
use esequence::criteria::{sturmian_analysis, ConvergentCheck};
use esequence::theta::Theta;
use esequence::GeneratorSpec;
use serde::Serialize;

use super::{strings, VerdictFields};
use crate::config::RunConfig;
use crate::error::CliResult;
use crate::output::Sink;

pub const HEADER: &[&str] = &[
    "record",
    "theta",
    "comparison",
    "verdict",
    "criterion",
    "x",
    "depth",
    "basis",
    "validated_convergents",
    "terms",
    "index",
    "s",
    "r",
    "case",
    "approximation",
    "pattern",
    "n",
    "bound",
    "solver_x0",
    "holds",
    "validated",
    "ratio",
];
const DEFAULT_MAX_N: usize = 1_000;

#[derive(Serialize)]
struct Summary {
    theta: String,
    comparison: &'static str,
    #[serde(flatten)]
    verdict: VerdictFields,
    basis: Option<&'static str>,
    validated_convergents: usize,
    terms: Vec<String>,
}

#[derive(Serialize)]
struct Convergent {
    index: usize,
    s: u64,
    r: u64,
    case: &'static str,
    approximation: &'static str,
    pattern: bool,
    n: Option<usize>,
    bound: Option<String>,
    solver_x0: Option<String>,
    holds: Option<bool>,
    validated: bool,
}

impl From<&ConvergentCheck> for Convergent {
    fn from(c: &ConvergentCheck) -> Self {
        Convergent {
            index: c.index,
            s: c.s,
            r: c.r,
            case: c.case.name(),
            approximation: match c.approximation {
                Some(true) => "holds",
                Some(false) => "fails",
                None => "undecided",
            },
            pattern: c.pattern,
            n: c.sample.as_ref().map(|s| s.n),
            bound: c.sample.as_ref().map(|s| format_rational(&s.bound)),
            solver_x0: c.sample.as_ref().map(|s| s.solver_x0.to_string()),
            holds: c.sample.as_ref().map(|s| s.holds()),
            validated: c.validated(),
        }
    }
}

#[derive(Serialize)]
struct Witness {
    n: usize,
    /// `B_n / 3^n`.
    ratio: String,
}

fn comparison_name(ord: Ordering) -> &'static str {
    match ord {
        Ordering::Less => "below",
        Ordering::Equal => "equal",
        Ordering::Greater => "above",
    }
}

/// Emits the verdict with the first `max_n` terms, then one record per
/// convergent checked and one per witness sample.
pub fn run(cfg: &RunConfig) -> CliResult<()> {
    let theta: Theta = cfg.require(&cfg.theta, "theta")?.parse()?;
    let max_n = cfg.max_n(DEFAULT_MAX_N)?;
    let report = sturmian_analysis(&theta, max_n)?;
    let terms = GeneratorSpec::Sturmian(theta.clone()).prefix(max_n)?;

    let mut sink = Sink::open(cfg.format(), cfg.output_path(), HEADER)?;
    sink.emit(
        "verdict",
        &Summary {
            theta: theta.to_string(),
            comparison: comparison_name(report.comparison),
            verdict: (&report.verdict).into(),
            basis: report.certificate.as_ref().map(|c| c.basis.name()),
            validated_convergents: report.validated_convergents(),
            terms: strings(terms.terms()),
        },
    )?;
    for check in &report.convergents {
        sink.emit("convergent", &Convergent::from(check))?;
    }
    for (n, ratio) in &report.witness_series {
        sink.emit(
            "witness",
            &Witness {
                n: *n,
                ratio: format_rational(ratio),
            },
        )?;
    }
    sink.finish()
}
