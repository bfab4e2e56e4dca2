use esequence::arith::format_rational;
use esequence::{decide, PeriodicDecision, PeriodicSpec, Prefix};
use serde::Serialize;

use super::{strings, VerdictFields};
use crate::config::RunConfig;
use crate::error::CliResult;
use crate::output::Sink;

pub const HEADER: &[&str] = &[
    "record",
    "spec",
    "canonical",
    "l",
    "r",
    "s",
    "b_l",
    "big_b_r",
    "x_cycle",
    "candidate",
    "verdict",
    "criterion",
    "x",
    "depth",
    "trajectory",
];

/// One decided spec with the quantities behind its verdict.
#[derive(Serialize)]
pub struct DecisionRecord {
    spec: String,
    canonical: String,
    l: usize,
    r: usize,
    s: u64,
    b_l: u64,
    big_b_r: String,
    x_cycle: String,
    candidate: Option<String>,
    #[serde(flatten)]
    verdict: VerdictFields,
    /// `x_0, ..., x_{l+2r}` of the witness.
    trajectory: Vec<String>,
}

impl DecisionRecord {
    pub fn new(spec: &PeriodicSpec, decision: &PeriodicDecision) -> Self {
        let canonical = &decision.spec;
        let trajectory = match &decision.verdict {
            esequence::Verdict::ConvergentTo {
                witness: Some(traj),
                ..
            } => strings(traj.all_values()),
            _ => Vec::new(),
        };
        DecisionRecord {
            spec: spec.to_string(),
            canonical: canonical.to_string(),
            l: canonical.l(),
            r: canonical.r(),
            s: decision.s,
            b_l: canonical.b_l(),
            big_b_r: decision.big_b_r.to_string(),
            x_cycle: format_rational(&decision.x_cycle),
            candidate: decision.candidate.as_ref().map(format_rational),
            verdict: (&decision.verdict).into(),
            trajectory,
        }
    }
}

/// Decides the spec given by `prefix` and `periodic` (comma-separated terms).
pub fn run(cfg: &RunConfig) -> CliResult<()> {
    let period: Prefix = cfg.require(&cfg.periodic, "periodic")?.parse()?;
    let head: Prefix = cfg.prefix.as_deref().unwrap_or("").parse()?;
    let spec = PeriodicSpec::new(head.into(), period.into())?;
    let decision = decide(&spec);
    let mut sink = Sink::open(cfg.format(), cfg.output_path(), HEADER)?;
    sink.emit("decision", &DecisionRecord::new(&spec, &decision))?;
    sink.finish()
}
