use esequence::{OmegaOptions, OmegaRun, Stride};
use serde::Serialize;

use super::VerdictFields;
use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::output::Sink;

pub const HEADER: &[&str] = &[
    "record",
    "generator",
    "n",
    "x0",
    "verdict",
    "criterion",
    "x",
    "depth",
    "threshold",
];
const DEFAULT_MAX_N: usize = 10_000;

#[derive(Serialize)]
struct Sample {
    n: usize,
    x0: String,
}

#[derive(Serialize)]
struct Summary {
    generator: String,
    #[serde(flatten)]
    verdict: VerdictFields,
    n: usize,
    x0: String,
    threshold: String,
}

/// `pow2` (the default) or a positive integer `k` for every `k`-th depth.
pub fn parse_stride(text: Option<&str>) -> CliResult<Stride> {
    match text.map(str::trim) {
        None | Some("pow2") => Ok(Stride::PowersOfTwo),
        Some(k) => match k.parse::<usize>() {
            Ok(k) if k > 0 => Ok(Stride::Every(k)),
            _ => Err(CliError::Usage(format!(
                "stride {k:?} is neither pow2 nor a positive integer"
            ))),
        },
    }
}

/// Runs the Ω-limit loop and emits the growth series followed by a summary.
/// On a bit-cap abort the series reached so far is still written.
pub fn run(cfg: &RunConfig) -> CliResult<()> {
    let generator = cfg.generator()?;
    let options = OmegaOptions::new(cfg.max_n(DEFAULT_MAX_N)?)
        .threshold(cfg.threshold()?)
        .limits(cfg.limits()?)
        .stride(parse_stride(cfg.stride.as_deref())?);
    let threshold = options.threshold.to_string();

    let mut sink = Sink::open(cfg.format(), cfg.output_path(), HEADER)?;
    let mut omega = OmegaRun::new(&generator, options);
    let outcome = omega.run();
    let report = omega.report();
    for (n, x0) in &report.series {
        sink.emit(
            "series",
            &Sample {
                n: *n,
                x0: x0.to_string(),
            },
        )?;
    }
    if outcome.is_ok() {
        sink.emit(
            "summary",
            &Summary {
                generator: generator.to_string(),
                verdict: (&report.verdict).into(),
                n: report.depth,
                x0: omega.x0().to_string(),
                threshold,
            },
        )?;
    }
    sink.finish()?;
    outcome.map(|_| ()).map_err(Into::into)
}
