use esequence::sequences::Accumulators;
use esequence::step;
use num_bigint::BigUint;
use serde::Serialize;

use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::output::Sink;

pub const HEADER: &[&str] = &["record", "k", "x", "a", "b", "big_b"];
const DEFAULT_STEPS: usize = 100;

#[derive(Serialize)]
struct Step {
    k: usize,
    x: String,
    a: u32,
    b: u64,
    big_b: String,
}

/// Emits `(k, x_k, a_k, b_k, B_k)` for `k = 1..n`.
pub fn run(cfg: &RunConfig) -> CliResult<()> {
    let text = cfg.require(&cfg.x, "x")?;
    let mut x: BigUint = text
        .trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("x = {text:?} is not a positive integer")))?;
    let n = cfg.n.unwrap_or(DEFAULT_STEPS);
    let limits = cfg.limits()?;
    // reject even input before any output is produced
    step(&x)?;

    let mut sink = Sink::open(cfg.format(), cfg.output_path(), HEADER)?;
    let mut acc = Accumulators::new();
    let outcome = (1..=n).try_for_each(|k| {
        let (a, next) = step(&x)?;
        acc.extend(a, &limits)?;
        x = next;
        sink.emit(
            "step",
            &Step {
                k,
                x: x.to_string(),
                a,
                b: acc.b,
                big_b: acc.big_b.to_string(),
            },
        )
    });
    sink.finish()?;
    outcome
}
