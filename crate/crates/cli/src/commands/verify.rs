//! Exact verification sweeps. Each suite reports how many cases it checked
//! and the first violation, if any.

use std::collections::HashSet;

use esequence::criteria::{positional_diagnostics, product_bound_sweep, reciprocal_product_bounds};
use esequence::trajectory::e_sequence_until_one;
use esequence::{e_sequence_of, matthews_watts_check, solve_prefix, split_identity_check, Prefix};
use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::output::Sink;

pub const HEADER: &[&str] = &[
    "record",
    "suite",
    "n_max",
    "seed",
    "samples",
    "checked",
    "status",
    "counterexample",
];

/// Longest trajectory followed while looking for the arrival at 1.
const DESCENT_LIMIT: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    ProductBound,
    ReciprocalProducts,
    Positional,
    SplitIdentity,
    MatthewsWatts,
}

impl Suite {
    pub const ALL: [Suite; 5] = [
        Suite::ProductBound,
        Suite::ReciprocalProducts,
        Suite::Positional,
        Suite::SplitIdentity,
        Suite::MatthewsWatts,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::ProductBound => "product-bound",
            Suite::ReciprocalProducts => "reciprocal-products",
            Suite::Positional => "positional",
            Suite::SplitIdentity => "split-identity",
            Suite::MatthewsWatts => "matthews-watts",
        }
    }

    fn default_n_max(self) -> u64 {
        match self {
            Suite::ProductBound => 2000,
            Suite::ReciprocalProducts => 100,
            Suite::Positional => 10_000,
            Suite::SplitIdentity => 40,
            Suite::MatthewsWatts => 200,
        }
    }

    fn default_samples(self) -> Option<usize> {
        match self {
            Suite::SplitIdentity => Some(100),
            Suite::MatthewsWatts => Some(500),
            _ => None,
        }
    }
}

impl std::str::FromStr for Suite {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s.trim())
            .ok_or_else(|| {
                let names: Vec<&str> = Suite::ALL.iter().map(|s| s.name()).collect();
                CliError::Usage(format!(
                    "unknown suite {s:?}; expected one of {}",
                    names.join(", ")
                ))
            })
    }
}

#[derive(Serialize)]
struct Report {
    suite: &'static str,
    n_max: u64,
    seed: Option<u64>,
    samples: Option<usize>,
    checked: u64,
    status: &'static str,
    counterexample: Option<String>,
}

/// Number of cases checked and the first violation found.
type Sweep = (u64, Option<String>);

fn product_bound(n_max: u64) -> Sweep {
    match product_bound_sweep(n_max) {
        None => (n_max, None),
        Some(n) => (n, Some(format!("n = {n}"))),
    }
}

fn reciprocal_products(n_max: u64) -> CliResult<Sweep> {
    let mut checked = 0;
    for x in 1..=n_max {
        for n in 1..=x {
            checked += 1;
            let r = reciprocal_product_bounds(x, n)?;
            if !r.holds() {
                return Ok((checked, Some(format!("x = {x}, n = {n}: {r:?}"))));
            }
        }
    }
    Ok((checked, None))
}

fn positional(n_max: u64) -> CliResult<Sweep> {
    let mut checked = 0;
    for x in (1..n_max).step_by(2) {
        let traj = e_sequence_until_one(&BigUint::from(x), DESCENT_LIMIT)?;
        for n in 1..=traj.len() {
            let prefix = Prefix::new(traj.exponents[..n].to_vec())?;
            let solution = solve_prefix(&prefix)?;
            let chain_start = &solution.x0;
            let distinct = esequence::solver::forward_chain(chain_start, prefix.terms())
                .is_some_and(|c| c[..n].iter().collect::<HashSet<_>>().len() == n);
            if !distinct {
                continue;
            }
            checked += 1;
            let report = positional_diagnostics(&solution, &prefix)?;
            if !report.consistent() {
                return Ok((
                    checked,
                    Some(format!("x = {x}, n = {n}: {:?}", report.implications())),
                ));
            }
        }
    }
    Ok((checked, None))
}

fn split_identity(n_max: u64, seed: u64, samples: usize) -> CliResult<Sweep> {
    if n_max < 3 {
        return Err(CliError::Usage("split-identity needs n_max >= 3".into()));
    }
    let n = n_max as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checked = 0;
    for _ in 0..samples {
        let terms: Vec<u32> = (0..n).map(|_| rng.gen_range(1..=4)).collect();
        let prefix = Prefix::new(terms)?;
        for u in 1..=n - 2 {
            for v in u..=n - 2 {
                checked += 1;
                if !split_identity_check(&prefix, u, v)? {
                    return Ok((
                        checked,
                        Some(format!("{:?}, u = {u}, v = {v}", prefix.terms())),
                    ));
                }
            }
        }
    }
    Ok((checked, None))
}

fn matthews_watts(n_max: u64, seed: u64, samples: usize) -> CliResult<Sweep> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checked = 0;
    for _ in 0..samples {
        let x = BigUint::from(rng.gen_range(0..1u64 << 59) * 2 + 1);
        checked += 1;
        if !matthews_watts_check(&e_sequence_of(&x, n_max as usize)?) {
            return Ok((checked, Some(format!("x = {x}"))));
        }
    }
    Ok((checked, None))
}

/// Runs the named suite; a violation is reported and then exits with status 1.
pub fn run(cfg: &RunConfig) -> CliResult<()> {
    let suite: Suite = cfg.require(&cfg.suite, "suite")?.parse()?;
    let n_max = cfg.n_max.unwrap_or(suite.default_n_max());
    if n_max == 0 {
        return Err(CliError::Usage("n_max must be at least 1".into()));
    }
    let samples = suite.default_samples().map(|d| cfg.samples.unwrap_or(d));
    let seed = samples.map(|_| cfg.seed.unwrap_or(0));

    let (checked, counterexample) = match suite {
        Suite::ProductBound => product_bound(n_max),
        Suite::ReciprocalProducts => reciprocal_products(n_max)?,
        Suite::Positional => positional(n_max)?,
        Suite::SplitIdentity => split_identity(n_max, seed.unwrap_or(0), samples.unwrap_or(0))?,
        Suite::MatthewsWatts => matthews_watts(n_max, seed.unwrap_or(0), samples.unwrap_or(0))?,
    };
    let mut sink = Sink::open(cfg.format(), cfg.output_path(), HEADER)?;
    sink.emit(
        "verify",
        &Report {
            suite: suite.name(),
            n_max,
            seed,
            samples,
            checked,
            status: if counterexample.is_some() {
                "fail"
            } else {
                "pass"
            },
            counterexample: counterexample.clone(),
        },
    )?;
    sink.finish()?;
    match counterexample {
        Some(c) => Err(CliError::Violation(format!("{}: {c}", suite.name()))),
        None => Ok(()),
    }
}
