//! Run configuration: command-line flags layered over an optional TOML file.
//!
//! Flags win over the file, the file wins over the `ESEQ_BIT_CAP`
//! environment variable, and that wins over built-in defaults.

use std::path::{Path, PathBuf};

use esequence::{GeneratorSpec, Limits};
use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};
use crate::output::Format;

pub const BIT_CAP_ENV: &str = "ESEQ_BIT_CAP";
pub const MIN_BIT_CAP: u64 = 64;

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub format: Option<Format>,
    pub path: Option<PathBuf>,
}

/// Every setting any command reads. Absent fields fall back to the next layer.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: Option<String>,
    pub generator: Option<String>,
    pub max_n: Option<usize>,
    pub threshold: Option<String>,
    pub stride: Option<String>,
    pub bit_cap: Option<u64>,
    pub x: Option<String>,
    pub n: Option<usize>,
    pub prefix: Option<String>,
    pub periodic: Option<String>,
    pub theta: Option<String>,
    pub l_max: Option<usize>,
    pub r_max: Option<usize>,
    pub term_max: Option<u32>,
    pub suite: Option<String>,
    pub n_max: Option<u64>,
    pub seed: Option<u64>,
    pub samples: Option<usize>,
    #[serde(default)]
    pub output: OutputConfig,
}

macro_rules! layer {
    ($top:ident, $base:ident; $($field:ident),*) => {
        RunConfig {
            $($field: $top.$field.or($base.$field),)*
            output: OutputConfig {
                format: $top.output.format.or($base.output.format),
                path: $top.output.path.or($base.output.path),
            },
        }
    };
}

impl RunConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
        toml::from_str(&text)
            .map_err(|e| CliError::Usage(format!("invalid config {}: {e}", path.display())))
    }

    /// `self` with every missing field taken from `base`.
    pub fn over(self, base: RunConfig) -> RunConfig {
        layer!(self, base; command, generator, max_n, threshold, stride, bit_cap, x, n,
            prefix, periodic, theta, l_max, r_max, term_max, suite, n_max, seed, samples)
    }

    pub fn format(&self) -> Format {
        self.output.format.unwrap_or_default()
    }

    pub fn output_path(&self) -> Option<&Path> {
        self.output.path.as_deref()
    }

    pub fn limits(&self) -> CliResult<Limits> {
        let cap = match self.bit_cap {
            Some(cap) => cap,
            None => match std::env::var(BIT_CAP_ENV) {
                Ok(v) => v.trim().parse().map_err(|_| {
                    CliError::Usage(format!("{BIT_CAP_ENV}={v:?} is not a non-negative integer"))
                })?,
                Err(_) => Limits::default().bit_cap,
            },
        };
        if cap < MIN_BIT_CAP {
            return Err(CliError::Usage(format!(
                "bit cap {cap} is below {MIN_BIT_CAP}"
            )));
        }
        Ok(Limits::with_bit_cap(cap))
    }

    pub fn generator(&self) -> CliResult<GeneratorSpec> {
        let text = self.require(&self.generator, "generator")?;
        Ok(text.parse()?)
    }

    pub fn max_n(&self, default: usize) -> CliResult<usize> {
        match self.max_n.unwrap_or(default) {
            0 => Err(CliError::Usage("max_n must be at least 1".into())),
            n => Ok(n),
        }
    }

    pub fn threshold(&self) -> CliResult<BigUint> {
        let Some(text) = &self.threshold else {
            return Ok(esequence::omega::default_threshold());
        };
        let value = parse_big(text)?;
        if value == BigUint::ZERO {
            return Err(CliError::Usage("threshold must be at least 1".into()));
        }
        Ok(value)
    }

    pub fn require<'a>(&self, value: &'a Option<String>, name: &str) -> CliResult<&'a str> {
        value
            .as_deref()
            .ok_or_else(|| CliError::Usage(format!("missing required setting `{name}`")))
    }
}

/// A decimal integer or a power of two written `2^k`.
pub fn parse_big(text: &str) -> CliResult<BigUint> {
    let text = text.trim();
    let bad = || CliError::Usage(format!("{text:?} is not a decimal integer or 2^k"));
    match text.strip_prefix("2^") {
        Some(exp) => {
            let k: u64 = exp.parse().map_err(|_| bad())?;
            Ok(BigUint::from(1u32) << k)
        }
        None => text.parse().map_err(|_| bad()),
    }
}
