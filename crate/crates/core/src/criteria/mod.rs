//! Certified divergence tests for E-sequences that are not eventually
//! periodic, and exact checks of the inequalities they rest on.

pub mod bounds;
pub mod density;
pub mod diagnostics;
pub mod runs;
pub mod sturmian;

use std::fmt;

use num_bigint::BigUint;
use num_rational::BigRational;

use crate::arith::{format_rational, to_rational};
use crate::verdict::Criterion;

pub use bounds::{
    convergent_start_lower_bound, ninth_root_ceil, ninth_root_floor, product_bound,
    product_bound_sweep, reciprocal_product_bounds, ProductBound, ReciprocalProductBounds,
    ROOT_SCALE,
};
pub use density::density_criterion;
pub use diagnostics::{positional_diagnostics, Implication, PositionalReport};
pub use runs::{
    repeated_block_criterion, runs_of_ones_criterion, BlockPairFamily, CriterionOutcome,
    RunPairFamily,
};
pub use sturmian::{
    sturmian_analysis, sturmian_verdict, ConvergentCase, ConvergentCheck, SturmianReport,
};

/// Whether a certificate rests on a symbolic rule covering infinitely many
/// instances or only on the instances that were checked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Basis {
    /// The hypotheses hold for the whole infinite family, by an argument that
    /// is checked exactly for the generator's rule.
    ByRule,
    /// Only the listed instances were verified.
    FiniteEvidence,
}

impl Basis {
    pub fn name(&self) -> &'static str {
        match self {
            Basis::ByRule => "by-rule",
            Basis::FiniteEvidence => "finite-evidence",
        }
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A lower bound on `x_0^{1,n}` next to the solver's exact value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundSample {
    pub n: usize,
    pub bound: BigRational,
    pub solver_x0: BigUint,
}

impl BoundSample {
    pub fn new(n: usize, bound: BigRational, solver_x0: BigUint) -> Self {
        BoundSample {
            n,
            bound,
            solver_x0,
        }
    }

    /// The bound does not overclaim.
    pub fn holds(&self) -> bool {
        self.bound <= to_rational(&self.solver_x0)
    }
}

/// Witnessing data tying a divergence argument to a concrete generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub criterion: Criterion,
    pub basis: Basis,
    /// Named parameters, e.g. the constant `c` or a separating convergent.
    pub parameters: Vec<(String, String)>,
    pub lower_bound_series: Vec<BoundSample>,
}

impl Certificate {
    pub fn new(criterion: Criterion, basis: Basis) -> Self {
        Certificate {
            criterion,
            basis,
            parameters: Vec::new(),
            lower_bound_series: Vec::new(),
        }
    }

    pub fn with(mut self, key: &str, value: impl ToString) -> Self {
        self.parameters.push((key.to_string(), value.to_string()));
        self
    }

    pub fn parameter(&self, key: &str) -> Option<&str> {
        self.parameters
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    /// Every recorded bound is at most the solver's value.
    pub fn bounds_hold(&self) -> bool {
        self.lower_bound_series.iter().all(BoundSample::holds)
    }
}

pub(crate) fn rational_string(value: &BigRational) -> String {
    format_rational(value)
}
