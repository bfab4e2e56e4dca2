//! Exact analysis of E-sequences, the exponent sequences `a_n` of odd 3x+1
//! trajectories `x_n = (3 x_{n-1} + 1) / 2^{a_n}`.
//!
//! Everything is computed with arbitrary-precision integers and rationals:
//! accumulators `b_n`, `B_n` and the closed form `2^{b_n} x_n - 3^n x_0 = B_n`,
//! the inverse problem of recovering `x_0` from a prefix, the Ω-limit loop
//! over infinite generators, a complete decision procedure for eventually
//! periodic sequences, and certified divergence tests for non-periodic ones.

pub mod arith;
pub mod criteria;
pub mod error;
pub mod generator;
pub mod omega;
pub mod periodic;
pub mod sequences;
pub mod solver;
pub mod theta;
pub mod trajectory;
pub mod verdict;

pub use error::{Error, Result};
pub use generator::GeneratorSpec;
pub use omega::{omega_limit, omega_limit_with, OmegaOptions, OmegaReport, OmegaRun, Stride};
pub use periodic::{b_periodic, branch_formulas_check, decide, PeriodicDecision, PeriodicSpec};
pub use sequences::{
    accumulate, accumulate_block, split_identity_check, Accumulators, BlockAccumulators, Limits,
    Prefix,
};
pub use solver::{backward_chain_check, solve_block, solve_prefix, PrefixSolution, PrefixState};
pub use theta::{floor_n_theta, Theta};
pub use trajectory::{closed_form_check, e_sequence_of, matthews_watts_check, step, Trajectory};
pub use verdict::{Criterion, Verdict};
