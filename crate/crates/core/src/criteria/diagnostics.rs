//! Where `x_0` and `x_n` sit in their chain, read off from `B_n / 3^n` and
//! `B_n / 2^{b_n}` compared with `n / 3`.
//!
//! For a solved prefix with pairwise distinct `x_0, ..., x_{n-1}`:
//! 1. `B_n/3^n > n/3` forces some `x_k <= x_0` with `1 <= k <= n-1`;
//! 2. `B_n/3^n < n/3` forces some `x_0 <= x_k` with `1 <= k <= n`;
//! 3. `B_n/2^{b_n} <= n/3` forces some `x_n <= x_i` with `0 <= i <= n-1`;
//! 4. `B_n/2^{b_n} >= n/3` forces some `x_n >= x_k` with `0 <= k <= n-1`.

use std::collections::HashSet;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;

use crate::arith::{pow2, pow3};
use crate::error::{Error, Result};
use crate::sequences::Prefix;
use crate::solver::{forward_chain, PrefixSolution};

/// One premise-conclusion pair evaluated on an actual chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Implication {
    pub premise: bool,
    pub conclusion: bool,
}

impl Implication {
    /// The chain does not contradict the implication.
    pub fn consistent(&self) -> bool {
        !self.premise || self.conclusion
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PositionalReport {
    pub n: usize,
    /// `B_n / 3^n`.
    pub growth_ratio: BigRational,
    /// `B_n / 2^{b_n}`.
    pub end_ratio: BigRational,
    /// `n / 3`.
    pub reference: BigRational,
    /// Some later value (before `x_n`) is at most `x_0`.
    pub start_not_minimal: Implication,
    /// Some later value is at least `x_0`.
    pub start_not_maximal: Implication,
    /// Some earlier value is at least `x_n`.
    pub end_not_maximal: Implication,
    /// Some earlier value is at most `x_n`.
    pub end_not_minimal: Implication,
}

impl PositionalReport {
    pub fn implications(&self) -> [Implication; 4] {
        [
            self.start_not_minimal,
            self.start_not_maximal,
            self.end_not_maximal,
            self.end_not_minimal,
        ]
    }

    pub fn consistent(&self) -> bool {
        self.implications().iter().all(Implication::consistent)
    }
}

/// Evaluates the four positional implications on the chain of `solution`.
pub fn positional_diagnostics(
    solution: &PrefixSolution,
    prefix: &Prefix,
) -> Result<PositionalReport> {
    let n = solution.n;
    if n == 0 || prefix.len() != n {
        return Err(Error::Precondition(
            "solution and prefix lengths must agree and be positive".into(),
        ));
    }
    let chain = forward_chain(&solution.x0, prefix.terms())
        .ok_or_else(|| Error::Precondition("solution does not belong to the prefix".into()))?;
    let mut seen = HashSet::with_capacity(n);
    if !chain[..n].iter().all(|x| seen.insert(x)) {
        return Err(Error::Precondition(
            "chain values x_0..x_{n-1} are not pairwise distinct".into(),
        ));
    }

    let big_b = BigInt::from(solution.big_b.clone());
    let growth_ratio = BigRational::new(big_b.clone(), BigInt::from(pow3(n as u64)));
    let end_ratio = BigRational::new(big_b, BigInt::from(pow2(solution.b)));
    let reference = BigRational::new(BigInt::from(n), BigInt::from(3));

    let x0: &BigUint = &chain[0];
    let xn: &BigUint = &chain[n];
    let inner = &chain[1..n];
    let before_end = &chain[..n];

    Ok(PositionalReport {
        n,
        start_not_minimal: Implication {
            premise: growth_ratio > reference,
            conclusion: inner.iter().any(|x| x <= x0),
        },
        start_not_maximal: Implication {
            premise: growth_ratio < reference,
            conclusion: chain[1..].iter().any(|x| x0 <= x),
        },
        end_not_maximal: Implication {
            premise: end_ratio <= reference,
            conclusion: before_end.iter().any(|x| xn <= x),
        },
        end_not_minimal: Implication {
            premise: end_ratio >= reference,
            conclusion: before_end.iter().any(|x| xn >= x),
        },
        growth_ratio,
        end_ratio,
        reference,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::solve_prefix;
    use crate::trajectory::e_sequence_of;

    fn report(x: u64, n: usize) -> Result<PositionalReport> {
        let traj = e_sequence_of(&BigUint::from(x), n).unwrap();
        let prefix = traj.prefix();
        positional_diagnostics(&solve_prefix(&prefix).unwrap(), &prefix)
    }

    #[test]
    fn ascending_start() {
        // 7 -> 11 -> 17 -> 13: x_0 is the minimum of x_0..x_2
        let r = report(7, 3).unwrap();
        assert!(r.growth_ratio <= r.reference);
        assert!(r.consistent());
    }

    #[test]
    fn single_rising_step() {
        let prefix = Prefix::new(vec![1]).unwrap();
        let r = positional_diagnostics(&solve_prefix(&prefix).unwrap(), &prefix).unwrap();
        assert_eq!(r.end_ratio, BigRational::new(1.into(), 2.into()));
        assert!(r.end_ratio > r.reference);
        assert!(r.consistent());
    }

    #[test]
    fn repeated_values_are_rejected() {
        let prefix = Prefix::new(vec![2, 2, 2]).unwrap();
        let sol = solve_prefix(&prefix).unwrap();
        assert!(matches!(
            positional_diagnostics(&sol, &prefix),
            Err(Error::Precondition(_))
        ));
        let other = Prefix::new(vec![2, 2]).unwrap();
        assert!(positional_diagnostics(&sol, &other).is_err());
    }

    #[test]
    fn orbit_sample() {
        for x in (3u64..400).step_by(2) {
            for n in 1..20 {
                if let Ok(r) = report(x, n) {
                    assert!(r.consistent(), "x = {x}, n = {n}");
                }
            }
        }
    }
}
