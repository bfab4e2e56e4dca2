//! Decision procedure for eventually periodic E-sequences
//! `a_1 ... a_l (a_{l+1} ... a_{l+r})^∞`.
//!
//! With `s` the exponent sum of one period and `B_r` the period's own
//! accumulator, `3^r > 2^s` always diverges. Otherwise the only possible
//! limit is the closed-form candidate
//! `x_0 = (2^{b_l} B_r - B_l (2^s - 3^r)) / ((2^s - 3^r) 3^l)`, which is
//! accepted only after its trajectory has been checked directly.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::{pow2, pow3};
use crate::error::{Error, Result};
use crate::sequences::Limits;
use crate::sequences::{accumulate, Prefix};
use crate::solver::solve_prefix_with;
use crate::trajectory::e_sequence_of;
use crate::verdict::{Criterion, Verdict};

/// An eventually periodic E-sequence with its derived accumulators.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PeriodicSpec {
    prefix: Vec<u32>,
    period: Vec<u32>,
    /// Exponent sum of one period.
    s: u64,
    /// `b_l`.
    b_l: u64,
    /// `B_l`.
    big_b_l: BigUint,
    /// `B_{l+1}^{l+r-1}`: the accumulator of one period read on its own.
    big_b_r: BigUint,
}

impl PeriodicSpec {
    pub fn new(prefix: Vec<u32>, period: Vec<u32>) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::InvalidSpec(
                "period must have at least one term".into(),
            ));
        }
        let head = Prefix::new(prefix.clone())?;
        let cycle = Prefix::new(period.clone())?;
        let head_acc = accumulate(&head)?;
        let cycle_acc = accumulate(&cycle)?;
        Ok(PeriodicSpec {
            prefix,
            period,
            s: cycle_acc.b,
            b_l: head_acc.b,
            big_b_l: head_acc.big_b,
            big_b_r: cycle_acc.big_b,
        })
    }

    pub fn purely_periodic(period: Vec<u32>) -> Result<Self> {
        Self::new(Vec::new(), period)
    }

    pub fn prefix(&self) -> &[u32] {
        &self.prefix
    }

    pub fn period(&self) -> &[u32] {
        &self.period
    }

    pub fn l(&self) -> usize {
        self.prefix.len()
    }

    pub fn r(&self) -> usize {
        self.period.len()
    }

    pub fn s(&self) -> u64 {
        self.s
    }

    pub fn b_l(&self) -> u64 {
        self.b_l
    }

    pub fn big_b_l(&self) -> &BigUint {
        &self.big_b_l
    }

    pub fn big_b_r(&self) -> &BigUint {
        &self.big_b_r
    }

    /// Term `a_n`, 1-based.
    pub fn term(&self, n: usize) -> u32 {
        let l = self.l();
        if n <= l {
            self.prefix[n - 1]
        } else {
            self.period[(n - l - 1) % self.r()]
        }
    }

    /// The first `n` terms.
    pub fn terms(&self, n: usize) -> Prefix {
        Prefix::new((1..=n).map(|i| self.term(i)).collect()).expect("spec terms are positive")
    }

    /// `2^s - 3^r` as a signed integer; never zero.
    pub fn gap(&self) -> BigInt {
        BigInt::from(pow2(self.s)) - BigInt::from(pow3(self.r() as u64))
    }

    /// Least period, with the periodic part rotated so that `l` is minimal.
    pub fn canonical(&self) -> PeriodicSpec {
        let r = self.r();
        let d = (1..=r)
            .filter(|d| r.is_multiple_of(*d))
            .find(|&d| (0..r).all(|i| self.period[i] == self.period[i % d]))
            .unwrap_or(r);
        let mut prefix = self.prefix.clone();
        let mut period = self.period[..d].to_vec();
        while let (Some(&last), Some(&tail)) = (prefix.last(), period.last()) {
            if last != tail {
                break;
            }
            prefix.pop();
            period.rotate_right(1);
        }
        PeriodicSpec::new(prefix, period).expect("canonical form of a valid spec is valid")
    }
}

impl fmt::Display for PeriodicSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[u32]| v.iter().map(u32::to_string).collect::<Vec<_>>().join(",");
        write!(f, "{};{}", join(&self.prefix), join(&self.period))
    }
}

/// Parses `prefix;period`, e.g. `1,4;2`, or just a period such as `2`.
impl FromStr for PeriodicSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (head, cycle) = s.split_once(';').unwrap_or(("", s));
        let head: Prefix = head.parse()?;
        let cycle: Prefix = cycle.parse()?;
        PeriodicSpec::new(head.into(), cycle.into())
    }
}

/// `B_{rk+l}` from the closed form
/// `3^{rk} B_l + 2^{b_l} B_r (3^{rk} - 2^{sk}) / (3^r - 2^s)`.
pub fn b_periodic(spec: &PeriodicSpec, k: u64) -> BigUint {
    let r = spec.r() as u64;
    let three_rk = BigInt::from(pow3(r * k));
    let two_sk = BigInt::from(pow2(spec.s * k));
    let denom = -spec.gap();
    let (quot, rem) = (&three_rk - two_sk).div_rem(&denom);
    debug_assert!(rem.is_zero(), "geometric sum divides exactly");
    let value = &three_rk * BigInt::from(spec.big_b_l.clone())
        + BigInt::from(pow2(spec.b_l) * &spec.big_b_r) * quot;
    value.to_biguint().expect("B values are non-negative")
}

/// Result of [`decide`], with the diagnostics that accompany the verdict.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodicDecision {
    /// The canonical form that was decided.
    pub spec: PeriodicSpec,
    pub verdict: Verdict,
    pub s: u64,
    pub big_b_r: BigUint,
    /// `B_r / (2^s - 3^r)`: the would-be cycle value, integral or not.
    pub x_cycle: BigRational,
    /// The closed-form start candidate when `2^s > 3^r`.
    pub candidate: Option<BigRational>,
}

/// Decides convergence of an eventually periodic E-sequence.
pub fn decide(spec: &PeriodicSpec) -> PeriodicDecision {
    let spec = spec.canonical();
    let gap = spec.gap();
    let big_b_r = BigInt::from(spec.big_b_r.clone());
    let x_cycle = BigRational::new(big_b_r.clone(), gap.clone());
    let mut decision = PeriodicDecision {
        spec: spec.clone(),
        verdict: Verdict::DivergentCertified {
            criterion: Criterion::PeriodicDeficit,
        },
        s: spec.s,
        big_b_r: spec.big_b_r.clone(),
        x_cycle,
        candidate: None,
    };
    if gap.is_negative() {
        return decision;
    }

    let l = spec.l();
    let r = spec.r();
    let numer = BigInt::from(pow2(spec.b_l)) * &big_b_r - BigInt::from(spec.big_b_l.clone()) * &gap;
    let denom = &gap * BigInt::from(pow3(l as u64));
    let candidate = BigRational::new(numer, denom);
    decision.candidate = Some(candidate.clone());
    decision.verdict = Verdict::DivergentCertified {
        criterion: Criterion::PeriodicNoIntegralCycle,
    };

    if !candidate.is_integer() || !candidate.is_positive() {
        return decision;
    }
    let x = candidate.to_integer().to_biguint().expect("positive");
    if !x.bit(0) {
        return decision;
    }
    let traj = e_sequence_of(&x, l + 2 * r).expect("x is odd and positive");
    let matches = traj
        .exponents
        .iter()
        .enumerate()
        .all(|(i, &a)| a == spec.term(i + 1));
    if matches && traj.value(l + 2 * r) == traj.value(l + r) {
        decision.verdict = Verdict::ConvergentTo {
            x,
            witness: Some(traj),
        };
    }
    decision
}

/// The branch quantity `u_{rk+l}` recovered from the solver for one `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchReport {
    pub k: u64,
    pub n: usize,
    /// `x_0^{1,rk+l}` from the solver.
    pub x0: BigUint,
    /// `x_{rk+l}^{1,rk+l}` from the solver.
    pub x_end: BigUint,
    pub u: BigInt,
    pub integral: bool,
    /// `0 <= u < |gap| 3^l` when `2^s > 3^r`, `1 <= u <= |gap| 3^l` otherwise.
    pub in_range: bool,
    /// The branch formula for `x_0` reproduces the solver's value.
    pub reconstructs: bool,
}

impl BranchReport {
    pub fn holds(&self) -> bool {
        self.integral && self.in_range && self.reconstructs
    }
}

/// Recovers `u_{rk+l}` from the solved prefix of length `rk + l` and checks the
/// branch formulas for `x_{rk+l}` and `x_0`.
pub fn branch_formulas_check(spec: &PeriodicSpec, k: u64, limits: &Limits) -> Result<BranchReport> {
    if k == 0 {
        return Err(Error::Precondition("branch formulas need k >= 1".into()));
    }
    let l = spec.l();
    let r = spec.r();
    let n = r * k as usize + l;
    let sol = solve_prefix_with(&spec.terms(n), limits)?;

    let gap = spec.gap();
    let expanding = gap.is_positive();
    let d = gap.abs();
    let big_b_r = BigInt::from(spec.big_b_r.clone());
    let three_rk = BigInt::from(pow3(r as u64 * k));
    let x_end = BigInt::from(sol.xn.clone());
    let raw = if expanding {
        &d * &x_end - &big_b_r
    } else {
        &d * &x_end + &big_b_r
    };
    let (u, rem) = raw.div_mod_floor(&three_rk);
    let integral = rem.is_zero();

    let bound = &d * BigInt::from(pow3(l as u64));
    let in_range = if expanding {
        !u.is_negative() && u < bound
    } else {
        u >= BigInt::one() && u <= bound
    };

    let shifted = BigInt::from(pow2(spec.s * k + spec.b_l)) * &u;
    let b_l_term = BigInt::from(spec.big_b_l.clone()) * &d;
    let b_r_term = BigInt::from(pow2(spec.b_l)) * &big_b_r;
    let numer = if expanding {
        shifted - b_l_term + b_r_term
    } else {
        shifted - b_l_term - b_r_term
    };
    let (x0, rem) = numer.div_rem(&bound);
    let reconstructs =
        integral && rem.is_zero() && x0 == BigInt::from_biguint(Sign::Plus, sol.x0.clone());

    Ok(BranchReport {
        k,
        n,
        x0: sol.x0,
        x_end: sol.xn,
        u,
        integral,
        in_range,
        reconstructs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(s: &str) -> PeriodicSpec {
        s.parse().unwrap()
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(b_periodic(&spec("1"), 3), BigUint::from(19u32));
        assert_eq!(b_periodic(&spec("1,4;2"), 1), BigUint::from(47u32));
        assert_eq!(b_periodic(&spec("1,4;2"), 0), BigUint::from(5u32));
        assert_eq!(
            b_periodic(&spec("3,1;1,2"), 0),
            spec("3,1;1,2").big_b_l().clone()
        );
    }

    #[test]
    fn closed_form_matches_accumulation() {
        for s in ["1", "2", "1,4;2", "3;1,2,1", "2,2,1;3,1"] {
            let sp = spec(s);
            for k in 0..6u64 {
                let n = sp.r() * k as usize + sp.l();
                let acc = accumulate(&sp.terms(n)).unwrap();
                assert_eq!(b_periodic(&sp, k), acc.big_b, "{s} k={k}");
            }
        }
    }

    #[test]
    fn decision_table() {
        let d = decide(&spec("2"));
        assert_eq!(d.verdict.convergent_value(), Some(&BigUint::one()));
        assert_eq!(d.x_cycle, BigRational::one());

        let d = decide(&spec("1"));
        assert_eq!(d.verdict.criterion(), Some(Criterion::PeriodicDeficit));

        let d = decide(&spec("1,4;2"));
        assert_eq!(d.verdict.convergent_value(), Some(&BigUint::from(3u32)));

        let d = decide(&spec("4"));
        assert_eq!(
            d.verdict.criterion(),
            Some(Criterion::PeriodicNoIntegralCycle)
        );
        assert_eq!(
            d.candidate,
            Some(BigRational::new(BigInt::from(1), BigInt::from(13)))
        );
    }

    #[test]
    fn canonical_forms() {
        let c = spec("1,2,2;2,2").canonical();
        assert_eq!((c.prefix(), c.period()), (&[1u32][..], &[2u32][..]));
        let c = spec("1;2,1").canonical();
        assert_eq!((c.prefix(), c.period()), (&[][..], &[1u32, 2][..]));
        let c = spec("1,2;1,2,1,2").canonical();
        assert_eq!((c.prefix(), c.period()), (&[][..], &[1u32, 2][..]));
        assert_eq!(
            decide(&spec("2,2;2,2")).verdict.convergent_value(),
            Some(&BigUint::one())
        );
    }

    #[test]
    fn invalid_specs() {
        assert!("1;".parse::<PeriodicSpec>().is_err());
        assert!("1;0".parse::<PeriodicSpec>().is_err());
        assert!("a".parse::<PeriodicSpec>().is_err());
    }

    #[test]
    fn branch_examples() {
        let limits = Limits::default();
        let rep = branch_formulas_check(&spec("2"), 5, &limits).unwrap();
        assert!(rep.holds());
        assert_eq!(
            (rep.u.clone(), rep.x0.clone()),
            (BigInt::zero(), BigUint::one())
        );

        let rep = branch_formulas_check(&spec("1"), 5, &limits).unwrap();
        assert!(rep.holds());
        assert!(rep.u >= BigInt::one());
        assert_eq!(rep.x0, BigUint::from(31u32));

        let rep = branch_formulas_check(&spec("1,4;2"), 3, &limits).unwrap();
        assert!(rep.holds());
        assert_eq!(
            (rep.u.clone(), rep.x0.clone()),
            (BigInt::zero(), BigUint::from(3u32))
        );

        assert!(branch_formulas_check(&spec("1"), 0, &limits).is_err());
    }

    #[test]
    fn deficit_growth_is_monotone_and_unbounded() {
        let limits = Limits::default();
        let series = |s: &str| -> Vec<BigUint> {
            let sp = spec(s);
            (1..=12)
                .map(|k| branch_formulas_check(&sp, k, &limits).unwrap().x0)
                .collect()
        };
        for s in ["1", "1,2", "3;1,1,2", "2;1"] {
            let xs = series(s);
            assert!(xs.windows(2).all(|w| w[0] <= w[1]), "{s}");
            assert!(xs[0] < xs[5] && xs[5] < xs[11], "{s}");
        }
        for s in ["1", "1,2"] {
            assert!(series(s).windows(2).all(|w| w[0] < w[1]), "{s}");
        }
        // An extension can already be matched by the previous start value.
        let xs = series("3;1,1,2");
        assert_eq!(xs[1], xs[2]);
        assert_eq!(xs[1], BigUint::from(1981u32));
    }

    #[test]
    fn orbits_are_periodic_and_recovered() {
        for x in (1u64..=2001).step_by(2) {
            let xb = BigUint::from(x);
            let traj = crate::trajectory::e_sequence_until_one(&xb, 10_000).unwrap();
            assert!(traj.reached_one);
            let sp = PeriodicSpec::new(traj.exponents.clone(), vec![2]).unwrap();
            let d = decide(&sp);
            assert_eq!(d.verdict.convergent_value(), Some(&xb), "x = {x}");
            if let Verdict::ConvergentTo {
                witness: Some(w), ..
            } = &d.verdict
            {
                let l = d.spec.l();
                let r = d.spec.r();
                assert_eq!(w.value(l + r), w.value(l + 2 * r));
            }
        }
    }
}
