//! Odd-to-odd 3x+1 dynamics: `x_k = (3 x_{k-1} + 1) / 2^{a_k}` with `x_k` odd.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arith::{pow2, pow3, to_rational};
use crate::error::{Error, Result};
use crate::sequences::{Accumulators, Limits, Prefix};

/// A trajectory `x_0, x_1, ..., x_n` together with its E-sequence prefix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trajectory {
    pub start: BigUint,
    /// `x_1, ..., x_n`.
    pub values: Vec<BigUint>,
    /// `a_1, ..., a_n`.
    pub exponents: Vec<u32>,
    /// Set when generation stopped early on reaching 1.
    pub reached_one: bool,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }

    /// `x_k` for `k` in `0..=n`.
    pub fn value(&self, k: usize) -> &BigUint {
        if k == 0 {
            &self.start
        } else {
            &self.values[k - 1]
        }
    }

    pub fn last(&self) -> &BigUint {
        self.values.last().unwrap_or(&self.start)
    }

    /// `x_0, ..., x_n` as one list.
    pub fn all_values(&self) -> Vec<BigUint> {
        std::iter::once(self.start.clone())
            .chain(self.values.iter().cloned())
            .collect()
    }

    pub fn prefix(&self) -> Prefix {
        Prefix::new(self.exponents.clone()).expect("2-adic valuations are positive")
    }
}

fn require_odd(x: &BigUint) -> Result<()> {
    if x.is_zero() || !x.bit(0) {
        Err(Error::NotOddPositive(x.to_string()))
    } else {
        Ok(())
    }
}

/// One odd step: returns `(a, (3x+1) / 2^a)` where `a` is the 2-adic valuation of `3x+1`.
pub fn step(x: &BigUint) -> Result<(u32, BigUint)> {
    require_odd(x)?;
    let y = x * 3u32 + 1u32;
    let a = y.trailing_zeros().expect("3x+1 is nonzero");
    let a = u32::try_from(a).expect("valuation fits in u32");
    Ok((a, y >> a))
}

/// The first `n` odd steps from `x`, continuing through the 1-cycle.
pub fn e_sequence_of(x: &BigUint, n: usize) -> Result<Trajectory> {
    run(x, n, false)
}

/// Up to `max_n` odd steps from `x`, stopping at the first arrival at 1.
pub fn e_sequence_until_one(x: &BigUint, max_n: usize) -> Result<Trajectory> {
    run(x, max_n, true)
}

fn run(x: &BigUint, n: usize, stop_at_one: bool) -> Result<Trajectory> {
    require_odd(x)?;
    let mut traj = Trajectory {
        start: x.clone(),
        values: Vec::with_capacity(n),
        exponents: Vec::with_capacity(n),
        reached_one: false,
    };
    if stop_at_one && x.is_one() {
        traj.reached_one = true;
        return Ok(traj);
    }
    let mut cur = x.clone();
    for _ in 0..n {
        let (a, next) = step(&cur)?;
        traj.exponents.push(a);
        traj.values.push(next.clone());
        cur = next;
        if stop_at_one && cur.is_one() {
            traj.reached_one = true;
            break;
        }
    }
    Ok(traj)
}

/// Checks `2^{b_k} x_k = 3^k x_0 + B_k` at every step `k` of the trajectory.
pub fn closed_form_check(traj: &Trajectory) -> bool {
    let limits = Limits::with_bit_cap(u64::MAX);
    let mut acc = Accumulators::new();
    let mut three_k = BigUint::one();
    for (k, &a) in traj.exponents.iter().enumerate() {
        if acc.extend(a, &limits).is_err() {
            return false;
        }
        three_k *= 3u32;
        let lhs = pow2(acc.b) * &traj.values[k];
        let rhs = &three_k * &traj.start + &acc.big_b;
        if lhs != rhs {
            return false;
        }
    }
    true
}

/// `prod_{k=1}^{n} (1 + 1/(3 x_{k-1}))` over the trajectory, as an exact rational.
pub fn matthews_watts_product(traj: &Trajectory) -> BigRational {
    let mut product = BigRational::one();
    let values = traj.all_values();
    for x in &values[..traj.len()] {
        let three_x = BigInt::from(x * 3u32);
        product *= BigRational::new(&three_x + 1, three_x);
    }
    product
}

/// Checks the product identity `2^{b_k} x_k = 3^k x_0 prod_{j<k} (1 + 1/(3 x_j))`
/// exactly at every step `k`.
pub fn matthews_watts_check(traj: &Trajectory) -> bool {
    if traj.start.is_zero() {
        return false;
    }
    let mut product = BigRational::one();
    let mut b = 0u64;
    let start = to_rational(&traj.start);
    for k in 0..traj.len() {
        let prev = traj.value(k);
        let three_x = BigInt::from(prev * 3u32);
        product *= BigRational::new(&three_x + 1, three_x);
        b += u64::from(traj.exponents[k]);
        let lhs = to_rational(&(pow2(b) * traj.value(k + 1)));
        let rhs = to_rational(&pow3(k as u64 + 1)) * &start * &product;
        if lhs != rhs {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn big(x: u64) -> BigUint {
        BigUint::from(x)
    }

    fn nums(v: &[u64]) -> Vec<BigUint> {
        v.iter().map(|&x| big(x)).collect()
    }

    #[test]
    fn single_steps() {
        assert_eq!(step(&big(1)).unwrap(), (2, big(1)));
        assert_eq!(step(&big(7)).unwrap(), (1, big(11)));
        assert_eq!(step(&big(5)).unwrap(), (4, big(1)));
        assert!(matches!(step(&big(4)), Err(Error::NotOddPositive(_))));
        assert!(step(&big(0)).is_err());
    }

    #[test]
    fn short_trajectories() {
        let t = e_sequence_of(&big(3), 3).unwrap();
        assert_eq!(t.exponents, vec![1, 4, 2]);
        assert_eq!(t.values, nums(&[5, 1, 1]));
        assert_eq!(e_sequence_of(&big(1), 4).unwrap().exponents, vec![2; 4]);
        let t = e_sequence_of(&big(7), 5).unwrap();
        assert_eq!(t.exponents, vec![1, 1, 2, 3, 4]);
        assert_eq!(t.values, nums(&[11, 17, 13, 5, 1]));
        assert!(e_sequence_of(&big(7), 0).unwrap().is_empty());
    }

    #[test]
    fn stops_at_one_when_asked() {
        let t = e_sequence_until_one(&big(7), 100).unwrap();
        assert!(t.reached_one);
        assert_eq!(t.len(), 5);
        let t = e_sequence_until_one(&big(27), 10).unwrap();
        assert!(!t.reached_one);
        assert_eq!(t.len(), 10);
        let t = e_sequence_until_one(&big(27), 1000).unwrap();
        assert_eq!(t.len(), 41);
    }

    #[test]
    fn closed_form_examples() {
        assert!(closed_form_check(&e_sequence_of(&big(3), 2).unwrap()));
        assert!(closed_form_check(&e_sequence_of(&big(1), 1).unwrap()));
        let mut t = e_sequence_of(&big(3), 2).unwrap();
        t.values[1] += 1u32;
        assert!(!closed_form_check(&t));
    }

    #[test]
    fn matthews_watts_examples() {
        let t = e_sequence_of(&big(7), 2).unwrap();
        assert!(matthews_watts_check(&t));
        // 9 * 7 * (22/21) * (34/33) = 68 = 4 * 17
        let p = matthews_watts_product(&t);
        assert_eq!(
            p * BigRational::from_integer(63.into()),
            BigRational::from_integer(68.into())
        );
        assert!(matthews_watts_check(&e_sequence_of(&big(1), 1).unwrap()));
        let mut t = e_sequence_of(&big(27), 20).unwrap();
        assert!(matthews_watts_check(&t));
        t.values[5] += 2u32;
        assert!(!matthews_watts_check(&t));
    }

    #[test]
    fn one_cycle_outpaces_powers_of_three() {
        let t = e_sequence_of(&big(1), 50).unwrap();
        let pre = t.prefix();
        for n in 1..=50 {
            let b: u64 = pre.terms()[..n].iter().map(|&a| u64::from(a)).sum();
            assert_eq!(b, 2 * n as u64);
            assert!(pow2(b) > pow3(n as u64));
        }
    }

    proptest! {
        #[test]
        fn identities_hold_on_random_starts(x in (0u64..(1 << 62)).prop_map(|x| 2 * x + 1), n in 1usize..120) {
            let t = e_sequence_of(&big(x), n).unwrap();
            prop_assert!(closed_form_check(&t));
            prop_assert!(matthews_watts_check(&t));
        }
    }
}
