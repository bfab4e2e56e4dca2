//! The finite inverse problem.
//!
//! For a prefix `(a_1, ..., a_n)` there is exactly one pair `(x_0, x_n)` with
//! `2^{b_n} x_n - 3^n x_0 = B_n`, `1 <= x_0 < 2^{b_n}` and `1 <= x_n < 3^n`.
//! `x_0` is the smallest start whose forced chain
//! `x_k = (3 x_{k-1} + 1) / 2^{a_k}` stays integral for all `n` steps, and it
//! can only grow as the prefix is extended.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::arith::{inverse_odd_mod_pow2, inverse_odd_u64, mod_inverse, pow2, pow3};
use crate::error::{Error, Result};
use crate::sequences::{accumulate_with, Limits, Prefix};

/// The unique solution `(x_0, x_n)` for a prefix of length `n >= 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrefixSolution {
    pub n: usize,
    pub x0: BigUint,
    pub xn: BigUint,
    pub b: u64,
    pub big_b: BigUint,
}

impl PrefixSolution {
    /// Checks `2^{b_n} x_n - 3^n x_0 = B_n` together with both range constraints
    /// and `3 ∤ x_n`.
    pub fn invariants_hold(&self) -> bool {
        let three_n = pow3(self.n as u64);
        let two_b = pow2(self.b);
        &two_b * &self.xn == &three_n * &self.x0 + &self.big_b
            && !self.x0.is_zero()
            && self.x0 < two_b
            && !self.xn.is_zero()
            && self.xn < three_n
            && !(&self.xn % 3u32).is_zero()
    }
}

/// Solves a prefix by inverting `2^{b_n}` modulo `3^n`.
pub fn solve_prefix(prefix: &Prefix) -> Result<PrefixSolution> {
    solve_prefix_with(prefix, &Limits::default())
}

pub fn solve_prefix_with(prefix: &Prefix, limits: &Limits) -> Result<PrefixSolution> {
    if prefix.is_empty() {
        return Err(Error::EmptyPrefix);
    }
    let acc = accumulate_with(prefix, limits)?;
    let n = prefix.len();
    let three_n = pow3(n as u64);
    let two_b = pow2(acc.b);
    let inverse = mod_inverse(&two_b, &three_n).expect("gcd(2^b, 3^n) = 1");
    // 3 does not divide B_n, so the residue is never 0 and already lies in [1, 3^n)
    let xn = (&acc.big_b * inverse) % &three_n;
    debug_assert!(!xn.is_zero());
    let x0 = (&two_b * &xn - &acc.big_b) / &three_n;
    Ok(PrefixSolution {
        n,
        x0,
        xn,
        b: acc.b,
        big_b: acc.big_b,
    })
}

/// Solution of the block `(a_u, ..., a_v)` viewed as a prefix of its own.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockSolution {
    pub u: usize,
    pub v: usize,
    pub x0_block: BigUint,
    pub x_end: BigUint,
    /// `b_u^v`.
    pub b_block: u64,
    /// `B_u^{v-1}`.
    pub big_b_block: BigUint,
    /// `x_1^{u,v}, ..., x_{v-u}^{u,v}` when requested.
    pub intermediate: Option<Vec<BigUint>>,
}

pub fn solve_block(
    prefix: &Prefix,
    u: usize,
    v: usize,
    with_intermediates: bool,
) -> Result<BlockSolution> {
    solve_block_with(prefix, u, v, with_intermediates, &Limits::default())
}

pub fn solve_block_with(
    prefix: &Prefix,
    u: usize,
    v: usize,
    with_intermediates: bool,
    limits: &Limits,
) -> Result<BlockSolution> {
    let n = prefix.len();
    if u == 0 || u > v || v > n {
        return Err(Error::IndexOutOfRange(format!(
            "block ({u}, {v}) needs 1 <= u <= v <= {n}"
        )));
    }
    let block = prefix.block(u, v);
    let sol = solve_prefix_with(&block, limits)?;
    let intermediate = with_intermediates.then(|| {
        let chain = forward_chain(&sol.x0, block.terms()).expect("solver output is integral");
        chain[1..chain.len() - 1].to_vec()
    });
    Ok(BlockSolution {
        u,
        v,
        x0_block: sol.x0,
        x_end: sol.xn,
        b_block: sol.b,
        big_b_block: sol.big_b,
        intermediate,
    })
}

/// The forced chain `x_0, ..., x_n` from `x0`, or `None` as soon as a step is
/// not integral.
pub fn forward_chain(x0: &BigUint, terms: &[u32]) -> Option<Vec<BigUint>> {
    let mut chain = Vec::with_capacity(terms.len() + 1);
    chain.push(x0.clone());
    let mut cur = x0.clone();
    for &a in terms {
        let y = &cur * 3u32 + 1u32;
        if y.trailing_zeros().unwrap_or(0) < u64::from(a) {
            return None;
        }
        cur = y >> a;
        chain.push(cur.clone());
    }
    Some(chain)
}

/// True iff the forced chain from the solution's `x_0` is integral throughout
/// and lands exactly on its `x_n`.
pub fn backward_chain_check(solution: &PrefixSolution, prefix: &Prefix) -> bool {
    if prefix.len() != solution.n {
        return false;
    }
    match forward_chain(&solution.x0, prefix.terms()) {
        Some(chain) => chain.last() == Some(&solution.xn),
        None => false,
    }
}

/// Incrementally maintained solution `x_0^{1,n}`, `x_n^{1,n}`.
///
/// Extending the prefix by `a` keeps `x_0` modulo `2^{b_n}`, so only the new
/// digit `t < 2^a` in `x_0 + t 2^{b_n}` has to be found:
/// `3 (x_n + 3^n t) + 1 ≡ 0 (mod 2^a)`.
#[derive(Debug, Clone)]
pub struct PrefixState {
    n: usize,
    b: u64,
    big_b: BigUint,
    x0: BigUint,
    xn: BigUint,
    three_n: BigUint,
    limits: Limits,
}

impl PrefixState {
    pub fn new(limits: Limits) -> Self {
        PrefixState {
            n: 0,
            b: 0,
            big_b: BigUint::zero(),
            x0: BigUint::zero(),
            xn: BigUint::zero(),
            three_n: BigUint::one(),
            limits,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn b(&self) -> u64 {
        self.b
    }

    pub fn big_b(&self) -> &BigUint {
        &self.big_b
    }

    /// `x_0^{1,n}`; zero before the first term.
    pub fn x0(&self) -> &BigUint {
        &self.x0
    }

    /// `x_n^{1,n}`.
    pub fn xn(&self) -> &BigUint {
        &self.xn
    }

    /// `3^n`.
    pub fn three_n(&self) -> &BigUint {
        &self.three_n
    }

    /// Whether `x_0^{1,n}` follows the prefix as a genuine odd trajectory.
    ///
    /// Every `x_k` with `k < n` is automatically odd (an even value cannot take
    /// a further step), so only `x_n` needs checking.
    pub fn is_genuine(&self) -> bool {
        self.n > 0 && self.xn.bit(0)
    }

    pub fn solution(&self) -> Option<PrefixSolution> {
        (self.n > 0).then(|| PrefixSolution {
            n: self.n,
            x0: self.x0.clone(),
            xn: self.xn.clone(),
            b: self.b,
            big_b: self.big_b.clone(),
        })
    }

    /// Extends by one term; returns true when `x_0^{1,n}` changed.
    pub fn push(&mut self, a: u32) -> Result<bool> {
        if a == 0 {
            return Err(Error::ZeroTerm { index: self.n + 1 });
        }
        let next_b = self.b + u64::from(a);
        self.limits.check(next_b)?;

        let three_next = &self.three_n * 3u32;
        let t = if a <= 64 {
            let mask = if a == 64 { u64::MAX } else { (1u64 << a) - 1 };
            let low = |x: &BigUint| x.iter_u64_digits().next().unwrap_or(0);
            let rhs = low(&self.xn).wrapping_mul(3).wrapping_add(1).wrapping_neg();
            let t = rhs.wrapping_mul(inverse_odd_u64(low(&three_next))) & mask;
            BigUint::from(t)
        } else {
            let modulus = pow2(u64::from(a));
            let rhs = (&modulus - ((&self.xn * 3u32 + 1u32) % &modulus)) % &modulus;
            (rhs * inverse_odd_mod_pow2(&three_next, u64::from(a))) % &modulus
        };

        let changed = !t.is_zero();
        if changed {
            self.x0 += &t << self.b;
            self.xn += &t * &self.three_n;
        }
        let y = &self.xn * 3u32 + 1u32;
        debug_assert!(y.trailing_zeros().unwrap_or(0) >= u64::from(a));
        self.xn = y >> a;
        self.big_b = &self.big_b * 3u32 + pow2(self.b);
        self.b = next_b;
        self.three_n = three_next;
        self.n += 1;
        Ok(changed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trajectory::e_sequence_of;
    use proptest::prelude::*;

    fn p(terms: &[u32]) -> Prefix {
        Prefix::new(terms.to_vec()).unwrap()
    }

    fn big(x: u64) -> BigUint {
        BigUint::from(x)
    }

    /// Smallest x in [1, 2^{b_n}) whose forced chain is integral, by exhaustive search.
    fn brute_force_x0(prefix: &Prefix) -> u64 {
        let limit = 1u64 << prefix.sum();
        (1..limit)
            .find(|&x| {
                let mut cur = x;
                prefix.terms().iter().all(|&a| {
                    let y = 3 * cur + 1;
                    cur = y >> a;
                    y.trailing_zeros() >= a
                })
            })
            .expect("some start is always admissible")
    }

    #[test]
    fn solved_examples() {
        let s = solve_prefix(&p(&[2])).unwrap();
        assert_eq!((s.x0.clone(), s.xn.clone()), (big(1), big(1)));
        let s = solve_prefix(&p(&[1, 1])).unwrap();
        assert_eq!((s.x0.clone(), s.xn.clone()), (big(3), big(8)));
        let s = solve_prefix(&p(&[1, 4, 2])).unwrap();
        assert_eq!((s.x0.clone(), s.xn.clone()), (big(3), big(1)));
        assert!(s.invariants_hold());
        assert_eq!(solve_prefix(&Prefix::empty()), Err(Error::EmptyPrefix));
    }

    #[test]
    fn solver_respects_bit_cap() {
        let err = solve_prefix_with(&p(&[30, 30]), &Limits::with_bit_cap(50)).unwrap_err();
        assert!(matches!(err, Error::BitCapExceeded { .. }));
        let mut st = PrefixState::new(Limits::with_bit_cap(50));
        st.push(30).unwrap();
        assert!(st.push(30).is_err());
    }

    #[test]
    fn chain_checks() {
        for terms in [&[1u32, 1][..], &[2], &[1, 4, 2]] {
            let pre = p(terms);
            let s = solve_prefix(&pre).unwrap();
            assert!(backward_chain_check(&s, &pre));
        }
        let s = solve_prefix(&p(&[1, 1])).unwrap();
        assert_eq!(
            forward_chain(&s.x0, &[1, 1]).unwrap(),
            vec![big(3), big(5), big(8)]
        );
        let mut bad = s.clone();
        bad.x0 += 1u32;
        assert!(!backward_chain_check(&bad, &p(&[1, 1])));
    }

    #[test]
    fn block_examples() {
        let pre = p(&[1, 4, 2]);
        let whole = solve_block(&pre, 1, 3, false).unwrap();
        let s = solve_prefix(&pre).unwrap();
        assert_eq!((whole.x0_block, whole.x_end), (s.x0, s.xn));
        let blk = solve_block(&pre, 2, 2, true).unwrap();
        assert_eq!((blk.x0_block, blk.x_end), (big(5), big(1)));
        assert_eq!(blk.intermediate, Some(vec![]));
        let blk = solve_block(&p(&[1, 1, 1, 1]), 2, 3, true).unwrap();
        assert_eq!((blk.x0_block, blk.x_end.clone()), (big(3), big(8)));
        assert_eq!(blk.big_b_block, big(5));
        assert_eq!(blk.intermediate, Some(vec![big(5)]));
        assert!(solve_block(&pre, 2, 1, false).is_err());
        assert!(solve_block(&pre, 1, 4, false).is_err());
    }

    #[test]
    fn incremental_matches_ones_pattern() {
        let mut st = PrefixState::new(Limits::default());
        for n in 1..=20u32 {
            st.push(1).unwrap();
            assert_eq!(st.x0(), &(pow2(u64::from(n)) - 1u32));
            assert!(!st.is_genuine());
        }
    }

    #[test]
    fn incremental_handles_wide_terms() {
        let terms = [70u32, 1, 130, 3, 65, 64, 2];
        let mut st = PrefixState::new(Limits::default());
        for (i, &a) in terms.iter().enumerate() {
            st.push(a).unwrap();
            let s = solve_prefix(&p(&terms[..=i])).unwrap();
            assert_eq!(st.solution().unwrap(), s);
        }
    }

    proptest! {
        #[test]
        fn round_trip(x in (0u64..(1 << 40)).prop_map(|x| 2 * x + 1)) {
            let x = big(x);
            let mut n = 1;
            loop {
                let t = e_sequence_of(&x, n).unwrap();
                let pre = t.prefix();
                if pow2(pre.sum()) > x {
                    prop_assert_eq!(solve_prefix(&pre).unwrap().x0, x.clone());
                    break;
                }
                n += 1;
            }
        }

        #[test]
        fn monotone_and_incremental(terms in prop::collection::vec(1u32..5, 1..80)) {
            let mut st = PrefixState::new(Limits::default());
            let mut prev = BigUint::zero();
            for (i, &a) in terms.iter().enumerate() {
                st.push(a).unwrap();
                let s = solve_prefix(&p(&terms[..=i])).unwrap();
                prop_assert!(s.invariants_hold());
                prop_assert_eq!(st.x0(), &s.x0);
                prop_assert_eq!(st.xn(), &s.xn);
                prop_assert!(s.x0 >= prev);
                prev = s.x0;
            }
        }

        #[test]
        fn block_monotone_in_v(terms in prop::collection::vec(1u32..5, 2..40), u_seed in 0usize..100) {
            let pre = p(&terms);
            let u = 1 + u_seed % pre.len();
            let mut prev = BigUint::zero();
            for v in u..=pre.len() {
                let blk = solve_block(&pre, u, v, false).unwrap();
                prop_assert!(blk.x0_block >= prev);
                prev = blk.x0_block;
            }
        }

        #[test]
        fn block_intermediates_follow_closed_forms(terms in prop::collection::vec(1u32..5, 1..30), seed in 0usize..1000) {
            let pre = p(&terms);
            let n = pre.len();
            let u = 1 + seed % n;
            let v = u + (seed / 7) % (n - u + 1);
            let blk = solve_block(&pre, u, v, true).unwrap();
            let mut chain = vec![blk.x0_block.clone()];
            chain.extend(blk.intermediate.clone().unwrap());
            chain.push(blk.x_end.clone());
            let block = pre.block(u, v);
            let sums = block.partial_sums();
            for k in 0..=(v - u) {
                // x_k = (3^k x_0 + B_u^{u+k-2}) / 2^{b_u^{u+k-1}}
                let head = crate::sequences::accumulate(&block.block(1, k)).unwrap().big_b;
                prop_assert_eq!(
                    pow2(sums[k]) * &chain[k],
                    pow3(k as u64) * &blk.x0_block + head
                );
                // x_{v-u+1} = (3^{v-u+1-k} x_k + B_{u+k}^{v-1}) / 2^{b_{u+k}^v}
                let rest = block.block(k + 1, v - u + 1);
                let acc = crate::sequences::accumulate(&rest).unwrap();
                prop_assert_eq!(
                    pow2(acc.b) * &blk.x_end,
                    pow3((v - u + 1 - k) as u64) * &chain[k] + acc.big_b
                );
            }
        }

        #[test]
        fn matches_brute_force_search(terms in prop::collection::vec(1u32..5, 1..12)) {
            let pre = p(&terms);
            prop_assume!(pre.sum() <= 18);
            let s = solve_prefix(&pre).unwrap();
            prop_assert_eq!(s.x0, big(brute_force_x0(&pre)));
        }
    }
}
