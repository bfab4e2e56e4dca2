//! E-sequence prefixes and their exact accumulators.
//!
//! For a prefix `(a_1, ..., a_n)` the accumulators are
//! `b_n = a_1 + ... + a_n` and
//! `B_n = sum_{i=0}^{n-1} 3^{n-1-i} 2^{b_i}`, built by the recurrence
//! `B_n = 3 B_{n-1} + 2^{b_{n-1}}`. Together they satisfy
//! `2^{b_n} x_n - 3^n x_0 = B_n` for every chain that follows the prefix.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::arith::{pow2, pow3};
use crate::error::{Error, Result};

/// Default cap on `b_n`, i.e. on the bit size of `2^{b_n}`.
pub const DEFAULT_BIT_CAP: u64 = 1_000_000;

/// Resource limits applied to accumulator growth.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub bit_cap: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            bit_cap: DEFAULT_BIT_CAP,
        }
    }
}

impl Limits {
    pub fn with_bit_cap(bit_cap: u64) -> Self {
        Limits { bit_cap }
    }

    pub(crate) fn check(&self, bits: u64) -> Result<()> {
        if bits > self.bit_cap {
            Err(Error::BitCapExceeded {
                bits,
                cap: self.bit_cap,
            })
        } else {
            Ok(())
        }
    }
}

/// A finite E-sequence prefix `(a_1, ..., a_n)` of positive integers.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Prefix {
    terms: Vec<u32>,
}

impl Prefix {
    pub fn new(terms: Vec<u32>) -> Result<Self> {
        if let Some(index) = terms.iter().position(|&a| a == 0) {
            return Err(Error::ZeroTerm { index: index + 1 });
        }
        Ok(Prefix { terms })
    }

    pub fn empty() -> Self {
        Prefix::default()
    }

    pub fn terms(&self) -> &[u32] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Term `a_i`, 1-based.
    pub fn term(&self, i: usize) -> u32 {
        self.terms[i - 1]
    }

    pub fn push(&mut self, a: u32) -> Result<()> {
        if a == 0 {
            return Err(Error::ZeroTerm {
                index: self.terms.len() + 1,
            });
        }
        self.terms.push(a);
        Ok(())
    }

    /// The sub-prefix `(a_u, ..., a_v)`, 1-based and inclusive.
    pub fn block(&self, u: usize, v: usize) -> Prefix {
        Prefix {
            terms: self.terms[u - 1..v].to_vec(),
        }
    }

    /// `b_i` for `i` in `0..=n`.
    pub fn partial_sums(&self) -> Vec<u64> {
        let mut sums = Vec::with_capacity(self.terms.len() + 1);
        let mut b = 0u64;
        sums.push(0);
        for &a in &self.terms {
            b += u64::from(a);
            sums.push(b);
        }
        sums
    }

    pub fn sum(&self) -> u64 {
        self.terms.iter().map(|&a| u64::from(a)).sum()
    }
}

impl From<Prefix> for Vec<u32> {
    fn from(p: Prefix) -> Self {
        p.terms
    }
}

impl TryFrom<Vec<u32>> for Prefix {
    type Error = Error;

    fn try_from(terms: Vec<u32>) -> Result<Self> {
        Prefix::new(terms)
    }
}

impl TryFrom<&[u32]> for Prefix {
    type Error = Error;

    fn try_from(terms: &[u32]) -> Result<Self> {
        Prefix::new(terms.to_vec())
    }
}

impl fmt::Display for Prefix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.terms.iter().map(u32::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

/// Parses a comma-separated list such as `1,4,2`; the empty string is the empty prefix.
impl FromStr for Prefix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Prefix::empty());
        }
        let terms = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<u32>()
                    .map_err(|e| Error::Parse(format!("term {t:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Prefix::new(terms)
    }
}

/// `(n, b_n, B_n)` for a prefix.
///
/// Extending by one term is a constant number of big-integer operations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Accumulators {
    pub n: usize,
    pub b: u64,
    pub big_b: BigUint,
}

impl Default for Accumulators {
    fn default() -> Self {
        Accumulators {
            n: 0,
            b: 0,
            big_b: BigUint::zero(),
        }
    }
}

impl Accumulators {
    pub fn new() -> Self {
        Self::default()
    }

    /// Extend by one term: `B_{n+1} = 3 B_n + 2^{b_n}`, `b_{n+1} = b_n + a`.
    pub fn extend(&mut self, a: u32, limits: &Limits) -> Result<()> {
        if a == 0 {
            return Err(Error::ZeroTerm { index: self.n + 1 });
        }
        let next_b = self.b + u64::from(a);
        limits.check(next_b)?;
        self.big_b = &self.big_b * 3u32 + pow2(self.b);
        self.b = next_b;
        self.n += 1;
        Ok(())
    }
}

/// Accumulators of a whole prefix under the default limits.
pub fn accumulate(prefix: &Prefix) -> Result<Accumulators> {
    accumulate_with(prefix, &Limits::default())
}

pub fn accumulate_with(prefix: &Prefix, limits: &Limits) -> Result<Accumulators> {
    let mut acc = Accumulators::new();
    for &a in prefix.terms() {
        acc.extend(a, limits)?;
    }
    Ok(acc)
}

/// Block accumulators `b_u^v` and `B_u^v`.
///
/// `B_u^v = sum_{i=u-1}^{v} 3^{v-i} 2^{b_u^i}` with the sentinels
/// `B_u^{u-1} = 1` and `B_u^{u-2} = 0`. Note the index shift against the
/// prefix accumulators: `B_1^{n-1} = B_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockAccumulators {
    pub u: usize,
    pub v: usize,
    pub b_block: u64,
    pub big_b_block: BigUint,
}

/// Computes `b_u^v` and `B_u^v` for `1 <= u`, `u <= v + 2`, `v <= n`.
///
/// `v = u - 2` is only expressible for `u >= 2`; it yields the zero sentinel.
pub fn accumulate_block(prefix: &Prefix, u: usize, v: usize) -> Result<BlockAccumulators> {
    let n = prefix.len();
    if u == 0 || u > v + 2 || v > n {
        return Err(Error::IndexOutOfRange(format!(
            "block ({u}, {v}) on a prefix of length {n}"
        )));
    }
    if u == v + 2 {
        return Ok(BlockAccumulators {
            u,
            v,
            b_block: 0,
            big_b_block: BigUint::zero(),
        });
    }
    let mut b = 0u64;
    let mut big = BigUint::one();
    for i in u..=v {
        b += u64::from(prefix.term(i));
        big = big * 3u32 + pow2(b);
    }
    Ok(BlockAccumulators {
        u,
        v,
        b_block: b,
        big_b_block: big,
    })
}

/// Right-hand side of the three-way split of `B_n` at the block `(u, v)`:
/// `3^{n-u+1} B_1^{u-2} + 3^{n-1-v} 2^{b_{u-1}} B_u^v + 2^{b_{v+1}} B_{v+2}^{n-1}`.
pub fn split_sum(prefix: &Prefix, u: usize, v: usize) -> Result<BigUint> {
    let n = prefix.len();
    if u == 0 || u > v || v + 2 > n {
        return Err(Error::IndexOutOfRange(format!(
            "split needs 1 <= u <= v <= n-2, got u={u}, v={v}, n={n}"
        )));
    }
    let sums = prefix.partial_sums();
    let head = if u == 1 {
        BigUint::zero()
    } else {
        accumulate_block(prefix, 1, u - 2)?.big_b_block
    };
    let middle = accumulate_block(prefix, u, v)?.big_b_block;
    let tail = accumulate_block(prefix, v + 2, n - 1)?.big_b_block;
    Ok(pow3((n - u + 1) as u64) * head
        + pow3((n - 1 - v) as u64) * pow2(sums[u - 1]) * middle
        + pow2(sums[v + 1]) * tail)
}

/// True iff `B_n` equals its three-way split at `(u, v)`.
pub fn split_identity_check(prefix: &Prefix, u: usize, v: usize) -> Result<bool> {
    let acc = accumulate(prefix)?;
    Ok(split_sum(prefix, u, v)? == acc.big_b)
}
