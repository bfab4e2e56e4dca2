//! Exact checks of the finite-product inequalities behind the divergence
//! criteria, and the lower bound they give on a convergent start value.
//!
//! Irrational bounds such as `1.5 n^{1/9}` are replaced by rational ones from
//! integer ninth roots at scale `D = 10^6`:
//! `t' = floor((n D^9)^{1/9})` gives `t'/D <= n^{1/9}` and
//! `t = ceil((n D^9)^{1/9})` gives `n^{1/9} <= t/D`.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Pow};

use crate::arith::pow3;
use crate::error::{Error, Result};
use crate::sequences::{accumulate, Prefix};

/// Scale `D` of the rational ninth-root bounds.
pub const ROOT_SCALE: u64 = 1_000_000;

fn scaled(n: u64) -> BigUint {
    BigUint::from(n) * BigUint::from(ROOT_SCALE).pow(9u32)
}

/// `floor((n D^9)^{1/9})`.
pub fn ninth_root_floor(n: u64) -> BigUint {
    scaled(n).nth_root(9)
}

/// `ceil((n D^9)^{1/9})`.
pub fn ninth_root_ceil(n: u64) -> BigUint {
    let v = scaled(n);
    let r = v.nth_root(9);
    if BigUint::pow(&r, 9) == v {
        r
    } else {
        r + 1u32
    }
}

/// The product over `1 <= k < 3n`, `k ≡ 1, 5 (mod 6)`, of `1 + 1/(3k)`,
/// against a rational lower bound for `1.5 n^{1/9}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductBound {
    pub n: u64,
    pub product: BigRational,
    /// `3 t' / (2 D)`, at most `1.5 n^{1/9}`.
    pub bound: BigRational,
    pub holds: bool,
}

fn in_residue_classes(k: u64) -> bool {
    matches!(k % 6, 1 | 5)
}

/// Unreduced numerator and denominator of the product, extended one `n` at a time.
struct ProductAccumulator {
    n: u64,
    num: BigUint,
    den: BigUint,
}

impl ProductAccumulator {
    fn new() -> Self {
        ProductAccumulator {
            n: 0,
            num: BigUint::one(),
            den: BigUint::one(),
        }
    }

    fn advance(&mut self) {
        let n = self.n;
        for k in (3 * n).max(1)..3 * (n + 1) {
            if in_residue_classes(k) {
                self.num *= 3 * k + 1;
                self.den *= 3 * k;
            }
        }
        self.n = n + 1;
    }

    /// `num / den < 3 t' / (2 D)`.
    fn below_bound(&self) -> bool {
        let t = ninth_root_floor(self.n);
        &self.num * (2 * ROOT_SCALE) < t * 3u32 * &self.den
    }
}

pub fn product_bound(n: u64) -> Result<ProductBound> {
    if n == 0 {
        return Err(Error::Precondition("product bound needs n >= 1".into()));
    }
    let mut acc = ProductAccumulator::new();
    while acc.n < n {
        acc.advance();
    }
    let holds = acc.below_bound();
    let product = BigRational::new(BigInt::from(acc.num), BigInt::from(acc.den));
    let bound = BigRational::new(
        BigInt::from(ninth_root_floor(n) * 3u32),
        BigInt::from(2 * ROOT_SCALE),
    );
    Ok(ProductBound {
        n,
        product,
        bound,
        holds,
    })
}

/// Checks the product bound for every `1 <= n <= n_max`; returns the first
/// `n` where it fails.
pub fn product_bound_sweep(n_max: u64) -> Option<u64> {
    let mut acc = ProductAccumulator::new();
    while acc.n < n_max {
        acc.advance();
        if !acc.below_bound() {
            return Some(acc.n);
        }
    }
    None
}

/// Lower bound `B_n / (3^n (U - 1))`, with `U = 3t/(2D) >= 1.5 n^{1/9}`, on any
/// convergent start whose first `n` trajectory values are distinct and not
/// divisible by 3.
pub fn convergent_start_lower_bound(prefix: &Prefix) -> Result<BigRational> {
    if prefix.is_empty() {
        return Err(Error::EmptyPrefix);
    }
    let n = prefix.len() as u64;
    let acc = accumulate(prefix)?;
    let t = ninth_root_ceil(n);
    // U - 1 = (3t - 2D) / (2D), and 3t >= 3D > 2D
    let excess = BigInt::from(t * 3u32) - BigInt::from(2 * ROOT_SCALE);
    Ok(BigRational::new(
        BigInt::from(acc.big_b * (2 * ROOT_SCALE)),
        BigInt::from(pow3(n)) * excess,
    ))
}

/// Outcome of the three reciprocal-product inequalities for one `(x, n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReciprocalProductBounds {
    /// `prod_{k<n} (1 + 1/(3(x+k))) <= 1 + n/(3x)`.
    pub ascending: bool,
    /// `prod_{k<n} (1 + 1/(3(x-k))) >= 1 + n/(3x)`.
    pub descending: bool,
    /// `prod_{k<n} (1 + 1/(3(x-k))) > 3x/(3x-n)`, checked only for `n >= 2`.
    pub strict: Option<bool>,
}

impl ReciprocalProductBounds {
    pub fn holds(&self) -> bool {
        self.ascending && self.descending && self.strict.unwrap_or(true)
    }
}

/// Checks all three inequalities exactly for `1 <= n <= x`.
pub fn reciprocal_product_bounds(x: u64, n: u64) -> Result<ReciprocalProductBounds> {
    if n == 0 || n > x {
        return Err(Error::Precondition(format!(
            "reciprocal products need 1 <= n <= x, got x = {x}, n = {n}"
        )));
    }
    let mut up = (BigUint::one(), BigUint::one());
    let mut down = (BigUint::one(), BigUint::one());
    for k in 0..n {
        let a = 3 * (x + k);
        up.0 *= a + 1;
        up.1 *= a;
        let d = 3 * (x - k);
        down.0 *= d + 1;
        down.1 *= d;
    }
    let three_x = 3 * x;
    // 1 + n/(3x) = (3x + n) / (3x)
    let ascending = &up.0 * three_x <= &up.1 * (three_x + n);
    let descending = &down.0 * three_x >= &down.1 * (three_x + n);
    let strict = (n >= 2).then(|| &down.0 * (three_x - n) > &down.1 * three_x);
    Ok(ReciprocalProductBounds {
        ascending,
        descending,
        strict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(p: i64, q: i64) -> BigRational {
        BigRational::new(p.into(), q.into())
    }

    #[test]
    fn ninth_roots() {
        assert_eq!(ninth_root_floor(1), BigUint::from(ROOT_SCALE));
        assert_eq!(ninth_root_ceil(1), BigUint::from(ROOT_SCALE));
        assert_eq!(ninth_root_floor(512), BigUint::from(2 * ROOT_SCALE));
        for n in [2u64, 3, 100, 2000, 999_999] {
            let lo = ninth_root_floor(n);
            let hi = ninth_root_ceil(n);
            assert_eq!(&lo + 1u32, hi);
            assert!(lo.pow(9u32) <= scaled(n));
            assert!(hi.pow(9u32) > scaled(n));
        }
    }

    #[test]
    fn product_examples() {
        let p = product_bound(1).unwrap();
        assert_eq!(p.product, rat(4, 3));
        assert_eq!(p.bound, rat(3, 2));
        assert!(p.holds);
        let p = product_bound(2).unwrap();
        assert_eq!(p.product, rat(64, 45));
        assert!(p.holds);
        assert!(product_bound(100).unwrap().holds);
        assert!(product_bound(0).is_err());
    }

    #[test]
    fn sweep_agrees_with_single_queries() {
        assert_eq!(product_bound_sweep(300), None);
        for n in [1u64, 7, 64, 300] {
            let p = product_bound(n).unwrap();
            assert!(p.product < p.bound);
        }
    }

    #[test]
    fn lower_bound_examples() {
        let b = convergent_start_lower_bound(&Prefix::new(vec![2]).unwrap()).unwrap();
        assert_eq!(b, rat(2, 3));
        assert!(convergent_start_lower_bound(&Prefix::empty()).is_err());
        let long = Prefix::new(vec![2; 10]).unwrap();
        let short = Prefix::new(vec![2; 9]).unwrap();
        assert!(convergent_start_lower_bound(&long).unwrap() > rat(0, 1));
        assert!(convergent_start_lower_bound(&short).unwrap() > rat(0, 1));
    }

    #[test]
    fn reciprocal_examples() {
        let r = reciprocal_product_bounds(1, 1).unwrap();
        assert!(r.ascending && r.descending && r.strict.is_none());
        let r = reciprocal_product_bounds(5, 2).unwrap();
        assert_eq!(r.strict, Some(true));
        assert!(r.holds());
        assert!(reciprocal_product_bounds(3, 4).is_err());
        assert!(reciprocal_product_bounds(3, 0).is_err());
    }

    #[test]
    fn reciprocal_equality_cases() {
        // the ascending bound is tight at n = 1
        for x in 1..20 {
            let r = reciprocal_product_bounds(x, 1).unwrap();
            assert!(r.ascending && r.descending);
        }
    }
}
