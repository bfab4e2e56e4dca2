//! Small exact-arithmetic helpers shared across modules.

use std::cmp::Ordering;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub fn pow2(exp: u64) -> BigUint {
    BigUint::one() << exp
}

pub fn pow3(exp: u64) -> BigUint {
    BigUint::from(3u32).pow(u32::try_from(exp).expect("exponent of 3 fits in u32"))
}

/// Exact comparison of `2^a` against `3^b`.
///
/// `3^b > 2^a` iff `bitlen(3^b) > a`, because `3^b` is never a power of two
/// when `b > 0`.
pub fn cmp_pow2_pow3(a: u64, b: u64) -> Ordering {
    if b == 0 {
        return if a == 0 {
            Ordering::Equal
        } else {
            Ordering::Greater
        };
    }
    let bits = pow3(b).bits();
    if bits > a {
        Ordering::Less
    } else {
        Ordering::Greater
    }
}

/// Inverse of `value` modulo `modulus` by the extended Euclidean algorithm.
pub fn mod_inverse(value: &BigUint, modulus: &BigUint) -> Option<BigUint> {
    if modulus.is_zero() {
        return None;
    }
    let a = BigInt::from_biguint(Sign::Plus, value % modulus);
    let m = BigInt::from_biguint(Sign::Plus, modulus.clone());
    let ext = a.extended_gcd(&m);
    if !ext.gcd.is_one() {
        return None;
    }
    ext.x.mod_floor(&m).to_biguint()
}

/// Inverse of an odd `value` modulo `2^64` by Newton iteration.
pub fn inverse_odd_u64(value: u64) -> u64 {
    debug_assert!(value & 1 == 1);
    // correct to 3 bits; each round doubles the precision
    let mut y = value;
    for _ in 0..5 {
        y = y.wrapping_mul(2u64.wrapping_sub(value.wrapping_mul(y)));
    }
    y
}

/// Inverse of an odd `value` modulo `2^bits`.
pub fn inverse_odd_mod_pow2(value: &BigUint, bits: u64) -> BigUint {
    let mask = pow2(bits) - 1u32;
    let low = value.iter_u64_digits().next().unwrap_or(0);
    let mut y = BigUint::from(inverse_odd_u64(low));
    let mut precision = 64u64;
    let two = BigUint::from(2u32);
    while precision < bits {
        precision = (precision * 2).min(bits);
        let m = pow2(precision);
        let vy = (value * &y) % &m;
        y = (&y * ((&two + &m - vy) % &m)) % &m;
    }
    y & mask
}

pub fn to_rational(value: &BigUint) -> BigRational {
    BigRational::from_integer(BigInt::from(value.clone()))
}

pub fn ratio(num: BigInt, den: BigInt) -> BigRational {
    BigRational::new(num, den)
}

/// Render an exact rational as `p/q`, or `p` when integral.
pub fn format_rational(value: &BigRational) -> String {
    if value.denom().is_one() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// Ceiling of a rational as a signed integer.
pub fn ceil_rational(value: &BigRational) -> BigInt {
    value.ceil().to_integer()
}

pub fn is_nonnegative(value: &BigInt) -> bool {
    !value.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pow2_pow3_ordering() {
        assert_eq!(cmp_pow2_pow3(1, 1), Ordering::Less);
        assert_eq!(cmp_pow2_pow3(2, 1), Ordering::Greater);
        assert_eq!(cmp_pow2_pow3(3, 2), Ordering::Less);
        assert_eq!(cmp_pow2_pow3(4, 2), Ordering::Greater);
        assert_eq!(cmp_pow2_pow3(0, 0), Ordering::Equal);
        // 2^19 = 524288 < 3^12 = 531441
        assert_eq!(cmp_pow2_pow3(19, 12), Ordering::Less);
    }

    #[test]
    fn modular_inverse() {
        let m = BigUint::from(27u32);
        let inv = mod_inverse(&BigUint::from(32u32), &m).unwrap();
        assert_eq!((inv * 32u32) % &m, BigUint::one());
        assert!(mod_inverse(&BigUint::from(6u32), &BigUint::from(9u32)).is_none());
    }

    #[test]
    fn odd_inverse_mod_pow2() {
        for v in [1u64, 3, 5, 7, 243, 0xdead_beef] {
            assert_eq!(v.wrapping_mul(inverse_odd_u64(v)), 1);
        }
        let v = pow3(200);
        for bits in [1u64, 5, 64, 65, 130, 1000] {
            let inv = inverse_odd_mod_pow2(&v, bits);
            assert_eq!((&v * inv) % pow2(bits), BigUint::one() % pow2(bits));
        }
    }
}
