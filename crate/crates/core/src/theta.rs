//! Exact slopes `θ >= 1` for Beatty/Sturmian E-sequences
//! `a_n = floor(nθ) - floor((n-1)θ)`.
//!
//! Nothing here uses floating point. Irrational slopes are continued
//! fractions; the tail after the known coefficients `a_0..a_m` is some real
//! number `t > 1`, so `θ` lies strictly between `p_m/q_m` and
//! `(p_m + p_{m-1}) / (q_m + q_{m-1})`. `log₂3` is handled through the exact
//! test `p/q > log₂3 ⟺ 2^p > 3^q`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::arith::{cmp_pow2_pow3, pow2, pow3};
use crate::error::{Error, Result};

/// Depth cap for unbounded (periodic) expansions.
pub const MAX_DEPTH: usize = 4096;

/// Largest convergent numerator used in a `2^p` vs `3^q` comparison.
const MAX_POWER_EXPONENT: u64 = 1 << 24;

/// Continued fraction `[a_0; a_1, a_2, ...]` with an optional periodic tail.
///
/// With an empty `repeat` the expansion is known only to `head.len()`
/// coefficients of an irrational number; with a non-empty `repeat` it is
/// infinite (a quadratic irrational).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ContinuedFraction {
    head: Vec<u64>,
    repeat: Vec<u64>,
}

impl ContinuedFraction {
    pub fn new(head: Vec<u64>, repeat: Vec<u64>) -> Result<Self> {
        if head.is_empty() && repeat.is_empty() {
            return Err(Error::InvalidSpec("empty continued fraction".into()));
        }
        let cf = ContinuedFraction { head, repeat };
        if cf.coefficient(0).unwrap_or(0) < 1 {
            return Err(Error::InvalidSpec("slope must be at least 1".into()));
        }
        if cf.head.iter().chain(&cf.repeat).skip(1).any(|&c| c == 0)
            || cf.repeat.first() == Some(&0)
        {
            return Err(Error::InvalidSpec(
                "partial quotients after the first must be positive".into(),
            ));
        }
        Ok(cf)
    }

    pub fn finite(coefficients: Vec<u64>) -> Result<Self> {
        Self::new(coefficients, Vec::new())
    }

    pub fn periodic(head: Vec<u64>, repeat: Vec<u64>) -> Result<Self> {
        if repeat.is_empty() {
            return Err(Error::InvalidSpec("periodic part is empty".into()));
        }
        Self::new(head, repeat)
    }

    pub fn coefficient(&self, k: usize) -> Option<u64> {
        if k < self.head.len() {
            Some(self.head[k])
        } else if self.repeat.is_empty() {
            None
        } else {
            Some(self.repeat[(k - self.head.len()) % self.repeat.len()])
        }
    }

    /// Number of known coefficients, `None` when unbounded.
    pub fn depth(&self) -> Option<usize> {
        self.repeat.is_empty().then_some(self.head.len())
    }

    pub fn head(&self) -> &[u64] {
        &self.head
    }

    pub fn repeat(&self) -> &[u64] {
        &self.repeat
    }
}

/// A slope `θ >= 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Theta {
    /// `p/q` in lowest terms.
    Rational {
        p: u64,
        q: u64,
    },
    /// `log₂3`, evaluated through bit lengths of powers of 3.
    Log2Of3,
    ContinuedFraction(ContinuedFraction),
}

impl Theta {
    pub fn rational(p: u64, q: u64) -> Result<Self> {
        if q == 0 || p < q {
            return Err(Error::InvalidSpec(format!("slope {p}/{q} is below 1")));
        }
        let g = p.gcd(&q);
        Ok(Theta::Rational { p: p / g, q: q / g })
    }

    /// `√2 = [1; 2, 2, 2, ...]`.
    pub fn sqrt2() -> Self {
        Theta::ContinuedFraction(ContinuedFraction::periodic(vec![1], vec![2]).unwrap())
    }

    /// `(1 + √5)/2 = [1; 1, 1, ...]`.
    pub fn golden() -> Self {
        Theta::ContinuedFraction(ContinuedFraction::periodic(vec![], vec![1]).unwrap())
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, Theta::Rational { .. })
    }

    pub fn expansion(&self) -> ThetaExpansion {
        ThetaExpansion::new(self.clone())
    }
}

impl fmt::Display for Theta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn join(v: &[u64]) -> String {
            v.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
        }
        match self {
            Theta::Rational { p, q } if *q == 1 => write!(f, "{p}"),
            Theta::Rational { p, q } => write!(f, "{p}/{q}"),
            Theta::Log2Of3 => f.write_str("log2_3"),
            Theta::ContinuedFraction(cf) if cf.repeat.is_empty() => {
                write!(f, "cf:{}", join(&cf.head))
            }
            Theta::ContinuedFraction(cf) => {
                write!(f, "cf:{};{}", join(&cf.head), join(&cf.repeat))
            }
        }
    }
}

/// Accepts `log2_3`, `p/q`, an integer, `cf:a0,a1,...` (finite depth) and
/// `cf:a0,...;r1,r2,...` (periodic tail after the `;`).
impl FromStr for Theta {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let num = |t: &str| {
            t.trim()
                .parse::<u64>()
                .map_err(|e| Error::Parse(format!("{t:?} in slope {s:?}: {e}")))
        };
        let list = |t: &str| -> Result<Vec<u64>> {
            if t.trim().is_empty() {
                Ok(Vec::new())
            } else {
                t.split(',').map(num).collect()
            }
        };
        if s == "log2_3" || s == "log2(3)" {
            return Ok(Theta::Log2Of3);
        }
        if let Some(rest) = s.strip_prefix("cf:") {
            let cf = match rest.split_once(';') {
                Some((head, repeat)) => ContinuedFraction::periodic(list(head)?, list(repeat)?)?,
                None => ContinuedFraction::finite(list(rest)?)?,
            };
            return Ok(Theta::ContinuedFraction(cf));
        }
        match s.split_once('/') {
            Some((p, q)) => Theta::rational(num(p)?, num(q)?),
            None => Theta::rational(num(s)?, 1),
        }
    }
}

/// Open interval `(lo, hi)` known to contain `θ`, endpoints as `p/q` pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Enclosure {
    pub lo: (BigUint, BigUint),
    pub hi: (BigUint, BigUint),
    pub depth: usize,
}

/// Lazily computed convergents of a slope, cached across queries.
#[derive(Debug, Clone)]
pub struct ThetaExpansion {
    theta: Theta,
    /// `p_k`, `q_k` for the computed depths.
    p: Vec<BigUint>,
    q: Vec<BigUint>,
    /// Depth at which the last floor query was decided; enclosures nest, so
    /// later queries can start there.
    depth_hint: usize,
    /// Incremental state for `log₂3`: `3^n` for the last `n` queried.
    pow3_cache: Option<(u64, BigUint)>,
}

impl ThetaExpansion {
    pub fn new(theta: Theta) -> Self {
        ThetaExpansion {
            theta,
            p: Vec::new(),
            q: Vec::new(),
            depth_hint: 0,
            pow3_cache: None,
        }
    }

    pub fn theta(&self) -> &Theta {
        &self.theta
    }

    fn cf(&self) -> Option<&ContinuedFraction> {
        match &self.theta {
            Theta::ContinuedFraction(cf) => Some(cf),
            _ => None,
        }
    }

    /// Ensures convergents through depth `k`; false if the expansion ends first.
    fn extend_to(&mut self, k: usize) -> bool {
        let Some(cf) = self.cf().cloned() else {
            return false;
        };
        while self.p.len() <= k {
            let i = self.p.len();
            let Some(a) = cf.coefficient(i) else {
                return false;
            };
            if i >= MAX_DEPTH {
                return false;
            }
            let a = BigUint::from(a);
            let (p, q) = match i {
                0 => (a.clone(), BigUint::one()),
                1 => (&a * &self.p[0] + 1u32, a.clone()),
                _ => (
                    &a * &self.p[i - 1] + &self.p[i - 2],
                    &a * &self.q[i - 1] + &self.q[i - 2],
                ),
            };
            self.p.push(p);
            self.q.push(q);
        }
        true
    }

    /// Convergent `p_k / q_k`, if the expansion reaches depth `k`.
    pub fn convergent(&mut self, k: usize) -> Option<(BigUint, BigUint)> {
        self.extend_to(k)
            .then(|| (self.p[k].clone(), self.q[k].clone()))
    }

    /// The open interval enclosing `θ` after the coefficients `a_0..a_k`.
    pub fn enclosure(&mut self, k: usize) -> Option<Enclosure> {
        if !self.extend_to(k) {
            return None;
        }
        let (pk, qk) = (self.p[k].clone(), self.q[k].clone());
        let (pm, qm) = if k == 0 {
            (BigUint::one(), BigUint::zero())
        } else {
            (self.p[k - 1].clone(), self.q[k - 1].clone())
        };
        let mediant = (&pk + pm, &qk + qm);
        // even-index convergents lie below θ, odd-index ones above
        let (lo, hi) = if k.is_multiple_of(2) {
            ((pk, qk), mediant)
        } else {
            (mediant, (pk, qk))
        };
        Some(Enclosure { lo, hi, depth: k })
    }

    /// Exact `floor(n θ)`.
    pub fn floor_mul(&mut self, n: u64) -> Result<u64> {
        match self.theta.clone() {
            Theta::Rational { p, q } => {
                let v = u128::from(n) * u128::from(p) / u128::from(q);
                u64::try_from(v).map_err(|_| Error::Precondition("floor(nθ) overflows u64".into()))
            }
            Theta::Log2Of3 => Ok(self.floor_log2_3(n)),
            Theta::ContinuedFraction(_) => self.floor_cf(n),
        }
    }

    fn floor_log2_3(&mut self, n: u64) -> u64 {
        if n == 0 {
            return 0;
        }
        let power = match self.pow3_cache.take() {
            Some((m, pw)) if m <= n && n - m <= 64 => pw * pow3(n - m),
            _ => pow3(n),
        };
        let bits = power.bits();
        self.pow3_cache = Some((n, power));
        // 3^n is not a power of two, so floor(n log2 3) = bitlen(3^n) - 1
        bits - 1
    }

    fn floor_cf(&mut self, n: u64) -> Result<u64> {
        if n == 0 {
            return Ok(0);
        }
        let n_big = BigUint::from(n);
        let mut k = self.depth_hint;
        loop {
            let Some(enc) = self.enclosure(k) else {
                return Err(Error::DepthExhausted {
                    depth: self.p.len(),
                    what: format!("floor({n}·θ) for θ = {}", self.theta),
                });
            };
            // θ ∈ (lo, hi) ⇒ nθ ∈ (n·lo, n·hi); the floor is f = floor(n·lo)
            // whenever n·hi <= f + 1
            let f = (&n_big * &enc.lo.0) / &enc.lo.1;
            if &n_big * &enc.hi.0 <= (&f + 1u32) * &enc.hi.1 {
                self.depth_hint = k;
                return f
                    .to_u64()
                    .ok_or_else(|| Error::Precondition("floor(nθ) overflows u64".into()));
            }
            k += 1;
        }
    }

    /// Exact comparison of `θ` against `log₂3`.
    pub fn compare_log2_3(&mut self) -> Result<Ordering> {
        match self.theta.clone() {
            Theta::Rational { p, q } => Ok(cmp_pow2_pow3(p, q)),
            Theta::Log2Of3 => Ok(Ordering::Equal),
            Theta::ContinuedFraction(_) => {
                for k in 0.. {
                    let Some(enc) = self.enclosure(k) else {
                        return Err(Error::DepthExhausted {
                            depth: self.p.len(),
                            what: format!("separating θ = {} from log2(3)", self.theta),
                        });
                    };
                    if let Some(ord) = compare_ratio_log2_3(&enc.lo)? {
                        if ord != Ordering::Less {
                            return Ok(Ordering::Greater);
                        }
                    }
                    if let Some(ord) = compare_ratio_log2_3(&enc.hi)? {
                        if ord != Ordering::Greater {
                            return Ok(Ordering::Less);
                        }
                    }
                }
                unreachable!()
            }
        }
    }
}

/// Orders `p/q` against `log₂3` via `2^p` vs `3^q`; `None` when the exponents
/// are too large to evaluate.
pub fn compare_ratio_log2_3(ratio: &(BigUint, BigUint)) -> Result<Option<Ordering>> {
    let (Some(p), Some(q)) = (ratio.0.to_u64(), ratio.1.to_u64()) else {
        return Ok(None);
    };
    if p > MAX_POWER_EXPONENT || q > MAX_POWER_EXPONENT {
        return Ok(None);
    }
    if q == 0 {
        return Ok(Some(Ordering::Greater));
    }
    Ok(Some(cmp_pow2_pow3(p, q)))
}

/// Number of partial quotients of `log₂3` used when its convergents are needed.
pub const LOG2_3_KNOWN_DEPTH: usize = 14;

/// An expansion that yields convergents and enclosures.
///
/// `log₂3` is replaced by its first [`LOG2_3_KNOWN_DEPTH`] partial quotients;
/// the resulting enclosures still contain it. Rationals have none.
pub fn convergent_expansion(theta: &Theta) -> Option<ThetaExpansion> {
    match theta {
        Theta::Rational { .. } => None,
        Theta::Log2Of3 => {
            let cf = ContinuedFraction::finite(log2_3_coefficients(LOG2_3_KNOWN_DEPTH))
                .expect("log2(3) > 1");
            Some(ThetaExpansion::new(Theta::ContinuedFraction(cf)))
        }
        Theta::ContinuedFraction(_) => Some(ThetaExpansion::new(theta.clone())),
    }
}

/// Exact `floor(n θ)` for a single query.
pub fn floor_n_theta(theta: &Theta, n: u64) -> Result<u64> {
    theta.expansion().floor_mul(n)
}

/// Exact `p/q` vs `log₂3` for a rational given as a fraction.
pub fn rational_cmp_log2_3(value: &BigRational) -> Option<Ordering> {
    let p = value.numer().to_biguint()?;
    let q = value.denom().to_biguint()?;
    compare_ratio_log2_3(&(p, q)).ok().flatten()
}

/// The first `depth` partial quotients of `log₂3`.
///
/// Runs the Euclidean algorithm on logarithms: for `x = log A / log B` the
/// quotient is the largest `m` with `B^m <= A`, then `(A, B) ← (B, A/B^m)`.
/// Every `A`, `B` is of the form `2^i 3^j`, stored by its exponents.
pub fn log2_3_coefficients(depth: usize) -> Vec<u64> {
    fn at_least_one(i: i64, j: i64) -> bool {
        let num = pow2(i.max(0) as u64) * pow3(j.max(0) as u64);
        let den = pow2((-i).max(0) as u64) * pow3((-j).max(0) as u64);
        num >= den
    }
    let mut a = (0i64, 1i64);
    let mut b = (1i64, 0i64);
    let mut out = Vec::with_capacity(depth);
    while out.len() < depth {
        let mut m = 0u64;
        let mut rest = a;
        while at_least_one(rest.0 - b.0, rest.1 - b.1) {
            rest = (rest.0 - b.0, rest.1 - b.1);
            m += 1;
        }
        out.push(m);
        if rest == (0, 0) {
            break;
        }
        a = b;
        b = rest;
    }
    out
}
