//! Divergence from recurring structure under the standing condition
//! `3^n > 2^{b_n}` for every `n`.
//!
//! Runs of ones: with `c > log₂3` and infinitely many pairs `(k, l)` such that
//! `l > kc` and `a_{k+1} = ... = a_l = 1`, the solved starts satisfy
//! `x_0^{1,l} >= 2^{l + b_k - k} / 3^k - 1 - k >= 2^{floor(kc) + b_k - k} / 3^k - 1 - k`.
//!
//! Repeated blocks: with infinitely many pairs `(r, l)` such that `l > r`,
//! `a_{l+k} = a_k` for `1 <= k <= r` and `b_{l+r} > lc`, the solved starts
//! satisfy `x_0^{1,l+r} >= 2^{b_{l+r}} / 3^l - l`.
//!
//! A certificate is issued only when the generator's rule makes the pair family
//! infinite; listed pairs yield checked bounds and nothing more.

use std::cmp::Ordering;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};

use crate::arith::{pow2, pow3};
use crate::criteria::{rational_string, Basis, BoundSample, Certificate};
use crate::error::{Error, Result};
use crate::generator::GeneratorSpec;
use crate::sequences::{Limits, Prefix};
use crate::solver::PrefixState;
use crate::theta::{convergent_expansion, rational_cmp_log2_3, Theta};
use crate::verdict::Criterion;

/// Pairs `(k, l)` for the runs-of-ones test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RunPairFamily {
    Listed(Vec<(usize, usize)>),
    /// `(2^m, 2^{m+1} - 1)` for `m_from <= m <= m_to`.
    PowersOfTwo {
        m_from: u32,
        m_to: u32,
    },
}

impl RunPairFamily {
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        match self {
            RunPairFamily::Listed(p) => p.clone(),
            RunPairFamily::PowersOfTwo { m_from, m_to } => (*m_from..=*m_to)
                .map(|m| (1usize << m, (1usize << (m + 1)) - 1))
                .collect(),
        }
    }
}

/// Pairs `(r, l)` for the repeated-block test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BlockPairFamily {
    Listed(Vec<(usize, usize)>),
    /// `(q - 1, q)` for every convergent `p/q` of the slope lying below it,
    /// taken over convergent indices `from_index..=to_index`.
    ConvergentsBelow {
        from_index: usize,
        to_index: usize,
    },
}

impl BlockPairFamily {
    pub fn pairs(&self, generator: &GeneratorSpec) -> Result<Vec<(usize, usize)>> {
        match self {
            BlockPairFamily::Listed(p) => Ok(p.clone()),
            BlockPairFamily::ConvergentsBelow {
                from_index,
                to_index,
            } => {
                let GeneratorSpec::Sturmian(theta) = generator else {
                    return Err(Error::Precondition(
                        "convergent pairs need a Sturmian generator".into(),
                    ));
                };
                let mut expansion = convergent_expansion(theta).ok_or_else(|| {
                    Error::Precondition(format!("slope {theta} has no infinite expansion"))
                })?;
                let mut pairs = Vec::new();
                // even-index convergents lie below the slope
                for k in (*from_index..=*to_index).filter(|k| k % 2 == 0) {
                    let (_, q) = expansion
                        .convergent(k)
                        .ok_or_else(|| Error::DepthExhausted {
                            depth: k,
                            what: format!("convergent {k} of {theta}"),
                        })?;
                    let q = q.to_usize().ok_or_else(|| {
                        Error::Precondition(format!("convergent denominator {q} is too large"))
                    })?;
                    if q >= 2 {
                        pairs.push((q - 1, q));
                    }
                }
                Ok(pairs)
            }
        }
    }
}

/// Checked bounds for the supplied pairs, plus a certificate when the family
/// is infinite by rule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CriterionOutcome {
    pub pairs: Vec<(usize, usize)>,
    pub evidence: Vec<BoundSample>,
    pub certificate: Option<Certificate>,
}

fn require_above_log2_3(c: &BigRational) -> Result<()> {
    match rational_cmp_log2_3(c) {
        Some(Ordering::Greater) => Ok(()),
        Some(_) => Err(Error::Precondition(format!(
            "c = {} is not above log2(3)",
            rational_string(c)
        ))),
        None => Err(Error::Precondition(format!(
            "c = {} is too large to compare with log2(3)",
            rational_string(c)
        ))),
    }
}

/// Exact check of `3^n > 2^{b_n}` for every `n` in the prefix.
fn deficit_guard(prefix: &Prefix) -> Result<()> {
    let mut three_n = BigUint::from(1u32);
    let mut b = 0u64;
    for (i, &a) in prefix.terms().iter().enumerate() {
        three_n *= 3u32;
        b += u64::from(a);
        // 3^n is never a power of two, so 2^b < 3^n iff b < bitlen(3^n)
        if b >= three_n.bits() {
            return Err(Error::Precondition(format!(
                "3^n > 2^(b_n) fails at n = {}",
                i + 1
            )));
        }
    }
    Ok(())
}

/// `x_0^{1,n}` at each requested depth (sorted ascending).
fn solved_starts(prefix: &Prefix, depths: &[usize]) -> Result<Vec<BigUint>> {
    let mut state = PrefixState::new(Limits::with_bit_cap(u64::MAX));
    let mut out = Vec::with_capacity(depths.len());
    let mut sorted: Vec<usize> = depths.to_vec();
    sorted.sort_unstable();
    let mut values = std::collections::BTreeMap::new();
    let mut next = 0;
    for (i, &a) in prefix.terms().iter().enumerate() {
        state.push(a)?;
        while next < sorted.len() && sorted[next] == i + 1 {
            values.insert(i + 1, state.x0().clone());
            next += 1;
        }
    }
    for d in depths {
        out.push(values[d].clone());
    }
    Ok(out)
}

fn power_ratio(two_exp: u64, three_exp: u64) -> BigRational {
    BigRational::new(BigInt::from(pow2(two_exp)), BigInt::from(pow3(three_exp)))
}

fn record(evidence: &mut Vec<BoundSample>, sample: BoundSample) -> Result<()> {
    if !sample.holds() {
        return Err(Error::Precondition(format!(
            "lower bound {} exceeds the solved start {} at n = {}",
            rational_string(&sample.bound),
            sample.solver_x0,
            sample.n
        )));
    }
    evidence.push(sample);
    Ok(())
}

/// The runs-of-ones test.
pub fn runs_of_ones_criterion(
    generator: &GeneratorSpec,
    c: &BigRational,
    family: &RunPairFamily,
) -> Result<CriterionOutcome> {
    require_above_log2_3(c)?;
    let pairs = family.pairs();
    let max_l = pairs
        .iter()
        .map(|&(_, l)| l)
        .max()
        .ok_or_else(|| Error::Precondition("at least one pair is required".into()))?;
    let prefix = generator.prefix(max_l)?;
    deficit_guard(&prefix)?;
    let sums = prefix.partial_sums();

    for &(k, l) in &pairs {
        let kc = c * BigRational::from_integer(BigInt::from(k));
        if k == 0 || BigRational::from_integer(BigInt::from(l)) <= kc {
            return Err(Error::Precondition(format!(
                "pair ({k}, {l}) violates l > kc"
            )));
        }
        if prefix.terms()[k..l].iter().any(|&a| a != 1) {
            return Err(Error::Precondition(format!(
                "pair ({k}, {l}): a_{}..a_{l} is not a run of ones",
                k + 1
            )));
        }
    }

    let depths: Vec<usize> = pairs.iter().map(|&(_, l)| l).collect();
    let starts = solved_starts(&prefix, &depths)?;
    let mut evidence = Vec::new();
    for (&(k, l), x0) in pairs.iter().zip(starts) {
        let shift = sums[k] - k as u64;
        let tail = BigRational::from_integer(BigInt::from(k + 1));
        let exact = power_ratio(l as u64 + shift, k as u64) - &tail;
        let floor_kc = (c * BigRational::from_integer(BigInt::from(k)))
            .floor()
            .to_integer()
            .to_u64()
            .expect("kc fits in u64");
        let rule = power_ratio(floor_kc + shift, k as u64) - &tail;
        record(&mut evidence, BoundSample::new(l, rule, x0.clone()))?;
        record(&mut evidence, BoundSample::new(l, exact, x0))?;
    }

    let by_rule = match (generator, family) {
        (GeneratorSpec::PowersOfTwoMarked, RunPairFamily::PowersOfTwo { m_from, .. }) => {
            powers_of_two_rule_holds(c, *m_from)
        }
        _ => false,
    };
    let certificate = by_rule.then(|| {
        let (m_from, m_to) = match family {
            RunPairFamily::PowersOfTwo { m_from, m_to } => (*m_from, *m_to),
            RunPairFamily::Listed(_) => unreachable!(),
        };
        let mut cert = Certificate::new(Criterion::RunsOfOnes, Basis::ByRule)
            .with("c", rational_string(c))
            .with("pairs", format!("(2^m, 2^(m+1)-1) for m >= {m_from}"))
            .with("checked_m", format!("{m_from}..={m_to}"))
            .with("guard", "b_n = n + floor(log2 n) and n 2^n < 3^n for all n");
        cert.lower_bound_series = evidence.iter().skip(1).step_by(2).cloned().collect();
        cert
    });
    Ok(CriterionOutcome {
        pairs,
        evidence,
        certificate,
    })
}

/// For the powers-of-two marking, positions `2^m + 1 .. 2^{m+1} - 1` hold no
/// marked index, so every pair is a run of ones; `l > kc` reads
/// `(2 - c) 2^m > 1`, which holds for all `m >= m_from` once it holds at
/// `m_from` and `c < 2`. The guard holds since `2^{b_n} <= n 2^n < 3^n`.
fn powers_of_two_rule_holds(c: &BigRational, m_from: u32) -> bool {
    let two = BigRational::from_integer(BigInt::from(2));
    let gap = &two - c;
    gap.is_positive()
        && gap * BigRational::from_integer(BigInt::from(pow2(u64::from(m_from))))
            > BigRational::from_integer(BigInt::from(1))
}

/// The repeated-block test.
pub fn repeated_block_criterion(
    generator: &GeneratorSpec,
    c: &BigRational,
    family: &BlockPairFamily,
) -> Result<CriterionOutcome> {
    require_above_log2_3(c)?;
    let pairs = family.pairs(generator)?;
    let max_n = pairs
        .iter()
        .map(|&(r, l)| l + r)
        .max()
        .ok_or_else(|| Error::Precondition("at least one pair is required".into()))?;
    let prefix = generator.prefix(max_n)?;
    deficit_guard(&prefix)?;
    let sums = prefix.partial_sums();
    let terms = prefix.terms();

    for &(r, l) in &pairs {
        if r == 0 || l <= r {
            return Err(Error::Precondition(format!(
                "pair ({r}, {l}) violates l > r >= 1"
            )));
        }
        if let Some(k) = (1..=r).find(|&k| terms[l + k - 1] != terms[k - 1]) {
            return Err(Error::Precondition(format!(
                "pair ({r}, {l}): a_{} differs from a_{k}",
                l + k
            )));
        }
        let lc = c * BigRational::from_integer(BigInt::from(l));
        if BigRational::from_integer(BigInt::from(sums[l + r])) <= lc {
            return Err(Error::Precondition(format!(
                "pair ({r}, {l}) violates b_(l+r) > lc"
            )));
        }
    }

    let depths: Vec<usize> = pairs.iter().map(|&(r, l)| l + r).collect();
    let starts = solved_starts(&prefix, &depths)?;
    let mut evidence = Vec::new();
    for (&(r, l), x0) in pairs.iter().zip(starts) {
        let bound = power_ratio(sums[l + r], l as u64) - BigRational::from_integer(BigInt::from(l));
        record(&mut evidence, BoundSample::new(l + r, bound, x0))?;
    }

    let certificate = match (generator, family) {
        (GeneratorSpec::Sturmian(theta), BlockPairFamily::ConvergentsBelow { from_index, .. }) => {
            convergent_rule_holds(theta, c)?.then(|| {
                let mut cert = Certificate::new(Criterion::RepeatedBlock, Basis::ByRule)
                    .with("c", rational_string(c))
                    .with("theta", theta)
                    .with(
                        "pairs",
                        format!("(q-1, q) for convergents p/q below theta, index >= {from_index}"),
                    )
                    .with("guard", "b_n = floor(n theta) < n log2(3)");
                cert.lower_bound_series = evidence.clone();
                cert
            })
        }
        _ => None,
    };
    Ok(CriterionOutcome {
        pairs,
        evidence,
        certificate,
    })
}

/// For an irrational slope `1 <= θ <= log₂3` and a convergent `p/q < θ`,
/// `frac(qθ) < ||jθ||` for every `1 <= j < q`, so `a_{q+j} = a_j` for
/// `1 <= j <= q - 1`. Then `b_{2q-1} > (2q-1)θ - 1 > qc` for all large `q`
/// whenever `c < 2 <= 2θ`, and `b_n <= nθ < n log₂3` gives the guard.
fn convergent_rule_holds(theta: &Theta, c: &BigRational) -> Result<bool> {
    if theta.is_rational() {
        return Ok(false);
    }
    if theta.expansion().compare_log2_3()? == Ordering::Greater {
        return Ok(false);
    }
    Ok(*c < BigRational::from_integer(BigInt::from(2)))
}
