//! Verdicts for Beatty/Sturmian E-sequences `a_n = floor(nθ) - floor((n-1)θ)`.
//!
//! * Rational `θ = p/q` gives the purely periodic sequence of period `q`.
//! * `θ > log₂3` irrational: the density test applies.
//! * `θ = log₂3`: `B_n / 3^n > n/8` for every `n`, which forces any convergent
//!   start above every bound.
//! * `1 <= θ < log₂3` irrational: for a convergent `s/r` with
//!   `|θ - s/r| < 1/(√5 r^2)` the first `2r + 1` terms are periodic, which
//!   bounds `x_0^{1,2r}` (convergent below `θ`) or `x_0^{1,2r+1}` (above `θ`)
//!   from below by a quantity growing like `(4^θ/3)^r`.

use std::cmp::Ordering;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};

use crate::arith::{pow2, pow3};
use crate::criteria::{density_criterion, Basis, BoundSample, Certificate};
use crate::error::{Error, Result};
use crate::generator::{GeneratorSpec, TermStream};
use crate::periodic::{decide, PeriodicDecision, PeriodicSpec};
use crate::sequences::{accumulate, accumulate_block, Limits, Prefix};
use crate::solver::PrefixState;
use crate::theta::{convergent_expansion, Theta, ThetaExpansion};
use crate::verdict::{Criterion, Verdict};

/// Extra enclosure depth tried when deciding the approximation bound.
const APPROXIMATION_DEPTH: usize = 48;

/// Which side of `θ` a convergent lies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConvergentCase {
    /// `s/r < θ`: the first `2r` terms repeat with period `r`.
    Below,
    /// `s/r > θ`: `a_1 = 1` and terms `2..2r+1` repeat with period `r`.
    Above,
}

impl ConvergentCase {
    pub fn name(&self) -> &'static str {
        match self {
            ConvergentCase::Below => "below",
            ConvergentCase::Above => "above",
        }
    }
}

/// The checks made for one convergent `s/r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvergentCheck {
    pub index: usize,
    pub s: u64,
    pub r: u64,
    pub case: ConvergentCase,
    /// `|θ - s/r| < 1/(√5 r^2)`; `None` when undecidable at the available depth.
    pub approximation: Option<bool>,
    /// The periodic term pattern holds on the generated terms.
    pub pattern: bool,
    /// Lower bound on the solved start at depth `2r` or `2r + 1`.
    pub sample: Option<BoundSample>,
}

impl ConvergentCheck {
    pub fn validated(&self) -> bool {
        self.approximation == Some(true)
            && self.pattern
            && self.sample.as_ref().is_some_and(BoundSample::holds)
    }

    /// A convergent that satisfies the approximation bound must satisfy the
    /// pattern and the bound; anything else is a contradiction.
    fn contradicts(&self) -> bool {
        self.approximation == Some(true) && !self.validated()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SturmianReport {
    pub theta: Theta,
    /// `θ` compared with `log₂3`.
    pub comparison: Ordering,
    pub verdict: Verdict,
    pub periodic: Option<PeriodicDecision>,
    pub certificate: Option<Certificate>,
    pub convergents: Vec<ConvergentCheck>,
    /// `(n, B_n / 3^n)` at powers of two, for `θ = log₂3`.
    pub witness_series: Vec<(usize, BigRational)>,
}

impl SturmianReport {
    pub fn validated_convergents(&self) -> usize {
        self.convergents.iter().filter(|c| c.validated()).count()
    }
}

pub fn sturmian_verdict(theta: &Theta, max_n: usize) -> Result<Verdict> {
    Ok(sturmian_analysis(theta, max_n)?.verdict)
}

/// Full analysis of the Sturmian sequence of slope `θ`, using up to `max_n`
/// terms for the finite checks.
pub fn sturmian_analysis(theta: &Theta, max_n: usize) -> Result<SturmianReport> {
    let comparison = theta.expansion().compare_log2_3()?;
    let mut report = SturmianReport {
        theta: theta.clone(),
        comparison,
        verdict: Verdict::Inconclusive { n: 0 },
        periodic: None,
        certificate: None,
        convergents: Vec::new(),
        witness_series: Vec::new(),
    };
    let generator = GeneratorSpec::Sturmian(theta.clone());

    if let Theta::Rational { q, .. } = theta {
        let period: Vec<u32> = generator.prefix(*q as usize)?.into();
        let decision = decide(&PeriodicSpec::purely_periodic(period)?);
        report.verdict = decision.verdict.clone();
        report.periodic = Some(decision);
        return Ok(report);
    }

    match (theta, comparison) {
        (Theta::Log2Of3, _) => log2_3_witness(&mut report, max_n)?,
        (_, Ordering::Greater) => {
            let cert = density_criterion(&generator)?
                .expect("irrational slope above log2(3) has a density certificate");
            report.verdict = Verdict::DivergentCertified {
                criterion: cert.criterion,
            };
            report.certificate = Some(cert);
        }
        _ => convergent_route(&mut report, &generator, max_n)?,
    }
    Ok(report)
}

/// Checks `8 B_n > n 3^n` for `1 <= n <= max_n`.
fn log2_3_witness(report: &mut SturmianReport, max_n: usize) -> Result<()> {
    let mut stream = GeneratorSpec::Sturmian(Theta::Log2Of3).stream();
    let limits = Limits::with_bit_cap(u64::MAX);
    let mut acc = crate::sequences::Accumulators::new();
    let mut three_n = BigUint::from(1u32);
    for n in 1..=max_n {
        let a = stream.next_term()?.expect("Sturmian streams are infinite");
        acc.extend(a, &limits)?;
        three_n *= 3u32;
        if &acc.big_b * 8u32 <= &three_n * n {
            report.verdict = Verdict::Inconclusive { n };
            return Ok(());
        }
        if n.is_power_of_two() || n == max_n {
            report.witness_series.push((
                n,
                BigRational::new(
                    BigInt::from(acc.big_b.clone()),
                    BigInt::from(three_n.clone()),
                ),
            ));
        }
    }
    report.verdict = Verdict::DivergentCertified {
        criterion: Criterion::BeattyLog2Of3,
    };
    report.certificate = Some(
        Certificate::new(Criterion::BeattyLog2Of3, Basis::ByRule)
            .with("witness", "8 B_n > n 3^n")
            .with("checked_n", max_n),
    );
    Ok(())
}

fn convergent_route(
    report: &mut SturmianReport,
    generator: &GeneratorSpec,
    max_n: usize,
) -> Result<()> {
    let theta = report.theta.clone();
    let mut expansion = convergent_expansion(&theta).expect("irrational slope");
    let mut terms = TermCache::new(generator.stream());

    for index in 0.. {
        let Some((s, r)) = expansion.convergent(index) else {
            break;
        };
        let (Some(s), Some(r)) = (s.to_u64(), r.to_u64()) else {
            break;
        };
        if 2 * r as usize + 1 > max_n {
            break;
        }
        // 2^s > 3^r cannot occur below log2(3) except at convergents above θ
        if pow2(s) > pow3(r) {
            continue;
        }
        let case = if index % 2 == 0 {
            ConvergentCase::Below
        } else {
            ConvergentCase::Above
        };
        let approximation = approximation_bound(&mut expansion, index, s, r);
        let needed = 2 * r as usize + usize::from(case == ConvergentCase::Above);
        let Some(prefix) = terms.prefix(needed) else {
            break;
        };
        let (pattern, sample) = check_convergent(&prefix, s, r, case)?;
        report.convergents.push(ConvergentCheck {
            index,
            s,
            r,
            case,
            approximation,
            pattern,
            sample,
        });
    }

    if report.convergents.iter().any(ConvergentCheck::contradicts) {
        report.verdict = Verdict::Inconclusive {
            n: terms.terms.len(),
        };
        return Ok(());
    }
    let mut cert = Certificate::new(Criterion::SturmianBelowLog2Of3, Basis::ByRule)
        .with("theta", &theta)
        .with("validated_convergents", report.validated_convergents());
    cert.lower_bound_series = report
        .convergents
        .iter()
        .filter(|c| c.validated())
        .filter_map(|c| c.sample.clone())
        .collect();
    report.verdict = Verdict::DivergentCertified {
        criterion: Criterion::SturmianBelowLog2Of3,
    };
    report.certificate = Some(cert);
    Ok(())
}

/// Decides `5 r^4 (θ - s/r)^2 < 1` from enclosures deeper than `index`.
fn approximation_bound(
    expansion: &mut ThetaExpansion,
    index: usize,
    s: u64,
    r: u64,
) -> Option<bool> {
    let target = BigRational::new(BigInt::from(s), BigInt::from(r));
    let scale = BigRational::from_integer(BigInt::from(5) * BigInt::from(r).pow(4));
    let one = BigRational::from_integer(BigInt::from(1));
    for depth in index + 1..=index + APPROXIMATION_DEPTH {
        let enc = expansion.enclosure(depth)?;
        let as_rat = |(p, q): &(BigUint, BigUint)| {
            BigRational::new(BigInt::from(p.clone()), BigInt::from(q.clone()))
        };
        let lo = as_rat(&enc.lo) - &target;
        let hi = as_rat(&enc.hi) - &target;
        let (near, far) = if lo.is_positive() || hi.is_negative() {
            let (a, b) = (lo.abs(), hi.abs());
            if a < b {
                (a, b)
            } else {
                (b, a)
            }
        } else {
            (BigRational::from_integer(0.into()), lo.abs().max(hi.abs()))
        };
        // θ lies strictly inside the enclosure, so |θ - s/r| < far and > near
        if &scale * &far * &far <= one {
            return Some(true);
        }
        if &scale * &near * &near >= one {
            return Some(false);
        }
    }
    None
}

/// Checks the periodic pattern and evaluates the lower bound against the
/// solved start.
fn check_convergent(
    prefix: &Prefix,
    s: u64,
    r: u64,
    case: ConvergentCase,
) -> Result<(bool, Option<BoundSample>)> {
    let r_len = r as usize;
    let a = |i: usize| prefix.term(i);
    let gap = BigInt::from(pow3(r)) - BigInt::from(pow2(s));
    let x0 = solved_start(prefix)?;
    match case {
        ConvergentCase::Below => {
            let head = prefix.block(1, r_len);
            let pattern = (1..=r_len).all(|j| a(r_len + j) == a(j)) && head.sum() == s;
            if !pattern {
                return Ok((false, None));
            }
            let big_b_r = BigInt::from(accumulate(&head)?.big_b);
            let bound = BigRational::new(BigInt::from(pow2(2 * s)) - big_b_r, gap);
            Ok((true, Some(BoundSample::new(2 * r_len, bound, x0))))
        }
        ConvergentCase::Above => {
            let pattern = a(1) == 1
                && (1..=r_len).all(|j| a(r_len + 1 + j) == a(1 + j))
                && prefix.block(2, r_len + 1).sum() == s;
            if !pattern {
                return Ok((false, None));
            }
            let big_b_block = BigInt::from(accumulate_block(prefix, 2, r_len)?.big_b_block);
            let numer = BigInt::from(pow2(2 * s + 1)) - &gap - big_b_block * 2;
            let bound = BigRational::new(numer, gap * 3);
            Ok((true, Some(BoundSample::new(2 * r_len + 1, bound, x0))))
        }
    }
}

fn solved_start(prefix: &Prefix) -> Result<BigUint> {
    let mut state = PrefixState::new(Limits::with_bit_cap(u64::MAX));
    for &a in prefix.terms() {
        state.push(a)?;
    }
    Ok(state.x0().clone())
}

/// Terms generated so far, extended on demand; stops at the first term the
/// slope's known expansion cannot decide.
struct TermCache {
    stream: TermStream,
    terms: Vec<u32>,
    exhausted: bool,
}

impl TermCache {
    fn new(stream: TermStream) -> Self {
        TermCache {
            stream,
            terms: Vec::new(),
            exhausted: false,
        }
    }

    fn prefix(&mut self, n: usize) -> Option<Prefix> {
        while self.terms.len() < n && !self.exhausted {
            match self.stream.next_term() {
                Ok(Some(a)) => self.terms.push(a),
                Ok(None) | Err(Error::DepthExhausted { .. }) => self.exhausted = true,
                Err(_) => self.exhausted = true,
            }
        }
        (self.terms.len() >= n)
            .then(|| Prefix::new(self.terms[..n].to_vec()).expect("positive terms"))
    }
}
