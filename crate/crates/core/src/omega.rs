//! The Ω-limit loop: follow `x_0^{1,n}` while a generator extends the prefix.
//!
//! `x_0^{1,n}` never decreases. An E-sequence is the E-sequence of `x` exactly
//! when `x_0^{1,n}` is eventually constant at `x`, and it belongs to no odd
//! integer exactly when `x_0^{1,n}` grows without bound.

use num_bigint::BigUint;
use num_traits::Zero;

use crate::arith::pow2;
use crate::error::{Error, Result};
use crate::generator::{GeneratorSpec, TermStream};
use crate::sequences::Limits;
use crate::solver::PrefixState;
use crate::trajectory::e_sequence_of;
use crate::verdict::Verdict;

/// Default abort bound `2^256` for `x_0^{1,n}`.
pub fn default_threshold() -> BigUint {
    pow2(256)
}

/// Bits of `b_n` that must accumulate after the last change of `x_0^{1,n}`
/// before an infinite generator is declared convergent.
pub const DEFAULT_CONFIRM_BITS: u64 = 64;

/// Which depths are recorded in the growth series.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stride {
    /// `n = 1, 2, 4, 8, ...`.
    PowersOfTwo,
    /// Every `k`-th depth.
    Every(usize),
}

impl Stride {
    pub fn samples(&self, n: usize) -> bool {
        match *self {
            Stride::PowersOfTwo => n.is_power_of_two(),
            Stride::Every(k) => k > 0 && n.is_multiple_of(k),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OmegaOptions {
    pub max_n: usize,
    pub threshold: BigUint,
    pub limits: Limits,
    pub confirm_bits: u64,
    pub stride: Stride,
}

impl OmegaOptions {
    pub fn new(max_n: usize) -> Self {
        OmegaOptions {
            max_n,
            threshold: default_threshold(),
            limits: Limits::default(),
            confirm_bits: DEFAULT_CONFIRM_BITS,
            stride: Stride::PowersOfTwo,
        }
    }

    pub fn threshold(mut self, threshold: BigUint) -> Self {
        self.threshold = threshold;
        self
    }

    pub fn limits(mut self, limits: Limits) -> Self {
        self.limits = limits;
        self
    }

    pub fn confirm_bits(mut self, bits: u64) -> Self {
        self.confirm_bits = bits;
        self
    }

    pub fn stride(mut self, stride: Stride) -> Self {
        self.stride = stride;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OmegaReport {
    pub verdict: Verdict,
    /// Sampled `(n, x_0^{1,n})`, always ending with the final depth.
    pub series: Vec<(usize, BigUint)>,
    pub depth: usize,
    pub threshold: BigUint,
}

/// A resumable Ω-limit computation.
///
/// The growth series stays readable after an error (for example a bit-cap
/// abort), so callers can report what was reached.
pub struct OmegaRun {
    generator: GeneratorSpec,
    stream: TermStream,
    state: PrefixState,
    terms: Vec<u32>,
    options: OmegaOptions,
    series: Vec<(usize, BigUint)>,
    /// `b_n` at the depth where `x_0^{1,n}` last changed.
    b_at_change: u64,
    verdict: Option<Verdict>,
}

impl OmegaRun {
    pub fn new(generator: &GeneratorSpec, options: OmegaOptions) -> Self {
        OmegaRun {
            generator: generator.clone(),
            stream: generator.stream(),
            state: PrefixState::new(options.limits),
            terms: Vec::new(),
            options,
            series: Vec::new(),
            b_at_change: 0,
            verdict: None,
        }
    }

    pub fn depth(&self) -> usize {
        self.state.n()
    }

    pub fn x0(&self) -> &BigUint {
        self.state.x0()
    }

    pub fn series(&self) -> &[(usize, BigUint)] {
        &self.series
    }

    pub fn terms(&self) -> &[u32] {
        &self.terms
    }

    pub fn verdict(&self) -> Option<&Verdict> {
        self.verdict.as_ref()
    }

    /// Consumes one term. Returns the verdict once the run has finished.
    pub fn step(&mut self) -> Result<Option<&Verdict>> {
        if self.verdict.is_some() {
            return Ok(self.verdict.as_ref());
        }
        let Some(a) = self.stream.next_term()? else {
            let verdict = self.exhausted();
            return Ok(Some(self.finish(verdict)));
        };
        if self.state.push(a)? {
            self.b_at_change = self.state.b();
        }
        self.terms.push(a);
        let n = self.state.n();
        if self.options.stride.samples(n) {
            self.series.push((n, self.state.x0().clone()));
        }

        if self.state.x0() > &self.options.threshold {
            let verdict = Verdict::DivergentEvidence {
                n,
                x0: self.state.x0().clone(),
            };
            return Ok(Some(self.finish(verdict)));
        }
        if !self.generator.is_finite()
            && self.state.is_genuine()
            && self.state.b() - self.b_at_change >= self.options.confirm_bits
        {
            if let Some(verdict) = self.confirm() {
                return Ok(Some(self.finish(verdict)));
            }
        }
        if n >= self.options.max_n {
            return Ok(Some(self.finish(Verdict::Inconclusive { n })));
        }
        Ok(None)
    }

    /// Runs to a verdict.
    pub fn run(&mut self) -> Result<OmegaReport> {
        while self.verdict.is_none() {
            self.step()?;
        }
        Ok(self.report())
    }

    /// Snapshot of the current state; the verdict is `Inconclusive` while running.
    pub fn report(&self) -> OmegaReport {
        let depth = self.state.n();
        let mut series = self.series.clone();
        if depth > 0 && series.last().map(|&(n, _)| n) != Some(depth) {
            series.push((depth, self.state.x0().clone()));
        }
        OmegaReport {
            verdict: self
                .verdict
                .clone()
                .unwrap_or(Verdict::Inconclusive { n: depth }),
            series,
            depth,
            threshold: self.options.threshold.clone(),
        }
    }

    fn finish(&mut self, verdict: Verdict) -> &Verdict {
        self.verdict.insert(verdict)
    }

    /// A finite generator has run out: its terms are the E-sequence prefix of
    /// `x_0^{1,n}` exactly when that start is genuine.
    fn exhausted(&self) -> Verdict {
        let n = self.state.n();
        if self.state.is_genuine() {
            self.confirm().unwrap_or(Verdict::Inconclusive { n })
        } else {
            Verdict::Inconclusive { n }
        }
    }

    /// Checks the candidate's actual trajectory against every generated term.
    fn confirm(&self) -> Option<Verdict> {
        let x = self.state.x0();
        if x.is_zero() || !x.bit(0) || pow2(self.state.b()) <= *x {
            return None;
        }
        let traj = e_sequence_of(x, self.terms.len()).ok()?;
        (traj.exponents == self.terms).then(|| Verdict::ConvergentTo {
            x: x.clone(),
            witness: Some(traj),
        })
    }
}

/// Runs the Ω-limit loop with the default options at depth `max_n`.
pub fn omega_limit(
    generator: &GeneratorSpec,
    max_n: usize,
    threshold: &BigUint,
) -> Result<OmegaReport> {
    omega_limit_with(
        generator,
        OmegaOptions::new(max_n).threshold(threshold.clone()),
    )
}

pub fn omega_limit_with(generator: &GeneratorSpec, options: OmegaOptions) -> Result<OmegaReport> {
    if options.max_n == 0 || options.threshold.is_zero() {
        return Err(Error::Precondition(
            "depth and threshold must be at least 1".into(),
        ));
    }
    OmegaRun::new(generator, options).run()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gen(s: &str) -> GeneratorSpec {
        s.parse().unwrap()
    }

    use num_traits::One;

    fn big(x: u64) -> BigUint {
        BigUint::from(x)
    }

    #[test]
    fn explicit_orbit_prefix_converges() {
        let r = omega_limit(&gen("explicit:1,1,2,3,4"), 100, &default_threshold()).unwrap();
        assert_eq!(r.verdict.convergent_value(), Some(&big(7)));
        assert_eq!(r.depth, 5);
        // (1,1) forces x_2 = 8, so no odd start has this E-sequence prefix
        let r = omega_limit(&gen("explicit:1,1"), 100, &default_threshold()).unwrap();
        assert_eq!(r.verdict, Verdict::Inconclusive { n: 2 });
    }

    #[test]
    fn constant_sequences() {
        let r = omega_limit(&gen("periodic:2"), 1000, &default_threshold()).unwrap();
        assert_eq!(r.verdict.convergent_value(), Some(&BigUint::one()));

        let r = omega_limit(&gen("periodic:1"), 1000, &default_threshold()).unwrap();
        assert!(matches!(
            r.verdict,
            Verdict::DivergentEvidence { n: 257, .. }
        ));
        for &(n, ref x0) in &r.series {
            assert_eq!(*x0, pow2(n as u64) - 1u32);
        }
    }

    #[test]
    fn orbits_converge() {
        for x in [1u64, 3, 7, 27, 97, 871] {
            let r = omega_limit(&gen(&format!("orbit:{x}")), 10_000, &default_threshold()).unwrap();
            assert_eq!(r.verdict.convergent_value(), Some(&big(x)), "x = {x}");
            if let Verdict::ConvergentTo {
                witness: Some(w), ..
            } = &r.verdict
            {
                assert_eq!(w.len(), r.depth);
            }
        }
    }

    #[test]
    fn series_is_monotone_and_ends_at_depth() {
        let r = omega_limit_with(
            &gen("sturmian:log2_3"),
            OmegaOptions::new(300).stride(Stride::Every(7)),
        )
        .unwrap();
        assert!(r
            .series
            .windows(2)
            .all(|w| w[0].1 <= w[1].1 && w[0].0 < w[1].0));
        assert_eq!(r.series.last().unwrap().0, r.depth);
    }

    #[test]
    fn inconclusive_at_depth() {
        let r = omega_limit(&gen("squares"), 20, &default_threshold()).unwrap();
        assert_eq!(r.verdict, Verdict::Inconclusive { n: 20 });
        assert_eq!(r.depth, 20);
        assert!(omega_limit(&gen("squares"), 0, &default_threshold()).is_err());
        assert!(omega_limit(&gen("squares"), 5, &BigUint::zero()).is_err());
    }

    #[test]
    fn bit_cap_keeps_partial_series() {
        let opts = OmegaOptions::new(10_000).limits(Limits::with_bit_cap(100));
        let mut run = OmegaRun::new(&gen("periodic:1"), opts);
        let err = run.run().unwrap_err();
        assert!(matches!(err, Error::BitCapExceeded { .. }));
        assert_eq!(run.depth(), 100);
        assert_eq!(run.series().last().unwrap().0, 64);
        assert_eq!(run.report().series.last().unwrap().0, 100);
    }
}
