use std::fmt;

use num_bigint::BigUint;

use crate::trajectory::Trajectory;

/// The argument that certifies an infinite E-sequence as divergent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Criterion {
    /// Periodic with `3^r > 2^s`.
    PeriodicDeficit,
    /// Periodic with `2^s > 3^r` but no odd integer realises the forced cycle.
    PeriodicNoIntegralCycle,
    /// Non-periodic with `limsup b_n / n > log₂3`.
    DensityAboveLog2Of3,
    /// The Beatty sequence of slope exactly `log₂3`.
    BeattyLog2Of3,
    /// Infinitely many long runs of ones under `3^n > 2^{b_n}`.
    RunsOfOnes,
    /// Infinitely many recurrences of an initial block under `3^n > 2^{b_n}`.
    RepeatedBlock,
    /// Beatty sequences of irrational slope in `[1, log₂3)`.
    SturmianBelowLog2Of3,
}

impl Criterion {
    pub fn name(&self) -> &'static str {
        match self {
            Criterion::PeriodicDeficit => "periodic-deficit",
            Criterion::PeriodicNoIntegralCycle => "periodic-no-integral-cycle",
            Criterion::DensityAboveLog2Of3 => "density-above-log2-3",
            Criterion::BeattyLog2Of3 => "beatty-log2-3",
            Criterion::RunsOfOnes => "runs-of-ones",
            Criterion::RepeatedBlock => "repeated-block",
            Criterion::SturmianBelowLog2Of3 => "sturmian-below-log2-3",
        }
    }
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Outcome of analysing an (infinite) E-sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    /// The sequence is the E-sequence of `x`; `witness` is the checked trajectory.
    ConvergentTo {
        x: BigUint,
        witness: Option<Trajectory>,
    },
    /// Divergence proved by `criterion`.
    DivergentCertified { criterion: Criterion },
    /// `x_0^{1,n}` crossed the abort threshold at depth `n`.
    DivergentEvidence { n: usize, x0: BigUint },
    /// Nothing decided by depth `n`.
    Inconclusive { n: usize },
}

impl Verdict {
    pub fn kind(&self) -> &'static str {
        match self {
            Verdict::ConvergentTo { .. } => "convergent",
            Verdict::DivergentCertified { .. } => "divergent-certified",
            Verdict::DivergentEvidence { .. } => "divergent-evidence",
            Verdict::Inconclusive { .. } => "inconclusive",
        }
    }

    pub fn convergent_value(&self) -> Option<&BigUint> {
        match self {
            Verdict::ConvergentTo { x, .. } => Some(x),
            _ => None,
        }
    }

    pub fn criterion(&self) -> Option<Criterion> {
        match self {
            Verdict::DivergentCertified { criterion } => Some(*criterion),
            _ => None,
        }
    }

    pub fn is_certified_divergent(&self) -> bool {
        matches!(self, Verdict::DivergentCertified { .. })
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::ConvergentTo { x, .. } => write!(f, "convergent to {x}"),
            Verdict::DivergentCertified { criterion } => write!(f, "divergent ({criterion})"),
            Verdict::DivergentEvidence { n, .. } => write!(f, "divergent evidence at n = {n}"),
            Verdict::Inconclusive { n } => write!(f, "inconclusive at n = {n}"),
        }
    }
}
