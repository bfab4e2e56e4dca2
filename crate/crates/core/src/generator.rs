//! Rules that produce (possibly infinite) E-sequences term by term.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::periodic::PeriodicSpec;
use crate::sequences::Prefix;
use crate::theta::{Theta, ThetaExpansion};
use crate::trajectory::step;

/// A source of E-sequence terms.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GeneratorSpec {
    /// A finite list of terms.
    Explicit(Prefix),
    /// The actual E-sequence of an odd positive integer.
    Orbit(BigUint),
    Periodic(PeriodicSpec),
    /// `a_n = floor(nθ) - floor((n-1)θ)`.
    Sturmian(Theta),
    /// `a_n = 2` when `n` is a power of two `>= 2`, else `1`.
    PowersOfTwoMarked,
    /// `a_n = 2` when `n` is a square `>= 4`, else `1`.
    SquaresMarked,
}

impl GeneratorSpec {
    pub fn explicit(terms: Vec<u32>) -> Result<Self> {
        Ok(GeneratorSpec::Explicit(Prefix::new(terms)?))
    }

    pub fn orbit(x: BigUint) -> Result<Self> {
        if x.is_even() {
            return Err(Error::NotOddPositive(x.to_string()));
        }
        Ok(GeneratorSpec::Orbit(x))
    }

    /// Number of terms, or `None` for an infinite rule.
    pub fn length(&self) -> Option<usize> {
        match self {
            GeneratorSpec::Explicit(p) => Some(p.len()),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.length().is_some()
    }

    /// The exact limiting density `lim b_n / n` when the rule fixes it.
    pub fn density(&self) -> Option<Theta> {
        match self {
            GeneratorSpec::Sturmian(theta) => Some(theta.clone()),
            GeneratorSpec::Periodic(spec) => {
                let (s, r) = (spec.s(), spec.r() as u64);
                Some(Theta::rational(s, r).expect("period sum is at least its length"))
            }
            GeneratorSpec::PowersOfTwoMarked | GeneratorSpec::SquaresMarked => {
                Some(Theta::rational(1, 1).expect("1 is a valid slope"))
            }
            GeneratorSpec::Explicit(_) | GeneratorSpec::Orbit(_) => None,
        }
    }

    /// True when the rule itself guarantees that the sequence is not
    /// eventually periodic.
    pub fn is_aperiodic_by_rule(&self) -> bool {
        match self {
            GeneratorSpec::Sturmian(theta) => !theta.is_rational(),
            GeneratorSpec::PowersOfTwoMarked | GeneratorSpec::SquaresMarked => true,
            _ => false,
        }
    }

    pub fn stream(&self) -> TermStream {
        let state = match self {
            GeneratorSpec::Explicit(p) => State::Explicit(p.terms().to_vec()),
            GeneratorSpec::Orbit(x) => State::Orbit(x.clone()),
            GeneratorSpec::Periodic(spec) => State::Periodic(spec.clone()),
            GeneratorSpec::Sturmian(theta) => State::Sturmian {
                expansion: Box::new(theta.expansion()),
                prev_floor: 0,
            },
            GeneratorSpec::PowersOfTwoMarked => State::PowersOfTwo,
            GeneratorSpec::SquaresMarked => State::Squares { next_root: 2 },
        };
        TermStream { state, n: 0 }
    }

    /// The first `n` terms. Fails if a finite generator is shorter than `n`.
    pub fn prefix(&self, n: usize) -> Result<Prefix> {
        let mut terms = Vec::with_capacity(n);
        let mut stream = self.stream();
        while terms.len() < n {
            match stream.next_term()? {
                Some(a) => terms.push(a),
                None => {
                    return Err(Error::IndexOutOfRange(format!(
                        "{self} has only {} terms, {n} requested",
                        terms.len()
                    )))
                }
            }
        }
        Prefix::new(terms)
    }
}

impl fmt::Display for GeneratorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeneratorSpec::Explicit(p) => write!(f, "explicit:{p}"),
            GeneratorSpec::Orbit(x) => write!(f, "orbit:{x}"),
            GeneratorSpec::Periodic(spec) => write!(f, "periodic:{spec}"),
            GeneratorSpec::Sturmian(theta) => write!(f, "sturmian:{theta}"),
            GeneratorSpec::PowersOfTwoMarked => f.write_str("powers-of-two"),
            GeneratorSpec::SquaresMarked => f.write_str("squares"),
        }
    }
}

/// Parses descriptors such as `explicit:1,4,2`, `orbit:27`, `periodic:1,4;2`,
/// `sturmian:log2_3`, `powers-of-two` and `squares`.
impl FromStr for GeneratorSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (kind, arg) = s.split_once(':').unwrap_or((s, ""));
        match kind {
            "explicit" => Ok(GeneratorSpec::Explicit(arg.parse()?)),
            "orbit" => {
                let x: BigUint = arg
                    .trim()
                    .parse()
                    .map_err(|e| Error::Parse(format!("orbit start {arg:?}: {e}")))?;
                if x.bits() == 0 {
                    return Err(Error::NotOddPositive(x.to_string()));
                }
                GeneratorSpec::orbit(x)
            }
            "periodic" => Ok(GeneratorSpec::Periodic(arg.parse()?)),
            "sturmian" => Ok(GeneratorSpec::Sturmian(arg.parse()?)),
            "powers-of-two" if arg.is_empty() => Ok(GeneratorSpec::PowersOfTwoMarked),
            "squares" if arg.is_empty() => Ok(GeneratorSpec::SquaresMarked),
            _ => Err(Error::Parse(format!("unknown generator {s:?}"))),
        }
    }
}

enum State {
    Explicit(Vec<u32>),
    Orbit(BigUint),
    Periodic(PeriodicSpec),
    Sturmian {
        expansion: Box<ThetaExpansion>,
        prev_floor: u64,
    },
    PowersOfTwo,
    Squares {
        next_root: u64,
    },
}

/// Iterator-like cursor over a generator's terms.
pub struct TermStream {
    state: State,
    /// Number of terms produced so far.
    n: usize,
}

impl TermStream {
    /// Index of the next term to be produced, 1-based.
    pub fn position(&self) -> usize {
        self.n + 1
    }

    /// The next term, `None` when a finite generator is exhausted.
    pub fn next_term(&mut self) -> Result<Option<u32>> {
        let n = self.n + 1;
        let term = match &mut self.state {
            State::Explicit(terms) => match terms.get(n - 1) {
                Some(&a) => a,
                None => return Ok(None),
            },
            State::Orbit(x) => {
                let (a, next) = step(x)?;
                *x = next;
                a
            }
            State::Periodic(spec) => spec.term(n),
            State::Sturmian {
                expansion,
                prev_floor,
            } => {
                let floor = expansion.floor_mul(n as u64)?;
                let a = floor - *prev_floor;
                *prev_floor = floor;
                a.to_u32()
                    .ok_or_else(|| Error::Precondition(format!("term {a} exceeds u32")))?
            }
            State::PowersOfTwo => {
                if n >= 2 && n.is_power_of_two() {
                    2
                } else {
                    1
                }
            }
            State::Squares { next_root } => {
                let sq = (*next_root * *next_root) as usize;
                if n == sq {
                    *next_root += 1;
                    2
                } else {
                    1
                }
            }
        };
        if term == 0 {
            return Err(Error::ZeroTerm { index: n });
        }
        self.n = n;
        Ok(Some(term))
    }
}
