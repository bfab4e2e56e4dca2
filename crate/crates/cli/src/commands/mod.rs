//! One module per subcommand. Each exposes its CSV header and a `run`.

pub mod omega;
pub mod periodic;
pub mod sturmian;
pub mod sweep;
pub mod trajectory;
pub mod verify;

use esequence::Verdict;
use serde::Serialize;

/// The columns shared by every record that reports a verdict.
#[derive(Debug, Serialize)]
pub struct VerdictFields {
    pub verdict: &'static str,
    pub criterion: Option<&'static str>,
    /// Start of the convergent trajectory.
    pub x: Option<String>,
    /// Depth reached for evidence or inconclusive verdicts.
    pub depth: Option<usize>,
}

impl From<&Verdict> for VerdictFields {
    fn from(v: &Verdict) -> Self {
        let depth = match v {
            Verdict::DivergentEvidence { n, .. } | Verdict::Inconclusive { n } => Some(*n),
            _ => None,
        };
        VerdictFields {
            verdict: v.kind(),
            criterion: v.criterion().map(|c| c.name()),
            x: v.convergent_value().map(ToString::to_string),
            depth,
        }
    }
}

pub fn strings<T: ToString>(items: impl IntoIterator<Item = T>) -> Vec<String> {
    items.into_iter().map(|t| t.to_string()).collect()
}
