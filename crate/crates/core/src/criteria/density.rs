//! Divergence of non-periodic sequences whose exponent density exceeds `log₂3`.
//!
//! If `limsup b_n / n > log₂3` then `2^{b_n} > 3^n` infinitely often, and for a
//! sequence that is not eventually periodic this rules out every odd start.
//! Only generators whose rule fixes both the density and aperiodicity qualify;
//! nothing is inferred from finite prefixes.

use std::cmp::Ordering;

use crate::criteria::{Basis, Certificate};
use crate::error::Result;
use crate::generator::GeneratorSpec;
use crate::theta::{Theta, ThetaExpansion};
use crate::verdict::Criterion;

/// A certificate when the generator's rule proves `limsup b_n/n > log₂3` and
/// aperiodicity; `None` otherwise.
///
/// Fails only when a continued-fraction slope cannot be separated from
/// `log₂3` at its available depth.
pub fn density_criterion(generator: &GeneratorSpec) -> Result<Option<Certificate>> {
    let GeneratorSpec::Sturmian(theta @ Theta::ContinuedFraction(_)) = generator else {
        return Ok(None);
    };
    let mut expansion = ThetaExpansion::new(theta.clone());
    if expansion.compare_log2_3()? != Ordering::Greater {
        return Ok(None);
    }
    let witness = separating_convergent(&mut expansion);
    let mut cert = Certificate::new(Criterion::DensityAboveLog2Of3, Basis::ByRule)
        .with("theta", theta)
        .with("density", "b_n = floor(n theta)");
    if let Some((depth, p, q)) = witness {
        cert = cert
            .with("separating_depth", depth)
            .with("separating_lower_bound", format!("{p}/{q}"));
    }
    Ok(Some(cert))
}

/// The first enclosure whose lower end already exceeds `log₂3`.
fn separating_convergent(expansion: &mut ThetaExpansion) -> Option<(usize, String, String)> {
    (0..crate::theta::MAX_DEPTH).find_map(|k| {
        let enc = expansion.enclosure(k)?;
        match crate::theta::compare_ratio_log2_3(&enc.lo).ok()?? {
            Ordering::Less => None,
            _ => Some((k, enc.lo.0.to_string(), enc.lo.1.to_string())),
        }
    })
}
