use esequence::{decide, PeriodicSpec};
use rayon::prelude::*;

use super::periodic::{DecisionRecord, HEADER as PERIODIC_HEADER};
use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::output::Sink;

pub const HEADER: &[&str] = PERIODIC_HEADER;

/// All words of length `len` over `1..=max`, in lexicographic order.
fn words(len: usize, max: u32) -> Vec<Vec<u32>> {
    (0..len).fold(vec![Vec::new()], |acc, _| {
        acc.into_iter()
            .flat_map(|w| {
                (1..=max).map(move |a| {
                    let mut v = w.clone();
                    v.push(a);
                    v
                })
            })
            .collect()
    })
}

/// Canonical specs with `l <= l_max`, `1 <= r <= r_max` and terms in
/// `1..=term_max`, ordered by `l`, then `r`, then terms.
pub fn canonical_specs(l_max: usize, r_max: usize, term_max: u32) -> Vec<PeriodicSpec> {
    let mut specs = Vec::new();
    for l in 0..=l_max {
        let heads = words(l, term_max);
        for r in 1..=r_max {
            let periods = words(r, term_max);
            for head in &heads {
                for period in &periods {
                    let spec = PeriodicSpec::new(head.clone(), period.clone())
                        .expect("terms are positive and the period is non-empty");
                    if spec.canonical() == spec {
                        specs.push(spec);
                    }
                }
            }
        }
    }
    specs
}

/// Decides every canonical spec within the bounds, in deterministic order.
pub fn run(cfg: &RunConfig) -> CliResult<()> {
    let l_max = cfg.l_max.unwrap_or(0);
    let r_max = cfg
        .r_max
        .ok_or_else(|| CliError::Usage("missing required setting `r_max`".into()))?;
    let term_max = cfg
        .term_max
        .ok_or_else(|| CliError::Usage("missing required setting `term_max`".into()))?;
    let cap = cfg.limits()?.bit_cap;
    if (l_max as u64 + 2 * r_max as u64) * u64::from(term_max) > cap {
        return Err(CliError::BitCap(format!(
            "bounds l_max = {l_max}, r_max = {r_max}, term_max = {term_max} exceed the bit cap {cap}"
        )));
    }
    let records: Vec<DecisionRecord> = canonical_specs(l_max, r_max, term_max)
        .par_iter()
        .map(|spec| DecisionRecord::new(spec, &decide(spec)))
        .collect();
    let mut sink = Sink::open(cfg.format(), cfg.output_path(), HEADER)?;
    for record in &records {
        sink.emit("decision", record)?;
    }
    sink.finish()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumeration() {
        let specs: Vec<String> = canonical_specs(0, 2, 2)
            .iter()
            .map(ToString::to_string)
            .collect();
        assert_eq!(specs, [";1", ";2", ";1,2", ";2,1"]);
        assert!(canonical_specs(0, 0, 2).is_empty());
        assert!(canonical_specs(2, 2, 0).is_empty());
        let with_prefix: Vec<String> = canonical_specs(2, 1, 4)
            .iter()
            .map(ToString::to_string)
            .collect();
        assert!(with_prefix.contains(&"1,4;2".to_string()));
        assert!(!with_prefix.contains(&"2;2".to_string()));
    }
}
