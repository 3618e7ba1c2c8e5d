//! Hidden-variable maxima by exhaustive outcome assignment, plus the
//! affine correlator conversions.

use std::collections::BTreeMap;

use crate::error::Error;
use crate::scenario::{Event, Scenario, Sign};

/// A total outcome assignment over the base observables; derived
/// observables carry their rule values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeterministicAssignment {
    pub outcomes: BTreeMap<String, Sign>,
}

impl DeterministicAssignment {
    pub fn satisfies(&self, event: &Event) -> bool {
        event.iter().all(|(name, s)| self.outcomes.get(name) == Some(&s))
    }
}

const MAX_BASE_OBSERVABLES: usize = 24;

/// Maximum number of the listed events a single global outcome
/// assignment can satisfy. Exhaustive over all 2^k assignments of the
/// base observables; deterministic (first maximizer in enumeration
/// order wins).
pub fn deterministic_max(
    events: &[Event],
    scenario: &Scenario,
) -> Result<(usize, DeterministicAssignment), Error> {
    let base = scenario.base_observables();
    let k = base.len();
    if k > MAX_BASE_OBSERVABLES {
        return Err(Error::SizeLimit(format!(
            "{k} base observables; limit is {MAX_BASE_OBSERVABLES}"
        )));
    }
    let mut best_count = 0usize;
    let mut best: Option<DeterministicAssignment> = None;
    for bits in 0u32..1 << k {
        let mut outcomes = BTreeMap::new();
        for (i, name) in base.iter().enumerate() {
            let s = if bits >> i & 1 == 0 { Sign::Plus } else { Sign::Minus };
            outcomes.insert(name.to_string(), s);
        }
        for d in scenario.derived_observables() {
            let a = outcomes[&d.args.0];
            let b = outcomes[&d.args.1];
            outcomes.insert(d.name.clone(), d.rule.apply(a, b));
        }
        let assignment = DeterministicAssignment { outcomes };
        let count = events.iter().filter(|e| assignment.satisfies(e)).count();
        if count > best_count || best.is_none() {
            best_count = count;
            best = Some(assignment);
        }
    }
    Ok((best_count, best.expect("at least one assignment")))
}

/// kappa = 2 S + 2 S' - 5.
pub fn kappa_from_s(s: f64, s_prime: f64) -> f64 {
    2.0 * s + 2.0 * s_prime - 5.0
}

/// beta = 2 S - 4.
pub fn beta_from_s(s: f64) -> f64 {
    2.0 * s - 4.0
}

/// <AB> = p(+,+) - p(+,-) - p(-,+) + p(-,-).
pub fn correlator_from_probs(p_pp: f64, p_pm: f64, p_mp: f64, p_mm: f64) -> Result<f64, Error> {
    for p in [p_pp, p_pm, p_mp, p_mm] {
        if p < 0.0 {
            return Err(Error::MalformedLp(format!("negative probability {p}")));
        }
    }
    if p_pp + p_pm + p_mp + p_mm > 1.0 + 1e-9 {
        return Err(Error::MalformedLp("probabilities sum past 1".into()));
    }
    Ok(p_pp - p_pm - p_mp + p_mm)
}
