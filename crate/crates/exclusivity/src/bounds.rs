//! Bound computations behind a common strategy interface.
//!
//! Every bound answers the same question, "how large can the sum of
//! these event probabilities get", under a different theory of
//! probability. Each variant is registered by name so callers (the CLI,
//! the report) can select or enumerate them at runtime.

use num_traits::ToPrimitive;

use crate::classical::{beta_from_s, deterministic_max, kappa_from_s, DeterministicAssignment};
use crate::error::Error;
use crate::everify::Derivation;
use crate::graph::{build_exclusivity_graph, max_independent_set};
use crate::lp::{clique_lp_max, kolmogorov_max, Rational};
use crate::scenario::{Event, Scenario};
use crate::theta::{lovasz_theta, ThetaResult};

/// The value of one bound, at the precision its theory affords.
#[derive(Clone, Debug)]
pub enum BoundValue {
    /// Exact count (deterministic assignments).
    Count(usize),
    /// Exact rational (linear programs).
    Exact(Rational),
    /// Certified numeric value with a two-sided gap (the SDP).
    Real { value: f64, gap: f64 },
}

impl BoundValue {
    pub fn as_f64(&self) -> f64 {
        match self {
            BoundValue::Count(c) => *c as f64,
            BoundValue::Exact(r) => r.to_f64().unwrap_or(f64::NAN),
            BoundValue::Real { value, .. } => *value,
        }
    }
}

/// One way of bounding an event-probability sum.
pub trait BoundStrategy {
    /// Registry key, e.g. "deterministic".
    fn name(&self) -> &'static str;
    /// One-line account of what the bound assumes.
    fn description(&self) -> &'static str;
    fn compute(&self, events: &[Event], scenario: &Scenario, tol: f64) -> Result<BoundValue, Error>;
}

struct Deterministic;

impl BoundStrategy for Deterministic {
    fn name(&self) -> &'static str {
        "deterministic"
    }
    fn description(&self) -> &'static str {
        "max events satisfied by one global outcome assignment"
    }
    fn compute(&self, events: &[Event], scenario: &Scenario, _tol: f64) -> Result<BoundValue, Error> {
        Ok(BoundValue::Count(deterministic_max(events, scenario)?.0))
    }
}

struct Kolmogorov;

impl BoundStrategy for Kolmogorov {
    fn name(&self) -> &'static str {
        "kolmogorov"
    }
    fn description(&self) -> &'static str {
        "LP with one sum<=1 constraint per exclusive pair"
    }
    fn compute(&self, events: &[Event], scenario: &Scenario, _tol: f64) -> Result<BoundValue, Error> {
        let g = build_exclusivity_graph(events, scenario)?;
        Ok(BoundValue::Exact(kolmogorov_max(&g)?))
    }
}

struct CliqueLp;

impl BoundStrategy for CliqueLp {
    fn name(&self) -> &'static str {
        "clique-lp"
    }
    fn description(&self) -> &'static str {
        "LP with one sum<=1 constraint per maximal clique"
    }
    fn compute(&self, events: &[Event], scenario: &Scenario, _tol: f64) -> Result<BoundValue, Error> {
        let g = build_exclusivity_graph(events, scenario)?;
        Ok(BoundValue::Exact(clique_lp_max(&g)?))
    }
}

struct Theta;

impl BoundStrategy for Theta {
    fn name(&self) -> &'static str {
        "theta"
    }
    fn description(&self) -> &'static str {
        "Lovasz theta SDP (quantum bound of the graph approach)"
    }
    fn compute(&self, events: &[Event], scenario: &Scenario, tol: f64) -> Result<BoundValue, Error> {
        let g = build_exclusivity_graph(events, scenario)?;
        let r = lovasz_theta(&g, tol)?;
        Ok(BoundValue::Real {
            value: r.value,
            gap: r.gap,
        })
    }
}

/// All registered strategies, in report order.
pub fn registry() -> Vec<Box<dyn BoundStrategy>> {
    vec![
        Box::new(Deterministic),
        Box::new(Kolmogorov),
        Box::new(CliqueLp),
        Box::new(Theta),
    ]
}

/// Looks a strategy up by its registry key.
pub fn strategy(name: &str) -> Option<Box<dyn BoundStrategy>> {
    registry().into_iter().find(|s| s.name() == name)
}

/// Every bound for one scenario, with witnesses and certificates.
pub struct BoundReport {
    pub scenario: String,
    pub event_labels: Vec<String>,
    pub deterministic: usize,
    pub deterministic_witness: DeterministicAssignment,
    pub independent_set: usize,
    pub kolmogorov: Rational,
    pub clique_lp: Rational,
    pub theta: ThetaResult,
    /// Bound from a verified exclusivity-principle derivation.
    pub e_bound: Option<f64>,
    pub kappa: Option<f64>,
    pub beta: Option<f64>,
}

pub fn bound_report(
    name: &str,
    events: &[Event],
    scenario: &Scenario,
    tol: f64,
) -> Result<BoundReport, Error> {
    let g = build_exclusivity_graph(events, scenario)?;
    let (det, witness) = deterministic_max(events, scenario)?;
    let (alpha, _) = max_independent_set(&g);
    let theta = lovasz_theta(&g, tol)?;

    let e_bound = match name {
        "kcbs" | "chsh" => {
            let mut d = if name == "kcbs" {
                Derivation::kcbs()?
            } else {
                Derivation::chsh()?
            };
            d.verify_identity()?;
            Some(d.solve_symmetric_bound()?.upper)
        }
        "specker" => {
            // joint exclusivity of the certified triangle forces the sum
            // to the clique bound
            crate::everify::specker_inequality()?;
            Some(1.0)
        }
        _ => None,
    };
    let kappa = match name {
        "kcbs" => e_bound.map(|s| kappa_from_s(s, s)),
        _ => None,
    };
    let beta = match name {
        "chsh" => e_bound.map(beta_from_s),
        _ => None,
    };

    Ok(BoundReport {
        scenario: name.to_string(),
        event_labels: events.iter().map(|e| e.to_string()).collect(),
        deterministic: det,
        deterministic_witness: witness,
        independent_set: alpha,
        kolmogorov: kolmogorov_max(&g)?,
        clique_lp: clique_lp_max(&g)?,
        theta,
        e_bound,
        kappa,
        beta,
    })
}
