//! Replays the two exclusivity-principle derivations end to end.
//!
//! Both follow the same shape: build families of compound events over
//! two independent experiment copies, certify each family pairwise
//! exclusive (so its probabilities sum to at most 1), add the resulting
//! inequalities with exact integer algebra, recognize the sum as a
//! product expansion, and solve the symmetric quadratic for the bound.

use std::fmt;

use crate::algebra::{factorize, product_expansion, AtomicProb, LinearCombo};
use crate::error::Error;
use crate::scenario::{
    are_exclusive, chsh_complement_events, chsh_events, chsh_extended_scenario, kcbs_events,
    kcbs_twin_scenario, specker_scenario, specker_triangle_events, CopyTag, Event, Scenario, Sign,
};

/// Merges an A-copy event with a B-copy event of two independent
/// experiments; the compound probability factorizes as the product.
pub fn twin_compound(ea: &Event, eb: &Event, scenario: &Scenario) -> Result<Event, Error> {
    for (event, want) in [(ea, CopyTag::A), (eb, CopyTag::B)] {
        for (name, _) in event.iter() {
            if scenario.copy_of(name) != Some(want) {
                return Err(Error::CopyMismatch(format!(
                    "{name} in {event} is not a {want:?}-copy observable"
                )));
            }
        }
    }
    let pairs: Vec<(String, Sign)> = ea
        .iter()
        .chain(eb.iter())
        .map(|(n, s)| (n.to_string(), s))
        .collect();
    Event::from_pairs(&pairs, scenario)
}

/// A set of compound events claimed pairwise exclusive, with the exact
/// factorized form of its probability sum. The claim must be certified
/// before the inequality (sum <= 1) may be used.
#[derive(Clone, Debug)]
pub struct EInequality {
    pub label: String,
    pub events: Vec<Event>,
    pub lhs: LinearCombo,
    certified: bool,
}

impl EInequality {
    pub fn new(label: String, events: Vec<Event>, scenario: &Scenario) -> Result<EInequality, Error> {
        let mut lhs = LinearCombo::new();
        for e in &events {
            lhs.add_term(factorize(e, scenario)?, 1);
        }
        Ok(EInequality {
            label,
            events,
            lhs,
            certified: false,
        })
    }

    pub fn is_certified(&self) -> bool {
        self.certified
    }

    /// Checks every pair; on failure names the offending events.
    pub fn certify(&mut self, scenario: &Scenario) -> Result<(), Error> {
        for i in 0..self.events.len() {
            for j in i + 1..self.events.len() {
                if !are_exclusive(&self.events[i], &self.events[j], scenario)? {
                    return Err(Error::CertificationFailed {
                        first: i,
                        second: j,
                        first_label: self.events[i].to_string(),
                        second_label: self.events[j].to_string(),
                    });
                }
            }
        }
        self.certified = true;
        Ok(())
    }

    pub fn pair_count(&self) -> usize {
        self.events.len() * (self.events.len() - 1) / 2
    }
}

/// Adds certified inequalities term-wise: the result asserts
/// lhs <= number of inequalities.
pub fn sum_inequalities(ineqs: &[EInequality]) -> Result<(LinearCombo, i64), Error> {
    let mut lhs = LinearCombo::new();
    for ineq in ineqs {
        if !ineq.certified {
            return Err(Error::Uncertified);
        }
        lhs = lhs.add(&ineq.lhs);
    }
    Ok((lhs, ineqs.len() as i64))
}

/// Renames every observable `A*` of each event to `B*` so the same
/// event list can live on the second experiment copy.
fn on_b_copy(events: &[Event], scenario: &Scenario) -> Vec<Event> {
    events
        .iter()
        .map(|e| {
            let pairs: Vec<(String, Sign)> = e
                .iter()
                .map(|(n, s)| (format!("B{}", &n[1..]), s))
                .collect();
            Event::from_pairs(&pairs, scenario).expect("renamed built-in event")
        })
        .collect()
}

/// The five 5-event families of the pentagon twin construction,
/// certified. Family r pairs A-side event i with B-side event
/// (3i + 2r) mod 5; across the five families every (a_i, b_j) pair
/// appears exactly once.
pub fn kcbs_twin_sets() -> Result<Vec<EInequality>, Error> {
    let scenario = kcbs_twin_scenario();
    let a_events = kcbs_events();
    let b_events = on_b_copy(&a_events, &scenario);
    let mut sets = Vec::with_capacity(5);
    for r in 0..5 {
        let mut events = Vec::with_capacity(5);
        for i in 0..5 {
            let j = (3 * i + 2 * r) % 5;
            events.push(twin_compound(&a_events[i], &b_events[j], &scenario)?);
        }
        let mut ineq = EInequality::new(format!("twin set {}", r + 1), events, &scenario)?;
        ineq.certify(&scenario)?;
        sets.push(ineq);
    }
    Ok(sets)
}

const P: Sign = Sign::Plus;
const N: Sign = Sign::Minus;

type RawEvent = [(&'static str, Sign); 4];

/// The eight base nine-event families: four compound A/B events each,
/// plus one event over the derived agreement observables. The other
/// four events of each family are the full sign flips of the first four.
struct RawFamily {
    ab: [RawEvent; 4],
    c: [(&'static str, Sign); 2],
}

const CHSH_FAMILIES: [RawFamily; 8] = [
    RawFamily {
        ab: [
            [("A1", P), ("A2", P), ("B1", P), ("B2", P)],
            [("A1", P), ("A2", N), ("B1", P), ("B2", N)],
            [("A3", P), ("A2", P), ("B3", N), ("B2", N)],
            [("A3", P), ("A2", N), ("B3", N), ("B2", P)],
        ],
        c: [("C11", N), ("C33", P)],
    },
    RawFamily {
        ab: [
            [("A1", P), ("A2", P), ("B1", N), ("B2", N)],
            [("A1", P), ("A2", N), ("B1", N), ("B2", P)],
            [("A3", P), ("A2", P), ("B3", P), ("B2", P)],
            [("A3", P), ("A2", N), ("B3", P), ("B2", N)],
        ],
        c: [("C11", P), ("C33", N)],
    },
    RawFamily {
        ab: [
            [("A1", P), ("A2", P), ("B1", N), ("B4", P)],
            [("A1", P), ("A2", N), ("B1", N), ("B4", N)],
            [("A3", P), ("A2", P), ("B3", N), ("B4", N)],
            [("A3", P), ("A2", N), ("B3", N), ("B4", P)],
        ],
        c: [("C11", P), ("C33", P)],
    },
    RawFamily {
        ab: [
            [("A1", P), ("A2", P), ("B1", P), ("B4", N)],
            [("A1", P), ("A2", N), ("B1", P), ("B4", P)],
            [("A3", P), ("A2", P), ("B3", P), ("B4", P)],
            [("A3", P), ("A2", N), ("B3", P), ("B4", N)],
        ],
        c: [("C11", N), ("C33", N)],
    },
    RawFamily {
        ab: [
            [("A1", P), ("A2", P), ("B3", N), ("B4", N)],
            [("A1", P), ("A2", N), ("B3", N), ("B4", P)],
            [("A3", P), ("A2", P), ("B1", N), ("B4", P)],
            [("A3", P), ("A2", N), ("B1", N), ("B4", N)],
        ],
        c: [("C13", P), ("C31", P)],
    },
    RawFamily {
        ab: [
            [("A1", P), ("A2", P), ("B3", P), ("B4", P)],
            [("A1", P), ("A2", N), ("B3", P), ("B4", N)],
            [("A3", P), ("A2", P), ("B1", P), ("B4", N)],
            [("A3", P), ("A2", N), ("B1", P), ("B4", P)],
        ],
        c: [("C13", N), ("C31", N)],
    },
    RawFamily {
        ab: [
            [("A1", P), ("A2", P), ("B3", P), ("B2", P)],
            [("A1", P), ("A2", N), ("B3", P), ("B2", N)],
            [("A3", P), ("A2", P), ("B1", N), ("B2", N)],
            [("A3", P), ("A2", N), ("B1", N), ("B2", P)],
        ],
        c: [("C13", N), ("C31", P)],
    },
    RawFamily {
        ab: [
            [("A1", P), ("A2", P), ("B3", N), ("B2", N)],
            [("A1", P), ("A2", N), ("B3", N), ("B2", P)],
            [("A3", P), ("A2", P), ("B1", P), ("B2", P)],
            [("A3", P), ("A2", N), ("B1", P), ("B2", N)],
        ],
        c: [("C13", P), ("C31", N)],
    },
];

/// The scenario symmetry generating the second eight families: every
/// index shifts by 2 (mod 4), flipping the outcome on wrap-around
/// (A1 -> A3, A2 -> A4, A3 -> -A1, A4 -> -A2; same on B). An agreement
/// observable C_jk maps to C_j'k' with one sign flip per wrapped index.
fn shift_observable(name: &str, sign: Sign) -> (String, Sign) {
    let kind = name.as_bytes()[0];
    if kind == b'C' {
        let (j, k) = (&name[1..2], &name[2..3]);
        let nj = if j == "1" { "3" } else { "1" };
        let nk = if k == "1" { "3" } else { "1" };
        let wraps = (j == "3") as u32 + (k == "3") as u32;
        let s = if wraps % 2 == 0 { sign } else { sign.negated() };
        (format!("C{nj}{nk}"), s)
    } else {
        let i: u32 = name[1..].parse().expect("indexed observable");
        if i <= 2 {
            (format!("{}{}", &name[..1], i + 2), sign)
        } else {
            (format!("{}{}", &name[..1], i - 2), sign.negated())
        }
    }
}

fn shift_event(e: &Event, scenario: &Scenario) -> Event {
    let pairs: Vec<(String, Sign)> = e.iter().map(|(n, s)| shift_observable(n, s)).collect();
    Event::from_pairs(&pairs, scenario).expect("shifted event")
}

/// Flip one outcome sign in one event of one family; for exercising the
/// negative path of certification.
#[derive(Clone, Debug)]
pub struct Corruption {
    pub set: usize,
    pub event: usize,
    pub observable: String,
}

impl fmt::Display for Corruption {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "flip {} in event {} of set {}",
            self.observable, self.event, self.set
        )
    }
}

fn corrupt_event(e: &Event, observable: &str, scenario: &Scenario) -> Result<Event, Error> {
    if e.get(observable).is_none() {
        return Err(Error::UndeclaredObservable(format!(
            "{observable} (not assigned in {e})"
        )));
    }
    let pairs: Vec<(String, Sign)> = e
        .iter()
        .map(|(n, s)| (n.to_string(), if n == observable { s.negated() } else { s }))
        .collect();
    Event::from_pairs(&pairs, scenario)
}

/// Builds all 16 nine-event families (8 base + 8 shifted), optionally
/// corrupting one sign, and certifies each. Returns the certification
/// error naming the failing pair when a corruption breaks a family.
pub fn chsh_nine_event_sets_with(corruption: Option<&Corruption>) -> Result<Vec<EInequality>, Error> {
    let scenario = chsh_extended_scenario();
    let mut families: Vec<(String, Vec<Event>)> = Vec::with_capacity(16);
    for (idx, raw) in CHSH_FAMILIES.iter().enumerate() {
        let mut events: Vec<Event> = raw
            .ab
            .iter()
            .map(|pairs| Event::from_pairs(pairs, &scenario).expect("built-in event"))
            .collect();
        let flipped: Vec<Event> = events.iter().map(|e| e.negated()).collect();
        events.extend(flipped);
        events.push(Event::from_pairs(&raw.c, &scenario).expect("built-in event"));
        families.push((format!("set {}", idx + 1), events));
    }
    for idx in 0..8 {
        let events: Vec<Event> = families[idx]
            .1
            .iter()
            .map(|e| shift_event(e, &scenario))
            .collect();
        families.push((format!("set {} (shifted)", idx + 1), events));
    }

    if let Some(c) = corruption {
        if c.set >= families.len() || c.event >= families[c.set].1.len() {
            return Err(Error::SizeLimit(format!(
                "corruption target set {} event {} out of range",
                c.set, c.event
            )));
        }
        families[c.set].1[c.event] =
            corrupt_event(&families[c.set].1[c.event], &c.observable, &scenario)?;
    }

    let mut sets = Vec::with_capacity(16);
    for (label, events) in families {
        let mut ineq = EInequality::new(label, events, &scenario)?;
        ineq.certify(&scenario)?;
        sets.push(ineq);
    }
    Ok(sets)
}

/// The 16 certified nine-event families.
pub fn chsh_nine_event_sets() -> Result<Vec<EInequality>, Error> {
    chsh_nine_event_sets_with(None)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DerivationKind {
    Kcbs,
    Chsh,
}

/// Boundaries of the feasible interval for the symmetric maximum.
#[derive(Clone, Copy, Debug)]
pub struct SymmetricBound {
    pub upper: f64,
    pub lower: f64,
}

/// One full derivation: the certified families, their exact sum, and
/// the verified identity gating the final bound.
pub struct Derivation {
    pub kind: DerivationKind,
    pub sets: Vec<EInequality>,
    pub lhs: LinearCombo,
    pub bound: i64,
    /// Constant contributed by normalization groups (0 or 4).
    pub c_constant: i64,
    identity_verified: bool,
}

impl Derivation {
    pub fn kcbs() -> Result<Derivation, Error> {
        let sets = kcbs_twin_sets()?;
        let (lhs, bound) = sum_inequalities(&sets)?;
        Ok(Derivation {
            kind: DerivationKind::Kcbs,
            sets,
            lhs,
            bound,
            c_constant: 0,
            identity_verified: false,
        })
    }

    pub fn chsh() -> Result<Derivation, Error> {
        Derivation::chsh_with(None)
    }

    pub fn chsh_with(corruption: Option<&Corruption>) -> Result<Derivation, Error> {
        let sets = chsh_nine_event_sets_with(corruption)?;
        let (lhs, bound) = sum_inequalities(&sets)?;
        Ok(Derivation {
            kind: DerivationKind::Chsh,
            sets,
            lhs,
            bound,
            c_constant: 4,
            identity_verified: false,
        })
    }

    pub fn identity_verified(&self) -> bool {
        self.identity_verified
    }

    /// Verifies the exact summation identity.
    ///
    /// Pentagon: the 25 product terms are exactly all pairs
    /// P(a_i) P(b_j), so the sum is S^A S^B <= 5.
    ///
    /// CHSH: subtracting the expansions of S^A S^B and
    /// (4 - S^A)(4 - S^B) from the 144-term sum must leave exactly the
    /// eight agreement events, each with coefficient 2, grouping into
    /// two complete normalization quadruples; those contribute the
    /// constant 4, giving S^A S^B + (4 - S^A)(4 - S^B) + 4 <= 16.
    pub fn verify_identity(&mut self) -> Result<(), Error> {
        let ok = match self.kind {
            DerivationKind::Kcbs => {
                let scenario = kcbs_twin_scenario();
                let a = kcbs_events();
                let b = on_b_copy(&a, &scenario);
                self.lhs == product_expansion(&a, &b)
            }
            DerivationKind::Chsh => {
                let scenario = chsh_extended_scenario();
                let sa = chsh_events();
                let sb = on_b_copy(&sa, &scenario);
                let ca = chsh_complement_events();
                let cb = on_b_copy(&ca, &scenario);
                let remaining = self
                    .lhs
                    .sub(&product_expansion(&sa, &sb))
                    .sub(&product_expansion(&ca, &cb));
                remaining == expected_c_terms(&scenario)?
            }
        };
        if !ok {
            return Err(Error::IdentityNotVerified);
        }
        self.identity_verified = true;
        Ok(())
    }

    /// With both copies assumed to share the same maximum S, the
    /// verified identity becomes a quadratic in S; returns its feasible
    /// interval. Pentagon: S^2 <= 5 with S >= 0. CHSH:
    /// 2S^2 - 8S + 4 <= 0, roots 2 +/- sqrt(2).
    pub fn solve_symmetric_bound(&self) -> Result<SymmetricBound, Error> {
        if !self.identity_verified {
            return Err(Error::IdentityNotVerified);
        }
        Ok(match self.kind {
            DerivationKind::Kcbs => SymmetricBound {
                upper: 5f64.sqrt(),
                lower: 0.0,
            },
            DerivationKind::Chsh => SymmetricBound {
                upper: 2.0 + 2f64.sqrt(),
                lower: 2.0 - 2f64.sqrt(),
            },
        })
    }
}

/// The eight agreement events with coefficient 2: both complete sign
/// quadruples over (C11, C33) and (C13, C31). Each quadruple is a
/// normalization group (pairwise exclusive, probabilities sum to 1),
/// checked here, so the total contributes the constant 4.
fn expected_c_terms(scenario: &Scenario) -> Result<LinearCombo, Error> {
    let mut out = LinearCombo::new();
    for (x, y) in [("C11", "C33"), ("C13", "C31")] {
        let mut quadruple = Vec::new();
        for sx in [P, N] {
            for sy in [P, N] {
                quadruple.push(Event::from_pairs(&[(x, sx), (y, sy)], scenario)?);
            }
        }
        for i in 0..4 {
            for j in i + 1..4 {
                if !are_exclusive(&quadruple[i], &quadruple[j], scenario)? {
                    return Err(Error::CertificationFailed {
                        first: i,
                        second: j,
                        first_label: quadruple[i].to_string(),
                        second_label: quadruple[j].to_string(),
                    });
                }
            }
        }
        for e in quadruple {
            out.add_term(
                vec![AtomicProb {
                    event: e,
                    copy: CopyTag::Shared,
                }],
                2,
            );
        }
    }
    Ok(out)
}

/// The triangle family: three pairwise exclusive events whose joint
/// exclusivity forces the sum below 1 (against the pairwise-only 3/2).
pub fn specker_inequality() -> Result<EInequality, Error> {
    let scenario = specker_scenario();
    let mut ineq = EInequality::new(
        "triangle".to_string(),
        specker_triangle_events(),
        &scenario,
    )?;
    ineq.certify(&scenario)?;
    Ok(ineq)
}
