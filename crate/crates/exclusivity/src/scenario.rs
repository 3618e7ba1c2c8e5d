//! Observables, outcomes, events and the exclusivity relation.
//!
//! An event is a partial assignment of outcomes to named observables.
//! Two events are exclusive when, after filling in every derived
//! observable determined by its arguments, they assign different
//! outcomes to some common observable.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// Which copy of a twin experiment an observable belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum CopyTag {
    A,
    B,
    Shared,
}

/// A dichotomic measurement outcome.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn negated(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }

    pub fn from_char(c: char) -> Option<Sign> {
        match c {
            '+' => Some(Sign::Plus),
            '-' => Some(Sign::Minus),
            _ => None,
        }
    }

    /// +1 or -1.
    pub fn value(self) -> i32 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// Total function from a pair of argument outcomes to an outcome,
/// stored as a 4-entry table indexed by the argument signs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OutcomeRule {
    table: [Sign; 4],
}

impl OutcomeRule {
    /// +1 iff the two argument outcomes are equal (the C_jk rule).
    pub fn equality() -> OutcomeRule {
        let mut table = [Sign::Plus; 4];
        for (i, t) in table.iter_mut().enumerate() {
            let a = if i & 2 == 0 { Sign::Plus } else { Sign::Minus };
            let b = if i & 1 == 0 { Sign::Plus } else { Sign::Minus };
            *t = if a == b { Sign::Plus } else { Sign::Minus };
        }
        OutcomeRule { table }
    }

    pub fn apply(&self, a: Sign, b: Sign) -> Sign {
        let i = ((a == Sign::Minus) as usize) << 1 | (b == Sign::Minus) as usize;
        self.table[i]
    }
}

/// An observable whose outcome is a fixed function of two others.
#[derive(Clone, Debug)]
pub struct DerivedObservable {
    pub name: String,
    pub args: (String, String),
    pub rule: OutcomeRule,
}

/// Declares the observables of an experiment and the derived
/// observables defined on them.
#[derive(Clone, Debug, Default)]
pub struct Scenario {
    observables: BTreeMap<String, CopyTag>,
    derived: BTreeMap<String, DerivedObservable>,
}

impl Scenario {
    pub fn new() -> Scenario {
        Scenario::default()
    }

    pub fn declare(&mut self, name: &str, copy: CopyTag) -> Result<(), Error> {
        if self.observables.contains_key(name) {
            return Err(Error::DuplicateObservable(name.to_string()));
        }
        self.observables.insert(name.to_string(), copy);
        Ok(())
    }

    pub fn declare_derived(
        &mut self,
        name: &str,
        copy: CopyTag,
        args: (&str, &str),
        rule: OutcomeRule,
    ) -> Result<(), Error> {
        for a in [args.0, args.1] {
            if !self.observables.contains_key(a) {
                return Err(Error::UndeclaredObservable(a.to_string()));
            }
        }
        self.declare(name, copy)?;
        self.derived.insert(
            name.to_string(),
            DerivedObservable {
                name: name.to_string(),
                args: (args.0.to_string(), args.1.to_string()),
                rule,
            },
        );
        Ok(())
    }

    pub fn is_declared(&self, name: &str) -> bool {
        self.observables.contains_key(name)
    }

    pub fn copy_of(&self, name: &str) -> Option<CopyTag> {
        self.observables.get(name).copied()
    }

    pub fn derived(&self, name: &str) -> Option<&DerivedObservable> {
        self.derived.get(name)
    }

    pub fn derived_observables(&self) -> impl Iterator<Item = &DerivedObservable> {
        self.derived.values()
    }

    /// Base (non-derived) observables, in name order.
    pub fn base_observables(&self) -> Vec<&str> {
        self.observables
            .keys()
            .filter(|n| !self.derived.contains_key(*n))
            .map(|n| n.as_str())
            .collect()
    }

    /// Parses the scenario text format: `obs <name> [copy=A|B]`,
    /// `derived <name> = eq(<a>,<b>)`, `event <label>: <obs>:<sign> ...`,
    /// `#` comments. Returns the scenario and any declared events.
    pub fn parse(text: &str) -> Result<(Scenario, Vec<(String, Event)>), Error> {
        let mut scn = Scenario::new();
        let mut pending_events: Vec<(String, String)> = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = |msg: &str| Error::Parse {
                line: lineno + 1,
                message: msg.to_string(),
            };
            let (kw, rest) = line.split_once(char::is_whitespace).ok_or_else(|| bad("expected a declaration"))?;
            let rest = rest.trim();
            match kw {
                "obs" => {
                    let mut parts = rest.split_whitespace();
                    let name = parts.next().ok_or_else(|| bad("missing observable name"))?;
                    let copy = match parts.next() {
                        None => CopyTag::Shared,
                        Some("copy=A") => CopyTag::A,
                        Some("copy=B") => CopyTag::B,
                        Some(_) => return Err(bad("expected copy=A or copy=B")),
                    };
                    scn.declare(name, copy)?;
                }
                "derived" => {
                    let (name, def) = rest.split_once('=').ok_or_else(|| bad("expected `=`"))?;
                    let def = def.trim();
                    let inner = def
                        .strip_prefix("eq(")
                        .and_then(|s| s.strip_suffix(')'))
                        .ok_or_else(|| bad("only eq(<a>,<b>) rules are supported"))?;
                    let (a, b) = inner.split_once(',').ok_or_else(|| bad("expected two arguments"))?;
                    scn.declare_derived(
                        name.trim(),
                        CopyTag::Shared,
                        (a.trim(), b.trim()),
                        OutcomeRule::equality(),
                    )?;
                }
                "event" => {
                    let (label, spec) = rest.split_once(':').ok_or_else(|| bad("expected `<label>:`"))?;
                    pending_events.push((label.trim().to_string(), spec.trim().to_string()));
                }
                _ => return Err(bad("unknown declaration")),
            }
        }
        // events are validated after all declarations are in
        let mut events = Vec::new();
        for (label, spec) in pending_events {
            events.push((label, Event::parse(&spec, &scn)?));
        }
        Ok((scn, events))
    }
}

/// A partial outcome assignment over named observables.
///
/// Assignments are kept in lexicographic observable order so equality,
/// hashing and display are deterministic.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Event {
    assignments: BTreeMap<String, Sign>,
}

impl Event {
    /// Builds an event, rejecting undeclared observables, duplicate
    /// assignments, and assignments inconsistent with a derived rule.
    pub fn from_pairs<S: AsRef<str>>(pairs: &[(S, Sign)], scenario: &Scenario) -> Result<Event, Error> {
        let mut assignments = BTreeMap::new();
        for (name, sign) in pairs {
            let name = name.as_ref();
            if !scenario.is_declared(name) {
                return Err(Error::UndeclaredObservable(name.to_string()));
            }
            if assignments.insert(name.to_string(), *sign).is_some() {
                return Err(Error::DuplicateObservable(name.to_string()));
            }
        }
        let event = Event { assignments };
        event.closed(scenario)?; // surfaces inconsistencies
        Ok(event)
    }

    /// Parses `"A1:+ A2:-"`.
    pub fn parse(spec: &str, scenario: &Scenario) -> Result<Event, Error> {
        let mut pairs = Vec::new();
        for tok in spec.split_whitespace() {
            let (name, sign) = tok.rsplit_once(':').ok_or_else(|| Error::Parse {
                line: 0,
                message: format!("bad event token `{tok}`"),
            })?;
            let sign = sign
                .chars()
                .next()
                .and_then(Sign::from_char)
                .filter(|_| sign.len() == 1)
                .ok_or_else(|| Error::Parse {
                    line: 0,
                    message: format!("bad sign in `{tok}`"),
                })?;
            pairs.push((name.to_string(), sign));
        }
        Event::from_pairs(&pairs, scenario)
    }

    pub fn get(&self, name: &str) -> Option<Sign> {
        self.assignments.get(name).copied()
    }

    pub fn len(&self) -> usize {
        self.assignments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignments.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, Sign)> {
        self.assignments.iter().map(|(n, s)| (n.as_str(), *s))
    }

    /// Every outcome flipped. An involution.
    pub fn negated(&self) -> Event {
        Event {
            assignments: self
                .assignments
                .iter()
                .map(|(n, s)| (n.clone(), s.negated()))
                .collect(),
        }
    }

    /// Closure under derived-observable rules: every derived observable
    /// whose arguments are both assigned gets its rule value. Errors if
    /// an explicit assignment contradicts a rule value. Idempotent.
    pub fn closed(&self, scenario: &Scenario) -> Result<Event, Error> {
        let mut assignments = self.assignments.clone();
        for name in assignments.keys() {
            if !scenario.is_declared(name) {
                return Err(Error::UndeclaredObservable(name.clone()));
            }
        }
        loop {
            let mut changed = false;
            for d in scenario.derived_observables() {
                let (a, b) = (&d.args.0, &d.args.1);
                if let (Some(&sa), Some(&sb)) = (assignments.get(a), assignments.get(b)) {
                    let value = d.rule.apply(sa, sb);
                    match assignments.get(&d.name) {
                        Some(&existing) if existing != value => {
                            return Err(Error::InconsistentEvent {
                                event: self.to_string(),
                                observable: d.name.clone(),
                            });
                        }
                        Some(_) => {}
                        None => {
                            assignments.insert(d.name.clone(), value);
                            changed = true;
                        }
                    }
                }
            }
            if !changed {
                return Ok(Event { assignments });
            }
        }
    }

    /// Restriction to the observables with the given copy tag.
    pub fn restricted_to(&self, copy: CopyTag, scenario: &Scenario) -> Event {
        Event {
            assignments: self
                .assignments
                .iter()
                .filter(|(n, _)| scenario.copy_of(n) == Some(copy))
                .map(|(n, s)| (n.clone(), *s))
                .collect(),
        }
    }
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, (n, s)) in self.assignments.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{n}{}", s.as_char())?;
        }
        write!(f, ")")
    }
}

/// Whether some (possibly derived) observable distinguishes the two
/// events: after closure, both assign it, with different outcomes.
pub fn are_exclusive(e1: &Event, e2: &Event, scenario: &Scenario) -> Result<bool, Error> {
    let c1 = e1.closed(scenario)?;
    let c2 = e2.closed(scenario)?;
    for (name, s1) in c1.iter() {
        if let Some(s2) = c2.get(name) {
            if s1 != s2 {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

fn cycle_scenario(prefix: &str, n: usize, copy: CopyTag) -> Scenario {
    let mut scn = Scenario::new();
    for i in 1..=n {
        scn.declare(&format!("{prefix}{i}"), copy).unwrap();
    }
    scn
}

fn build(pairs: &[(&str, Sign)], scn: &Scenario) -> Event {
    Event::from_pairs(pairs, scn).expect("built-in event")
}

use Sign::{Minus as N, Plus as P};

/// Five observables A1..A5 (pentagon scenario).
pub fn kcbs_scenario() -> Scenario {
    cycle_scenario("A", 5, CopyTag::Shared)
}

/// The five events of S_KCBS, in order.
pub fn kcbs_events() -> Vec<Event> {
    let scn = kcbs_scenario();
    vec![
        build(&[("A1", P), ("A2", P)], &scn),
        build(&[("A2", N), ("A3", N)], &scn),
        build(&[("A3", P), ("A4", P)], &scn),
        build(&[("A4", N), ("A5", N)], &scn),
        build(&[("A5", P), ("A1", N)], &scn),
    ]
}

/// Four observables A1..A4 (CHSH scenario).
pub fn chsh_scenario() -> Scenario {
    cycle_scenario("A", 4, CopyTag::Shared)
}

/// The eight events of S_CHSH, in order.
pub fn chsh_events() -> Vec<Event> {
    let scn = chsh_scenario();
    vec![
        build(&[("A1", P), ("A2", P)], &scn),
        build(&[("A1", N), ("A2", N)], &scn),
        build(&[("A2", P), ("A3", P)], &scn),
        build(&[("A2", N), ("A3", N)], &scn),
        build(&[("A3", P), ("A4", P)], &scn),
        build(&[("A3", N), ("A4", N)], &scn),
        build(&[("A4", P), ("A1", N)], &scn),
        build(&[("A4", N), ("A1", P)], &scn),
    ]
}

/// The eight events of 4 - S_CHSH, in order.
pub fn chsh_complement_events() -> Vec<Event> {
    let scn = chsh_scenario();
    vec![
        build(&[("A1", P), ("A2", N)], &scn),
        build(&[("A1", N), ("A2", P)], &scn),
        build(&[("A2", P), ("A3", N)], &scn),
        build(&[("A2", N), ("A3", P)], &scn),
        build(&[("A3", P), ("A4", N)], &scn),
        build(&[("A3", N), ("A4", P)], &scn),
        build(&[("A4", P), ("A1", P)], &scn),
        build(&[("A4", N), ("A1", N)], &scn),
    ]
}

/// Three observables A1..A3.
pub fn specker_scenario() -> Scenario {
    cycle_scenario("A", 3, CopyTag::Shared)
}

/// The three pairwise exclusive events of the Specker triangle.
pub fn specker_triangle_events() -> Vec<Event> {
    let scn = specker_scenario();
    vec![
        build(&[("A1", P), ("A2", P)], &scn),
        build(&[("A2", N), ("A3", N)], &scn),
        build(&[("A3", P), ("A1", N)], &scn),
    ]
}

/// Two independent pentagon experiments: A1..A5 and B1..B5.
pub fn kcbs_twin_scenario() -> Scenario {
    let mut scn = Scenario::new();
    for i in 1..=5 {
        scn.declare(&format!("A{i}"), CopyTag::A).unwrap();
    }
    for i in 1..=5 {
        scn.declare(&format!("B{i}"), CopyTag::B).unwrap();
    }
    scn
}

/// Two independent CHSH experiments A1..A4, B1..B4 plus the derived
/// equality observables C11, C33, C13, C31.
pub fn chsh_extended_scenario() -> Scenario {
    let mut scn = Scenario::new();
    for i in 1..=4 {
        scn.declare(&format!("A{i}"), CopyTag::A).unwrap();
    }
    for i in 1..=4 {
        scn.declare(&format!("B{i}"), CopyTag::B).unwrap();
    }
    for (name, a, b) in [
        ("C11", "A1", "B1"),
        ("C33", "A3", "B3"),
        ("C13", "A1", "B3"),
        ("C31", "A3", "B1"),
    ] {
        scn.declare_derived(name, CopyTag::Shared, (a, b), OutcomeRule::equality())
            .unwrap();
    }
    scn
}

/// Built-in scenarios addressable by name from the CLI.
pub fn builtin(name: &str) -> Option<(Scenario, Vec<Event>)> {
    match name {
        "kcbs" => Some((kcbs_scenario(), kcbs_events())),
        "chsh" => Some((chsh_scenario(), chsh_events())),
        "specker" => Some((specker_scenario(), specker_triangle_events())),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn specker_pair_is_exclusive() {
        let scn = kcbs_scenario();
        let e1 = build(&[("A1", P), ("A2", P)], &scn);
        let e2 = build(&[("A2", N), ("A3", N)], &scn);
        let e3 = build(&[("A2", P), ("A3", P)], &scn);
        assert!(are_exclusive(&e1, &e2, &scn).unwrap());
        assert!(!are_exclusive(&e1, &e3, &scn).unwrap());
    }

    #[test]
    fn exclusivity_through_derived_closure() {
        let scn = chsh_extended_scenario();
        let e1 = build(&[("A1", P), ("A2", P), ("B1", P), ("B2", P)], &scn);
        // closure assigns C11:+ to e1, contradicting C11:-
        let e2 = build(&[("C11", N), ("C33", P)], &scn);
        assert!(are_exclusive(&e1, &e2, &scn).unwrap());
        assert_eq!(e1.closed(&scn).unwrap().get("C11"), Some(P));
    }

    #[test]
    fn closure_is_idempotent_and_rejects_inconsistency() {
        let scn = chsh_extended_scenario();
        let e = build(&[("A1", P), ("B1", N)], &scn);
        let once = e.closed(&scn).unwrap();
        assert_eq!(once.get("C11"), Some(N));
        assert_eq!(once.closed(&scn).unwrap(), once);
        assert!(Event::from_pairs(&[("A1", P), ("B1", N), ("C11", P)], &scn).is_err());
    }

    #[test]
    fn negation_is_involution_and_flips() {
        let scn = kcbs_scenario();
        let e = build(&[("A1", P), ("A2", N)], &scn);
        let n = e.negated();
        assert_eq!(n.get("A1"), Some(N));
        assert_eq!(n.get("A2"), Some(P));
        assert_eq!(n.negated(), e);
    }

    #[test]
    fn kcbs_event_list_matches_definition() {
        let evs = kcbs_events();
        assert_eq!(evs.len(), 5);
        assert_eq!(evs[0].to_string(), "(A1+,A2+)");
        assert_eq!(evs[4].to_string(), "(A1-,A5+)");
        // S'_KCBS is the negation of each event
        let scn = kcbs_scenario();
        for e in &evs {
            assert!(!are_exclusive(e, e, &scn).unwrap());
        }
    }

    #[test]
    fn chsh_event_lists_match_definition() {
        let evs = chsh_events();
        assert_eq!(evs.len(), 8);
        assert_eq!(evs[7].to_string(), "(A1+,A4-)");
        let comp = chsh_complement_events();
        assert_eq!(comp.len(), 8);
        assert_eq!(comp[7].to_string(), "(A1-,A4-)");
    }

    #[test]
    fn undeclared_observable_rejected() {
        let scn = kcbs_scenario();
        assert!(matches!(
            Event::from_pairs(&[("Z9", P)], &scn),
            Err(Error::UndeclaredObservable(_))
        ));
    }

    #[test]
    fn text_format_round_trips() {
        let text = "# pentagon plus a derived pair\n\
                    obs A1 copy=A\nobs B1 copy=B\n\
                    derived C11 = eq(A1,B1)\n\
                    event e1: A1:+ B1:-\n";
        let (scn, events) = Scenario::parse(text).unwrap();
        assert_eq!(scn.copy_of("A1"), Some(CopyTag::A));
        assert_eq!(scn.copy_of("C11"), Some(CopyTag::Shared));
        assert_eq!(events.len(), 1);
        assert_eq!(events[0].0, "e1");
        assert_eq!(events[0].1.closed(&scn).unwrap().get("C11"), Some(N));
    }
}
