//! Exact integer algebra over products of atomic event probabilities.
//!
//! Probability sums are represented as multisets of product terms with
//! integer coefficients, so summing inequalities and checking identities
//! like "these 25 products are exactly all pairs (a_i, b_j)" is a
//! finite, exact comparison with no floating point.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::Error;
use crate::scenario::{CopyTag, Event, Scenario};

/// The probability of one event of one experiment copy.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct AtomicProb {
    pub event: Event,
    pub copy: CopyTag,
}

impl fmt::Display for AtomicProb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P{}", self.event)
    }
}

/// Sum of products of atomic probabilities with integer coefficients.
/// Factor lists are kept sorted so equal terms always merge.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LinearCombo {
    terms: BTreeMap<Vec<AtomicProb>, i64>,
}

impl LinearCombo {
    pub fn new() -> LinearCombo {
        LinearCombo::default()
    }

    pub fn add_term(&mut self, mut factors: Vec<AtomicProb>, coefficient: i64) {
        factors.sort();
        let updated = self.terms.get(&factors).copied().unwrap_or(0) + coefficient;
        if updated == 0 {
            self.terms.remove(&factors);
        } else {
            self.terms.insert(factors, updated);
        }
    }

    pub fn add(&self, other: &LinearCombo) -> LinearCombo {
        let mut out = self.clone();
        for (factors, &c) in &other.terms {
            out.add_term(factors.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &LinearCombo) -> LinearCombo {
        let mut out = self.clone();
        for (factors, &c) in &other.terms {
            out.add_term(factors.clone(), -c);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn total_weight(&self) -> i64 {
        self.terms.values().sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[AtomicProb], i64)> {
        self.terms.iter().map(|(f, &c)| (f.as_slice(), c))
    }
}

impl fmt::Display for LinearCombo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (factors, c)) in self.terms.iter().enumerate() {
            if i == 0 {
                if *c < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if *c < 0 { "-" } else { "+" })?;
            }
            if c.abs() != 1 {
                write!(f, "{}", c.abs())?;
            }
            for (k, factor) in factors.iter().enumerate() {
                if k > 0 {
                    write!(f, "·")?;
                }
                write!(f, "{factor}")?;
            }
        }
        Ok(())
    }
}

/// Splits a compound event into its per-copy probability factors.
///
/// Derived observables whose arguments are both assigned contribute
/// nothing: their value is implied, so P(..., C+) = P(...). What
/// remains is grouped by copy tag; a purely derived event (only
/// implied-value-free C assignments) stays one shared factor.
pub fn factorize(event: &Event, scenario: &Scenario) -> Result<Vec<AtomicProb>, Error> {
    let mut by_copy: BTreeMap<CopyTag, Vec<(String, crate::scenario::Sign)>> = BTreeMap::new();
    for (name, sign) in event.iter() {
        if let Some(d) = scenario.derived(name) {
            if event.get(&d.args.0).is_some() && event.get(&d.args.1).is_some() {
                continue;
            }
        }
        let copy = scenario
            .copy_of(name)
            .ok_or_else(|| Error::UndeclaredObservable(name.to_string()))?;
        by_copy.entry(copy).or_default().push((name.to_string(), sign));
    }
    let mut factors = Vec::new();
    for (copy, pairs) in by_copy {
        factors.push(AtomicProb {
            event: Event::from_pairs(&pairs, scenario)?,
            copy,
        });
    }
    Ok(factors)
}

/// Exact check that `lhs` equals the full double-sum expansion
/// sum_i sum_j P(a_i) P(b_j) with every coefficient 1.
pub fn matches_product_expansion(lhs: &LinearCombo, sum_a: &[Event], sum_b: &[Event]) -> bool {
    lhs == &product_expansion(sum_a, sum_b)
}

/// The expansion sum_i sum_j P(a_i) P(b_j), coefficients all 1.
pub fn product_expansion(sum_a: &[Event], sum_b: &[Event]) -> LinearCombo {
    let mut out = LinearCombo::new();
    for a in sum_a {
        for b in sum_b {
            out.add_term(
                vec![
                    AtomicProb {
                        event: a.clone(),
                        copy: CopyTag::A,
                    },
                    AtomicProb {
                        event: b.clone(),
                        copy: CopyTag::B,
                    },
                ],
                1,
            );
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::{chsh_extended_scenario, kcbs_events, Event, Sign};

    #[test]
    fn factorization_splits_copies_and_drops_implied_derived() {
        let scn = chsh_extended_scenario();
        let e = Event::from_pairs(
            &[
                ("A1", Sign::Plus),
                ("A2", Sign::Plus),
                ("B1", Sign::Plus),
                ("B2", Sign::Plus),
                ("C11", Sign::Plus),
            ],
            &scn,
        )
        .unwrap();
        let factors = factorize(&e, &scn).unwrap();
        assert_eq!(factors.len(), 2);
        assert_eq!(factors[0].copy, CopyTag::A);
        assert_eq!(factors[0].event.to_string(), "(A1+,A2+)");
        assert_eq!(factors[1].event.to_string(), "(B1+,B2+)");

        // same factors with or without the implied C11
        let bare = Event::from_pairs(
            &[("A1", Sign::Plus), ("A2", Sign::Plus), ("B1", Sign::Plus), ("B2", Sign::Plus)],
            &scn,
        )
        .unwrap();
        assert_eq!(factors, factorize(&bare, &scn).unwrap());

        // a pure C event stays one shared factor
        let c = Event::from_pairs(&[("C11", Sign::Minus), ("C33", Sign::Plus)], &scn).unwrap();
        let cf = factorize(&c, &scn).unwrap();
        assert_eq!(cf.len(), 1);
        assert_eq!(cf[0].copy, CopyTag::Shared);
    }

    #[test]
    fn combo_cancellation_and_merging() {
        let scn = chsh_extended_scenario();
        let p = AtomicProb {
            event: Event::from_pairs(&[("A1", Sign::Plus)], &scn).unwrap(),
            copy: CopyTag::A,
        };
        let q = AtomicProb {
            event: Event::from_pairs(&[("B1", Sign::Plus)], &scn).unwrap(),
            copy: CopyTag::B,
        };
        let mut lc = LinearCombo::new();
        lc.add_term(vec![p.clone(), q.clone()], 1);
        lc.add_term(vec![q.clone(), p.clone()], 2); // merges: order-insensitive
        assert_eq!(lc.term_count(), 1);
        assert_eq!(lc.total_weight(), 3);
        lc.add_term(vec![p, q], -3);
        assert!(lc.is_zero());
    }

    #[test]
    fn expansion_mismatch_detected() {
        let a = kcbs_events();
        let full = product_expansion(&a, &a);
        assert_eq!(full.term_count(), 25);
        assert!(matches_product_expansion(&full, &a, &a));
        let mut short = full.clone();
        let (factors, _) = short.iter().next().map(|(f, c)| (f.to_vec(), c)).unwrap();
        short.add_term(factors.clone(), -1); // drop one term
        assert!(!matches_product_expansion(&short, &a, &a));
        short.add_term(factors.clone(), 2); // coefficient 2 on one term
        assert!(!matches_product_expansion(&short, &a, &a));
    }
}
